//! Acceptance criteria 1-12. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use opheun::isomono::{check_case_a, check_case_b, CaseTag, Gauge, Hamiltonian, T2Reading};
use opheun::linode::{
    df_ode, heun_limit_convergence, spg_ode, DfBracket, DfExponent, DfMap, DfReading, EtaPower, GjEta, LimitCase,
    LimitReading, SpgReading, GENERIC_X,
};
use opheun::moments::moment_table;
use opheun::mp::special::{bessel_k, bessel_k_integral, ln_barnes_g};
use opheun::mp::{Exact, PrecisionContext, Real};
use opheun::orthopoly::{build_recurrence, RecurrenceTable};
use opheun::painleve::{certify, tol_scaling, FlowConfig};
use opheun::scaling::{
    barnes_block, c_term, c_term_sum, compare, delta_trend, factorization_check, max_term_ratio, Expansion, BlockExponent,
    Regime,
};
use opheun::weights::WeightSpec;
use opheun::{Family, Result};

type Verdict = Result<(bool, String)>;

fn q(s: &str) -> Exact {
    Exact::parse(s).unwrap()
}

fn suite() -> Vec<WeightSpec> {
    vec![
        WeightSpec::spg(q("1"), q("0.1")).unwrap(),
        WeightSpec::df(q("1"), q("1")).unwrap(),
        WeightSpec::gj(q("1"), q("1"), q("0.5")).unwrap(),
        WeightSpec::jc(q("1"), q("0.5")).unwrap(),
    ]
}

fn recurrence(w: &WeightSpec, n: usize, ctx: &PrecisionContext) -> Result<(Vec<Real>, RecurrenceTable)> {
    let m = moment_table(w, n + 1, ctx)?;
    let rec = build_recurrence(&m, n, ctx)?;
    Ok((m.entries, rec))
}

fn c1_orthogonality() -> Verdict {
    let ctx = PrecisionContext::new(300, 30)?;
    let tol = 10f64.powf(-150.0);
    let mut ok = true;
    let mut notes = Vec::new();
    for w in suite() {
        let (mu, rec) = recurrence(&w, 16, &ctx)?;
        let mut worst = 0f64;
        for i in 0..=15 {
            for j in 0..=15 {
                if i != j {
                    worst = worst.max(rec.orthogonality_residual(&mu, i, j).to_f64());
                }
            }
        }
        ok &= worst < tol;
        notes.push(format!("{} {worst:.1e}", w.family()));
    }
    Ok((ok, format!("max cross-residual i!=j<=15 at 300 digits: {} (< 1e-150)", notes.join(", "))))
}

fn c2_beta_identity() -> Verdict {
    let ctx = PrecisionContext::new(300, 30)?;
    let tol = 10f64.powf(-240.0);
    let mut ok = true;
    let mut notes = Vec::new();
    for w in suite() {
        let (mu, rec) = recurrence(&w, 31, &ctx)?;
        let r = rec.cross_check(&mu, 30);
        ok &= r.beta_vs_determinants < tol;
        notes.push(format!("{} {:.1e}", w.family(), r.beta_vs_determinants));
    }
    Ok((ok, format!("|beta - D D/D^2|/beta, n<=30: {} (< 1e-240)", notes.join(", "))))
}

fn c3_trends() -> Verdict {
    let base = PrecisionContext::new(60, 20)?;
    let ctx = base.for_degree(61);
    let ns = [20usize, 40, 60];
    let spg = WeightSpec::spg(q("1"), q("0.1"))?;
    let df = WeightSpec::df(q("1"), q("1"))?;
    let (_, rs) = recurrence(&spg, 61, &ctx)?;
    let (_, rd) = recurrence(&df, 61, &ctx)?;
    let gs: Vec<f64> = ns.iter().map(|&n| (rs.beta[n].to_f64() * 4.0 / (2.0 * n as f64 + 1.0) - 1.0).abs()).collect();
    let gd: Vec<f64> = ns.iter().map(|&n| (rd.beta[n].to_f64() * 6.0 / (3.0 * n as f64).sqrt() - 1.0).abs()).collect();
    let dec = |g: &[f64]| g.windows(2).all(|w| w[1] < w[0]);
    let ok = dec(&gs) && gs[2] < 0.1 && dec(&gd) && gd[2] < 0.25;
    Ok((ok, format!("spg |4b/(2n+a)-1| {gs:.3?}; df |6b/sqrt(3n)-1| {gd:.3?} at n=20,40,60")))
}

fn c4_finite_odes() -> Verdict {
    let ctx = PrecisionContext::new(120, 20)?;
    let good_tol = ctx.pow10(-30);
    let bad_floor = ctx.real(1e-2);
    let mut ok = true;
    let (mut worst_good, mut least_bad) = (0f64, f64::INFINITY);
    let one = ctx.int(1);
    let spg = WeightSpec::spg(q("1"), q("0.1"))?;
    let (_, rec) = recurrence(&spg, 11, &ctx)?;
    let t = ctx.exact(&q("0.1"));
    for n in 1..=10 {
        let b = [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]];
        let good = spg_ode(n, &one, &t, b, SpgReading::DropStray8, &ctx)?.max_normalized(|x| rec.eval_poly(n, x), &GENERIC_X)?;
        let bad = spg_ode(n, &one, &t, b, SpgReading::KeepStray8, &ctx)?.max_normalized(|x| rec.eval_poly(n, x), &GENERIC_X)?;
        ok &= good < good_tol && bad > bad_floor;
        worst_good = worst_good.max(good.to_f64());
        least_bad = least_bad.min(bad.to_f64());
    }
    let df = WeightSpec::df(q("1"), q("1"))?;
    let (_, rec) = recurrence(&df, 11, &ctx)?;
    let accepted = DfReading { exponent: DfExponent::WeightShifted, bracket: DfBracket::AsDisplayed };
    let rejected = DfReading { exponent: DfExponent::Printed, bracket: DfBracket::AsDisplayed };
    for n in 1..=10 {
        let b = [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]];
        let good = df_ode(n, &one, &one, b, accepted, &ctx)?.max_normalized(|x| rec.eval_poly(n, x), &GENERIC_X)?;
        let bad = df_ode(n, &one, &one, b, rejected, &ctx)?.max_normalized(|x| rec.eval_poly(n, x), &GENERIC_X)?;
        ok &= good < good_tol && bad > bad_floor;
        worst_good = worst_good.max(good.to_f64());
        least_bad = least_bad.min(bad.to_f64());
    }
    Ok((ok, format!("accepted readings max {worst_good:.1e} (< 1e-30), rejected readings min {least_bad:.1e} (> 1e-2), n<=10 at 120 digits")))
}

fn c5_heun_limits() -> Verdict {
    let ctx = PrecisionContext::new(50, 20)?;
    let reading = LimitReading {
        gj_eta: GjEta::DISPLAYED,
        gj_qhat: GjEta { root: 6, power: EtaPower::ThreeHalves },
        df_map: DfMap::QuarterRoot,
    };
    let mut ok = true;
    let mut notes = Vec::new();
    for f in Family::ALL {
        let r = heun_limit_convergence(&LimitCase::standard(f), &reading, 8, 32, &ctx)?;
        ok &= r.passed;
        notes.push(format!("{f} {:.2}x {}", r.ratio, if r.passed { "ok" } else { "no" }));
    }
    Ok((ok, format!("residual decrease n=8 -> 32 (>= 4x): {}", notes.join(", "))))
}

fn c6_gauges() -> Verdict {
    let ctx = PrecisionContext::new(250, 30)?;
    let t = ctx.exact(&q("0.37"));
    let mut ok = true;
    let mut notes = Vec::new();
    for f in Family::ALL {
        let h = Hamiltonian::for_family(f, 5, ctx.exact(&q("3/4")), &ctx);
        let run = |g: &Gauge| match h.case {
            CaseTag::B => check_case_b(&h.limit, g, &t, &ctx),
            CaseTag::A => check_case_a(&h.limit, g, &t, T2Reading::MBoth, &ctx),
        };
        let rep = run(&h.gauge)?;
        let worst = rep.identities.iter().map(|i| i.max_residual.to_f64()).fold(0.0, f64::max);
        let mut rejected = 0;
        for k in [2.0, -1.0, 1.0 / 3.0] {
            if !run(&h.gauge.scaled(&ctx.real(k)))?.passed {
                rejected += 1;
            }
        }
        ok &= rep.passed && rejected == 3;
        notes.push(format!("{f} {worst:.1e} rejects {rejected}/3"));
    }
    Ok((ok, format!("identity residuals (< 1e-190): {}", notes.join(", "))))
}

fn certify_cases(ctx: &PrecisionContext) -> [(Family, usize, Real, &'static str); 4] {
    [
        (Family::Spg, 3, ctx.int(1), "III'"),
        (Family::Df, 4, ctx.real(0.5), "IV(a+1"),
        (Family::Gj, 3, ctx.zero(), "IV(1, 0), x = -t"),
        (Family::Jc, 3, ctx.int(1), "standard"),
    ]
}

fn c7_painleve() -> Verdict {
    let ctx = PrecisionContext::new(50, 10)?;
    let mut ok = true;
    let mut notes = Vec::new();
    for (f, n, a, target) in certify_cases(&ctx) {
        let mut worst = 0f64;
        let mut ratios = Vec::new();
        let mut labels = Vec::new();
        for k in 0..3 {
            let cfg = FlowConfig::generic(f, k, 1e-12);
            let r = certify(f, n, &a, &cfg, &ctx)?;
            let (hi, lo) = tol_scaling(f, n, &a, &cfg, 1e-10, 1e-12, &ctx)?;
            let ratio = hi / lo;
            ok &= r.max_residual < 1e-8 && (10.0..1000.0).contains(&ratio) && r.certified.contains(target);
            worst = worst.max(r.max_residual);
            ratios.push(format!("{ratio:.0}"));
            labels.push(r.certified.clone());
        }
        labels.dedup();
        notes.push(format!("{f} [{}] residual {worst:.1e}, tol ratio {}", labels.join("; "), ratios.join("/")));
    }
    Ok((ok, format!("3 ICs each, residual < 1e-8, deviation ratio 1e-10/1e-12 in [10, 1000]: {}", notes.join(" | "))))
}

fn c8_c9_flows() -> Result<((bool, String), (bool, String))> {
    let ctx = PrecisionContext::new(50, 10)?;
    let (mut ok8, mut ok9) = (true, true);
    let (mut n8, mut n9) = (Vec::new(), Vec::new());
    for (f, n, a, _) in certify_cases(&ctx) {
        let (mut e, mut c) = (0f64, 0f64);
        for k in 0..3 {
            let cfg = FlowConfig::generic(f, k, 1e-12);
            let r = certify(f, n, &a, &cfg, &ctx)?;
            ok8 &= r.elimination < 100.0 * cfg.tol;
            ok9 &= r.compatibility < 1e-6;
            e = e.max(r.elimination);
            c = c.max(r.compatibility);
        }
        n8.push(format!("{f} {e:.1e}"));
        n9.push(format!("{f} {c:.1e}"));
    }
    Ok((
        (ok8, format!("max |mu(lambda, lambda') - mu| (< 1e-10): {}", n8.join(", "))),
        (ok9, format!("compatibility residual at 20 points (< 1e-6): {}", n9.join(", "))),
    ))
}

fn c10_exact_identities() -> Verdict {
    let ctx = PrecisionContext::new(250, 30)?;
    let (a, s, t) = (q("1"), q("0.2"), q("0.3"));
    let mut worst = 0f64;
    let mut ok = true;
    for n in 1..=6 {
        let r = factorization_check(&a, &s, &t, n, &ctx)?;
        ok &= r.passed;
        worst = worst.max(r.even).max(r.odd);
    }
    let tol = ctx.pow10(-(ctx.digits as i32) + 60);
    let g = |z: i64| ln_barnes_g(&ctx.int(z), &ctx).map(|v| v.exp());
    let barnes = [(g(1)? - 1).abs(), (g(2)? - 1).abs(), (g(4)? - 2).abs()];
    let (sr, tr) = (ctx.exact(&s), ctx.exact(&t));
    let mut sum_err = ctx.zero();
    for al in [ctx.int(1), ctx.exact(&q("3/10")), ctx.int(2)] {
        let lhs = c_term(&sr, &tr, &((al.clone() - 1) / 2), &ctx)? + c_term(&sr, &tr, &((al.clone() + 1) / 2), &ctx)?;
        sum_err = sum_err.max(&(lhs - c_term_sum(&al, &sr, &tr, &ctx)?).abs());
    }
    let block = (barnes_block(&ctx.int(1), &ctx)? + (ctx.pi() * 2).ln() / 2).abs();
    let worst_exact = barnes.iter().fold(sum_err.max(&block), |m, v| m.max(v));
    ok &= worst_exact < tol;
    Ok((ok, format!("factorisation n<=6 max rel {worst:.1e} (< 1e-125); Barnes/C-block max {:.1e} (< 1e-190)", worst_exact.to_f64())))
}

fn c11_expansions() -> Verdict {
    let ctx = PrecisionContext::new(80, 20)?;
    let one = ctx.int(1);
    let printed = Expansion::printed(Regime::LargeS, &one, &ctx)?;
    let decay = max_term_ratio(&printed, &ctx.int(1000), &one, &ctx);
    let mut logged = Vec::new();
    for r in Regime::ALL {
        let p = Expansion::printed(r, &one, &ctx)?;
        let rc = Expansion::recomputed(r, &one, BlockExponent::MinusThreeHalves, &ctx)?;
        let cmp = compare(&p, &rc, &ctx);
        let off = cmp.iter().filter(|c| !c.agree).count();
        logged.push(format!("{} {}/{} differ", r.as_str(), off, cmp.len()));
    }
    let rows = delta_trend(&q("1"), &q("100"), &q("1/2"), &[4, 6, 8], &ctx)?;
    let target = printed.eval(&ctx.int(100), &ctx.exact(&q("1/2")), &ctx).to_f64();
    let gap = |f: &dyn Fn(&(opheun::scaling::NumericDelta, opheun::scaling::NumericDelta)) -> f64| {
        rows.iter().map(|r| (f(r) - target).abs()).collect::<Vec<_>>()
    };
    let even = gap(&|r| r.0.ln_ratio);
    let odd = gap(&|r| r.1.ln_ratio);
    let mono = |g: &[f64]| g.windows(2).all(|w| w[1] < w[0]);
    let ok = decay < 0.5 && mono(&even) && mono(&odd);
    Ok((
        ok,
        format!(
            "largeS decay {decay:.3} (< 0.5); comparison {}; trend gaps even {even:.2?} odd {odd:.2?} to {target:.4}",
            logged.join(", ")
        ),
    ))
}

/// `ln A` for Glaisher's constant by Euler-Maclaurin on `Σ k ln k`, with
/// Bernoulli numbers taken from ζ(2j).
fn ln_glaisher(c: &PrecisionContext, n: i64, terms: i64) -> Real {
    let nn = c.int(n);
    let mut h = c.zero();
    for k in 2..=n {
        h += c.int(k) * c.int(k).ln();
    }
    let two_pi = c.pi() * 2;
    let mut corr = c.zero();
    for j in 2..=terms {
        let m = 2 * j;
        let zeta = c.int(m).zeta();
        let fact = c.int(m + 1).gamma();
        let sign = if j % 2 == 0 { -1 } else { 1 };
        let b2j = zeta * fact * 2 * sign / two_pi.powi(m as i32);
        corr += b2j / c.int(m * (m - 1) * (m - 2)) * nn.powi((2 - m) as i32);
    }
    h - (&nn * &nn / 2 + &nn / 2 + c.one() / 12) * nn.ln() + &nn * &nn / 4 + corr
}

fn c12_special_functions() -> Verdict {
    let ctx = PrecisionContext::new(250, 30)?;
    let rel = |a: &Real, b: &Real| ((a.clone() - b).abs() / b.abs()).to_f64();
    let half = ctx.exact(&q("1/2"));
    let mut k_half = 0f64;
    for xv in ["0.3", "2", "7.5"] {
        let x = ctx.exact(&q(xv));
        let exact = (ctx.pi() / (&x * 2)).sqrt() * (-x.clone()).exp();
        k_half = k_half.max(rel(&bessel_k(&half, &x, &ctx)?, &exact));
    }
    let mut k_quad = 0f64;
    for (nu, xv) in [("0", "0.5"), ("1.3", "3"), ("7.7", "4")] {
        let (nu, x) = (ctx.exact(&q(nu)), ctx.exact(&q(xv)));
        k_quad = k_quad.max(rel(&bessel_k(&nu, &x, &ctx)?, &bessel_k_integral(&nu, &x, &ctx)?));
    }
    let ln_a = ln_glaisher(&ctx, 100, 100);
    let g_half = ctx.int(2).ln() / 24 + ctx.one() / 8 - ctx.pi().ln() / 4 - &ln_a * 3 / 2;
    let glaisher = rel(&ln_barnes_g(&half, &ctx)?.exp(), &g_half.exp());
    let tol = 1e-125;
    let ok = k_half < tol && k_quad < tol && glaisher < tol;
    Ok((ok, format!("K_1/2 {k_half:.1e}, K series vs quadrature {k_quad:.1e}, G(1/2) vs Glaisher {glaisher:.1e} (< 1e-125)")))
}

fn main() {
    let mut lines: Vec<(usize, Verdict)> = std::thread::scope(|s| {
        let jobs: Vec<(usize, fn() -> Verdict)> = vec![
            (1, c1_orthogonality),
            (2, c2_beta_identity),
            (3, c3_trends),
            (4, c4_finite_odes),
            (5, c5_heun_limits),
            (6, c6_gauges),
            (7, c7_painleve),
            (10, c10_exact_identities),
            (11, c11_expansions),
            (12, c12_special_functions),
        ];
        let handles: Vec<_> = jobs.into_iter().map(|(k, f)| (k, s.spawn(f))).collect();
        let flows = s.spawn(c8_c9_flows);
        let mut out: Vec<(usize, Verdict)> = handles.into_iter().map(|(k, h)| (k, h.join().expect("criterion thread"))).collect();
        match flows.join().expect("criterion thread") {
            Ok((a, b)) => {
                out.push((8, Ok(a)));
                out.push((9, Ok(b)));
            }
            Err(e) => {
                let msg = e.to_string();
                out.push((8, Err(e)));
                out.push((9, Err(opheun::Error::Consistency(msg))));
            }
        }
        out
    });
    lines.sort_by_key(|(k, _)| *k);
    let mut failed = 0;
    for (k, v) in &lines {
        match v {
            Ok((true, msg)) => println!("criterion {k:>2}: PASS  {msg}"),
            Ok((false, msg)) => {
                failed += 1;
                println!("criterion {k:>2}: FAIL  {msg}");
            }
            Err(e) => {
                failed += 1;
                println!("criterion {k:>2}: FAIL  error: {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
