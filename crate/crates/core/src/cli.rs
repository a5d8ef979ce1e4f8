//! Command-line front end. Every command returns a report plus a pass flag;
//! `run` renders the report with a reproducibility header.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::isomono::{check_case_a, check_case_b, CaseTag, Gauge, Hamiltonian, T2Reading};
use crate::linode::{
    df_ode, heun_limit_convergence, spg_ode, DfBracket, DfExponent, DfMap, DfReading, EtaPower, GjEta, LimitCase,
    LimitReading, SpgReading, GENERIC_X,
};
use crate::moments::{cross_check, moment, moment_table};
use crate::mp::{Exact, PrecisionContext, Real};
use crate::orthopoly::build_recurrence;
use crate::painleve::{certify, tol_scaling, FlowConfig};
use crate::scaling::{delta_trend, factorization_check, ln_delta_expansion, trend_json, write_trend_csv, Expansion, Regime};
use crate::weights::WeightSpec;
use crate::errata;

pub const DIGITS_ENV: &str = "OPHEUN_DIGITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "opheun", version, about = "Orthogonal polynomials, Heun limits and Painleve certification")]
pub struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = DIGITS_ENV, default_value_t = 250)]
    pub digits: u32,
    /// Guard digits carried on top of `--digits`.
    #[arg(long, global = true, default_value_t = 30)]
    pub guard: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// JSON file of flag values; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Worker threads for commands that run independent jobs.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, serde::Serialize)]
pub struct WeightArgs {
    /// spg, df, gj, jc or spg_hard_edge.
    #[arg(long)]
    pub weight: String,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long = "A")]
    pub a_coef: Option<String>,
    #[arg(long = "B")]
    pub b_coef: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
}

impl WeightArgs {
    pub fn spec(&self) -> Result<WeightSpec> {
        WeightSpec::from_parts(&self.weight, |k| {
            let v = match k {
                "alpha" => &self.alpha,
                "t" => &self.t,
                "A" => &self.a_coef,
                "B" => &self.b_coef,
                "a" => &self.a,
                "s" => &self.s,
                _ => &None,
            };
            v.as_deref().and_then(|s| Exact::parse(s).ok())
        })
    }
}

#[derive(Debug, Subcommand, Clone)]
pub enum Command {
    /// A single moment (`--k`) or the table `μ_0 … μ_{2N}` (`--n`).
    Moments {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Norms, Hankel determinants and recurrence coefficients up to `--n`.
    Recurrence {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        n: usize,
    },
    /// Residual of the finite-n ODE for the exact `P_n` at generic points.
    OdeResidual {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        n: usize,
        /// SPG: drop-8 or keep-8. DF: printed or shifted, optionally
        /// followed by `/displayed`, `/split` or `/merged`.
        #[arg(long)]
        reading: Option<String>,
    },
    /// Decay of the large-n limit residual between two degrees.
    HeunLimit {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 8)]
        n_small: usize,
        #[arg(long, default_value_t = 32)]
        n_large: usize,
        /// DF substitution: displayed or quarter-root.
        #[arg(long, default_value = "displayed")]
        df_map: String,
        /// Power of n in the GJ 1/(x-t) coefficient: 2/3 or 3/2.
        #[arg(long, default_value = "2/3")]
        gj_qhat_power: String,
    },
    /// Gauge identities of the family's Hamiltonian structure.
    IsomonoCheck {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value = "3/4")]
        alpha: String,
        #[arg(long, default_value = "37/100")]
        t: String,
        /// Multiplies the family's gauge.
        #[arg(long, default_value = "1")]
        gauge_scale: String,
    },
    /// Certifies that the Hamiltonian flow solves the family's Painleve equation.
    PainleveCertify {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "1")]
        alpha: String,
        /// Flow-time window `t0:t1`.
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long)]
        mu0: Option<f64>,
        /// Built-in initial conditions to run (0, 1, 2); ignored with --lambda0.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        ic: Vec<usize>,
        /// Also compare direct-integration deviations at tol and 100*tol.
        #[arg(long)]
        scaling: bool,
    },
    /// Expansions of ln Delta, or the numeric trend with `--trend`.
    Asymptotics {
        #[arg(long, default_value = "largeS")]
        regime: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        /// Comma-separated n for the numeric ratio trend.
        #[arg(long, value_delimiter = ',')]
        trend: Vec<usize>,
    },
    /// Even/odd factorisation of the hard-edge Hankel determinants, n = 1..N.
    Factorization {
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// The adjudicated readings of suspect formulas.
    Errata,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Moments { .. } => "moments",
            Command::Recurrence { .. } => "recurrence",
            Command::OdeResidual { .. } => "ode-residual",
            Command::HeunLimit { .. } => "heun-limit",
            Command::IsomonoCheck { .. } => "isomono-check",
            Command::PainleveCertify { .. } => "painleve-certify",
            Command::Asymptotics { .. } => "asymptotics",
            Command::Factorization { .. } => "factorization",
            Command::Errata => "errata",
        }
    }
}

/// A rendered report.
pub enum Body {
    Json(Value),
    Csv(String),
}

pub struct Outcome {
    pub body: Body,
    pub passed: bool,
}

fn real(s: &str, ctx: &PrecisionContext) -> Result<Real> {
    match Exact::parse(s) {
        Ok(e) => Ok(ctx.exact(&e)),
        Err(_) => ctx.parse(s),
    }
}

fn exact(s: &str) -> Result<Exact> {
    Exact::parse(s)
}

fn csv_string(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
}

/// Runs `f` over `items` on up to `jobs` threads, keeping input order.
fn parallel<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.min(items.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("result slots")[i] = Some(r);
            });
        }
    });
    slots.into_inner().expect("result slots").into_iter().map(|r| r.expect("job finished")).collect()
}

fn spg_reading(s: Option<&str>) -> Result<SpgReading> {
    match s.unwrap_or("drop-8") {
        "drop-8" | "drop" => Ok(SpgReading::DropStray8),
        "keep-8" | "keep" => Ok(SpgReading::KeepStray8),
        other => Err(Error::Config(format!("unknown SPG reading {other:?}"))),
    }
}

fn df_reading(s: Option<&str>) -> Result<DfReading> {
    let s = s.unwrap_or("shifted/displayed");
    let (e, b) = s.split_once('/').unwrap_or((s, "displayed"));
    let exponent = match e {
        "shifted" => DfExponent::WeightShifted,
        "printed" => DfExponent::Printed,
        other => return Err(Error::Config(format!("unknown DF exponent reading {other:?}"))),
    };
    let bracket = match b {
        "displayed" => DfBracket::AsDisplayed,
        "split" => DfBracket::SplitNumerator,
        "merged" => DfBracket::MergedTail,
        other => return Err(Error::Config(format!("unknown DF bracket reading {other:?}"))),
    };
    Ok(DfReading { exponent, bracket })
}

fn run_moments(w: &WeightArgs, k: Option<usize>, n: Option<usize>, fmt: Format, ctx: &PrecisionContext) -> Result<Outcome> {
    let spec = w.spec()?;
    let sig = ctx.digits as usize;
    match (k, n) {
        (Some(k), None) => {
            let m = moment(&spec, k, ctx)?;
            let body = match fmt {
                Format::Json => Body::Json(json!({"weight": spec, "k": k, "value": m.value.to_sci(sig), "method": m.method})),
                Format::Csv => Body::Csv(format!("k,value,method\n{k},{},{}\n", m.value.to_sci(sig), m.method.as_str())),
            };
            Ok(Outcome { body, passed: true })
        }
        (None, Some(n)) => {
            let table = moment_table(&spec, n, ctx)?;
            let checks = cross_check(&table)?;
            let tol = 10f64.powf(-(ctx.digits as f64) / 2.0);
            let passed = checks.iter().all(|c| c.relative_difference <= tol);
            let body = match fmt {
                Format::Json => {
                    let mut v = table.to_json();
                    v["cross_check"] = json!(checks);
                    Body::Json(v)
                }
                Format::Csv => Body::Csv(csv_string(|b| table.write_csv(b))?),
            };
            Ok(Outcome { body, passed })
        }
        _ => Err(Error::Config("moments needs exactly one of --k or --n".into())),
    }
}

fn normalized_beta(spec: &WeightSpec, ctx: &PrecisionContext) -> Option<(&'static str, Box<dyn Fn(usize, &Real) -> Real>)> {
    match spec {
        WeightSpec::Spg { alpha, .. } => {
            let a = ctx.exact(alpha);
            Some(("4beta/(2n+alpha)", Box::new(move |n, b| b.clone() * 4 / (a.clone() + (2 * n as i32)))))
        }
        WeightSpec::Df { .. } => {
            let c = *ctx;
            Some(("6beta/sqrt(3n)", Box::new(move |n, b| b.clone() * 6 / c.int(3 * n as i64).sqrt())))
        }
        _ => None,
    }
}

fn run_recurrence(w: &WeightArgs, n: usize, fmt: Format, ctx: &PrecisionContext) -> Result<Outcome> {
    let spec = w.spec()?;
    let table = moment_table(&spec, n + 1, ctx)?;
    let rec = build_recurrence(&table, n, ctx)?;
    let report = rec.cross_check(&table.entries, n.min(30));
    let passed = report.beta_vs_determinants < 10f64.powf(-(ctx.digits as f64) + 60.0);
    let norm = normalized_beta(&spec, ctx);
    let body = match fmt {
        Format::Json => {
            let mut v = rec.to_json();
            v["weight"] = json!(spec);
            v["consistency"] = json!(report);
            if let Some((name, f)) = &norm {
                let sig = ctx.digits as usize;
                v[*name] = json!((1..=n).map(|k| f(k, &rec.beta[k]).to_sci(sig)).collect::<Vec<_>>());
            }
            Body::Json(v)
        }
        Format::Csv => {
            let beta = &rec.beta;
            let extra = norm.as_ref().map(|(name, f)| {
                let g = move |k: usize| if k == 0 { ctx.zero() } else { f(k, &beta[k]) };
                (*name, g)
            });
            Body::Csv(csv_string(|b| match &extra {
                Some((name, g)) => rec.write_csv(b, Some((name, g as &dyn Fn(usize) -> Real))),
                None => rec.write_csv(b, None),
            })?)
        }
    };
    Ok(Outcome { body, passed })
}

fn run_ode_residual(w: &WeightArgs, n: usize, reading: Option<&str>, ctx: &PrecisionContext) -> Result<Outcome> {
    let spec = w.spec()?;
    if n == 0 {
        return Err(Error::Domain("ode-residual needs n >= 1".into()));
    }
    let table = moment_table(&spec, n + 2, ctx)?;
    let rec = build_recurrence(&table, n + 1, ctx)?;
    let b = [&rec.beta[n - 1], &rec.beta[n], &rec.beta[n + 1]];
    let (ode, reading_name) = match &spec {
        WeightSpec::Spg { alpha, t } => {
            let r = spg_reading(reading)?;
            (spg_ode(n, &ctx.exact(alpha), &ctx.exact(t), b, r, ctx)?, format!("{r:?}"))
        }
        WeightSpec::Df { alpha, t } => {
            let r = df_reading(reading)?;
            (df_ode(n, &ctx.exact(alpha), &ctx.exact(t), b, r, ctx)?, format!("{r:?}"))
        }
        other => return Err(Error::InvalidFamily(format!("ode-residual supports spg and df, not {}", other.family()))),
    };
    let mut points = Vec::new();
    let mut worst = ctx.zero();
    for &x in &GENERIC_X {
        let xr = ctx.real(x);
        let (f, f1, f2) = rec.eval_poly(n, &xr);
        let r = ode.residual(&f, &f1, &f2, &xr)?;
        worst = worst.max(&r.normalized);
        points.push(json!({"x": x, "normalized": r.normalized.to_sci(6), "absolute": r.absolute.to_sci(6)}));
    }
    let threshold = ctx.pow10(-(ctx.digits as i32) / 4);
    let passed = worst < threshold;
    Ok(Outcome {
        body: Body::Json(json!({
            "weight": spec, "n": n, "reading": reading_name, "ode": ode.to_json(),
            "points": points, "max_normalized": worst.to_sci(6), "threshold": threshold.to_sci(3), "passed": passed,
        })),
        passed,
    })
}

fn limit_reading(df_map: &str, qhat: &str) -> Result<LimitReading> {
    let df_map = match df_map {
        "displayed" => DfMap::Displayed,
        "quarter-root" => DfMap::QuarterRoot,
        other => return Err(Error::Config(format!("unknown DF map {other:?}"))),
    };
    let power = match qhat {
        "2/3" => EtaPower::TwoThirds,
        "3/2" => EtaPower::ThreeHalves,
        other => return Err(Error::Config(format!("unknown GJ power {other:?}"))),
    };
    Ok(LimitReading { gj_eta: GjEta::DISPLAYED, gj_qhat: GjEta { root: 6, power }, df_map })
}

fn run_isomono(family: Family, n: usize, alpha: &str, t: &str, scale: &str, ctx: &PrecisionContext) -> Result<Outcome> {
    let alpha = real(alpha, ctx)?;
    let t = real(t, ctx)?;
    let h = Hamiltonian::for_family(family, n, alpha, ctx);
    let gauge: Gauge = h.gauge.scaled(&real(scale, ctx)?);
    let rep = match h.case {
        CaseTag::B => check_case_b(&h.limit, &gauge, &t, ctx)?,
        CaseTag::A => check_case_a(&h.limit, &gauge, &t, T2Reading::MBoth, ctx)?,
    };
    let mut v = rep.to_json();
    v["family"] = json!(family);
    v["n"] = json!(n);
    v["t"] = json!(t.to_sci(ctx.digits as usize));
    Ok(Outcome { passed: rep.passed, body: Body::Json(v) })
}

#[allow(clippy::too_many_arguments)]
fn run_painleve(
    family: Family,
    n: usize,
    alpha: &str,
    window: Option<&str>,
    tol: f64,
    start: (Option<f64>, Option<f64>),
    ics: &[usize],
    scaling: bool,
    fmt: Format,
    jobs: usize,
    ctx: &PrecisionContext,
) -> Result<Outcome> {
    let alpha = real(alpha, ctx)?;
    let mut configs: Vec<FlowConfig> = if start.0.is_some() || start.1.is_some() {
        let mut c = FlowConfig::generic(family, 0, tol);
        c.lambda0 = start.0.unwrap_or(c.lambda0);
        c.mu0 = start.1.unwrap_or(c.mu0);
        vec![c]
    } else {
        ics.iter().map(|&k| FlowConfig::generic(family, k, tol)).collect()
    };
    if let Some(w) = window {
        let (a, b) = w.split_once(':').ok_or_else(|| Error::Config(format!("window {w:?} is not t0:t1")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(s.to_string()));
        let (t0, t1) = (parse(a)?, parse(b)?);
        for c in &mut configs {
            c.t0 = t0;
            c.t1 = t1;
        }
    }
    let results = parallel(&configs, jobs, |cfg| -> Result<Value> {
        let r = certify(family, n, &alpha, cfg, ctx)?;
        let mut v = r.to_json();
        v["initial"] = json!({"lambda0": cfg.lambda0, "mu0": cfg.mu0});
        let mut ok = r.verdict;
        if scaling {
            let (hi, lo) = tol_scaling(family, n, &alpha, cfg, tol * 100.0, tol, ctx)?;
            let ratio = hi / lo;
            let linear = (10.0..1000.0).contains(&ratio);
            v["tolScaling"] = json!({"deviationAt100Tol": hi, "deviationAtTol": lo, "ratio": ratio, "linear": linear});
            ok &= linear;
        }
        v["verdict"] = json!(if ok { "pass" } else { "fail" });
        Ok(v)
    });
    let results: Vec<Value> = results.into_iter().collect::<Result<_>>()?;
    let passed = results.iter().all(|v| v["verdict"] == "pass");
    let body = match fmt {
        Format::Json => Body::Json(if results.len() == 1 { results[0].clone() } else { json!({ "runs": results }) }),
        Format::Csv => Body::Csv(csv_string(|b| {
            let mut w = csv::Writer::from_writer(b);
            w.write_record(["lambda0", "mu0", "certified", "maxResidual", "elimination", "compatibility", "verdict"])?;
            for v in &results {
                w.write_record([
                    v["initial"]["lambda0"].to_string(),
                    v["initial"]["mu0"].to_string(),
                    v["certified"].as_str().unwrap_or_default().to_string(),
                    v["maxResidual"].to_string(),
                    v["elimination"].to_string(),
                    v["compatibility"].to_string(),
                    v["verdict"].as_str().unwrap_or_default().to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        })?),
    };
    Ok(Outcome { body, passed })
}

fn run_asymptotics(regime: &str, alpha: &str, s: &str, t: &str, trend: &[usize], fmt: Format, ctx: &PrecisionContext) -> Result<Outcome> {
    let regime: Regime = regime.parse()?;
    let (a, sr, tr) = (real(alpha, ctx)?, real(s, ctx)?, real(t, ctx)?);
    let report = ln_delta_expansion(regime, &a, &sr, &tr, ctx)?;
    if trend.is_empty() {
        let body = match fmt {
            Format::Json => Body::Json(serde_json::to_value(&report)?),
            Format::Csv => Body::Csv(csv_string(|b| report.write_csv(b))?),
        };
        return Ok(Outcome { body, passed: true });
    }
    let rows = delta_trend(&exact(alpha)?, &exact(s)?, &exact(t)?, trend, ctx)?;
    let target = Expansion::printed(regime, &a, ctx)?.eval(&sr, &tr, ctx).to_f64();
    let gaps: Vec<f64> = rows.iter().map(|(e, _)| (e.ln_ratio - target).abs()).collect();
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let body = match fmt {
        Format::Json => Body::Json(json!({
            "expansion": report, "trend": trend_json(&rows), "gaps": gaps, "monotone": monotone,
        })),
        Format::Csv => Body::Csv(csv_string(|b| write_trend_csv(&rows, Some(target), b))?),
    };
    Ok(Outcome { body, passed: monotone })
}

fn run_factorization(alpha: &str, s: &str, t: &str, n: usize, jobs: usize, ctx: &PrecisionContext) -> Result<Outcome> {
    let (a, s, t) = (exact(alpha)?, exact(s)?, exact(t)?);
    let ns: Vec<usize> = (1..=n).collect();
    let rows: Vec<_> = parallel(&ns, jobs, |&k| factorization_check(&a, &s, &t, k, ctx)).into_iter().collect::<Result<_>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(Outcome { body: Body::Json(json!({"alpha": a, "s": s, "t": t, "checks": rows, "passed": passed})), passed })
}

/// Dispatches one parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let ctx = PrecisionContext::new(cli.digits, cli.guard)?;
    let fmt = cli.format;
    match &cli.command {
        Command::Moments { weight, k, n } => run_moments(weight, *k, *n, fmt, &ctx),
        Command::Recurrence { weight, n } => run_recurrence(weight, *n, fmt, &ctx),
        Command::OdeResidual { weight, n, reading } => run_ode_residual(weight, *n, reading.as_deref(), &ctx),
        Command::HeunLimit { family, n_small, n_large, df_map, gj_qhat_power } => {
            let reading = limit_reading(df_map, gj_qhat_power)?;
            let base = PrecisionContext::new(50, cli.guard)?;
            let r = heun_limit_convergence(&LimitCase::standard(*family), &reading, *n_small, *n_large, &base)?;
            Ok(Outcome { passed: r.passed, body: Body::Json(serde_json::to_value(&r)?) })
        }
        Command::IsomonoCheck { family, n, alpha, t, gauge_scale } => run_isomono(*family, *n, alpha, t, gauge_scale, &ctx),
        Command::PainleveCertify { family, n, alpha, window, tol, lambda0, mu0, ic, scaling } => run_painleve(
            *family,
            *n,
            alpha,
            window.as_deref(),
            *tol,
            (*lambda0, *mu0),
            ic,
            *scaling,
            fmt,
            cli.jobs,
            &PrecisionContext::new(cli.digits.clamp(50, 60), cli.guard)?,
        ),
        Command::Asymptotics { regime, alpha, s, t, trend } => run_asymptotics(regime, alpha, s, t, trend, fmt, &ctx),
        Command::Factorization { alpha, s, t, n } => run_factorization(alpha, s, t, *n, cli.jobs, &ctx),
        Command::Errata => {
            let entries = errata::collect(&ctx)?;
            Ok(Outcome { passed: true, body: Body::Json(errata::to_json(&entries)) })
        }
    }
}

/// Expands `--config file.json` into flags placed before the command-line
/// ones; keys already given on the command line are skipped.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(args);
    };
    let path = match args[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => args.get(pos + 1).cloned().ok_or_else(|| Error::Config("--config needs a path".into()))?,
    };
    let text = std::fs::read_to_string(&path)?;
    let cfg: Value = serde_json::from_str(&text)?;
    let obj = cfg.as_object().ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
    let given = |k: &str| args.iter().any(|a| a == &format!("--{k}") || a.starts_with(&format!("--{k}=")));
    let mut out = vec![args[0].clone()];
    let has_command = args.iter().skip(1).any(|a| !a.starts_with('-') && COMMANDS.contains(&a.as_str()));
    if !has_command {
        let cmd = obj.get("command").and_then(Value::as_str).ok_or_else(|| Error::Config("config lacks a command".into()))?;
        out.push(cmd.to_string());
    }
    out.extend(args[1..].iter().cloned());
    for (k, v) in obj {
        if k == "command" || given(k) {
            continue;
        }
        match v {
            Value::Bool(true) => out.push(format!("--{k}")),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => out.push(format!("--{k}={s}")),
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string())).collect();
                out.push(format!("--{k}={}", joined.join(",")));
            }
            other => out.push(format!("--{k}={other}")),
        }
    }
    Ok(out)
}

const COMMANDS: [&str; 9] = [
    "moments",
    "recurrence",
    "ode-residual",
    "heun-limit",
    "isomono-check",
    "painleve-certify",
    "asymptotics",
    "factorization",
    "errata",
];

fn header(cli: &Cli, args: &[String]) -> Value {
    json!({
        "tool": "opheun",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "args": args[1..].to_vec(),
        "digits": cli.digits,
        "guard": cli.guard,
    })
}

/// Renders an outcome: JSON gets a `header` member, CSV gets `#` lines.
pub fn render(cli: &Cli, args: &[String], outcome: &Outcome) -> String {
    let head = header(cli, args);
    match &outcome.body {
        Body::Json(v) => {
            let doc = json!({"header": head, "passed": outcome.passed, "result": v});
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable report"))
        }
        Body::Csv(text) => format!("# {}\n# passed: {}\n{}", head, outcome.passed, text),
    }
}

pub fn error_json(e: &Error) -> String {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}}).to_string()
}

/// Full entry point: parses, runs and writes. Returns the process exit code:
/// 0 when every requested check passes, 1 when a check fails, 2 on error.
pub fn main_with(args: Vec<String>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            return 2;
        }
    };
    let text = render(&cli, &args, &outcome);
    let written = match &cli.out {
        Some(p) => std::fs::write(p, text.as_bytes()).map_err(Error::from),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        eprintln!("{}", error_json(&e));
        return 2;
    }
    if outcome.passed {
        0
    } else {
        let e = Error::Consistency(format!("{} reported a failed check", cli.command.name()));
        eprintln!("{}", json!({"error": {"kind": "check_failed", "message": e.to_string()}}));
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (Cli, Outcome) {
        let args: Vec<String> = std::iter::once("opheun").chain(args.iter().copied()).map(String::from).collect();
        let cli = Cli::try_parse_from(&args).unwrap();
        let out = execute(&cli).unwrap();
        (cli, out)
    }

    #[test]
    fn gaussian_moment_is_sqrt_pi() {
        let (_, o) = run(&["--digits", "60", "moments", "--weight", "gj", "--A", "1", "--B", "0", "--t", "0", "--k", "0"]);
        let Body::Json(v) = o.body else { panic!() };
        let s = v["value"].as_str().unwrap();
        assert!(s.starts_with("1.77245385090551602729816748334114518279754945612238712821"), "{s}");
    }

    #[test]
    fn recurrence_csv_has_normalized_column() {
        let (_, o) = run(&["--digits", "60", "--format", "csv", "recurrence", "--weight", "spg", "--alpha", "1", "--t", "0.1", "--n", "6"]);
        let Body::Csv(text) = o.body else { panic!() };
        assert!(text.starts_with("n,h,D,alpha,beta,4beta/(2n+alpha)\n"));
        assert_eq!(text.lines().count(), 8);
        assert!(o.passed);
    }

    #[test]
    fn certify_command() {
        let (_, o) = run(&["painleve-certify", "--family", "jc", "--n", "3", "--alpha", "1", "--window", "2:3", "--tol", "1e-12"]);
        assert!(o.passed);
        let Body::Json(v) = o.body else { panic!() };
        assert!(v["maxResidual"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn failing_check_is_reported() {
        let (_, o) = run(&["--digits", "120", "isomono-check", "--family", "spg", "--gauge-scale", "2"]);
        assert!(!o.passed);
        let (_, o) = run(&["--digits", "120", "isomono-check", "--family", "jc"]);
        assert!(o.passed);
    }

    #[test]
    fn config_file_fills_missing_flags() {
        let dir = std::env::temp_dir().join(format!("opheun-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(&path, r#"{"command": "moments", "weight": "gj", "A": "1", "B": "0", "t": "0", "k": 2, "digits": 40}"#).unwrap();
        let args = vec!["opheun".to_string(), "--config".into(), path.display().to_string(), "--digits".into(), "50".into()];
        let args = expand_config(args).unwrap();
        let cli = Cli::try_parse_from(&args).unwrap();
        assert_eq!(cli.digits, 50);
        assert_eq!(cli.command.name(), "moments");
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["--digits", "60", "factorization", "--s", "1/5", "--t", "3/10", "--n", "2"];
        let (c1, o1) = run(&args);
        let (c2, o2) = run(&args);
        let full: Vec<String> = std::iter::once("opheun").chain(args).map(String::from).collect();
        assert_eq!(render(&c1, &full, &o1), render(&c2, &full, &o2));
    }
}
