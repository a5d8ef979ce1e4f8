fn main() {
    std::process::exit(opheun::cli::main_with(std::env::args().collect()));
}
