fn main() {
    std::process::exit(unimon::cli::run(std::env::args().collect()));
}
