fn main() {
    std::process::exit(symmoments::cli::run(std::env::args_os()));
}
