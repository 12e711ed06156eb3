fn main() {
    std::process::exit(spread_codes::cli::run(std::env::args_os()));
}
