fn main() {
    std::process::exit(flyqubit::cli::run(std::env::args_os()));
}
