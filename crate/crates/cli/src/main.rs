fn main() {
    std::process::exit(d4nlse_cli::run(std::env::args_os()));
}
