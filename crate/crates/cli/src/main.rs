fn main() {
    std::process::exit(torex_cli::run(std::env::args_os()));
}
