fn main() {
    std::process::exit(fa_cli::run(std::env::args_os()));
}
