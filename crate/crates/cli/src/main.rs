fn main() {
    std::process::exit(phtk_cli::run(std::env::args_os()));
}
