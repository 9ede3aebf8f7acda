fn main() {
    std::process::exit(cmapx_cli::run(std::env::args_os().collect()));
}
