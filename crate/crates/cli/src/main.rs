fn main() {
    std::process::exit(antirainbow_cli::run(std::env::args_os()));
}
