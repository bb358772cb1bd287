fn main() {
    std::process::exit(optodicke_cli::run(std::env::args_os()));
}
