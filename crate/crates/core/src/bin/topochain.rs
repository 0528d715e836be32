fn main() {
    std::process::exit(topochain::cli::run(std::env::args_os()));
}
