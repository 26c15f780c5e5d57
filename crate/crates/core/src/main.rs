fn main() {
    std::process::exit(betadyne::cli::run(std::env::args_os()));
}
