fn main() {
    std::process::exit(roughforms::cli::run(std::env::args_os()));
}
