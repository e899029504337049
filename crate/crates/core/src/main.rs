fn main() {
    std::process::exit(superkac::cli::run(std::env::args_os()));
}
