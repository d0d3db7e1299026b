fn main() {
    std::process::exit(cesaro::cli::run(std::env::args_os()));
}
