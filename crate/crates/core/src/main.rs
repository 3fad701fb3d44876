fn main() {
    std::process::exit(geoft::cli::run(std::env::args_os()));
}
