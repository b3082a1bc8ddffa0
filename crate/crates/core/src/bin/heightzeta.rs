fn main() {
    std::process::exit(heightzeta::cli::run(std::env::args_os()));
}
