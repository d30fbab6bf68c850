fn main() {
    std::process::exit(centerline::cli::run(std::env::args_os()));
}
