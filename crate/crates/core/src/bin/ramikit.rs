fn main() {
    std::process::exit(ramikit::cli::run(std::env::args_os()));
}
