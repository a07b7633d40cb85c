fn main() {
    std::process::exit(graphsig::cli::run(std::env::args_os()));
}
