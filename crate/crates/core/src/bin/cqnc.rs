fn main() {
    std::process::exit(cqnc::cli::run(std::env::args_os()));
}
