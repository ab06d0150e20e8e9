fn main() {
    std::process::exit(magrobin::cli::run(std::env::args_os()));
}
