fn main() {
    std::process::exit(permupoly::cli::run(std::env::args_os()));
}
