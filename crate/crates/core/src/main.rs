fn main() {
    std::process::exit(fockspace::cli::main_with_args(std::env::args_os()));
}
