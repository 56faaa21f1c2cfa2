fn main() {
    std::process::exit(rootlab::cli::main_with_args(std::env::args_os()));
}
