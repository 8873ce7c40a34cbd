fn main() {
    std::process::exit(lyapmin::cli::main_with_args(std::env::args_os()));
}
