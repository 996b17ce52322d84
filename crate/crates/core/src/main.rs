fn main() {
    std::process::exit(delta_casimir::cli::main_with_args(std::env::args_os()));
}
