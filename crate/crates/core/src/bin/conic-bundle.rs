fn main() {
    std::process::exit(conic_bundle::cli::main_with_args(std::env::args_os()));
}
