fn main() {
    std::process::exit(inls::cli::main_with_args(std::env::args_os()));
}
