fn main() {
    std::process::exit(paragrassmann::cli::main_with_args(std::env::args_os()));
}
