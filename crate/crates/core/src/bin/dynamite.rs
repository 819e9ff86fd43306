fn main() {
    std::process::exit(dynamite::cli::main_with_args(std::env::args_os()));
}
