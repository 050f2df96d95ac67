fn main() {
    std::process::exit(abdirac::cli::main_with_args(std::env::args_os()));
}
