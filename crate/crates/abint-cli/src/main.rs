fn main() {
    std::process::exit(abint_cli::run::main_with_args(std::env::args_os()));
}
