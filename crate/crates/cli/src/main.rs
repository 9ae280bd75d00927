fn main() {
    std::process::exit(sparsepath_cli::main_with_args(std::env::args_os()));
}
