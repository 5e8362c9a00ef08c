fn main() {
    std::process::exit(cohomlen::cli::main_with_args(std::env::args_os()));
}
