fn main() {
    std::process::exit(second_best::cli::main_with_args(std::env::args_os()));
}
