fn main() {
    std::process::exit(motivic::cli::main_with_args(std::env::args_os()));
}
