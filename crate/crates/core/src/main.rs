fn main() {
    std::process::exit(annulus::cli::main_with_args(std::env::args_os()));
}
