fn main() {
    std::process::exit(ffgenus::cli::main_with_args(std::env::args()));
}
