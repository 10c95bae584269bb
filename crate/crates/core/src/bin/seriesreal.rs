fn main() {
    std::process::exit(seriesreal::cli::main_with_args(std::env::args_os()));
}
