fn main() {
    std::process::exit(invgen::cli::dispatch(std::env::args_os()));
}
