fn main() {
    std::process::exit(deko::cli::dispatch(std::env::args_os()));
}
