fn main() {
    std::process::exit(mepkit::cli::dispatch(std::env::args_os()));
}
