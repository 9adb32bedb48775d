fn main() {
    std::process::exit(rodwave::cli::run(std::env::args_os()));
}
