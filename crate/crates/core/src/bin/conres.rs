fn main() {
    std::process::exit(conres::cli::run(std::env::args_os()));
}
