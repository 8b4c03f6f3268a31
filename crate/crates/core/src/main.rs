fn main() {
    std::process::exit(cfgen::cli::run(std::env::args_os()));
}
