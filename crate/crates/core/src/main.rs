fn main() {
    std::process::exit(kportrait::portrait::cli::run(std::env::args_os()));
}
