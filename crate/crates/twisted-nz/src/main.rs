fn main() {
    std::process::exit(twisted_nz::cli::run(std::env::args_os()));
}
