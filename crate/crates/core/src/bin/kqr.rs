fn main() {
    std::process::exit(kqr_absorbers::cli::run(std::env::args_os()));
}
