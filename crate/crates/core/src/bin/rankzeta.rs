fn main() {
    std::process::exit(rankzeta::cli::run(std::env::args_os()));
}
