fn main() {
    std::process::exit(fanochain::cli::run(std::env::args_os()));
}
