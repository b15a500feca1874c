fn main() {
    std::process::exit(ksmooth::cli::run(std::env::args_os()));
}
