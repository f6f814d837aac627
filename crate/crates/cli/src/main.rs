fn main() {
    std::process::exit(kleinian_spectra_cli::run(std::env::args_os()));
}
