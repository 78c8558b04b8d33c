fn main() {
    std::process::exit(kappa_dist::cli::run(std::env::args_os()));
}
