fn main() {
    std::process::exit(su3_phase::cli::run(std::env::args_os()));
}
