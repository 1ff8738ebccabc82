fn main() {
    std::process::exit(drcalc::cli::run(std::env::args_os()));
}
