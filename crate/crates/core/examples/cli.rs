//! Driving the command line in-process.
//!
//! cargo run --example cli -- graphs gen --g 2 --n 0

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if args.len() == 1 {
        args.extend(["verify", "--suite", "scalar"].map(String::from));
    }
    std::process::exit(drcalc::cli::run(args));
}
