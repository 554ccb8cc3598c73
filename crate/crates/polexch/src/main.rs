use clap::Parser;

fn main() {
    let cli = polexch::cli::Cli::parse();
    if let Err(e) = polexch::cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
