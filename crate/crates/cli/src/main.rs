use clap::Parser;

fn main() {
    let cli = gaussdyn_cli::Cli::parse();
    if let Err(failure) = gaussdyn_cli::run(cli) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}
