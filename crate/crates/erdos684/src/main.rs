use clap::Parser;

fn main() {
    let cli = erdos684::cli::Cli::parse();
    if let Err(e) = erdos684::cli::run(cli) {
        eprintln!("{}", e.to_json());
        std::process::exit(e.exit_code());
    }
}
