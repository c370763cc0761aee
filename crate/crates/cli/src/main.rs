use clap::Parser;

fn main() {
    let cli = lsa_cli::Cli::parse();
    if let Err(err) = lsa_cli::run(cli) {
        eprintln!("lsa: error: {err}");
        std::process::exit(err.exit_code());
    }
}
