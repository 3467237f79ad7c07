use clap::Parser;

fn main() {
    let cli = hypercount_cli::Cli::parse();
    std::process::exit(hypercount_cli::run(cli));
}
