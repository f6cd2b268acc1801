use clap::Parser;

fn main() {
    let cli = sers_cli::Cli::parse();
    std::process::exit(sers_cli::execute(&cli));
}
