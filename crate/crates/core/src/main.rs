use clap::Parser;

fn main() {
    let cli = gfred::cli::Cli::parse();
    std::process::exit(gfred::cli::run(cli));
}
