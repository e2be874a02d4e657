use clap::Parser;

use money_search::cli;

fn main() {
    let args = cli::Cli::parse();
    std::process::exit(cli::run(args));
}
