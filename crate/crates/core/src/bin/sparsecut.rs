use clap::Parser;
use sparsecut::cli::{dispatch, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let code = dispatch(&config, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
