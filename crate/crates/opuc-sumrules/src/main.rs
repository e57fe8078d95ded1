use clap::Parser;
use opuc_sumrules::cli::{run, CliArgs};

fn main() {
    let args = CliArgs::parse();
    std::process::exit(run(args));
}
