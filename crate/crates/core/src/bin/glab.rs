use clap::Parser;
use glab_core::cli::{main_with, Cli};

fn main() {
    let code = main_with(Cli::parse(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
