use clap::Parser;
use dynq::{main_with, Cli};

fn main() {
    std::process::exit(main_with(Cli::parse()));
}
