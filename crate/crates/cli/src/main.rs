use clap::Parser;
use wishprod_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("wishprod: {e}");
        std::process::exit(e.exit_code());
    }
}
