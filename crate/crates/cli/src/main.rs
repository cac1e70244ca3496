use clap::Parser;
use polyroof_eval::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("polyroof-eval: {e}");
        std::process::exit(e.exit_code());
    }
}
