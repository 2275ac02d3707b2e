use std::io::Write;

use clap::Parser;

fn main() {
    let cli = reebvol_cli::Cli::parse();
    let (out, err, code) = reebvol_cli::execute(cli);
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    let _ = std::io::stderr().lock().write_all(err.as_bytes());
    std::process::exit(code);
}
