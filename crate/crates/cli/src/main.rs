use std::io::{self, Write};
use std::process;

fn main() {
    let outcome = triscore_cli::commands::run(std::env::args_os(), &mut io::stdin().lock());
    let _ = io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = io::stderr().write_all(outcome.stderr.as_bytes());
    process::exit(outcome.code);
}
