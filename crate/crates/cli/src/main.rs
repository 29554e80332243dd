use std::io::{self, IsTerminal, Write};

fn main() {
    let out = mingens_cli::run(std::env::args_os(), io::stdout().is_terminal());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = io::stdout().flush();
    std::process::exit(out.code);
}
