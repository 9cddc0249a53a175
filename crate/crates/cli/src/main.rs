use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mstat_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            if outcome.status == 3 {
                eprintln!("mstat: check outside its tolerance");
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("mstat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
