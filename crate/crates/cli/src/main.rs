use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = fanocone_cli::run(std::env::args_os(), &mut std::io::stdin().lock());
    // Each stream is written once, after the command has finished.
    let _ = std::io::stdout()
        .lock()
        .write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr()
        .lock()
        .write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
