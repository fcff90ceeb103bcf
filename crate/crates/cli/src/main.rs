use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = relans_cli::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(relans_cli::EXIT_ERROR as u8);
    }
    let out = relans_cli::run_command(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
