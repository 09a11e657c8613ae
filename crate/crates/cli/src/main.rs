use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = cpn_star_cli::run_command(std::env::args_os());
    let _ = if code == cpn_star_cli::EXIT_USAGE {
        std::io::stderr().lock().write_all(out.as_bytes())
    } else {
        std::io::stdout().lock().write_all(out.as_bytes())
    };
    ExitCode::from(code as u8)
}
