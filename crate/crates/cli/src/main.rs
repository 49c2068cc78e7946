use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let env_cap = std::env::var(brauer_cli::TERM_CAP_VAR).ok();
    let code = brauer_cli::run(std::env::args_os(), env_cap, &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
