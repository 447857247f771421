use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(msg) = ncfgl_cli::init_threads_from_env() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = ncfgl_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    ExitCode::from(code)
}
