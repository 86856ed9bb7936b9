use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    lelm_lab::cli::configure_threads();
    let code = lelm_lab::cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
