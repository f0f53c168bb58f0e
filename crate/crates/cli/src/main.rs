use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let code = resmod_cli::main_with(&args, &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
