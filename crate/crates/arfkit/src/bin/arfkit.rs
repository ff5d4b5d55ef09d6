use std::process::ExitCode;

fn main() -> ExitCode {
    let code = arfkit::cli::main_with_args(std::env::args());
    ExitCode::from(code as u8)
}
