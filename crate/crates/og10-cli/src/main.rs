use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(og10_cli::run(std::env::args()) as u8)
}
