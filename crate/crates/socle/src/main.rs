use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(socle::cli::run())
}
