use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(tm_core::cli::run(std::env::args_os()).code())
}
