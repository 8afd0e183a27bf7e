use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(evt_cvar::cli::parse_and_dispatch(std::env::args_os()))
}
