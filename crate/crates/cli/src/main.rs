use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fracwave::main_with_args(std::env::args_os()))
}
