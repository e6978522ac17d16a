use std::process::ExitCode;

fn main() -> ExitCode {
    stern_cli::main_with(std::env::args_os())
}
