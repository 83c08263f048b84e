use std::process::ExitCode;

fn main() -> ExitCode {
    itn::cli::main_with_args(std::env::args_os())
}
