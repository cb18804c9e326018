use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(bidegree::cli::main_with(std::env::args_os()))
}
