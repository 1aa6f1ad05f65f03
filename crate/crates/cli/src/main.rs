use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(subdiv_cli::main_from_env())
}
