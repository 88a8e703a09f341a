use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let budget = std::env::var(dyncong_cli::BUDGET_VAR).ok();
    let code = dyncong_cli::run_with(
        std::env::args_os(),
        budget,
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}
