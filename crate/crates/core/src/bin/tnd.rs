use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let exit = threshold_dynamics::cli::run_cli(std::env::args_os(), &mut out, &mut err);
    ExitCode::from(exit.code())
}
