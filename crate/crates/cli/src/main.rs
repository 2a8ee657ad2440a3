use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cpa_scatter_cli::run(std::env::args_os(), &mut std::io::stdout().lock()))
}
