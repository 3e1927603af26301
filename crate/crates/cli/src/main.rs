use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let run = ppav_lattice_cli::invoke(std::env::args_os().skip(1));
    let _ = std::io::stdout().write_all(&run.stdout);
    eprint!("{}", run.stderr);
    ExitCode::from(run.code)
}
