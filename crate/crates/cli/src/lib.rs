pub mod commands;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ppav_lattice::comppair::PresetKind;
use ppav_lattice::finquot::DEFAULT_BUDGET;
use ppav_lattice::Error;

pub const EXIT_CERTIFICATION: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(name = "ppav", version, about = "Exact lattice constructions of ppavs with m-minimal curves")]
struct Cli {
    /// Largest group order that may be enumerated exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    One,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Quotients of the standard principal lattice by m.t.i. subgroups of m-torsion.
    Quotient {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = Mode::One)]
        mode: Mode,
    },
    /// Build and certify the standard cyclic cover of a genus-g surface.
    Cover {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        m: u64,
    },
    /// Run the Welters construction on a cover fixture.
    Welters {
        /// Fixture JSON, or a report written by `cover`.
        fixture: PathBuf,
        /// Subgroup label `a:b` for K = ⟨aξ̄ + bP_1⟩.
        #[arg(long = "k")]
        k: Option<String>,
        #[arg(long, default_value = "pullback_quotient")]
        preset: String,
    },
    /// Dimension and genus table.
    Dims {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 0)]
        r: i64,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Certification { .. } | Error::AdjointNotIntegral(_) => EXIT_CERTIFICATION,
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_VALIDATION,
    }
}

fn run(cli: &Cli) -> Result<commands::Output, Error> {
    match &cli.command {
        Command::Quotient { g, m, mode } => {
            commands::quotient(*g, *m, matches!(mode, Mode::All), cli.budget)
        }
        Command::Cover { g, m } => commands::cover(*g, *m),
        Command::Welters { fixture, k, preset } => {
            let preset: PresetKind = preset.parse()?;
            let text = std::fs::read_to_string(fixture)
                .map_err(|e| Error::Domain(format!("cannot read {}: {e}", fixture.display())))?;
            commands::welters(&text, preset, k.as_deref(), cli.budget)
        }
        Command::Dims { g, m, r } => commands::dims(*g, *m, *r),
    }
}

/// Result of one invocation: what would go to stdout and stderr, and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: Vec<u8>,
    pub stderr: String,
    pub code: u8,
}

impl Invocation {
    fn failed(stderr: String, code: u8) -> Self {
        Invocation {
            stdout: Vec::new(),
            stderr,
            code,
        }
    }
}

/// Runs the command line `args` (without the program name).
pub fn invoke<I, S>(args: I) -> Invocation
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("ppav")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Invocation {
                    stdout: rendered.into_bytes(),
                    stderr: String::new(),
                    code,
                }
            } else {
                Invocation::failed(rendered, code)
            };
        }
    };
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => return Invocation::failed(format!("error: {e}\n"), exit_code(&e)),
    };
    let payload = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Text => out.text,
    };
    let mut stdout = Vec::new();
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, payload) {
                return Invocation::failed(format!("error: cannot write {}: {e}\n", path.display()), EXIT_VALIDATION);
            }
        }
        None => stdout = payload.into_bytes(),
    }
    if out.passed {
        Invocation {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    } else {
        Invocation {
            stdout,
            stderr: "error: certification failed\n".into(),
            code: EXIT_CERTIFICATION,
        }
    }
}
