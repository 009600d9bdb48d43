use std::fs;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metric_spectra::search::{self, SearchError, Strategy, VerifyOptions};
use metric_spectra::{
    canonicalize, equivalent, profile, CanonError, Exec, Spectrum, SpectrumError, VERSION,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spectra",
    version,
    about = "Exact classification of finite metric spectra"
)]
struct Cli {
    /// Output format; text on a terminal, json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Box,
    Profile,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Box => Strategy::Box,
            StrategyArg::Profile => Strategy::Profile,
        }
    }
}

#[derive(clap::Args)]
struct Jobs {
    /// Worker threads [default: one per core]
    #[arg(long, env = "SPECTRA_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
}

impl Jobs {
    fn exec(&self) -> Exec {
        self.jobs
            .map_or_else(Exec::available, |j| Exec::with_jobs(j as usize))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the triangle profile of a spectrum such as "1,2,5/2".
    Profile { spectrum: String },
    /// Exit 0 when two spectra have the same profile, 1 otherwise.
    Equiv { a: String, b: String },
    /// Integral representative (and band) of a spectrum.
    Canon {
        spectrum: String,
        /// Print only the band representative.
        #[arg(long)]
        band: bool,
    },
    /// Search every class of dimension n for a witness with 2^i - 1 <= t_i <= 2^n - 1.
    VerifyConant {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        jobs: Jobs,
        /// Progress log; an existing file is resumed.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Also write the atlas, one class per line.
        #[arg(long)]
        atlas: Option<PathBuf>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        /// Permit n = 7 (tens of thousands of classes); requires --checkpoint.
        #[arg(long)]
        allow_n7: bool,
    },
    /// Enumerate every class of dimension n as line-delimited JSON.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "box")]
        strategy: StrategyArg,
        #[command(flatten)]
        jobs: Jobs,
        /// Write the atlas here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<SpectrumError> for Failure {
    fn from(err: SpectrumError) -> Self {
        Failure::usage(format!("{err:?}: {err}"))
    }
}

impl From<CanonError> for Failure {
    fn from(err: CanonError) -> Self {
        match err {
            CanonError::Spectrum(e) => e.into(),
            other => Failure {
                code: EXIT_INVARIANT,
                message: other.to_string(),
            },
        }
    }
}

impl From<SearchError> for Failure {
    fn from(err: SearchError) -> Self {
        let code = match err {
            SearchError::InvariantViolation(_) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::usage(err.to_string())
    }
}

struct Output {
    format: Format,
    stdout: std::io::Stdout,
}

impl Output {
    fn json(&mut self, mut doc: Value) -> Result<(), Failure> {
        if let Value::Object(map) = &mut doc {
            map.insert("version".into(), Value::from(VERSION));
        }
        writeln!(self.stdout, "{doc}")?;
        Ok(())
    }

    fn text(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.stdout, "{text}")?;
        Ok(())
    }
}

fn parse(text: &str) -> Result<Spectrum, Failure> {
    Ok(Spectrum::parse(text)?)
}

fn triples_json(p: &metric_spectra::TriangleProfile) -> Value {
    Value::from(
        p.member_triples()
            .iter()
            .map(|t| json!([t.i, t.j, t.k]))
            .collect::<Vec<_>>(),
    )
}

fn joined(values: &[impl ToString]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() {
        Format::Text
    } else {
        Format::Json
    });
    let mut out = Output {
        format,
        stdout: std::io::stdout(),
    };

    match cli.command {
        Command::Profile { spectrum } => {
            let p = profile(&parse(&spectrum)?);
            match out.format {
                Format::Json => out.json(json!({"n": p.n(), "triples": triples_json(&p)}))?,
                Format::Text => {
                    let list: Vec<String> = p
                        .member_triples()
                        .iter()
                        .map(|t| format!("({},{},{})", t.i, t.j, t.k))
                        .collect();
                    out.text(&format!("n = {}: {{{}}}", p.n(), list.join(", ")))?;
                }
            }
            Ok(0)
        }
        Command::Equiv { a, b } => {
            let same = equivalent(&parse(&a)?, &parse(&b)?)?;
            let verdict = if same { "equivalent" } else { "inequivalent" };
            match out.format {
                Format::Json => out.json(json!({"equivalent": same}))?,
                Format::Text => out.text(verdict)?,
            }
            Ok(if same { 0 } else { EXIT_NEGATIVE })
        }
        Command::Canon { spectrum, band } => {
            let x = parse(&spectrum)?;
            let report = canonicalize(&x)?;
            match (out.format, band) {
                (Format::Json, true) => out.json(json!({
                    "input": x.to_string(),
                    "conant_band": report.conant_band,
                }))?,
                (Format::Json, false) => {
                    out.json(serde_json::to_value(&report).expect("report serializes"))?
                }
                (Format::Text, true) => out.text(&joined(report.conant_band.entries()))?,
                (Format::Text, false) => {
                    let basis: Vec<String> =
                        report.basis_kinds.iter().map(ToString::to_string).collect();
                    out.text(&format!(
                        "input   {}\nvertex  {}\nbasis   {} (det {})\nlifted  {}\nband    {}",
                        x,
                        joined(&report.vertex.point.coords),
                        basis.join(" "),
                        report.vertex.basis_det,
                        joined(report.lifted.entries()),
                        joined(report.conant_band.entries()),
                    ))?;
                }
            }
            Ok(0)
        }
        Command::VerifyConant {
            n,
            jobs,
            checkpoint,
            atlas,
            strategy,
            allow_n7,
        } => {
            if n == 7 && !allow_n7 {
                return Err(Failure::usage(
                    "n = 7 is a long run; pass --allow-n7 together with --checkpoint",
                ));
            }
            if n == 7 && checkpoint.is_none() {
                return Err(Failure::usage("n = 7 requires --checkpoint"));
            }
            if !(1..=search::MAX_VERIFY_N).contains(&n) {
                return Err(Failure::usage(format!(
                    "unsupported n = {n}; verify-conant accepts 1..={}",
                    search::MAX_VERIFY_N
                )));
            }
            let mut options = VerifyOptions::new(n, jobs.exec());
            options.checkpoint = checkpoint;
            options.strategy = strategy.map(Into::into);
            let report = search::verify_conant_with(&options)?;
            if let Some(path) = atlas {
                fs::write(path, report.atlas.to_lines())?;
            }
            match out.format {
                Format::Json => {
                    let summary: Value =
                        serde_json::from_str(&report.summary_json()).expect("summary is json");
                    out.json(summary)?;
                }
                Format::Text => out.text(&format!(
                    "n = {}: {} classes, {} satisfied, {} without witness ({:.2?})",
                    n,
                    report.class_count(),
                    report.satisfied,
                    report.no_witness_found,
                    report.wall_time
                ))?,
            }
            if report.all_satisfied() {
                Ok(0)
            } else {
                log::error!(
                    "{} classes of dimension {n} have no witness in the box",
                    report.no_witness_found
                );
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Enumerate {
            n,
            strategy,
            jobs,
            out: path,
        } => {
            if !(1..=search::MAX_N).contains(&n) {
                return Err(Failure::usage(format!(
                    "unsupported n = {n}; enumerate accepts 1..={}",
                    search::MAX_N
                )));
            }
            let atlas = search::enumerate(n, strategy.into(), None, &jobs.exec())?;
            log::info!("n = {n}: {} classes", atlas.len());
            match path {
                Some(path) => fs::write(path, atlas.to_lines())?,
                None => write!(out.stdout, "{}", atlas.to_lines())?,
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
