use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sadic::construction::{generate_word, prefix_stream, Which};
use sadic::error::{Error, Result};
use sadic::family::ParameterFamily;
use sadic::oracle::DEFAULT_MEMORY_BUDGET;
use sadic::reports::{self, Format, ReportKind, ReportOptions};
use sadic::suite::{run_suite, CheckName, FamilySource, Status, SuiteConfig};
use sadic::words::{set_materialization_cap, FiniteWord};

const LINE_WIDTH: usize = 120;

#[derive(Parser)]
#[command(name = "sadic", version, about = "Build and verify the word u and its complexity and frequency data")]
struct Cli {
    /// Largest word, in letters, any command may materialize.
    #[arg(long, global = true, env = "SADIC_MAX_LETTERS")]
    max_letters: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenWhich {
    U,
    V,
    Prefix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Complexity,
    Bispecial,
    Frequency,
    Recurrence,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify {
        /// TOML suite configuration; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// `paper`, `mini` or a family TOML file.
        #[arg(long)]
        family: Option<String>,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Highest rank or level examined [default: 12].
        #[arg(long)]
        max_rank: Option<usize>,
        /// Largest factor length compared against the oracle [default: 2000].
        #[arg(long)]
        max_n: Option<usize>,
        /// Oracle prefix length L; the second prefix has length 2L [default: 4000000].
        #[arg(long)]
        prefix_len: Option<usize>,
        /// Random instances per sampled statement [default: 10000].
        #[arg(long)]
        samples: Option<usize>,
        /// RNG seed [default: 0].
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
    },
    /// Write u_i, v_i or a prefix of u as ASCII with a JSON sidecar.
    Gen {
        #[arg(long, default_value = "paper")]
        family: String,
        #[arg(long, value_enum)]
        which: GenWhich,
        /// Index i of u_i or v_i.
        #[arg(long, default_value_t = 0)]
        rank: usize,
        /// Starting level h.
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Prefix length.
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a complexity, bispecial, frequency or recurrence table.
    Report {
        #[arg(long, default_value = "paper")]
        family: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        /// Adds oracle columns computed on a prefix of this length.
        #[arg(long)]
        prefix_len: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
    },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_resource() {
        3
    } else {
        2
    }
}

fn load_family(reference: &str) -> Result<ParameterFamily> {
    let fam = ParameterFamily::from_reference(reference)?;
    if !fam.is_paper_star() {
        fam.validate_structure(None)?;
    }
    Ok(fam)
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn wrap(word: &FiniteWord) -> String {
    let text = word.to_string();
    let mut out = String::with_capacity(text.len() + text.len() / LINE_WIDTH + 1);
    for chunk in text.as_bytes().chunks(LINE_WIDTH) {
        out.push_str(std::str::from_utf8(chunk).expect("ascii"));
        out.push('\n');
    }
    out
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    config: Option<PathBuf>,
    family: Option<String>,
    checks: Vec<String>,
    max_rank: Option<usize>,
    max_n: Option<usize>,
    prefix_len: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: OutFormat,
) -> Result<u8> {
    let (mut cfg, base) = match &config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            (SuiteConfig::from_toml_str(&text)?, path.parent().map(Path::to_path_buf))
        }
        None => (SuiteConfig::for_family(FamilySource::Reference("paper".into())), None),
    };
    if let Some(f) = family {
        cfg.family = FamilySource::Reference(f);
    }
    if !checks.is_empty() {
        cfg.checks = checks.iter().map(|c| CheckName::parse(c)).collect::<Result<_>>()?;
    }
    cfg.max_rank = max_rank.unwrap_or(cfg.max_rank);
    cfg.max_n = max_n.unwrap_or(cfg.max_n);
    cfg.prefix_len = prefix_len.unwrap_or(cfg.prefix_len);
    cfg.samples = samples.unwrap_or(cfg.samples);
    cfg.seed = seed.unwrap_or(cfg.seed);

    let fam = cfg.family.load(base.as_deref())?;
    let report = run_suite(&fam, &cfg)?;
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unsaturated => "WARN",
            Status::Skipped => "SKIP",
        };
        eprintln!("{tag} {}: {}", c.name.as_str(), c.summary);
    }
    let body = match format {
        OutFormat::Json => report.to_json(),
        OutFormat::Csv => report.to_csv(),
    };
    emit(out.as_deref(), &body)?;
    Ok(if report.failed() { 1 } else { 0 })
}

fn gen(family: &str, which: GenWhich, rank: usize, level: usize, length: Option<usize>, out: &Path) -> Result<u8> {
    let fam = load_family(family)?;
    let (word, label) = match which {
        GenWhich::U => (generate_word(&fam, level, rank, Which::U)?, "u"),
        GenWhich::V => (generate_word(&fam, level, rank, Which::V)?, "v"),
        GenWhich::Prefix => {
            let len = length.ok_or_else(|| Error::InvalidArgument("--length is required for a prefix".into()))?;
            (prefix_stream(&fam, level, len)?, "prefix")
        }
    };
    fs::write(out, wrap(&word))?;
    let meta = json!({
        "family": fam.name(),
        "which": label,
        "level": level,
        "rank": if matches!(which, GenWhich::Prefix) { None } else { Some(rank) },
        "length": word.len(),
        "parikh": word.parikh(),
        "line_width": LINE_WIDTH,
    });
    fs::write(sidecar_path(out), reports::to_json_string(&meta))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn report(
    family: &str,
    kind: Kind,
    max_rank: usize,
    max_n: usize,
    prefix_len: Option<usize>,
    out: Option<PathBuf>,
    format: OutFormat,
) -> Result<u8> {
    let fam = load_family(family)?;
    let kind = match kind {
        Kind::Complexity => ReportKind::Complexity,
        Kind::Bispecial => ReportKind::Bispecial,
        Kind::Frequency => ReportKind::Frequency,
        Kind::Recurrence => ReportKind::Recurrence,
    };
    let opts = ReportOptions {
        max_rank,
        max_n,
        prefix_len,
        saturation_factor: 2,
        memory_budget: DEFAULT_MEMORY_BUDGET,
    };
    let rendered = reports::render(&fam, kind, &opts, format.into())?;
    if let Some(reason) = &rendered.truncated {
        eprintln!("note: table stops early: {reason}");
    }
    emit(out.as_deref(), &rendered.body)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(cap) = cli.max_letters {
        set_materialization_cap(cap);
    }
    let outcome = match cli.command {
        Command::Verify {
            config,
            family,
            checks,
            max_rank,
            max_n,
            prefix_len,
            samples,
            seed,
            out,
            format,
        } => verify(config, family, checks, max_rank, max_n, prefix_len, samples, seed, out, format),
        Command::Gen {
            family,
            which,
            rank,
            level,
            length,
            out,
        } => gen(&family, which, rank, level, length, &out),
        Command::Report {
            family,
            kind,
            max_rank,
            max_n,
            prefix_len,
            out,
            format,
        } => report(&family, kind, max_rank, max_n, prefix_len, out, format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
