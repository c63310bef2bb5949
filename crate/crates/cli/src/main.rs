//! `polyquad` command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use polyquad::diagnostics::{self, even_degrees};
use polyquad::geometry::{self, read_off_file, write_off_file, CLOSURE_TOL, PLANARITY_TOL};
use polyquad::poly::Polynomial;
use polyquad::rule::MAX_DEGREE;
use polyquad::{build_rule, shapes, Polyhedron, RuleCache};

#[derive(Parser)]
#[command(name = "polyquad", version, about = "Quadrature rules on polyhedra")]
struct Cli {
    /// Worker threads for moment computation (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build a rule and write its nodes and weights.
    Rule {
        off: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a polynomial given as "coeff a b c" lines.
    Integrate {
        off: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        poly: PathBuf,
    },
    /// Accuracy and stability report for even degrees 4..=nmax.
    Check {
        off: PathBuf,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// JSON report path (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV of (n, ratio, mean_log_err).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time rule construction with cold and warm caches.
    Bench {
        off: PathBuf,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one of the built-in shapes as OFF.
    Shapes {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Parse(anyhow::Error),
    Validation(String),
    DegreeCap(usize),
    DegreeExceeded { term: usize, degree: usize },
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Other(_) => 1,
            Failure::Validation(_) => 2,
            Failure::DegreeCap(_) => 3,
            Failure::DegreeExceeded { .. } => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Parse(e) | Failure::Other(e) => write!(f, "{e:#}"),
            Failure::Validation(msg) => write!(f, "validation failed: {msg}"),
            Failure::DegreeCap(n) => write!(f, "degree {n} exceeds the maximum {MAX_DEGREE}"),
            Failure::DegreeExceeded { term, degree } => write!(
                f,
                "warning: polynomial has a term of degree {term} > {degree}; the rule is not exact there"
            ),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<polyquad::Error> for Failure {
    fn from(e: polyquad::Error) -> Self {
        match e {
            polyquad::Error::DegreeTooHigh { degree, .. } => Failure::DegreeCap(degree),
            other => Failure::Other(other.into()),
        }
    }
}

fn load(path: &Path) -> Result<Polyhedron, Failure> {
    let p = read_off_file(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Parse)?;
    let report = geometry::validate(&p, PLANARITY_TOL, CLOSURE_TOL);
    if !report.passed {
        return Err(Failure::Validation(report.problems.join("; ")));
    }
    Ok(p)
}

fn check_degree(n: usize) -> Result<(), Failure> {
    if n > MAX_DEGREE {
        Err(Failure::DegreeCap(n))
    } else {
        Ok(())
    }
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Other),
        None => io::stdout()
            .write_all(bytes)
            .context("writing to standard output")
            .map_err(Failure::Other),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cache = RuleCache::new();
    match cli.command {
        Command::Rule {
            off,
            degree,
            format,
            out,
        } => {
            check_degree(degree)?;
            let p = load(&off)?;
            let rule = build_rule(&p, degree, &cache)?;
            let mut buf = Vec::new();
            match format {
                Format::Json => rule.write_json(&mut buf)?,
                Format::Csv => rule.write_csv(&mut buf)?,
            }
            write_output(out.as_deref(), &buf)?;
            let summary = format!(
                "volume {:.17e}\nstability_ratio {:.17e}\n",
                rule.volume_estimate, rule.stability_ratio
            );
            if out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
        }
        Command::Integrate { off, degree, poly } => {
            check_degree(degree)?;
            let p = load(&off)?;
            let text = fs::read_to_string(&poly)
                .with_context(|| format!("reading {}", poly.display()))
                .map_err(Failure::Parse)?;
            let f = Polynomial::parse(&text)
                .with_context(|| format!("parsing {}", poly.display()))
                .map_err(Failure::Parse)?;
            if f.degree() > degree {
                return Err(Failure::DegreeExceeded {
                    term: f.degree(),
                    degree,
                });
            }
            let rule = build_rule(&p, degree, &cache)?;
            println!("{:.16e}", rule.integrate(|q| f.eval(q)));
        }
        Command::Check {
            off,
            nmax,
            seed,
            samples,
            out,
            csv,
        } => {
            check_degree(nmax)?;
            let p = load(&off)?;
            let report = diagnostics::check(&p, &even_degrees(nmax), seed, samples, &cache)?;
            let json = serde_json::to_string_pretty(&report).context("serializing report")?;
            write_output(out.as_deref(), format!("{json}\n").as_bytes())?;
            if let Some(path) = csv {
                write_output(Some(&path), report.to_csv().as_bytes())?;
            }
        }
        Command::Bench {
            off,
            nmax,
            repeats,
            out,
        } => {
            check_degree(nmax)?;
            let p = load(&off)?;
            let rows = diagnostics::bench(&p, &even_degrees(nmax), repeats)?;
            write_output(out.as_deref(), diagnostics::bench_csv(&rows).as_bytes())?;
        }
        Command::Shapes { name, out } => {
            let p = shapes::by_name(&name)?;
            write_off_file(&p, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polyquad: {e}");
            ExitCode::from(e.code())
        }
    }
}
