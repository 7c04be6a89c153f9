use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ruijsenaars::conformal::check_hbar_all;
use ruijsenaars::functions::{f_ellip, f_ghat_n, f_ghat_n_shifted, f_gl_n, prefactor_c, SeriesRole};
use ruijsenaars::macdonald::{check_bispectral, check_eigen, check_poincare, check_specialization};
use ruijsenaars::params::{default_spectral, ParamSet};
use ruijsenaars::partitions::partitions_of;
use ruijsenaars::report::{Status, SuiteReport, VerificationReport};
use ruijsenaars::series::Series;
use ruijsenaars::verify::{
    default_conformal, n1_triples, verify_all, verify_c_identity, verify_lemma_nek, verify_n1_conventions,
    verify_nek_forms, verify_p_limit, verify_theorem_main, Convention, SuiteConfig,
};
use ruijsenaars::{parse_rational, rat, Error};

#[derive(Parser)]
#[command(name = "ruijsenaars", version, about = "Exact order-by-order verifier for Macdonald and non-stationary Ruijsenaars series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an identity (or all of them) and report pass/fail.
    Verify {
        identity: Identity,
        #[command(flatten)]
        opts: Opts,
        /// Which reading of the N = 1 summand to test.
        #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
        convention: ConventionArg,
        /// Write the report as JSON ("-" for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Compare the produced series with a stored golden file (a directory for `all`).
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Store the produced series as golden files (a directory for `all`).
        #[arg(long)]
        write_golden: Option<PathBuf>,
        /// Record wall time in the JSON report.
        #[arg(long)]
        timings: bool,
    },
    /// Print a series in the canonical text format.
    Dump {
        series: DumpTarget,
        #[command(flatten)]
        opts: Opts,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Opts {
    /// Rank N.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Truncation degree D.
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, default_value = "2/5")]
    q: String,
    /// N-th root of t.
    #[arg(long, default_value = "4/9")]
    tau: String,
    /// N-th root of κ (for the p → 0 limit, κ = κ₀^{-N}).
    #[arg(long, default_value = "5/8")]
    kappa0: String,
    /// Comma-separated spectral values s_1..s_N.
    #[arg(long)]
    s: Option<String>,
    /// Seed for sampled partitions.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    ThmMain,
    N1,
    Eigen,
    Bispectral,
    Poincare,
    PLimit,
    LemmaNek,
    NekForms,
    CIdentity,
    HbarLimit,
    SpecMacdonald,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Printed,
    KappaInverted,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpTarget {
    FGl,
    FEllip,
    FGhat,
    FGhatShifted,
    Prefactor,
}

enum Outcome {
    Single(VerificationReport, Option<Series>),
    Suite(SuiteReport, Vec<(String, Series)>),
}

impl Opts {
    fn params(&self) -> Result<ParamSet, Error> {
        let s = match &self.s {
            Some(text) => text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?,
            None => default_spectral(self.n),
        };
        let p = ParamSet {
            n: self.n,
            q: parse_rational(&self.q)?,
            tau: parse_rational(&self.tau)?,
            kappa0: parse_rational(&self.kappa0)?,
            s,
        };
        p.validate()?;
        Ok(p)
    }
}

fn run_identity(identity: Identity, opts: &Opts, convention: ConventionArg) -> Result<Outcome, Error> {
    let p = opts.params()?;
    let d = opts.degree;
    let t = p.t();
    let single = |r: VerificationReport| Ok(Outcome::Single(r, None));
    match identity {
        Identity::ThmMain => {
            let (r, lhs) = verify_theorem_main(&p, d);
            Ok(Outcome::Single(r, lhs))
        }
        Identity::N1 => {
            let conventions = match convention {
                ConventionArg::Printed => vec![Convention::Printed],
                ConventionArg::KappaInverted => vec![Convention::KappaInverted],
                ConventionArg::Both => vec![Convention::Printed, Convention::KappaInverted],
            };
            single(verify_n1_conventions(d, &n1_triples(), &conventions).0)
        }
        Identity::Eigen => single(check_eigen(p.n, d, &p.s, &p.q, &t)),
        Identity::Bispectral => single(check_bispectral(p.n, d, &p.q, &t)),
        Identity::Poincare => single(check_poincare(p.n, d, &p.s, &p.q, &t)),
        Identity::PLimit => {
            let (r, slice) = verify_p_limit(&p, d, &p.kappa0);
            Ok(Outcome::Single(r, slice))
        }
        Identity::LemmaNek => single(verify_lemma_nek(50, &[2, 3, 4], opts.seed, &p.q, &p.tau)),
        Identity::NekForms => single(verify_nek_forms(6, &p.q, &t, &rat(7, 11))),
        Identity::CIdentity => single(verify_c_identity(10, &p.q, &t)),
        Identity::HbarLimit => single(check_hbar_all(4, &default_conformal())),
        Identity::SpecMacdonald => {
            let reports: Vec<VerificationReport> = (0..=d)
                .flat_map(partitions_of)
                .filter(|l| l.len() <= p.n)
                .map(|l| check_specialization(&l, p.n, 1, &p.q, &t))
                .collect();
            Ok(Outcome::Suite(SuiteReport::new(reports), Vec::new()))
        }
        Identity::All => {
            let cfg = SuiteConfig {
                params: p,
                degree: d,
                seed: opts.seed,
            };
            let (suite, series) = verify_all(&cfg)?;
            Ok(Outcome::Suite(suite, series))
        }
    }
}

fn dump(target: DumpTarget, opts: &Opts) -> Result<Series, Error> {
    let p = opts.params()?;
    let d = opts.degree;
    let t = p.t();
    match target {
        DumpTarget::FGl => f_gl_n(p.n, d, &SeriesRole::XFormalSNumeric(p.s.clone()), &p.q, &t),
        DumpTarget::FEllip => f_ellip(p.n, d, &p.q, &t),
        DumpTarget::FGhat => f_ghat_n(p.n, d, &p.s, &p.kappa0, &p.q, &p.tau),
        DumpTarget::FGhatShifted => Ok(f_ghat_n_shifted(p.n, d, &p.q, &p.tau)?.0),
        DumpTarget::Prefactor => prefactor_c(p.n, d, &p.q, &t),
    }
}

fn status_line(r: &VerificationReport) -> String {
    let tag = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    };
    let mut line = format!("{tag} {} (degree {}): {} coefficients compared", r.identity, r.degree, r.coefficients_compared);
    if let Some(m) = &r.mismatch {
        line.push_str(&format!("; first mismatch at {}: lhs {} rhs {}", m.monomial, m.lhs, m.rhs));
    }
    if let Some(d) = &r.detail {
        line.push_str(&format!(" [{d}]"));
    }
    line
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Invalid(e.to_string()))? + "\n";
    if path.as_os_str() == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
    }
}

fn golden_files(outcome: &Outcome, path: &Path) -> Vec<(PathBuf, String)> {
    match outcome {
        Outcome::Single(_, Some(s)) => vec![(path.to_path_buf(), s.to_canonical_text())],
        Outcome::Single(_, None) => Vec::new(),
        Outcome::Suite(_, series) => series
            .iter()
            .map(|(name, s)| (path.join(format!("{name}.txt")), s.to_canonical_text()))
            .collect(),
    }
}

/// Returns false on any byte difference.
fn check_golden(outcome: &Outcome, path: &Path) -> Result<bool, Error> {
    let files = golden_files(outcome, path);
    if files.is_empty() {
        return Err(Error::Invalid("this check produces no series to compare".into()));
    }
    let mut ok = true;
    for (file, text) in files {
        let stored = std::fs::read_to_string(&file).map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))?;
        if stored != text {
            println!("GOLDEN MISMATCH {}", file.display());
            ok = false;
        } else {
            println!("GOLDEN MATCH {}", file.display());
        }
    }
    Ok(ok)
}

fn write_golden(outcome: &Outcome, path: &Path) -> Result<(), Error> {
    if let Outcome::Suite(..) = outcome {
        std::fs::create_dir_all(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    }
    for (file, text) in golden_files(outcome, path) {
        std::fs::write(&file, text).map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            identity,
            opts,
            convention,
            json,
            golden,
            write_golden: write_to,
            timings,
        } => {
            let start = Instant::now();
            let mut outcome = match run_identity(identity, &opts, convention) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let elapsed = start.elapsed().as_millis() as u64;
            let status = match &mut outcome {
                Outcome::Single(r, _) => {
                    if timings {
                        r.wall_time_ms = Some(elapsed);
                    }
                    println!("{}", status_line(r));
                    r.status
                }
                Outcome::Suite(s, _) => {
                    for r in &mut s.reports {
                        println!("{}", status_line(r));
                    }
                    s.status
                }
            };
            let io = || -> Result<bool, Error> {
                if let Some(path) = &json {
                    match &outcome {
                        Outcome::Single(r, _) => write_json(path, r)?,
                        Outcome::Suite(s, _) => write_json(path, s)?,
                    }
                }
                if let Some(path) = &write_to {
                    write_golden(&outcome, path)?;
                }
                match &golden {
                    Some(path) => check_golden(&outcome, path),
                    None => Ok(true),
                }
            };
            match (status, io()) {
                (_, Err(e)) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                (Status::Error, _) => ExitCode::from(2),
                (Status::Fail, _) | (_, Ok(false)) => ExitCode::from(1),
                (Status::Pass, Ok(true)) => ExitCode::SUCCESS,
            }
        }
        Command::Dump { series, opts, out } => match dump(series, &opts) {
            Ok(s) => {
                let text = s.to_canonical_text();
                match out {
                    Some(path) => {
                        if let Err(e) = std::fs::write(&path, text) {
                            eprintln!("error: {}: {e}", path.display());
                            return ExitCode::from(2);
                        }
                    }
                    None => print!("{text}"),
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
