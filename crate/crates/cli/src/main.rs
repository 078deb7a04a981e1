//! `hitchin`: batch front end for building representations and computing
//! their length functions, spectra, identities, currents and asymptotics.
//!
//! Exit status: 0 success, 1 a verdict failed (identities, convergence,
//! validation), 2 bad input. Machine output goes to files only, written
//! atomically; stdout carries a short human summary.

mod plot;
mod tol;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hitchin_core::asymptotic::{convergence_report_with, ratio_series_with, series_csv, SeriesConfig};
use hitchin_core::current::{current_lengths, CurrentCombo};
use hitchin_core::format::fmt_sig;
use hitchin_core::lengths::{identity_report_with, length_vector_with, spectrum, spectrum_csv, SpectrumConfig};
use hitchin_core::rep::{
    build_octagon_fuchsian, deform, load_rep, rep_to_json, sym_power_lift, validate, SurfaceRep, MAX_LIFT_DIM,
};
use hitchin_core::word::{enumerate_classes, Word};
use hitchin_core::Error;

use tol::Tolerances;

#[derive(Parser)]
#[command(name = "hitchin", version, about = "Length functions of Hitchin representations of the genus-2 surface group")]
struct Cli {
    /// Tolerance overrides `key=value`, comma separated or repeated.
    /// Keys: gap, eigen_imag, relator, identity, tail, corr.
    #[arg(long, global = true, env = "HITCHIN_TOL", value_delimiter = ',')]
    tol: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Octagon,
}

#[derive(Subcommand)]
enum Command {
    /// Build the octagon Fuchsian point, lifted to dimension n.
    RepBuild {
        #[arg(long, value_enum, default_value = "octagon")]
        model: Model,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check relator, word problem and spectra on all classes up to a length.
    RepValidate {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Move along the relator variety by a seeded perturbation.
    RepDeform {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the length vector of one word.
    Length {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Length spectrum of all classes up to a length, as CSV.
    Spectrum {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sum rule and inverse flip rule on all classes up to a length.
    Identities {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Optional per-class residual CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lengths of a finite current given as `weight word` lines.
    Current {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        combo: PathBuf,
        /// Optional CSV `i,length`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The series log|λ_i(αᵐβ)| − m·log|λ_i(α)| and its limit.
    Asymptotic {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 40)]
        m_max: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG plot of log10|Δ| against m.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

/// Why a command did not succeed.
enum Failure {
    Verdict(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        // numerical verdicts about the representation are not input errors
        match e.downcast_ref::<Error>() {
            Some(Error::ComplexSpectrum { .. } | Error::DegenerateGap { .. } | Error::NewtonDivergence { .. }) => {
                Failure::Verdict(format!("{e:#}"))
            }
            _ => Failure::Input(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = Tolerances::parse(&cli.tol)
        .map_err(Failure::Input)
        .and_then(|tol| run(cli.command, &tol));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict(msg)) => {
            eprintln!("verdict: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Write through a temporary file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn load(path: &Path) -> anyhow::Result<SurfaceRep> {
    load_rep(path).with_context(|| format!("loading {}", path.display()))
}

fn parse_word(s: &str) -> anyhow::Result<Word> {
    s.parse::<Word>().with_context(|| format!("parsing word `{s}`"))
}

fn run(command: Command, tol: &Tolerances) -> Outcome {
    match command {
        Command::RepBuild { model: Model::Octagon, n, out } => {
            if !(2..=MAX_LIFT_DIM).contains(&n) {
                return Err(Error::DimensionOutOfRange { n, min: 2, max: MAX_LIFT_DIM }.into());
            }
            let base = build_octagon_fuchsian();
            let rep = if n == 2 { base } else { sym_power_lift(&base, n)? };
            write_atomic(&out, &rep_to_json(&rep))?;
            println!("built {} rep, n = {n}", rep.provenance());
            println!("relator {}", rep.presentation().relator());
            println!("relator residual {}", fmt_sig(rep.relator_residual()));
            Ok(())
        }
        Command::RepValidate { rep, max_len } => {
            let rep = load(&rep)?;
            let report = validate(&rep, &enumerate_classes(max_len), tol.eigen_imag);
            println!("relator residual {}", fmt_sig(report.relator_residual));
            println!("word problem ok {}", report.word_problem_ok);
            println!("eigenvalues real {}", report.eigen_real_ok);
            println!("min log gap {}", fmt_sig(report.min_log_gap));
            println!("sample size {}", report.sample_size);
            for (w, why) in report.problems.iter().take(10) {
                println!("problem {w}: {why}");
            }
            if report.hitchin_plausible(tol.relator) {
                println!("verdict hitchin-plausible");
                Ok(())
            } else {
                Err(Failure::Verdict("not hitchin-plausible on this sample".into()))
            }
        }
        Command::RepDeform { rep, seed, epsilon, out } => {
            let rep = load(&rep)?;
            let d = deform(&rep, seed, epsilon)?;
            write_atomic(&out, &rep_to_json(&d))?;
            println!("deformed rep, n = {}, seed {seed}, epsilon {}", d.n(), fmt_sig(epsilon));
            println!("relator residual {}", fmt_sig(d.relator_residual()));
            Ok(())
        }
        Command::Length { rep, word } => {
            let rep = load(&rep)?;
            let w = parse_word(&word)?;
            let l = length_vector_with(&rep, &w, &tol.spectral())?;
            for (i, x) in l.values().iter().enumerate() {
                println!("l{} {}", i + 1, fmt_sig(*x));
            }
            println!("sum {}", fmt_sig(l.sum()));
            Ok(())
        }
        Command::Spectrum { rep, max_len, out } => {
            let rep = load(&rep)?;
            let config = SpectrumConfig { spectral: tol.spectral(), ..SpectrumConfig::default() };
            let entries = spectrum(&rep, max_len, &config)?;
            write_atomic(&out, &spectrum_csv(&entries, rep.n()))?;
            let merged: usize = entries.iter().map(|e| e.merged.len()).sum();
            println!("{} classes, {merged} merged as surface-group conjugates", entries.len());
            if let Some(first) = entries.first() {
                println!("shortest {} with l1 {}", first.class, fmt_sig(first.lengths[0]));
            }
            Ok(())
        }
        Command::Identities { rep, max_len, out } => {
            let rep = load(&rep)?;
            let classes = enumerate_classes(max_len);
            let report = identity_report_with(&rep, &classes, &tol.spectral(), tol.identity);
            if let Some(path) = out {
                let mut csv = String::from("class,sum_residual,flip_residual\n");
                for c in &report.classes {
                    csv.push_str(&format!("{},{},{}\n", c.class, fmt_sig(c.sum_residual), fmt_sig(c.flip_residual)));
                }
                write_atomic(&path, &csv)?;
            }
            println!("classes {}", report.classes.len() + report.failures.len());
            println!("max sum residual {}", fmt_sig(report.max_sum_residual));
            println!("max flip residual {}", fmt_sig(report.max_flip_residual));
            println!("tolerance {}", fmt_sig(report.tolerance));
            for (c, why) in report.failures.iter().take(10) {
                println!("failed {c}: {why}");
            }
            if report.passed() {
                println!("verdict pass");
                Ok(())
            } else {
                Err(Failure::Verdict("identities fail".into()))
            }
        }
        Command::Current { rep, combo, out } => {
            let rep = load(&rep)?;
            let text = fs::read_to_string(&combo).with_context(|| format!("reading {}", combo.display()))?;
            let alpha: CurrentCombo = text.parse().map_err(anyhow::Error::from)?;
            print!("{alpha}");
            if alpha.is_measure_class() {
                println!("# measure current");
            } else {
                println!("# signed (Hölder) current");
            }
            let l = current_lengths(&rep, &alpha)?;
            let mut csv = String::from("i,length\n");
            for (i, x) in l.iter().enumerate() {
                println!("l{} {}", i + 1, fmt_sig(*x));
                csv.push_str(&format!("{},{}\n", i + 1, fmt_sig(*x)));
            }
            if let Some(path) = out {
                write_atomic(&path, &csv)?;
            }
            Ok(())
        }
        Command::Asymptotic { rep, alpha, beta, m_max, out, plot } => {
            let rep = load(&rep)?;
            let (alpha, beta) = (parse_word(&alpha)?, parse_word(&beta)?);
            let config = SeriesConfig { spectral: tol.spectral(), ..SeriesConfig::default() };
            let series = ratio_series_with(&rep, &alpha, &beta, m_max, &config)?;
            write_atomic(&out, &series_csv(&series))?;
            if let Some(path) = plot {
                write_atomic(&path, &plot::series_svg(&series))?;
            }
            for (m, why) in &series.invalid {
                println!("m = {m} excluded: {why}");
            }
            let report = convergence_report_with(&series, &tol.convergence())?;
            for i in 0..series.n {
                let rate = report.rate[i].map_or("-".to_string(), fmt_sig);
                println!(
                    "i = {} limit {} ratio {} rate {} tail {} converged {}",
                    i + 1,
                    fmt_sig(report.limit_estimate[i]),
                    fmt_sig(report.ratio_limit[i]),
                    rate,
                    fmt_sig(report.tail_residual[i]),
                    report.converged[i]
                );
            }
            if report.all_converged() {
                println!("verdict converged");
                Ok(())
            } else {
                Err(Failure::Verdict("no convergence detected".into()))
            }
        }
    }
}
