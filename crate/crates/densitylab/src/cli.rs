//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use densitylab_core::bounds::lemmaxy_oracle_with;
use densitylab_core::constructions::{cgo_config, good_set_example, kurka_cn, szenes_config};
use densitylab_core::density::density_profile;
use densitylab_core::exact::{default_tol, format_rational, int, parse_rational_or_decimal, rat, to_decimal};
use densitylab_core::periodic::{check_good_i, check_good_ii_bounded, default_cut_grid, Cut};
use densitylab_core::verifier::is_counterexample;
use densitylab_core::zeta::{zeta_polynomial, zeta_table, PriorBound};
use densitylab_core::{Outcome, PeriodicSet, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formats::{profile_csv, GoodSetFile, ReportJson, SetDescription, SetFile};
use crate::sweep;

/// Environment variable overriding the default root tolerance.
pub const TOL_ENV: &str = "DENSITYLAB_TOL";

#[derive(Debug, Parser)]
#[command(name = "densitylab", version, about = "Exact density-point toolkit for interval configurations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the threshold roots and the earlier bounds.
    Roots {
        /// Root tolerance, e.g. 1e-12 or 1/1000000.
        #[arg(long, value_parser = rational_arg)]
        tol: Option<Rational>,
    },
    /// Write a configuration file.
    #[command(subcommand)]
    Construct(Construct),
    /// Check whether a configuration is a counterexample at delta.
    /// Exit 0: counterexample; 1: some endpoint stays inside; 2: bad input.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the density profile at a point as CSV.
    Profile {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        point: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Minimal counterexample size across a range of delta.
    Sweep {
        #[arg(long, value_parser = rational_arg)]
        from: Rational,
        #[arg(long, value_parser = rational_arg)]
        to: Rational,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 100)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Add a runtime_ms column (makes output machine dependent).
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value_t = 6)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Periodic good sets.
    #[command(subcommand)]
    Goodset(Goodset),
    /// Executable lemma checks.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// The optimal family `C_N`.
    Kurka {
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `k` equal intervals filling a fraction of `(m, 1)`.
    Szenes {
        #[arg(long, value_parser = rational_arg)]
        m: Rational,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = rational_arg)]
        fill: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// As `szenes`, each interval split by a centered gap.
    Cgo {
        #[arg(long, value_parser = rational_arg)]
        m: Rational,
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = rational_arg)]
        fill: Rational,
        #[arg(long, value_parser = rational_arg)]
        gap: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GoodSetSource {
    /// Use the explicit example set at `--delta`.
    #[arg(long, conflicts_with = "generator")]
    pub example: bool,
    /// Good-set JSON file.
    #[arg(long, required_unless_present = "example")]
    pub generator: Option<PathBuf>,
    #[arg(long, value_parser = rational_arg)]
    pub delta: Rational,
}

#[derive(Debug, Subcommand)]
pub enum Goodset {
    /// Check both good-set conditions; the second on a bounded cut grid.
    /// Exit 0 when no violation is found.
    Verify {
        #[command(flatten)]
        source: GoodSetSource,
        /// Extra random cuts on top of the structured grid.
        #[arg(long, default_value_t = 0)]
        random_cuts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the generator of the example set.
    Example {
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Oracle {
    /// Measure lower bound on a finite set after certifying its hypotheses.
    /// Exit 0: holds; 1: violated; 2: bad input; 3: hypotheses not certified.
    Lemmaxy {
        /// Finite set file ("halfline": false).
        #[arg(long, required_unless_present = "example")]
        set: Option<PathBuf>,
        /// Use the example good set, truncated to `(p − 2W, q + 2W)`.
        #[arg(long, conflicts_with = "set")]
        example: bool,
        #[arg(long, value_parser = rational_arg)]
        p: Rational,
        #[arg(long, value_parser = rational_arg)]
        q: Rational,
        #[arg(long, value_parser = rational_arg)]
        delta: Rational,
        /// Seed for the extra `u` positions checked in every window.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational_or_decimal(s).map_err(|e| e.to_string())
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Roots { tol } => {
            let tol = match tol {
                Some(t) => t,
                None => env_tol()?,
            };
            out.write_all(roots_table(&tol)?.as_bytes())?;
            Ok(0)
        }
        Command::Construct(c) => construct(c, out),
        Command::Verify { config, delta, out: path } => {
            let c = SetFile::parse(&read(&config)?)?.configuration()?;
            let report = is_counterexample(&c, &delta)?;
            emit(&to_json(&ReportJson::from(&report))?, path.as_deref(), out)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Profile { config, point, out: path, digits } => {
            let profile = match SetFile::parse(&read(&config)?)?.describe()? {
                SetDescription::Configuration(c) => density_profile(&c, &point),
                SetDescription::Finite(s) => density_profile(&s, &point),
            };
            emit(&profile_csv(&profile, digits)?, path.as_deref(), out)?;
            Ok(0)
        }
        Command::Sweep { from, to, steps, n_max, jobs, timing, digits, out: path } => {
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            let rows = sweep::run(&sweep::grid(&from, &to, steps)?, n_max, jobs, timing)?;
            emit(&sweep::to_csv(&rows, digits)?, path.as_deref(), out)?;
            match sweep::transition(&rows) {
                Some((lo, hi)) => writeln!(err, "transition between {} and {}", to_decimal(&lo, digits), to_decimal(&hi, digits))?,
                None => writeln!(err, "no single not-found/found transition")?,
            }
            Ok(0)
        }
        Command::Goodset(g) => goodset(g, out),
        Command::Oracle(Oracle::Lemmaxy { set, example, p, q, delta, seed, out: path }) => {
            let h = if example {
                let g = good_set_example(&delta)?;
                let w = g.certificate(&delta)?.horizon;
                g.truncate(&(&p - int(2) * &w), &(&q + int(2) * &w))
            } else {
                let path = set.expect("clap requires --set without --example");
                SetFile::parse(&read(&path)?)?.finite()?
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fractions: Vec<Rational> = (0..4).map(|_| rat(rng.gen_range(0..1000), 1000)).collect();
            let r = lemmaxy_oracle_with(&h, &p, &q, &delta, &fractions)?;
            let json = LemmaxyJson {
                report: ReportJson::from(&r.report),
                measure: format_rational(&r.measure),
                bound: format_rational(&r.bound),
                interior_measure: format_rational(&r.interior_measure),
                boundary_correction: format_rational(&r.boundary_correction),
                windows_checked: r.windows_checked,
                cover: r.cover.iter().map(|iv| [format_rational(iv.left()), format_rational(iv.right())]).collect(),
            };
            emit(&to_json(&json)?, path.as_deref(), out)?;
            Ok(match r.report.outcome() {
                Outcome::Holds => 0,
                Outcome::Violated => 1,
                Outcome::HypothesesUnmet => 3,
            })
        }
    }
}

#[derive(Serialize)]
struct LemmaxyJson {
    report: ReportJson,
    measure: String,
    bound: String,
    interior_measure: String,
    boundary_correction: String,
    windows_checked: usize,
    cover: Vec<[String; 2]>,
}

#[derive(Serialize)]
struct GoodsetJson {
    measure: String,
    measure_decimal: String,
    condition_i: ReportJson,
    condition_ii: ReportJson,
    passed: bool,
}

fn construct(c: Construct, out: &mut dyn Write) -> Result<i32> {
    let (config, path) = match c {
        Construct::Kurka { delta, n, out } => (kurka_cn(&delta, n)?, out),
        Construct::Szenes { m, k, fill, out } => (szenes_config(&m, k, &fill)?, out),
        Construct::Cgo { m, k, fill, gap, out } => (cgo_config(&m, k, &fill, &gap)?, out),
    };
    emit(&SetFile::from_configuration(&config).to_json(), path.as_deref(), out)?;
    Ok(0)
}

fn load_good_set(src: &GoodSetSource) -> Result<PeriodicSet> {
    if src.example {
        return Ok(good_set_example(&src.delta)?);
    }
    let path = src.generator.as_ref().expect("clap requires --generator without --example");
    GoodSetFile::parse(&read(path)?)?.periodic()
}

fn random_cuts(n: usize, seed: u64) -> Vec<Cut> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a = rng.gen_range(0..2990i64);
            let b = rng.gen_range(a + 1..=3000);
            let a = (rng.gen_range(0..10) > 0).then(|| rat(a, 997));
            Cut { a, b: rat(b, 997) }
        })
        .collect()
}

fn goodset(g: Goodset, out: &mut dyn Write) -> Result<i32> {
    match g {
        Goodset::Example { delta, out: path } => {
            emit(&GoodSetFile::from_periodic(&good_set_example(&delta)?).to_json(), path.as_deref(), out)?;
            Ok(0)
        }
        Goodset::Verify { source, random_cuts: extra, seed, out: path } => {
            let h = load_good_set(&source)?;
            let delta = &source.delta;
            let first = check_good_i(&h, delta)?;
            let mut cuts = default_cut_grid(&h);
            cuts.extend(random_cuts(extra, seed));
            let second = check_good_ii_bounded(&h, delta, &cuts)?;
            let passed = first.passed() && second.passed();
            let json = GoodsetJson {
                measure: format_rational(h.measure()),
                measure_decimal: to_decimal(h.measure(), 12),
                condition_i: ReportJson::from(&first),
                condition_ii: ReportJson::from(&second),
                passed,
            };
            emit(&to_json(&json)?, path.as_deref(), out)?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

/// Table of `ζ_1 … ζ_7` and the earlier bounds at tolerance `tol`.
pub fn roots_table(tol: &Rational) -> Result<String> {
    let digits = digits_for(tol);
    let mut rows = Vec::new();
    for (i, v) in zeta_table(tol)?.iter().enumerate() {
        rows.push((format!("zeta{}", i + 1), zeta_polynomial(i + 1)?.to_string(), v.clone()));
    }
    for b in [PriorBound::SzenesLower, PriorBound::SzenesUpper, PriorBound::Cgo] {
        rows.push((b.name().to_string(), b.polynomial().to_string(), b.value(tol)?));
    }
    let mut s = String::new();
    for (name, poly, v) in rows {
        s.push_str(&format!("{name:<14}{poly:<26}{}\n", to_decimal(&v, digits)));
    }
    Ok(s)
}

/// Fewest decimal digits `k` with `10^-k <= tol`.
fn digits_for(tol: &Rational) -> usize {
    let mut k = 0;
    let mut p = int(1);
    while &p > tol && k < 60 {
        p /= int(10);
        k += 1;
    }
    k
}

fn env_tol() -> Result<Rational> {
    match std::env::var(TOL_ENV) {
        Ok(v) => {
            let t = parse_rational_or_decimal(&v).with_context(|| format!("{TOL_ENV}={v:?}"))?;
            if t <= Rational::from_integer(0.into()) {
                bail!("{TOL_ENV} must be positive");
            }
            Ok(t)
        }
        Err(_) => Ok(default_tol()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_from_tolerance() {
        assert_eq!(digits_for(&rat(1, 1_000_000)), 6);
        assert_eq!(digits_for(&rat(1, 2_000_000)), 7);
        assert_eq!(digits_for(&default_tol()), 12);
    }
}
