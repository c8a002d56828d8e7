//! Minimal-counterexample sweeps over `δ`.

use std::time::Instant;

use anyhow::{bail, Result};
use densitylab_core::constructions::minimal_counterexample_n;
use densitylab_core::exact::{format_rational, int, to_decimal};
use densitylab_core::Rational;
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub delta: Rational,
    pub minimal_n: Option<u32>,
    /// Wall time; only recorded on request so that output stays reproducible.
    pub runtime_ms: Option<u128>,
}

impl SweepRow {
    pub fn found(&self) -> bool {
        self.minimal_n.is_some()
    }

    pub fn verdict(&self) -> &'static str {
        if self.found() {
            "found"
        } else {
            "not-found"
        }
    }
}

/// `steps + 1` equally spaced values from `from` to `to` inclusive.
pub fn grid(from: &Rational, to: &Rational, steps: u32) -> Result<Vec<Rational>> {
    if from >= to {
        bail!("sweep range is empty: {} >= {}", format_rational(from), format_rational(to));
    }
    if steps == 0 {
        bail!("steps must be at least 1");
    }
    let h = (to - from) / int(steps as i64);
    Ok((0..=steps).map(|i| from + &h * int(i as i64)).collect())
}

/// Runs every `δ` on a pool of `jobs` threads; rows come back in `δ` order.
pub fn run(deltas: &[Rational], n_max: u32, jobs: usize, timing: bool) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    pool.install(|| {
        deltas
            .par_iter()
            .map(|d| {
                let start = Instant::now();
                let minimal_n = minimal_counterexample_n(d, n_max)?;
                let runtime_ms = timing.then(|| start.elapsed().as_millis());
                Ok(SweepRow { delta: d.clone(), minimal_n, runtime_ms })
            })
            .collect()
    })
}

/// Last `not-found` and first `found` value around the single transition,
/// if the verdicts switch exactly once.
pub fn transition(rows: &[SweepRow]) -> Option<(Rational, Rational)> {
    let switches: Vec<usize> = (1..rows.len()).filter(|&i| rows[i].found() != rows[i - 1].found()).collect();
    match switches.as_slice() {
        [i] if rows[*i].found() => Some((rows[i - 1].delta.clone(), rows[*i].delta.clone())),
        _ => None,
    }
}

/// Columns `delta,delta_decimal,minimal_n,verdict`, plus `runtime_ms` when
/// timings were recorded.
pub fn to_csv(rows: &[SweepRow], digits: usize) -> Result<String> {
    let timing = rows.iter().any(|r| r.runtime_ms.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["delta", "delta_decimal", "minimal_n", "verdict"];
    if timing {
        header.push("runtime_ms");
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            format_rational(&r.delta),
            to_decimal(&r.delta, digits),
            r.minimal_n.map(|n| n.to_string()).unwrap_or_default(),
            r.verdict().to_string(),
        ];
        if timing {
            rec.push(r.runtime_ms.unwrap_or_default().to_string());
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
