//! Wall-clock comparison of the evaluation strategies over a grid.
//!
//! Every method's values are hashed; timings are only returned when all
//! hashes coincide.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::hypersum::{EvalError, EvalMethod, Session};
use crate::verify::GridSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("repetitions must be at least 1")]
    Repetitions,
    #[error("no methods selected")]
    NoMethods,
    #[error("{method} failed: {source}")]
    Eval { method: EvalMethod, source: EvalError },
    #[error("value hashes disagree: {}", describe(.hashes))]
    HashMismatch { hashes: Vec<(EvalMethod, String)> },
}

fn describe(hashes: &[(EvalMethod, String)]) -> String {
    hashes.iter().map(|(m, h)| format!("{m}={}", &h[..16.min(h.len())])).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub method: EvalMethod,
    pub grid: GridSpec,
    pub evaluations: usize,
    pub repetitions: usize,
    /// Best wall time over the repetitions.
    pub best_secs: f64,
    pub values_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub grid: GridSpec,
    pub repetitions: usize,
    pub results: Vec<BenchResult>,
}

impl BenchReport {
    /// The report with timings zeroed, for comparing repeated runs.
    pub fn without_timings(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.results {
            r.best_secs = 0.0;
        }
        out
    }

    pub fn to_text(&self) -> String {
        let g = &self.grid;
        let mut out = format!(
            "grid n<={} m<={} k<={}, best of {}\n",
            g.n_max, g.m_max, g.k_max, self.repetitions
        );
        for r in &self.results {
            let _ = writeln!(
                out,
                "{:<10} {:>8} evals {:>12.3} ms  {}",
                r.method.name(),
                r.evaluations,
                r.best_secs * 1e3,
                r.values_hash
            );
        }
        out
    }
}

/// SHA-256 over `n,m,k=value` lines in grid order.
pub fn values_hash(grid: &GridSpec, values: &[crate::Natural]) -> String {
    let mut hasher = Sha256::new();
    for (q, v) in grid.queries().zip(values) {
        hasher.update(format!("{},{},{}={v}\n", q.n(), q.m(), q.k()).as_bytes());
    }
    hex::encode(hasher.finalize())
}

fn run_once(grid: &GridSpec, method: EvalMethod) -> Result<(Duration, Vec<crate::Natural>), BenchError> {
    let mut session = Session::new();
    let mut values = Vec::with_capacity(grid.point_count());
    let start = Instant::now();
    for q in grid.queries() {
        values.push(session.eval(q, method).map_err(|source| BenchError::Eval { method, source })?);
    }
    Ok((start.elapsed(), values))
}

/// Evaluates each method over every grid point, `repetitions` times with a
/// fresh session each time, keeping the best wall time.
pub fn run_bench(grid: &GridSpec, methods: &[EvalMethod], repetitions: usize) -> Result<BenchReport, BenchError> {
    if repetitions == 0 {
        return Err(BenchError::Repetitions);
    }
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    if methods.is_empty() {
        return Err(BenchError::NoMethods);
    }

    let mut results = Vec::with_capacity(methods.len());
    for method in methods {
        let mut best = Duration::MAX;
        let mut hash = None;
        for _ in 0..repetitions {
            let (elapsed, values) = run_once(grid, method)?;
            best = best.min(elapsed);
            let h = values_hash(grid, &values);
            if hash.as_ref().is_some_and(|prev| prev != &h) {
                return Err(BenchError::HashMismatch { hashes: vec![(method, hash.unwrap()), (method, h)] });
            }
            hash = Some(h);
        }
        results.push(BenchResult {
            method,
            grid: *grid,
            evaluations: grid.point_count(),
            repetitions,
            best_secs: best.as_secs_f64(),
            values_hash: hash.unwrap(),
        });
    }

    check_hashes(&results)?;
    Ok(BenchReport { grid: *grid, repetitions, results })
}

fn check_hashes(results: &[BenchResult]) -> Result<(), BenchError> {
    let first = &results[0].values_hash;
    if results.iter().all(|r| &r.values_hash == first) {
        Ok(())
    } else {
        Err(BenchError::HashMismatch { hashes: results.iter().map(|r| (r.method, r.values_hash.clone())).collect() })
    }
}
