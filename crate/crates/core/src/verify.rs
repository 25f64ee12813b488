//! Grid verification of every identity satisfied by `F(n, m, k)`.
//!
//! A grid covers `0 <= n <= n_max`, `0 <= m <= m_max`, `1 <= k <= k_max`;
//! each identity restricts it to the points where its formula is defined.
//! Failures are recorded, never raised, so a report lists every counterexample.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{binom, to_integer, to_rational, Integer, Natural, Rational};
use crate::hypersum::{f_base_m0, f_extended, kernel_sides, EvalMethod, HypersumQuery, Session};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Theorem1,
    CerecedaRational,
    CerecedaInteger,
    Difference,
    M0Recurrence,
    M0HockeyStick,
    Kernel,
    CrossMethod,
}

impl IdentityId {
    pub const ALL: [IdentityId; 8] = [
        IdentityId::Theorem1,
        IdentityId::CerecedaRational,
        IdentityId::CerecedaInteger,
        IdentityId::Difference,
        IdentityId::M0Recurrence,
        IdentityId::M0HockeyStick,
        IdentityId::Kernel,
        IdentityId::CrossMethod,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Theorem1 => "theorem1",
            IdentityId::CerecedaRational => "cereceda_rational",
            IdentityId::CerecedaInteger => "cereceda_integer",
            IdentityId::Difference => "difference",
            IdentityId::M0Recurrence => "m0_recurrence",
            IdentityId::M0HockeyStick => "m0_hockey_stick",
            IdentityId::Kernel => "kernel",
            IdentityId::CrossMethod => "cross_method",
        }
    }

    /// Number of grid points the identity applies to.
    ///
    /// | identity | points |
    /// |---|---|
    /// | theorem1 | `n_max * m_max * k_max` (n, m, k >= 1) |
    /// | cereceda_rational, cereceda_integer, difference | `n_max * (m_max+1) * k_max` (n >= 1) |
    /// | m0_recurrence, m0_hockey_stick | `n_max * k_max` (m = 0, n >= 1) |
    /// | kernel | `k_max * n_max (n_max+1) / 2` (1 <= r <= n) |
    /// | cross_method | `(n_max+1) * (m_max+1) * k_max` |
    pub fn case_count(self, g: &GridSpec) -> usize {
        let (n, m, k) = (g.n_max as usize, g.m_max as usize, g.k_max as usize);
        match self {
            IdentityId::Theorem1 => n * m * k,
            IdentityId::CerecedaRational | IdentityId::CerecedaInteger | IdentityId::Difference => n * (m + 1) * k,
            IdentityId::M0Recurrence | IdentityId::M0HockeyStick => n * k,
            IdentityId::Kernel => k * n * (n + 1) / 2,
            IdentityId::CrossMethod => (n + 1) * (m + 1) * k,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown identity `{s}`"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("n_max must be at least 1")]
    NMax,
    #[error("k_max must be at least 1")]
    KMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridSpec {
    pub n_max: u64,
    pub m_max: u32,
    pub k_max: u32,
}

impl GridSpec {
    pub const DEFAULT: GridSpec = GridSpec { n_max: 30, m_max: 8, k_max: 6 };

    /// `m_max = 0` is allowed: it restricts the grid to the power-zero sums.
    pub fn new(n_max: u64, m_max: u32, k_max: u32) -> Result<Self, GridError> {
        if n_max == 0 {
            return Err(GridError::NMax);
        }
        if k_max == 0 {
            return Err(GridError::KMax);
        }
        Ok(Self { n_max, m_max, k_max })
    }

    /// Every query in lexicographic `(n, m, k)` order.
    pub fn queries(&self) -> impl Iterator<Item = HypersumQuery> + '_ {
        (0..=self.n_max).flat_map(move |n| {
            (0..=self.m_max).flat_map(move |m| (1..=self.k_max).map(move |k| HypersumQuery::new(n, m, k).unwrap()))
        })
    }

    pub fn point_count(&self) -> usize {
        (self.n_max as usize + 1) * (self.m_max as usize + 1) * self.k_max as usize
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// One evaluated grid point. Values are decimal strings; `m` is absent for
/// the kernel identity, which is indexed by `(n, k, r)` instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub identity: IdentityId,
    pub n: u64,
    pub m: Option<u32>,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub identity: IdentityId,
    pub cases: usize,
    pub failures: usize,
    pub elapsed_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub grid: GridSpec,
    pub total_cases: usize,
    pub total_failures: usize,
    pub identities: Vec<IdentitySummary>,
    pub cases: Vec<CaseResult>,
}

impl VerificationReport {
    fn from_parts(grid: GridSpec, parts: Vec<(IdentitySummary, Vec<CaseResult>)>) -> Self {
        let mut identities = Vec::with_capacity(parts.len());
        let mut cases = Vec::new();
        for (summary, mut rows) in parts {
            identities.push(summary);
            cases.append(&mut rows);
        }
        let total_cases = cases.len();
        let total_failures = cases.iter().filter(|c| !c.pass).count();
        Self { grid, total_cases, total_failures, identities, cases }
    }

    pub fn is_success(&self) -> bool {
        self.total_failures == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn cases_for(&self, id: IdentityId) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(move |c| c.identity == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_text(&self) -> String {
        let g = &self.grid;
        let mut out = format!("grid n<={} m<={} k<={}\n", g.n_max, g.m_max, g.k_max);
        for s in &self.identities {
            let verdict = if s.failures == 0 { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<18} {:>7} cases {:>5} failures {:>9.3} ms  {verdict}",
                s.identity.name(),
                s.cases,
                s.failures,
                s.elapsed_secs * 1e3
            );
        }
        let _ = writeln!(out, "total {} cases, {} failures", self.total_cases, self.total_failures);
        out
    }
}

/// Closed-sum values with the depth-zero extension, cached per run.
#[derive(Default)]
struct Values(HashMap<(u64, u32, u32), Natural>);

impl Values {
    fn get(&mut self, n: u64, m: u32, k: u32) -> Natural {
        self.0.entry((n, m, k)).or_insert_with(|| f_extended(n, m, k)).clone()
    }

    fn int(&mut self, n: u64, m: u32, k: u32) -> Integer {
        to_integer(&self.get(n, m, k))
    }
}

fn case(identity: IdentityId, n: u64, m: Option<u32>, k: u32, lhs: impl ToString, rhs: impl ToString) -> CaseResult {
    let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
    CaseResult { identity, n, m, k, r: None, pass: lhs == rhs, lhs, rhs }
}

pub fn run_identity(id: IdentityId, g: &GridSpec) -> VerificationReport {
    VerificationReport::from_parts(*g, vec![run_one(id, g)])
}

pub fn run_all(g: &GridSpec) -> VerificationReport {
    run_selected(&IdentityId::ALL, g)
}

/// Runs the given identities in `IdentityId` order, without duplicates.
pub fn run_selected(ids: &[IdentityId], g: &GridSpec) -> VerificationReport {
    let mut ids = ids.to_vec();
    ids.sort();
    ids.dedup();
    VerificationReport::from_parts(*g, ids.into_iter().map(|id| run_one(id, g)).collect())
}

fn run_one(id: IdentityId, g: &GridSpec) -> (IdentitySummary, Vec<CaseResult>) {
    let start = Instant::now();
    let rows = match id {
        IdentityId::Theorem1 => theorem1(g),
        IdentityId::CerecedaRational => cereceda_rational(g),
        IdentityId::CerecedaInteger => cereceda_integer(g),
        IdentityId::Difference => difference(g),
        IdentityId::M0Recurrence => m0_recurrence(g),
        IdentityId::M0HockeyStick => m0_hockey_stick(g),
        IdentityId::Kernel => kernel(g),
        IdentityId::CrossMethod => cross_method(g),
    };
    let summary = IdentitySummary {
        identity: id,
        cases: rows.len(),
        failures: rows.iter().filter(|c| !c.pass).count(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    };
    (summary, rows)
}

fn positive_points(g: &GridSpec, m_min: u32) -> impl Iterator<Item = (u64, u32, u32)> + '_ {
    (1..=g.n_max).flat_map(move |n| (m_min..=g.m_max).flat_map(move |m| (1..=g.k_max).map(move |k| (n, m, k))))
}

// F(n,m,k) = n F(n,m-1,k) - k F(n-1,m-1,k+1)
fn theorem1(g: &GridSpec) -> Vec<CaseResult> {
    let mut v = Values::default();
    positive_points(g, 1)
        .map(|(n, m, k)| {
            let rhs = Integer::from(n) * v.int(n, m - 1, k) - Integer::from(k) * v.int(n - 1, m - 1, k + 1);
            case(IdentityId::Theorem1, n, Some(m), k, v.get(n, m, k), rhs)
        })
        .collect()
}

// F(n,m,k) = k/(n+k) F(n,m,k+1) + 1/(n+k) F(n,m+1,k), in exact rationals
fn cereceda_rational(g: &GridSpec) -> Vec<CaseResult> {
    let mut v = Values::default();
    positive_points(g, 0)
        .map(|(n, m, k)| {
            let scale = Rational::from_integer(Integer::from(n + u64::from(k)));
            let depth = Rational::from_integer(Integer::from(k));
            let rhs = &depth / &scale * to_rational(&v.get(n, m, k + 1)) + to_rational(&v.get(n, m + 1, k)) / &scale;
            case(IdentityId::CerecedaRational, n, Some(m), k, to_rational(&v.get(n, m, k)), rhs)
        })
        .collect()
}

// (n+k) F(n,m,k) = k F(n,m,k+1) + F(n,m+1,k)
fn cereceda_integer(g: &GridSpec) -> Vec<CaseResult> {
    let mut v = Values::default();
    positive_points(g, 0)
        .map(|(n, m, k)| {
            let lhs = Natural::from(n + u64::from(k)) * v.get(n, m, k);
            let rhs = Natural::from(k) * v.get(n, m, k + 1) + v.get(n, m + 1, k);
            case(IdentityId::CerecedaInteger, n, Some(m), k, lhs, rhs)
        })
        .collect()
}

// F(n,m,k) - F(n-1,m,k) = F(n,m,k-1), with F(n,m,0) = n^m
fn difference(g: &GridSpec) -> Vec<CaseResult> {
    let mut v = Values::default();
    positive_points(g, 0)
        .map(|(n, m, k)| {
            let lhs = v.int(n, m, k) - v.int(n - 1, m, k);
            case(IdentityId::Difference, n, Some(m), k, lhs, v.get(n, m, k - 1))
        })
        .collect()
}

// F(n,0,k) = F(n-1,0,k) + F(n,0,k-1), F(n,0,1) = n, F(0,0,k) = 0.
// The right side is tabulated from the recurrence alone and compared with C(n+k-1,k).
#[allow(clippy::needless_range_loop)]
fn m0_recurrence(g: &GridSpec) -> Vec<CaseResult> {
    let (n_max, k_max) = (g.n_max as usize, g.k_max as usize);
    let mut table = vec![vec![Natural::default(); k_max + 1]; n_max + 1];
    for n in 1..=n_max {
        table[n][1] = Natural::from(n);
        for k in 2..=k_max {
            table[n][k] = &table[n - 1][k] + &table[n][k - 1];
        }
    }
    let mut rows = Vec::with_capacity(n_max * k_max);
    for n in 1..=n_max {
        for k in 1..=k_max {
            let lhs = f_base_m0(n as u64, k as u32);
            rows.push(case(IdentityId::M0Recurrence, n as u64, Some(0), k as u32, lhs, &table[n][k]));
        }
    }
    rows
}

// sum_r C(n-r+k-1, k-1) = C(n+k-1, k)
fn m0_hockey_stick(g: &GridSpec) -> Vec<CaseResult> {
    let mut rows = Vec::new();
    for n in 1..=g.n_max {
        for k in 1..=g.k_max {
            let lhs = f_extended(n, 0, k);
            let rhs = binom(n + u64::from(k) - 1, u64::from(k));
            rows.push(case(IdentityId::M0HockeyStick, n, Some(0), k, lhs, rhs));
        }
    }
    rows
}

fn kernel(g: &GridSpec) -> Vec<CaseResult> {
    let mut rows = Vec::new();
    for n in 1..=g.n_max {
        for k in 1..=g.k_max {
            for r in 1..=n {
                let (lhs, rhs) = kernel_sides(n, u64::from(k), r);
                let mut row = case(IdentityId::Kernel, n, None, k, lhs, rhs);
                row.r = Some(r);
                rows.push(row);
            }
        }
    }
    rows
}

fn cross_method(g: &GridSpec) -> Vec<CaseResult> {
    let mut session = Session::new();
    g.queries()
        .map(|q| {
            let reference = session.eval(q, EvalMethod::Closed).expect("closed sum is infallible").to_string();
            let mut rhs = reference.clone();
            for method in EvalMethod::ALL {
                let got = match session.eval(q, method) {
                    Ok(v) => v.to_string(),
                    Err(e) => e.to_string(),
                };
                if got != reference {
                    rhs = format!("{method}={got}");
                    break;
                }
            }
            case(IdentityId::CrossMethod, q.n(), Some(q.m()), q.k(), reference, rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert_eq!(GridSpec::new(0, 3, 3), Err(GridError::NMax));
        assert_eq!(GridSpec::new(3, 3, 0), Err(GridError::KMax));
        assert!(GridSpec::new(1, 0, 1).is_ok());
    }

    #[test]
    fn theorem1_small_grid() {
        let g = GridSpec::new(10, 4, 3).unwrap();
        let report = run_identity(IdentityId::Theorem1, &g);
        assert_eq!(report.total_cases, 120);
        assert!(report.is_success());
    }

    #[test]
    fn kernel_small_grid() {
        let g = GridSpec::new(5, 0, 2).unwrap();
        let report = run_identity(IdentityId::Kernel, &g);
        assert_eq!(report.total_cases, 30);
        assert!(report.is_success());
        assert!(report.cases.iter().all(|c| c.m.is_none() && c.r.is_some()));
    }

    #[test]
    fn cross_method_single_point() {
        let g = GridSpec::new(1, 1, 1).unwrap();
        let report = run_identity(IdentityId::CrossMethod, &g);
        let at_one = report.cases.iter().find(|c| c.n == 1 && c.m == Some(1)).unwrap();
        assert_eq!(at_one.lhs, "1");
        assert_eq!(at_one.rhs, "1");
        assert!(report.is_success());
    }

    #[test]
    fn minimal_grid() {
        let g = GridSpec::new(1, 0, 1).unwrap();
        let report = run_all(&g);
        assert!(report.is_success());
        // theorem1 has no points; cross_method has two, the rest one each
        assert_eq!(report.total_cases, 8);
    }

    #[test]
    fn case_counts_follow_formula() {
        let g = GridSpec::new(5, 2, 2).unwrap();
        let report = run_all(&g);
        assert!(report.is_success());
        // brute-force enumeration of each identity's domain
        let mut want = HashMap::new();
        for n in 0..=5u64 {
            for m in 0..=2u32 {
                for _k in 1..=2u32 {
                    *want.entry(IdentityId::CrossMethod).or_insert(0) += 1;
                    if n >= 1 {
                        for id in [IdentityId::CerecedaRational, IdentityId::CerecedaInteger, IdentityId::Difference] {
                            *want.entry(id).or_insert(0) += 1;
                        }
                        if m >= 1 {
                            *want.entry(IdentityId::Theorem1).or_insert(0) += 1;
                        }
                        if m == 0 {
                            *want.entry(IdentityId::M0Recurrence).or_insert(0) += 1;
                            *want.entry(IdentityId::M0HockeyStick).or_insert(0) += 1;
                            *want.entry(IdentityId::Kernel).or_insert(0) += n as usize;
                        }
                    }
                }
            }
        }
        for s in &report.identities {
            assert_eq!(s.cases, want[&s.identity], "{}", s.identity);
            assert_eq!(s.cases, s.identity.case_count(&g));
        }
    }

    #[test]
    fn broken_identity_is_reported_not_raised() {
        let bad = case(IdentityId::Theorem1, 2, Some(1), 1, 3, 4);
        assert!(!bad.pass);
        let report = VerificationReport::from_parts(
            GridSpec::new(2, 1, 1).unwrap(),
            vec![(
                IdentitySummary { identity: IdentityId::Theorem1, cases: 1, failures: 1, elapsed_secs: 0.0 },
                vec![bad],
            )],
        );
        assert_eq!(report.total_failures, 1);
        assert!(report.summary_text().contains("FAIL"));
    }

    #[test]
    fn json_rows_have_schema_fields() {
        let report = run_identity(IdentityId::M0HockeyStick, &GridSpec::new(2, 0, 1).unwrap());
        let value: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let row = &value["cases"][0];
        for field in ["identity", "n", "m", "k", "lhs", "rhs", "pass"] {
            assert!(row.get(field).is_some(), "missing {field}");
        }
        assert_eq!(row["identity"], "m0_hockey_stick");
    }
}
