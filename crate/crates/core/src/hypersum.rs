//! Evaluators for the k-fold nested power sum `F(n, m, k)`.
//!
//! `F(n, m, 1) = 1^m + ... + n^m` and `F(n, m, k) = F(1, m, k-1) + ... + F(n, m, k-1)`.
//! Five strategies are provided and must agree exactly:
//!
//! * `direct`: the nested summation itself, tabulated bottom-up.
//! * `closed`: the single binomial-weighted sum `sum_r C(n-r+k-1, k-1) r^m`.
//! * `theorem`: the power-lowering recurrence
//!   `F(n,m,k) = n F(n,m-1,k) - k F(n-1,m-1,k+1)` down to `m = 0`.
//! * `cereceda`: the depth-raising recurrence in cleared form
//!   `F(n,m+1,k) = (n+k) F(n,m,k) - k F(n,m,k+1)` down to `m = 0`.
//! * `polynomial`: the interpolated polynomial in `n` from [`crate::poly`].
//!
//! Both recurrences bottom out at `F(n, 0, k) = C(n+k-1, k)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binom, ipow, to_integer, to_natural, Integer, Natural};
use crate::poly::{closed_form_poly, PolyError, RationalPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("invalid query: nesting depth k must be at least 1")]
    InvalidDepth,
    #[error("internal error: {method} evaluator produced a negative value for F({n},{m},{k})")]
    InternalNegative { method: EvalMethod, n: u64, m: u32, k: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A validated `(n, m, k)` triple. `k >= 1`; `n = 0` gives the empty sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HypersumQuery {
    n: u64,
    m: u32,
    k: u32,
}

impl HypersumQuery {
    pub fn new(n: u64, m: u32, k: u32) -> Result<Self, EvalError> {
        if k == 0 {
            return Err(EvalError::InvalidDepth);
        }
        Ok(Self { n, m, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl fmt::Display for HypersumQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{},{})", self.n, self.m, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    Direct,
    Closed,
    Theorem,
    Cereceda,
    Polynomial,
}

impl EvalMethod {
    pub const ALL: [EvalMethod; 5] = [
        EvalMethod::Direct,
        EvalMethod::Closed,
        EvalMethod::Theorem,
        EvalMethod::Cereceda,
        EvalMethod::Polynomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvalMethod::Direct => "direct",
            EvalMethod::Closed => "closed",
            EvalMethod::Theorem => "theorem",
            EvalMethod::Cereceda => "cereceda",
            EvalMethod::Polynomial => "polynomial",
        }
    }
}

impl fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EvalMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected one of direct, closed, theorem, cereceda, polynomial)"))
    }
}

/// Memo tables for one evaluation session.
///
/// Caching never changes a result; a fresh session and a warm one return
/// identical values. A session is `Send` but not shared: use one per thread.
#[derive(Debug, Default)]
pub struct Session {
    // m -> table[k-1][n] of the nested sums
    direct: HashMap<u32, Vec<Vec<Natural>>>,
    theorem: HashMap<(u64, u32, u32), Integer>,
    cereceda: HashMap<(u64, u32, u32), Integer>,
    polys: HashMap<(u32, u32), RationalPolynomial>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eval(&mut self, q: HypersumQuery, method: EvalMethod) -> Result<Natural, EvalError> {
        match method {
            EvalMethod::Direct => Ok(self.direct(q)),
            EvalMethod::Closed => Ok(f_closed(q)),
            EvalMethod::Theorem => self.theorem(q),
            EvalMethod::Cereceda => self.cereceda(q),
            EvalMethod::Polynomial => self.polynomial(q),
        }
    }

    pub fn direct(&mut self, q: HypersumQuery) -> Natural {
        let (n, m, k) = (q.n as usize, q.m, q.k as usize);
        let table = self.direct.entry(m).or_default();
        let have_n = table.first().map_or(0, |row| row.len());
        if table.len() < k || have_n <= n {
            *table = nested_table(m, n.max(have_n.saturating_sub(1)), k.max(table.len()));
        }
        table[k - 1][n].clone()
    }

    pub fn theorem(&mut self, q: HypersumQuery) -> Result<Natural, EvalError> {
        let value = theorem_rec(&mut self.theorem, q.n, q.m, q.k);
        non_negative(value, EvalMethod::Theorem, q)
    }

    pub fn cereceda(&mut self, q: HypersumQuery) -> Result<Natural, EvalError> {
        let value = cereceda_rec(&mut self.cereceda, q.n, q.m, q.k);
        non_negative(value, EvalMethod::Cereceda, q)
    }

    pub fn polynomial(&mut self, q: HypersumQuery) -> Result<Natural, EvalError> {
        let poly = match self.polys.entry((q.m, q.k)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(closed_form_poly(q.m, q.k)?),
        };
        let value = poly.eval(q.n);
        if !value.is_integer() {
            return Err(PolyError::NonIntegral { m: q.m, k: q.k, n: q.n }.into());
        }
        non_negative(value.to_integer(), EvalMethod::Polynomial, q)
    }
}

fn non_negative(value: Integer, method: EvalMethod, q: HypersumQuery) -> Result<Natural, EvalError> {
    to_natural(&value).ok_or(EvalError::InternalNegative { method, n: q.n, m: q.m, k: q.k })
}

/// `table[j][t] = F(t, m, j+1)` for `t <= n_max`, `j < k_max`.
fn nested_table(m: u32, n_max: usize, k_max: usize) -> Vec<Vec<Natural>> {
    let mut table = Vec::with_capacity(k_max);
    let mut row = Vec::with_capacity(n_max + 1);
    let mut acc = Natural::zero();
    row.push(acc.clone());
    for i in 1..=n_max as u64 {
        acc += ipow(i, m);
        row.push(acc.clone());
    }
    table.push(row);
    for _ in 1..k_max {
        let prev = table.last().unwrap();
        let mut row = Vec::with_capacity(n_max + 1);
        let mut acc = Natural::zero();
        row.push(acc.clone());
        for value in &prev[1..] {
            acc += value;
            row.push(acc.clone());
        }
        table.push(row);
    }
    table
}

fn theorem_rec(memo: &mut HashMap<(u64, u32, u32), Integer>, n: u64, m: u32, k: u32) -> Integer {
    if n == 0 {
        return Integer::zero();
    }
    if m == 0 {
        return to_integer(&f_base_m0(n, k));
    }
    if let Some(v) = memo.get(&(n, m, k)) {
        return v.clone();
    }
    let same_depth = theorem_rec(memo, n, m - 1, k);
    let deeper = theorem_rec(memo, n - 1, m - 1, k + 1);
    let value = Integer::from(n) * same_depth - Integer::from(k) * deeper;
    memo.insert((n, m, k), value.clone());
    value
}

fn cereceda_rec(memo: &mut HashMap<(u64, u32, u32), Integer>, n: u64, m: u32, k: u32) -> Integer {
    if n == 0 {
        return Integer::zero();
    }
    if m == 0 {
        return to_integer(&f_base_m0(n, k));
    }
    if let Some(v) = memo.get(&(n, m, k)) {
        return v.clone();
    }
    let same_depth = cereceda_rec(memo, n, m - 1, k);
    let deeper = cereceda_rec(memo, n, m - 1, k + 1);
    let value = Integer::from(n + u64::from(k)) * same_depth - Integer::from(k) * deeper;
    memo.insert((n, m, k), value.clone());
    value
}

/// Nested summation, memoized over `(n, k)` for the query's power.
pub fn f_direct(q: HypersumQuery) -> Natural {
    Session::new().direct(q)
}

/// `sum_{r=1}^{n} C(n-r+k-1, k-1) r^m`.
pub fn f_closed(q: HypersumQuery) -> Natural {
    closed_sum(q.n, q.m, q.k)
}

fn closed_sum(n: u64, m: u32, k: u32) -> Natural {
    debug_assert!(k >= 1);
    let k = u64::from(k);
    (1..=n).map(|r| binom(n - r + k - 1, k - 1) * ipow(r, m)).sum()
}

/// `F(n, 0, k) = C(n+k-1, k)`.
pub fn f_base_m0(n: u64, k: u32) -> Natural {
    assert!(k >= 1, "nesting depth must be at least 1");
    let k = u64::from(k);
    binom(n + k - 1, k)
}

pub fn f_theorem(q: HypersumQuery) -> Result<Natural, EvalError> {
    Session::new().theorem(q)
}

pub fn f_cereceda(q: HypersumQuery) -> Result<Natural, EvalError> {
    Session::new().cereceda(q)
}

pub fn f_polynomial(q: HypersumQuery) -> Result<Natural, EvalError> {
    Session::new().polynomial(q)
}

pub fn f_dispatch(q: HypersumQuery, method: EvalMethod) -> Result<Natural, EvalError> {
    Session::new().eval(q, method)
}

/// `F(n, m, k)` with the depth-zero extension `F(n, m, 0) = n^m`.
///
/// With it the difference `F(n,m,k) - F(n-1,m,k) = F(n,m,k-1)` also holds at
/// `k = 1`. Queries never reach depth zero.
pub fn f_extended(n: u64, m: u32, k: u32) -> Natural {
    if k == 0 {
        ipow(n, m)
    } else {
        closed_sum(n, m, k)
    }
}

/// Both sides of `n C(a,k-1) - k C(a,k) = r C(a,k-1)` with `a = n-r+k-1`.
///
/// Panics unless `1 <= r <= n` and `k >= 1`.
pub fn kernel_sides(n: u64, k: u64, r: u64) -> (Integer, Integer) {
    assert!(k >= 1 && r >= 1 && r <= n, "kernel identity needs 1 <= r <= n and k >= 1");
    let a = n - r + k - 1;
    let lower = to_integer(&binom(a, k - 1));
    let lhs = Integer::from(n) * &lower - Integer::from(k) * to_integer(&binom(a, k));
    let rhs = Integer::from(r) * lower;
    (lhs, rhs)
}

pub fn kernel_check(n: u64, k: u64, r: u64) -> bool {
    let (lhs, rhs) = kernel_sides(n, k, r);
    lhs == rhs
}
