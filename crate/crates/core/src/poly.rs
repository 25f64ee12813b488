//! `F(., m, k)` as an exact polynomial in `n`.
//!
//! The polynomial is recovered by Lagrange interpolation through the nodes
//! `n = 0, 1, ..., m + k`, then checked against the closed sum at `m + k + 1`
//! further points and for degree `m + k`.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{to_rational, Integer, Rational};
use crate::hypersum::{f_closed, HypersumQuery};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("nesting depth k must be at least 1")]
    InvalidDepth,
    #[error("interpolated polynomial for m={m}, k={k} has degree {found:?}, expected {expected}")]
    DegreeMismatch { m: u32, k: u32, expected: usize, found: Option<usize> },
    #[error("interpolated polynomial for m={m}, k={k} disagrees with the closed sum at n={n}")]
    InterpolationMismatch { m: u32, k: u32, n: u64 },
    #[error("polynomial for m={m}, k={k} is not integral at n={n}")]
    NonIntegral { m: u32, k: u32, n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFormat {
    Plain,
    Latex,
    Csv,
}

/// Dense polynomial over the rationals; `coeffs[i]` multiplies `n^i`.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RationalPolynomial {
    #[serde(serialize_with = "serialize_coeffs")]
    coeffs: Vec<Rational>,
}

fn serialize_coeffs<S: serde::Serializer>(coeffs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(coeffs.iter().map(|c| c.to_string()))
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Horner evaluation at a natural point.
    pub fn eval(&self, n: u64) -> Rational {
        self.eval_at(&Rational::from_integer(Integer::from(n)))
    }

    pub fn eval_at(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn mul_linear(&self, root: &Rational) -> Self {
        // (sum c_i n^i) * (n - root)
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        Self::new(out)
    }

    fn add_scaled(&mut self, other: &Self, scale: &Rational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * scale;
        }
        let trimmed = Self::new(std::mem::take(&mut self.coeffs));
        *self = trimmed;
    }

    pub fn render(&self, format: PolyFormat) -> String {
        match format {
            PolyFormat::Plain => self.render_terms(plain_term),
            PolyFormat::Latex => self.render_terms(latex_term),
            PolyFormat::Csv => {
                let mut out = String::from("power,coefficient\n");
                if self.is_zero() {
                    out.push_str("0,0\n");
                }
                for (i, c) in self.coeffs.iter().enumerate() {
                    let _ = writeln!(out, "{i},{c}");
                }
                out
            }
        }
    }

    fn render_terms(&self, term: fn(usize, &Rational) -> String) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let body = term(i, &c.abs());
            match (out.is_empty(), c.is_negative()) {
                (true, false) => out.push_str(&body),
                (true, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (false, neg) => {
                    out.push_str(if neg { " - " } else { " + " });
                    out.push_str(&body);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn plain_term(power: usize, mag: &Rational) -> String {
    let var = match power {
        0 => return mag.to_string(),
        1 => "n".to_string(),
        p => format!("n^{p}"),
    };
    if mag.is_one() {
        var
    } else {
        format!("{mag}*{var}")
    }
}

fn latex_term(power: usize, mag: &Rational) -> String {
    let coeff = if mag.is_integer() {
        mag.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
    };
    let var = match power {
        0 => return coeff,
        1 => "n".to_string(),
        p => format!("n^{{{p}}}"),
    };
    if mag.is_one() {
        var
    } else {
        format!("{coeff} {var}")
    }
}

/// Unique polynomial of degree at most `degree` through `(j, values[j])`, `j = 0..=degree`.
pub fn interpolate_at_naturals(values: &[Rational]) -> RationalPolynomial {
    let nodes: Vec<Rational> = (0..values.len()).map(|j| Rational::from_integer(Integer::from(j))).collect();
    let mut result = RationalPolynomial::zero();
    for (j, y) in values.iter().enumerate() {
        if y.is_zero() {
            continue;
        }
        let mut basis = RationalPolynomial::new(vec![Rational::one()]);
        let mut denom = Rational::one();
        for (i, node) in nodes.iter().enumerate() {
            if i != j {
                basis = basis.mul_linear(node);
                denom *= &nodes[j] - node;
            }
        }
        result.add_scaled(&basis, &(y / denom));
    }
    result
}

/// `F(n, m, k)` as a polynomial in `n`, degree exactly `m + k`.
pub fn closed_form_poly(m: u32, k: u32) -> Result<RationalPolynomial, PolyError> {
    if k == 0 {
        return Err(PolyError::InvalidDepth);
    }
    let degree = (m + k) as u64;
    let value = |n: u64| {
        let q = HypersumQuery::new(n, m, k).expect("k >= 1 checked above");
        to_rational(&f_closed(q))
    };
    let samples: Vec<Rational> = (0..=degree).map(value).collect();
    let poly = interpolate_at_naturals(&samples);

    if poly.degree() != Some(degree as usize) {
        return Err(PolyError::DegreeMismatch { m, k, expected: degree as usize, found: poly.degree() });
    }
    for n in degree + 1..=2 * degree + 1 {
        if poly.eval(n) != value(n) {
            return Err(PolyError::InterpolationMismatch { m, k, n });
        }
    }
    Ok(poly)
}

pub fn poly_eval(p: &RationalPolynomial, n: u64) -> Rational {
    p.eval(n)
}

pub fn poly_render(p: &RationalPolynomial, format: PolyFormat) -> String {
    p.render(format)
}
