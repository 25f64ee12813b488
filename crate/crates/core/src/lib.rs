//! Exact evaluation of k-fold nested power sums `F(n, m, k)`.
//!
//! Five independent evaluation strategies, grid verification of the
//! recurrences they satisfy, closed-form polynomials in `n`, and OEIS b-file
//! cross-checks. All arithmetic is exact.

pub mod arith;
pub mod bench;
pub mod hypersum;
pub mod oeis;
pub mod poly;
pub mod verify;

pub use arith::{binom, ipow, Integer, Natural, Rational};
pub use bench::{run_bench, BenchError, BenchReport, BenchResult};
pub use hypersum::{
    f_base_m0, f_cereceda, f_closed, f_direct, f_dispatch, f_polynomial, f_theorem, kernel_check, EvalError,
    EvalMethod, HypersumQuery, Session,
};
pub use oeis::{compare_sequence, fetch_bfile, parse_bfile, BFile, BFileSource, OeisError, SequenceBinding, BINDINGS};
pub use poly::{closed_form_poly, poly_eval, poly_render, PolyError, PolyFormat, RationalPolynomial};
pub use verify::{run_all, run_identity, GridSpec, IdentityId, VerificationReport};
