//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Every check is exact; the only numeric threshold is the 60 s budget on
//! the cross-method sweep.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hypersum_core::arith::{factorial, to_integer};
use hypersum_core::oeis::{self, BFileSource};
use hypersum_core::verify::{run_identity, GridSpec, IdentityId};
use hypersum_core::{
    closed_form_poly, f_closed, fetch_bfile, ipow, run_bench, BenchError, EvalMethod, HypersumQuery, Integer, Natural,
    Rational, Session,
};
use num_traits::Zero;

const CROSS_METHOD_BUDGET: Duration = Duration::from_secs(60);
const FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/oeis");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: u64, m: u32, k: u32) -> HypersumQuery {
    HypersumQuery::new(n, m, k).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn zero_failures(id: IdentityId, grid: GridSpec) -> Result<usize, String> {
    let report = run_identity(id, &grid);
    ensure(report.total_cases == id.case_count(&grid), || {
        format!("{id}: {} cases, expected {}", report.total_cases, id.case_count(&grid))
    })?;
    if let Some(c) = report.failures().next() {
        return Err(format!(
            "{id}: {} failures, first at n={} m={:?} k={} r={:?}: {} != {}",
            report.total_failures, c.n, c.m, c.k, c.r, c.lhs, c.rhs
        ));
    }
    Ok(report.total_cases)
}

// 1. all five evaluators agree on 0<=n<=30, 0<=m<=8, 1<=k<=6
fn cross_method() -> Outcome {
    let grid = GridSpec::new(30, 8, 6).unwrap();
    let start = Instant::now();
    let mut per_method: Vec<Vec<Natural>> = Vec::new();
    for method in EvalMethod::ALL {
        let mut session = Session::new();
        let values = grid
            .queries()
            .map(|q| session.eval(q, method).map_err(|e| format!("{method} at {q}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        per_method.push(values);
    }
    let elapsed = start.elapsed();
    let mut mismatches = 0;
    for (i, q) in grid.queries().enumerate() {
        if per_method.iter().any(|vals| vals[i] != per_method[0][i]) {
            mismatches += 1;
            if mismatches == 1 {
                eprintln!("first mismatch at {q}");
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatching grid points"))?;
    ensure(elapsed < CROSS_METHOD_BUDGET, || format!("took {elapsed:?}, budget {CROSS_METHOD_BUDGET:?}"))?;
    zero_failures(IdentityId::CrossMethod, grid)?;
    Ok(format!("{} points x 5 methods, 0 mismatches, {:.2?}", grid.point_count(), elapsed))
}

// 2. F(n,m,k) = n F(n,m-1,k) - k F(n-1,m-1,k+1) on 1<=n<=30, 1<=m<=8, 1<=k<=6
fn theorem1() -> Outcome {
    let mut checked = 0;
    for n in 1..=30u64 {
        for m in 1..=8u32 {
            for k in 1..=6u32 {
                let lhs = to_integer(&f_closed(q(n, m, k)));
                let rhs = Integer::from(n) * to_integer(&f_closed(q(n, m - 1, k)))
                    - Integer::from(k) * to_integer(&f_closed(q(n - 1, m - 1, k + 1)));
                ensure(lhs == rhs, || format!("fails at n={n} m={m} k={k}: {lhs} != {rhs}"))?;
                checked += 1;
            }
        }
    }
    let engine = zero_failures(IdentityId::Theorem1, GridSpec::new(30, 8, 6).unwrap())?;
    ensure(engine == checked, || format!("engine checked {engine}, expected {checked}"))?;
    Ok(format!("{checked} points exact"))
}

// 3. n C(a,k-1) - k C(a,k) = r C(a,k-1), a = n-r+k-1, 1<=r<=n<=40, 1<=k<=8
fn kernel() -> Outcome {
    let cases = zero_failures(IdentityId::Kernel, GridSpec::new(40, 0, 8).unwrap())?;
    ensure(cases == 8 * 40 * 41 / 2, || format!("{cases} cases"))?;
    Ok(format!("{cases} (n,k,r) triples exact"))
}

// 4. F(n,0,k) = C(n+k-1,k) and the m=0 recurrence on 1<=n<=30, 1<=k<=8
fn boundary_m0() -> Outcome {
    let grid = GridSpec::new(30, 0, 8).unwrap();
    let a = zero_failures(IdentityId::M0HockeyStick, grid)?;
    let b = zero_failures(IdentityId::M0Recurrence, grid)?;
    Ok(format!("hockey-stick {a} points, recurrence {b} points"))
}

// 5. Cereceda recurrence, rational and integer forms, 1<=n<=30, 0<=m<=7, 1<=k<=6
fn cereceda() -> Outcome {
    let grid = GridSpec::new(30, 7, 6).unwrap();
    let rational = run_identity(IdentityId::CerecedaRational, &grid);
    let integer = run_identity(IdentityId::CerecedaInteger, &grid);
    ensure(rational.total_cases == 30 * 8 * 6 && integer.total_cases == rational.total_cases, || {
        format!("case counts {} / {}", rational.total_cases, integer.total_cases)
    })?;
    for (r, i) in rational.cases.iter().zip(&integer.cases) {
        ensure((r.n, r.m, r.k) == (i.n, i.m, i.k), || "case order differs".to_string())?;
        ensure(r.pass == i.pass, || format!("verdicts differ at n={} m={:?} k={}", r.n, r.m, r.k))?;
    }
    ensure(rational.is_success(), || format!("{} rational failures", rational.total_failures))?;
    ensure(integer.is_success(), || format!("{} integer failures", integer.total_failures))?;
    Ok(format!("{} points, both forms hold, verdicts agree", rational.total_cases))
}

// 6. F(n,m,k) - F(n-1,m,k) = F(n,m,k-1) on 1<=n<=30, 0<=m<=8, 2<=k<=6; k=1 gives n^m
fn difference() -> Outcome {
    let grid = GridSpec::new(30, 8, 6).unwrap();
    let cases = zero_failures(IdentityId::Difference, grid)?;
    let report = run_identity(IdentityId::Difference, &grid);
    let mut depth_one = 0;
    for c in report.cases.iter().filter(|c| c.k == 1) {
        let want = ipow(c.n, c.m.unwrap()).to_string();
        ensure(c.rhs == want && c.lhs == want, || format!("k=1 at n={} m={:?}: {}", c.n, c.m, c.lhs))?;
        depth_one += 1;
    }
    Ok(format!("{cases} points ({depth_one} at k=1 equal n^m)"))
}

// 7. polynomial soundness for m<=6, k<=5
fn polynomial() -> Outcome {
    let mut polys = 0;
    for m in 0..=6u32 {
        for k in 1..=5u32 {
            let p = closed_form_poly(m, k).map_err(|e| e.to_string())?;
            ensure(p.degree() == Some((m + k) as usize), || format!("m={m} k={k}: degree {:?}", p.degree()))?;
            let leading = Rational::new(to_integer(&factorial(m.into())), to_integer(&factorial((m + k).into())));
            ensure(p.leading() == leading, || format!("m={m} k={k}: leading {} != {leading}", p.leading()))?;
            ensure(p.coeffs()[0].is_zero(), || format!("m={m} k={k}: nonzero constant term"))?;
            for n in 0..=50u64 {
                let v = p.eval(n);
                ensure(v.is_integer(), || format!("m={m} k={k} n={n}: {v} not integral"))?;
                let want = to_integer(&f_closed(q(n, m, k)));
                ensure(v.to_integer() == want, || format!("m={m} k={k} n={n}: {v} != {want}"))?;
            }
            polys += 1;
        }
    }
    Ok(format!("{polys} polynomials, degree m+k, leading m!/(m+k)!, 51 points each"))
}

// 8. first 20 terms vs A000292, A000332, A000537 fixtures
fn oeis_agreement() -> Outcome {
    let source = BFileSource::Fixtures(FIXTURE_DIR.into());
    for b in &oeis::BINDINGS {
        let file = fetch_bfile(b.sequence_id, &source).map_err(|e| e.to_string())?;
        let cmp = oeis::compare_sequence(b, &file, 20).map_err(|e| e.to_string())?;
        ensure(cmp.is_match(), || format!("{}: {} mismatches", b.sequence_id, cmp.mismatches))?;
    }
    for (n, m, k, want) in [(3u64, 1u32, 2u32, 10u32), (2, 1, 3, 5), (3, 3, 1, 36)] {
        let got = f_closed(q(n, m, k));
        ensure(got == Natural::from(want), || format!("F({n},{m},{k}) = {got}, expected {want}"))?;
    }
    Ok("3 sequences x 20 terms match; anchors F(3,1,2)=10, F(2,1,3)=5, F(3,3,1)=36".into())
}

fn strip_timings(json: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(json).expect("bench json");
    for r in v["results"].as_array_mut().expect("results") {
        r["best_secs"] = serde_json::Value::Null;
    }
    v
}

// 9. bench over >= 10,000 evaluations: timings only with coinciding hashes, deterministic
fn bench_integrity() -> Outcome {
    let grid = GridSpec::new(499, 4, 4).unwrap();
    ensure(grid.point_count() >= 10_000, || format!("grid has {} points", grid.point_count()))?;
    let first = run_bench(&grid, &EvalMethod::ALL, 1).map_err(|e| e.to_string())?;
    let second = run_bench(&grid, &EvalMethod::ALL, 1).map_err(|e| e.to_string())?;
    let hash = &first.results[0].values_hash;
    ensure(first.results.iter().all(|r| &r.values_hash == hash), || "hashes differ".into())?;
    ensure(first.without_timings() == second.without_timings(), || "repeat run differs".into())?;
    ensure(
        matches!(run_bench(&grid, &[], 1), Err(BenchError::NoMethods)),
        || "empty method list accepted".into(),
    )?;

    let bin = env!("CARGO_BIN_EXE_hypersum");
    let args = ["bench", "--n-max", "499", "--m-max", "4", "--k-max", "4", "--format", "json"];
    let mut docs = Vec::new();
    for _ in 0..2 {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("cli bench exit {:?}", out.status.code()))?;
        docs.push(strip_timings(&String::from_utf8_lossy(&out.stdout)));
    }
    ensure(docs[0] == docs[1], || "cli bench output differs beyond timings".into())?;
    ensure(docs[0]["results"][0]["values_hash"] == serde_json::Value::String(hash.clone()), || {
        "cli hash differs from library hash".into()
    })?;
    Ok(format!("{} evaluations x 5 methods, one hash, deterministic", grid.point_count()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 cross-method oracle equivalence", cross_method),
        ("AC2 power-lowering recurrence", theorem1),
        ("AC3 binomial kernel identity", kernel),
        ("AC4 m=0 boundary and recurrence", boundary_m0),
        ("AC5 depth-raising recurrence (rational + integer)", cereceda),
        ("AC6 difference identity", difference),
        ("AC7 polynomial soundness", polynomial),
        ("AC8 OEIS agreement", oeis_agreement),
        ("AC9 benchmark integrity", bench_integrity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
