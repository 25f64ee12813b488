use std::fmt::Write as _;

use hypersum_core::oeis::{self, Comparison};
use hypersum_core::{
    closed_form_poly, fetch_bfile, run_bench, verify, BFileSource, BenchError, EvalMethod, GridSpec,
    HypersumQuery, IdentityId, OeisError, PolyFormat, Session,
};
use serde_json::json;

use crate::{Cli, EvalArgs, MethodChoice, OeisArgs, OutputFormat, PolyArgs, VerifyArgs, BenchArgs};
use crate::{EXIT_DATA, EXIT_FAILURE, EXIT_USAGE};

fn usage_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

pub fn eval(cli: &Cli, args: &EvalArgs) -> u8 {
    let q = match HypersumQuery::new(args.n, args.m, args.k) {
        Ok(q) => q,
        Err(e) => return usage_error(e),
    };
    let methods: Vec<EvalMethod> = match args.method {
        MethodChoice::One(m) => vec![m],
        MethodChoice::All => EvalMethod::ALL.to_vec(),
    };
    let mut session = Session::new();
    let results: Vec<(EvalMethod, Result<String, String>)> = methods
        .iter()
        .map(|&m| (m, session.eval(q, m).map(|v| v.to_string()).map_err(|e| e.to_string())))
        .collect();
    let first = &results[0].1;
    let consensus = first.is_ok() && results.iter().all(|(_, r)| r == first);
    let all = args.method == MethodChoice::All;

    let mut out = String::new();
    match cli.format {
        OutputFormat::Text if !all => match first {
            Ok(v) => out.push_str(v),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_FAILURE;
            }
        },
        OutputFormat::Text => {
            for (m, r) in &results {
                let shown = r.as_ref().unwrap_or_else(|e| e);
                let _ = writeln!(out, "{:<10} {shown}", m.name());
            }
            let _ = write!(out, "consensus: {consensus}");
        }
        OutputFormat::Json => {
            let rows: Vec<_> = results
                .iter()
                .map(|(m, r)| match r {
                    Ok(v) => json!({ "method": m, "value": v }),
                    Err(e) => json!({ "method": m, "value": null, "error": e }),
                })
                .collect();
            let doc = json!({
                "query": { "n": q.n(), "m": q.m(), "k": q.k() },
                "results": rows,
                "consensus": consensus,
            });
            out = serde_json::to_string_pretty(&doc).unwrap();
        }
        OutputFormat::Csv => {
            out.push_str("method,n,m,k,value");
            for (m, r) in &results {
                let shown = r.as_deref().unwrap_or("");
                let _ = write!(out, "\n{},{},{},{},{shown}", m.name(), q.n(), q.m(), q.k());
            }
        }
    }
    println!("{out}");
    if consensus {
        0
    } else {
        EXIT_FAILURE
    }
}

pub fn poly(cli: &Cli, args: &PolyArgs) -> u8 {
    let p = match closed_form_poly(args.m, args.k) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let degree = p.degree().map_or(-1, |d| d as i64);
    let plain = p.render(PolyFormat::Plain);
    let latex = p.render(PolyFormat::Latex);
    match cli.format {
        OutputFormat::Text => {
            let body = if args.latex { &latex } else { &plain };
            if cli.quiet {
                println!("{body}");
            } else {
                println!("F(n,{},{}) = {body}", args.m, args.k);
                println!("degree: {degree}");
                println!("leading: {}", p.leading());
            }
        }
        OutputFormat::Json => {
            let doc = json!({
                "m": args.m,
                "k": args.k,
                "degree": degree,
                "leading": p.leading().to_string(),
                "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "plain": plain,
                "latex": latex,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        OutputFormat::Csv => print!("{}", p.render(PolyFormat::Csv)),
    }
    0
}

pub fn verify(cli: &Cli, args: &VerifyArgs) -> u8 {
    let grid = match GridSpec::new(args.n_max, args.m_max, args.k_max) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let ids: &[IdentityId] = if args.identities.is_empty() { &IdentityId::ALL } else { &args.identities };
    let report = verify::run_selected(ids, &grid);
    match cli.format {
        OutputFormat::Text => {
            if cli.quiet {
                println!("{} cases, {} failures", report.total_cases, report.total_failures);
            } else {
                print!("{}", report.summary_text());
                for c in report.failures().take(20) {
                    let m = c.m.map_or("-".to_string(), |m| m.to_string());
                    println!("  {} n={} m={m} k={} r={:?}: {} != {}", c.identity, c.n, c.k, c.r, c.lhs, c.rhs);
                }
            }
        }
        OutputFormat::Json => println!("{}", report.to_json()),
        OutputFormat::Csv => {
            println!("identity,n,m,k,r,lhs,rhs,pass");
            for c in &report.cases {
                let m = c.m.map(|m| m.to_string()).unwrap_or_default();
                let r = c.r.map(|r| r.to_string()).unwrap_or_default();
                println!("{},{},{m},{},{r},{},{},{}", c.identity, c.n, c.k, c.lhs, c.rhs, c.pass);
            }
        }
    }
    if report.is_success() {
        0
    } else {
        EXIT_FAILURE
    }
}

pub fn oeis_check(cli: &Cli, args: &OeisArgs) -> u8 {
    let mut bindings = Vec::new();
    if args.sequences.is_empty() {
        bindings.extend(oeis::BINDINGS);
    } else {
        for id in &args.sequences {
            match oeis::binding(id) {
                Some(b) => bindings.push(b),
                None => return usage_error(format!("no binding for sequence `{id}`")),
            }
        }
    }
    let source = if args.remote {
        BFileSource::Remote { base_url: args.base_url.clone() }
    } else {
        BFileSource::Fixtures(args.fixture_dir.clone())
    };

    // distinct sequences are fetched concurrently; results keep binding order
    let fetched: Vec<Result<Comparison, OeisError>> = std::thread::scope(|s| {
        let handles: Vec<_> = bindings
            .iter()
            .map(|b| {
                let source = &source;
                s.spawn(move || {
                    let file = fetch_bfile(b.sequence_id, source)?;
                    if args.save_fixtures {
                        save_fixture(args, b.sequence_id, &file.render())?;
                    }
                    oeis::compare_sequence(b, &file, args.count)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("fetch thread panicked")).collect()
    });

    let mut comparisons = Vec::with_capacity(fetched.len());
    for result in fetched {
        match result {
            Ok(c) => comparisons.push(c),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_DATA;
            }
        }
    }
    let ok = comparisons.iter().all(Comparison::is_match);

    match cli.format {
        OutputFormat::Text => {
            for c in &comparisons {
                let b = &c.binding;
                let verdict = if c.is_match() { "ok" } else { "MISMATCH" };
                println!(
                    "{} F(n,{},{}) offset {}: {} terms, {} mismatches  {verdict}",
                    b.sequence_id, b.m, b.k, b.offset, c.count, c.mismatches
                );
                if !cli.quiet {
                    for t in &c.terms {
                        let mark = if t.matches { "" } else { "  <-- mismatch" };
                        println!("  n={:<4} a({})={}  F={}{mark}", t.n, t.oeis_index, t.oeis, t.computed);
                    }
                }
            }
        }
        OutputFormat::Json => {
            let doc = json!({ "ok": ok, "comparisons": comparisons });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        OutputFormat::Csv => {
            println!("sequence,m,k,n,oeis_index,computed,oeis,match");
            for c in &comparisons {
                for t in &c.terms {
                    let b = &c.binding;
                    println!(
                        "{},{},{},{},{},{},{},{}",
                        b.sequence_id, b.m, b.k, t.n, t.oeis_index, t.computed, t.oeis, t.matches
                    );
                }
            }
        }
    }
    if ok {
        0
    } else {
        EXIT_FAILURE
    }
}

fn save_fixture(args: &OeisArgs, sequence_id: &str, body: &str) -> Result<(), OeisError> {
    let path = args.fixture_dir.join(oeis::bfile_name(sequence_id)?);
    std::fs::create_dir_all(&args.fixture_dir)
        .and_then(|_| std::fs::write(&path, body))
        .map_err(|source| OeisError::Io { path, source })
}

pub fn bench(cli: &Cli, args: &BenchArgs) -> u8 {
    let grid = match GridSpec::new(args.n_max, args.m_max, args.k_max) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let methods: &[EvalMethod] = if args.methods.is_empty() { &EvalMethod::ALL } else { &args.methods };
    let report = match run_bench(&grid, methods, args.repetitions as usize) {
        Ok(r) => r,
        Err(e @ (BenchError::Repetitions | BenchError::NoMethods)) => return usage_error(e),
        Err(e) => {
            eprintln!("error: {e}; timings withheld");
            return EXIT_FAILURE;
        }
    };
    match cli.format {
        OutputFormat::Text => print!("{}", report.to_text()),
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        OutputFormat::Csv => {
            println!("method,n_max,m_max,k_max,evaluations,repetitions,best_secs,values_hash");
            for r in &report.results {
                println!(
                    "{},{},{},{},{},{},{:.6},{}",
                    r.method, grid.n_max, grid.m_max, grid.k_max, r.evaluations, r.repetitions, r.best_secs, r.values_hash
                );
            }
        }
    }
    0
}
