//! OEIS b-files: parsing, loading, and comparison against computed sums.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::arith::{to_integer, Integer};
use crate::hypersum::{f_closed, HypersumQuery};

pub const DEFAULT_BASE_URL: &str = "https://oeis.org";
pub const BASE_URL_ENV: &str = "OEIS_BASE_URL";
pub const FIXTURE_DIR_ENV: &str = "OEIS_FIXTURE_DIR";

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("`{0}` is not an OEIS A-number (expected A followed by six digits)")]
    InvalidId(String),
    #[error("{0} not found")]
    NotFound(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("i/o error reading {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{sequence_id}: need {needed} terms from index {first_index}, file has {available}")]
    InsufficientTerms { sequence_id: String, needed: usize, first_index: i64, available: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub sequence_id: String,
    /// `(index, value)` with strictly increasing indices.
    pub entries: Vec<(Integer, Integer)>,
}

impl BFile {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (index, value) in &self.entries {
            let _ = writeln!(out, "{index} {value}");
        }
        out
    }

    pub fn get(&self, index: &Integer) -> Option<&Integer> {
        self.entries
            .binary_search_by(|(i, _)| i.cmp(index))
            .ok()
            .map(|pos| &self.entries[pos].1)
    }
}

pub fn validate_id(sequence_id: &str) -> Result<(), OeisError> {
    let digits = sequence_id.strip_prefix('A').unwrap_or("");
    if digits.len() == 6 && digits.bytes().all(|b| b.is_ascii_digit()) {
        Ok(())
    } else {
        Err(OeisError::InvalidId(sequence_id.to_string()))
    }
}

/// `"b000292.txt"` for `"A000292"`.
pub fn bfile_name(sequence_id: &str) -> Result<String, OeisError> {
    validate_id(sequence_id)?;
    Ok(format!("b{}.txt", &sequence_id[1..]))
}

/// Parses `<index> <value>` lines; `#` comments and blank lines are skipped.
/// Line numbers in errors are 1-based.
pub fn parse_bfile(sequence_id: &str, text: &str) -> Result<BFile, OeisError> {
    let mut entries: Vec<(Integer, Integer)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| OeisError::Parse { line: line_no, message: message.to_string() };
        let mut fields = line.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err("expected `<index> <value>`"));
        };
        let index: Integer = index.parse().map_err(|_| err("index is not an integer"))?;
        let value: Integer = value.parse().map_err(|_| err("value is not an integer"))?;
        if entries.last().is_some_and(|(prev, _)| *prev >= index) {
            return Err(err("indices must be strictly increasing"));
        }
        entries.push((index, value));
    }
    Ok(BFile { sequence_id: sequence_id.to_string(), entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BFileSource {
    Remote { base_url: String },
    Fixtures(PathBuf),
}

impl BFileSource {
    /// Remote source at `$OEIS_BASE_URL`, or the public OEIS site.
    pub fn remote_from_env() -> Self {
        let base_url = std::env::var(BASE_URL_ENV).unwrap_or_else(|_| DEFAULT_BASE_URL.to_string());
        BFileSource::Remote { base_url }
    }

    /// Fixture source at `$OEIS_FIXTURE_DIR`, or `default`.
    pub fn fixtures_from_env(default: impl AsRef<Path>) -> Self {
        let dir = std::env::var_os(FIXTURE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| default.as_ref().to_path_buf());
        BFileSource::Fixtures(dir)
    }
}

pub fn fetch_bfile(sequence_id: &str, source: &BFileSource) -> Result<BFile, OeisError> {
    let name = bfile_name(sequence_id)?;
    let body = match source {
        BFileSource::Fixtures(dir) => {
            let path = dir.join(&name);
            std::fs::read_to_string(&path).map_err(|source| match source.kind() {
                io::ErrorKind::NotFound => OeisError::NotFound(path.display().to_string()),
                _ => OeisError::Io { path, source },
            })?
        }
        BFileSource::Remote { base_url } => {
            let url = format!("{}/{sequence_id}/{name}", base_url.trim_end_matches('/'));
            http_get(&url)?
        }
    };
    parse_bfile(sequence_id, &body)
}

fn http_get(url: &str) -> Result<String, OeisError> {
    let mut last = None;
    // one retry on transient failures
    for _ in 0..2 {
        match ureq::get(url).call() {
            Ok(mut resp) => {
                return resp.body_mut().read_to_string().map_err(|e| OeisError::Network(e.to_string()));
            }
            Err(ureq::Error::StatusCode(404)) => return Err(OeisError::NotFound(url.to_string())),
            Err(ureq::Error::StatusCode(code)) if code < 500 => {
                return Err(OeisError::Network(format!("HTTP {code} from {url}")));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(OeisError::Network(last.map(|e| e.to_string()).unwrap_or_default()))
}

/// A sequence that equals `F(n, m, k)` for `n = 1, 2, ...`, with `offset` the
/// OEIS index of the `n = 1` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceBinding {
    pub sequence_id: &'static str,
    pub m: u32,
    pub k: u32,
    pub offset: i64,
}

/// A000292 is `C(n+2,3)` and A000537 is `(n(n+1)/2)^2`, both indexed from 0,
/// so `n` maps to index `n`. A000332 is `C(n,4)` from index 0, and
/// `F(n,1,3) = C(n+3,4)` puts `n = 1` at index 4.
pub const BINDINGS: [SequenceBinding; 3] = [
    SequenceBinding { sequence_id: "A000292", m: 1, k: 2, offset: 1 },
    SequenceBinding { sequence_id: "A000332", m: 1, k: 3, offset: 4 },
    SequenceBinding { sequence_id: "A000537", m: 3, k: 1, offset: 1 },
];

pub fn binding(sequence_id: &str) -> Option<SequenceBinding> {
    BINDINGS.into_iter().find(|b| b.sequence_id == sequence_id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermCheck {
    pub n: u64,
    pub oeis_index: i64,
    #[serde(serialize_with = "as_string")]
    pub computed: Integer,
    #[serde(serialize_with = "as_string")]
    pub oeis: Integer,
    pub matches: bool,
}

fn as_string<S: serde::Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub binding: SequenceBinding,
    pub count: usize,
    pub mismatches: usize,
    pub terms: Vec<TermCheck>,
}

impl Comparison {
    pub fn is_match(&self) -> bool {
        self.mismatches == 0
    }

    pub fn mismatched(&self) -> impl Iterator<Item = &TermCheck> {
        self.terms.iter().filter(|t| !t.matches)
    }
}

/// Compares `F(n, m, k)` for `n = 1..=count` with the file's terms.
pub fn compare_sequence(b: &SequenceBinding, file: &BFile, count: usize) -> Result<Comparison, OeisError> {
    let by_index: BTreeMap<&Integer, &Integer> = file.entries.iter().map(|(i, v)| (i, v)).collect();
    let available = (0..count)
        .take_while(|j| by_index.contains_key(&Integer::from(b.offset + *j as i64)))
        .count();
    if available < count {
        return Err(OeisError::InsufficientTerms {
            sequence_id: b.sequence_id.to_string(),
            needed: count,
            first_index: b.offset,
            available,
        });
    }
    let terms: Vec<TermCheck> = (1..=count as u64)
        .map(|n| {
            let oeis_index = b.offset + n as i64 - 1;
            let oeis = by_index[&Integer::from(oeis_index)].clone();
            let q = HypersumQuery::new(n, b.m, b.k).expect("bindings have k >= 1");
            let computed = to_integer(&f_closed(q));
            TermCheck { n, oeis_index, matches: computed == oeis, computed, oeis }
        })
        .collect();
    let mismatches = terms.iter().filter(|t| !t.matches).count();
    Ok(Comparison { binding: *b, count, mismatches, terms })
}
