//! Text formats for factorizations and certificates.
//!
//! ```text
//! HYPERFACTOR v1
//! n=4 levels=2
//! {1,2} | {3,4}
//! {1,3} | {2,4}
//! {1,4} | {2,3}
//! ```
//!
//! ```text
//! FARKAS v1
//! n=18 levels=1,2,3,4,5,6
//! 3 3 3 1 -1 0
//! ```
//!
//! Lines end in `\n`, including the last. Writing is deterministic, so a
//! file read back and written again is byte-identical.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;

use crate::combinatorics::{LevelSet, Subset};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::system::FarkasCertificate;

pub const FACTORIZATION_MAGIC: &str = "HYPERFACTOR v1";
pub const CERTIFICATE_MAGIC: &str = "FARKAS v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateFile {
    pub n: usize,
    pub levels: LevelSet,
    pub certificate: FarkasCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Factorization(Factorization),
    Certificate(CertificateFile),
}

fn header(n: usize, levels: &LevelSet) -> String {
    format!("n={n} levels={levels}\n")
}

pub fn write_factorization(f: &Factorization) -> String {
    let mut out = String::new();
    out.push_str(FACTORIZATION_MAGIC);
    out.push('\n');
    out.push_str(&header(f.n(), f.levels()));
    // Display already writes one sorted factor per line.
    write!(out, "{f}").expect("writing to a String cannot fail");
    out
}

pub fn write_certificate(n: usize, levels: &LevelSet, cert: &FarkasCertificate) -> String {
    format!("{CERTIFICATE_MAGIC}\n{}{cert}\n", header(n, levels))
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: Option<&str>) -> Result<(usize, LevelSet)> {
    let line = line.ok_or_else(|| perr(2, "missing `n=... levels=...` line"))?;
    let mut words = line.split(' ');
    let n = words
        .next()
        .and_then(|w| w.strip_prefix("n="))
        .ok_or_else(|| perr(2, "expected `n=<N>`"))?;
    let n: usize = n.parse().map_err(|_| perr(2, format!("bad ground set size `{n}`")))?;
    let levels = words
        .next()
        .and_then(|w| w.strip_prefix("levels="))
        .ok_or_else(|| perr(2, "expected `levels=<l1,l2,...>`"))?;
    let levels = LevelSet::from_str(levels).map_err(|e| perr(2, e.to_string()))?;
    if words.next().is_some() {
        return Err(perr(2, "trailing fields after levels"));
    }
    levels.check_for(n).map_err(|e| perr(2, e.to_string()))?;
    Ok((n, levels))
}

/// Splits `text` into lines, insisting on a final `\n` and no `\r`.
fn lines(text: &str) -> Result<Vec<&str>> {
    if text.contains('\r') {
        return Err(perr(1, "carriage returns are not allowed"));
    }
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| perr(text.lines().count().max(1), "missing final newline"))?;
    Ok(body.split('\n').collect())
}

fn parse_set(token: &str, n: usize, line: usize) -> Result<Subset> {
    let inner = token
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| perr(line, format!("`{token}` is not of the form {{e1,e2,...}}")))?;
    let mut s = Subset::EMPTY;
    let mut last = 0;
    for e in inner.split(',') {
        let e: usize = e
            .parse()
            .map_err(|_| perr(line, format!("bad element `{e}` in `{token}`")))?;
        if e == 0 || e > n {
            return Err(perr(line, format!("element {e} outside [1, {n}]")));
        }
        if e <= last {
            return Err(perr(line, format!("elements of `{token}` are not strictly ascending")));
        }
        last = e;
        s.insert(e);
    }
    Ok(s)
}

pub fn parse_factorization(text: &str) -> Result<Factorization> {
    let lines = lines(text)?;
    if lines.first() != Some(&FACTORIZATION_MAGIC) {
        return Err(perr(1, format!("expected `{FACTORIZATION_MAGIC}`")));
    }
    let (n, levels) = parse_header(lines.get(1).copied())?;
    let mut factors = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(2) {
        let number = i + 1;
        if line.is_empty() {
            return Err(perr(number, "empty factor line"));
        }
        let factor = line
            .split(" | ")
            .map(|t| parse_set(t, n, number))
            .collect::<Result<Vec<_>>>()?;
        factors.push(factor);
    }
    Ok(Factorization::new(n, levels, factors))
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile> {
    let lines = lines(text)?;
    if lines.first() != Some(&CERTIFICATE_MAGIC) {
        return Err(perr(1, format!("expected `{CERTIFICATE_MAGIC}`")));
    }
    let (n, levels) = parse_header(lines.get(1).copied())?;
    let values = lines.get(2).ok_or_else(|| perr(3, "missing certificate line"))?;
    if lines.len() > 3 {
        return Err(perr(4, "unexpected content after the certificate"));
    }
    let y = values
        .split(' ')
        .map(|v| BigRational::from_str(v).map_err(|_| perr(3, format!("`{v}` is not a rational p/q"))))
        .collect::<Result<Vec<_>>>()?;
    if y.len() != levels.max() {
        return Err(perr(3, format!("{} values for k = {}", y.len(), levels.max())));
    }
    Ok(CertificateFile {
        n,
        levels,
        certificate: FarkasCertificate::new(y),
    })
}

/// Either format, told apart by the first line.
pub fn parse_document(text: &str) -> Result<Document> {
    match text.split('\n').next() {
        Some(FACTORIZATION_MAGIC) => parse_factorization(text).map(Document::Factorization),
        Some(CERTIFICATE_MAGIC) => parse_certificate(text).map(Document::Certificate),
        _ => Err(perr(
            1,
            format!("expected `{FACTORIZATION_MAGIC}` or `{CERTIFICATE_MAGIC}`"),
        )),
    }
}
