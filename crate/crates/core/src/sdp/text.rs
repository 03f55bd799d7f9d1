//! Plain-text dump of an [`SdpProblem`] for debugging. Not a stable format.
//!
//! ```text
//! sdp 1
//! sense minimize
//! block 0 <dim> <label>
//! objective 0 <nnz>
//! <i> <j> <re> <im>          (upper triangle, i ≤ j)
//! equality <k> <rhs> <terms>
//! term <block> <nnz>
//! <i> <j> <re> <im>
//! end
//! ```

use std::fmt::Write as _;

use super::{BlockSpec, Equality, Sense, SdpProblem, SparseHermitian};
use crate::error::{Error, Result};
use crate::linalg::C64;

pub fn dump(p: &SdpProblem) -> String {
    let mut out = String::new();
    let sense = match p.sense {
        Sense::Minimize => "minimize",
        Sense::Maximize => "maximize",
    };
    writeln!(out, "sdp 1").unwrap();
    writeln!(out, "sense {sense}").unwrap();
    for (b, spec) in p.blocks.iter().enumerate() {
        writeln!(out, "block {b} {} {}", spec.dim, spec.label).unwrap();
    }
    for (b, c) in p.objective.iter().enumerate() {
        writeln!(out, "objective {b} {}", c.nnz()).unwrap();
        write_entries(&mut out, c);
    }
    for (k, eq) in p.equalities.iter().enumerate() {
        writeln!(out, "equality {k} {} {}", eq.rhs, eq.terms.len()).unwrap();
        for (b, a) in &eq.terms {
            writeln!(out, "term {b} {}", a.nnz()).unwrap();
            write_entries(&mut out, a);
        }
    }
    writeln!(out, "end").unwrap();
    out
}

fn write_entries(out: &mut String, a: &SparseHermitian) {
    for &(i, j, v) in a.entries() {
        writeln!(out, "{i} {j} {} {}", v.re, v.im).unwrap();
    }
}

fn parse_err(line: usize, msg: &str) -> Error {
    Error::Parse(format!("line {}: {msg}", line + 1))
}

pub fn load(text: &str) -> Result<SdpProblem> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let mut pos = 0;
    let mut next = |expect: &str| -> Result<(usize, Vec<&str>)> {
        let line = pos;
        let l = lines.get(pos).ok_or_else(|| parse_err(line, &format!("expected {expect}, found end of input")))?;
        pos += 1;
        Ok((line, l.split_whitespace().collect()))
    };
    let num = |line: usize, s: &str| -> Result<f64> { s.parse().map_err(|_| parse_err(line, &format!("bad number '{s}'"))) };
    let idx = |line: usize, s: &str| -> Result<usize> { s.parse().map_err(|_| parse_err(line, &format!("bad index '{s}'"))) };

    let (l0, head) = next("header")?;
    if head != ["sdp", "1"] {
        return Err(parse_err(l0, "missing 'sdp 1' header"));
    }
    let (l1, sense) = next("sense")?;
    let sense = match sense.as_slice() {
        ["sense", "minimize"] => Sense::Minimize,
        ["sense", "maximize"] => Sense::Maximize,
        _ => return Err(parse_err(l1, "expected 'sense minimize|maximize'")),
    };

    let mut blocks = Vec::new();
    let mut objective: Vec<SparseHermitian> = Vec::new();
    let mut equalities = Vec::new();
    loop {
        let (line, tok) = next("section")?;
        match tok.first().copied() {
            Some("block") if tok.len() >= 3 => {
                let b = idx(line, tok[1])?;
                if b != blocks.len() {
                    return Err(parse_err(line, "blocks must be numbered consecutively"));
                }
                let dim = idx(line, tok[2])?;
                blocks.push(BlockSpec { label: tok[3..].join(" "), dim });
                objective.push(SparseHermitian::zeros(dim));
            }
            Some("objective") if tok.len() == 3 => {
                let b = idx(line, tok[1])?;
                let nnz = idx(line, tok[2])?;
                let dim = blocks.get(b).ok_or_else(|| parse_err(line, "objective for unknown block"))?.dim;
                let mut m = SparseHermitian::zeros(dim);
                for _ in 0..nnz {
                    let (el, e) = next("entry")?;
                    read_entry(&mut m, el, &e, &idx, &num)?;
                }
                objective[b] = m;
            }
            Some("equality") if tok.len() == 4 => {
                let k = idx(line, tok[1])?;
                if k != equalities.len() {
                    return Err(parse_err(line, "equalities must be numbered consecutively"));
                }
                let rhs = num(line, tok[2])?;
                let nterms = idx(line, tok[3])?;
                let mut terms = Vec::with_capacity(nterms);
                for _ in 0..nterms {
                    let (tl, t) = next("term")?;
                    if t.len() != 3 || t[0] != "term" {
                        return Err(parse_err(tl, "expected 'term <block> <nnz>'"));
                    }
                    let b = idx(tl, t[1])?;
                    let nnz = idx(tl, t[2])?;
                    let dim = blocks.get(b).ok_or_else(|| parse_err(tl, "term for unknown block"))?.dim;
                    let mut m = SparseHermitian::zeros(dim);
                    for _ in 0..nnz {
                        let (el, e) = next("entry")?;
                        read_entry(&mut m, el, &e, &idx, &num)?;
                    }
                    terms.push((b, m));
                }
                equalities.push(Equality { terms, rhs });
            }
            Some("end") => break,
            _ => return Err(parse_err(line, &format!("unexpected '{}'", tok.join(" ")))),
        }
    }
    let p = SdpProblem { blocks, objective, equalities, sense };
    p.validate()?;
    Ok(p)
}

fn read_entry(
    m: &mut SparseHermitian,
    line: usize,
    tok: &[&str],
    idx: &impl Fn(usize, &str) -> Result<usize>,
    num: &impl Fn(usize, &str) -> Result<f64>,
) -> Result<()> {
    if tok.len() != 4 {
        return Err(parse_err(line, "expected '<i> <j> <re> <im>'"));
    }
    let (i, j) = (idx(line, tok[0])?, idx(line, tok[1])?);
    if i > j || j >= m.dim() {
        return Err(parse_err(line, "entry outside the upper triangle of its block"));
    }
    m.push(i, j, C64::new(num(line, tok[2])?, num(line, tok[3])?));
    Ok(())
}
