use crate::error::{Error, Result};
use crate::exterior::Form;

use super::LieAlgebra;

/// Parse the compact nilpotent notation `(0,0,0,12,23,14-35)`: entry `k`
/// lists `d e^k` as a signed sum of two-digit index pairs.
pub fn parse_compact(text: &str) -> Result<LieAlgebra> {
    let trimmed = text.trim();
    let col0 = text.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::syntax(1, col0, "compact notation must be enclosed in parentheses"))?;
    let entries: Vec<&str> = inner.split(',').collect();
    let n = entries.len();
    if n > 9 {
        return Err(Error::Unsupported(format!(
            "compact notation is limited to dimension 9 (got {n}); use the equation grammar"
        )));
    }
    let mut offset = col0 + 1;
    let mut diffs = Vec::with_capacity(n);
    for entry in &entries {
        diffs.push(parse_entry(entry, n, offset)?);
        offset += entry.len() + 1;
    }
    LieAlgebra::new(diffs)
}

fn parse_entry(entry: &str, n: usize, col: usize) -> Result<Form> {
    let mut out = Form::zero(n, 2);
    let mut sign = 1i64;
    let mut expect_term = true;
    let mut saw_term = false;
    let chars: Vec<char> = entry.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let here = col + i;
        match c {
            ' ' | '\t' => i += 1,
            '+' | '-' if expect_term && !saw_term && c == '-' => {
                sign = -sign;
                i += 1;
            }
            '+' | '-' if !expect_term => {
                sign = if c == '-' { -1 } else { 1 };
                expect_term = true;
                i += 1;
            }
            d if d.is_ascii_digit() && expect_term => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let token: String = chars[start..i].iter().collect();
                if token == "0" {
                    if saw_term {
                        return Err(Error::syntax(1, here, "0 must stand alone"));
                    }
                } else {
                    if token.len() != 2 {
                        return Err(Error::syntax(1, here, format!("expected a two-digit index pair, found {token:?}")));
                    }
                    let idx: Vec<usize> = token.chars().map(|c| c.to_digit(10).unwrap() as usize).collect();
                    for &k in &idx {
                        if k == 0 || k > n {
                            return Err(Error::IndexOutOfRange { index: k, dim: n });
                        }
                    }
                    let term = Form::basis(n, &idx);
                    if term.is_zero() {
                        return Err(Error::syntax(1, here, format!("repeated index in {token:?}")));
                    }
                    out = out.add(&if sign < 0 { term.neg() } else { term });
                }
                saw_term = true;
                expect_term = false;
                sign = 1;
            }
            _ => return Err(Error::syntax(1, here, format!("unexpected character {c:?}"))),
        }
    }
    if !saw_term || expect_term {
        return Err(Error::syntax(1, col + chars.len(), "missing term"));
    }
    Ok(out)
}
