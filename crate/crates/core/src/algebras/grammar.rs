//! Line-oriented structure files.
//!
//! ```text
//! # comment
//! [algebra]
//! name = h19-
//! dim = 6                      # or: compact = (0,0,0,12,23,14-35)
//! d e6 = e14 - e35
//!
//! [structure]
//! F = e12 + e34 + e56
//! J: e1 -> e3, e2 -> e6, e3 -> -e1, e4 -> -e5, e5 -> e4, e6 -> -e2
//!
//! [family]
//! param = t
//! domain = (-inf, 2/3)
//! eta = ((2-3*t)/2)^(1/3) e1
//! ```
//!
//! Every value on the right of `=` is a form expression; numbers and `t` are
//! 0-forms. `^` is the wedge product, or a power when both sides are
//! 0-forms and the exponent is a rational constant. Juxtaposition and `*`
//! multiply, `/` divides by a 0-form. `e<digits>` with several digits is the
//! wedge of the generators in the written order (`e53 = -e35`); in
//! dimension above 9 use `e{10}` or `e{3,10}`. Identifiers refer to forms
//! defined earlier in the file.

use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{CoframeMap, Form};
use crate::scalars::{parse_rational, Rational, Scalar};

use super::{parse_compact, LieAlgebra};

/// A `[kind]` or `[kind label]` block with its definitions in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub kind: String,
    pub label: Option<String>,
    pub forms: Vec<(String, Form)>,
    /// Non-form settings such as `param = t` or `target = (...)`.
    pub settings: Vec<(String, String)>,
    pub j: Option<CoframeMap>,
    /// `d e<k>` overrides declared inside a `[target]` section.
    pub differentials: Vec<(usize, Form)>,
}

impl Section {
    fn new(kind: &str, label: Option<String>) -> Self {
        Section { kind: kind.to_string(), label, forms: vec![], settings: vec![], j: None, differentials: vec![] }
    }

    pub fn form(&self, name: &str) -> Option<&Form> {
        self.forms.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn setting(&self, key: &str) -> Option<&str> {
        self.settings.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, name: &str) -> Result<&Form> {
        self.form(name).ok_or_else(|| Error::Missing(format!("form {name:?} in [{}]", self.kind)))
    }
}

/// Open or half-open real interval with optional infinite ends; both ends
/// are excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Interval {
    pub fn contains(&self, t: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|lo| t > lo) && self.hi.as_ref().is_none_or(|hi| t < hi)
    }

    /// A rational point inside the interval.
    pub fn sample(&self) -> Rational {
        let one = Rational::one();
        match (&self.lo, &self.hi) {
            (None, None) => Rational::zero(),
            (Some(lo), None) => lo + &one,
            (None, Some(hi)) => hi - &one,
            (Some(lo), Some(hi)) => (lo + hi) / Rational::from_integer(BigInt::from(2)),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &Option<Rational>, inf: &str| x.as_ref().map_or(inf.to_string(), crate::scalars::fmt_rational);
        write!(f, "({}, {})", show(&self.lo, "-inf"), show(&self.hi, "inf"))
    }
}

/// The `[family]` section: a one-parameter family of forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDecl {
    pub domain: Vec<Interval>,
    pub forms: Vec<(String, Form)>,
}

impl FamilyDecl {
    pub fn form(&self, name: &str) -> Option<&Form> {
        self.forms.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn in_domain(&self, t: &Rational) -> bool {
        self.domain.iter().any(|i| i.contains(t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFile {
    pub algebra: LieAlgebra,
    pub sections: Vec<Section>,
}

impl StructureFile {
    pub fn section(&self, kind: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.kind == kind)
    }

    pub fn sections_of(&self, kind: &str) -> impl Iterator<Item = &Section> {
        let kind = kind.to_string();
        self.sections.iter().filter(move |s| s.kind == kind)
    }

    pub fn family(&self) -> Result<Option<FamilyDecl>> {
        let Some(sec) = self.section("family") else {
            return Ok(None);
        };
        let domain = match sec.setting("domain") {
            Some(text) => parse_domain(text)?,
            None => vec![Interval { lo: None, hi: None }],
        };
        Ok(Some(FamilyDecl { domain, forms: sec.forms.clone() }))
    }
}

/// Parse `(a, b) U (c, d)` with `-inf`/`inf` ends.
pub fn parse_domain(text: &str) -> Result<Vec<Interval>> {
    let bad = || Error::Invalid(format!("malformed domain {text:?}"));
    let end = |s: &str| -> Result<Option<Rational>> {
        match s.trim() {
            "-inf" | "inf" | "+inf" => Ok(None),
            v => parse_rational(v).map(Some).ok_or_else(bad),
        }
    };
    text.split('U')
        .map(|part| {
            let inner = part.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            Ok(Interval { lo: end(a)?, hi: end(b)? })
        })
        .collect()
}

pub fn parse_equations(text: &str) -> Result<StructureFile> {
    Parser::default().run(text)
}

/// A single form expression in dimension `dim`; a bare `0` is the zero form
/// of degree `zero_degree`.
pub fn parse_form(text: &str, dim: usize, zero_degree: usize) -> Result<Form> {
    let f = Expr::parse(text, dim, 1, 1, &|_| None)?;
    Ok(if f.is_zero() { Form::zero(dim, zero_degree) } else { f })
}

#[derive(Default)]
struct Parser {
    dim: Option<usize>,
    name: Option<String>,
    compact: Option<LieAlgebra>,
    differentials: Vec<Option<Form>>,
    sections: Vec<Section>,
}

impl Parser {
    fn run(mut self, text: &str) -> Result<StructureFile> {
        let mut current: Option<usize> = None; // index into sections; None = [algebra]
        let mut in_algebra = false;
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            let indent = line.len() - line.trim_start().len();
            let body = line.trim();
            if body.is_empty() {
                continue;
            }
            if let Some(header) = body.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| Error::syntax(line_no, indent + 1, "unterminated section header"))?;
                let mut parts = header.trim().splitn(2, char::is_whitespace);
                let kind = parts.next().unwrap_or("").to_string();
                let label = parts.next().map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
                if kind.is_empty() {
                    return Err(Error::syntax(line_no, indent + 1, "empty section name"));
                }
                if kind == "algebra" {
                    if in_algebra || self.dim.is_some() {
                        return Err(Error::Duplicate("[algebra] section".into()));
                    }
                    in_algebra = true;
                    current = None;
                } else {
                    self.ensure_algebra(line_no)?;
                    in_algebra = false;
                    self.sections.push(Section::new(&kind, label));
                    current = Some(self.sections.len() - 1);
                }
                continue;
            }
            match current {
                None if in_algebra => self.algebra_statement(body, line_no, indent + 1)?,
                None => return Err(Error::syntax(line_no, indent + 1, "statement outside of any section")),
                Some(s) => self.section_statement(s, body, line_no, indent + 1)?,
            }
        }
        let algebra = self.finish_algebra()?;
        Ok(StructureFile { algebra, sections: self.sections })
    }

    fn ensure_algebra(&self, line: usize) -> Result<()> {
        if self.dim.is_none() {
            return Err(Error::syntax(line, 1, "the [algebra] section with a dimension must come first"));
        }
        Ok(())
    }

    fn finish_algebra(&self) -> Result<LieAlgebra> {
        let n = self.dim.ok_or_else(|| Error::Missing("[algebra] section with dim or compact".into()))?;
        let mut alg = match &self.compact {
            Some(c) => c.clone(),
            None => LieAlgebra::abelian(n),
        };
        let mut diffs = alg.differentials().to_vec();
        for (i, d) in self.differentials.iter().enumerate() {
            if let Some(f) = d {
                diffs[i] = f.clone();
            }
        }
        alg = LieAlgebra::new(diffs)?;
        if let Some(name) = &self.name {
            alg = alg.with_name(name.clone());
        }
        Ok(alg)
    }

    fn algebra_statement(&mut self, body: &str, line: usize, col: usize) -> Result<()> {
        let (lhs, rhs, rcol) = split_assignment(body, line, col)?;
        let key: Vec<&str> = lhs.split_whitespace().collect();
        match key.as_slice() {
            ["name"] => {
                if self.name.replace(rhs.trim().to_string()).is_some() {
                    return Err(Error::Duplicate("name".into()));
                }
            }
            ["dim"] => {
                if self.dim.is_some() {
                    return Err(Error::Duplicate("dim".into()));
                }
                let n: usize = rhs
                    .trim()
                    .parse()
                    .map_err(|_| Error::syntax(line, rcol, format!("expected a dimension, found {:?}", rhs.trim())))?;
                if n == 0 || n > crate::exterior::MAX_DIM {
                    return Err(Error::syntax(line, rcol, format!("unsupported dimension {n}")));
                }
                self.dim = Some(n);
                self.differentials = vec![None; n];
            }
            ["compact"] => {
                if self.dim.is_some() {
                    return Err(Error::Duplicate("dim".into()));
                }
                let alg = parse_compact(rhs).map_err(|e| match e {
                    Error::Syntax { col: c, msg, .. } => Error::Syntax { line, col: rcol + c - 1, msg },
                    other => other,
                })?;
                self.dim = Some(alg.dim());
                self.differentials = vec![None; alg.dim()];
                self.compact = Some(alg);
            }
            ["d", gen] => {
                let n = self.dim.ok_or_else(|| Error::syntax(line, col, "declare dim before structure equations"))?;
                let k = generator_index(gen, n).ok_or_else(|| {
                    Error::syntax(line, col, format!("expected a generator like e3 after d, found {gen:?}"))
                })??;
                if self.differentials[k - 1].is_some() {
                    return Err(Error::Duplicate(format!("d e{k}")));
                }
                let f = Expr::parse(rhs, n, line, rcol, &|_| None)?;
                check_degree(&f, 2, line, rcol)?;
                self.differentials[k - 1] = Some(f);
            }
            _ => return Err(Error::syntax(line, col, format!("unknown [algebra] statement {lhs:?}"))),
        }
        Ok(())
    }

    fn lookup(&self, current: usize, name: &str) -> Option<Form> {
        let sec = &self.sections[current];
        sec.form(name)
            .or_else(|| self.sections[..current].iter().rev().find_map(|s| s.form(name)))
            .cloned()
    }

    fn section_statement(&mut self, s: usize, body: &str, line: usize, col: usize) -> Result<()> {
        let n = self.dim.expect("checked by ensure_algebra");
        if let Some(rest) = body.strip_prefix("J:") {
            if self.sections[s].j.is_some() {
                return Err(Error::Duplicate("J".into()));
            }
            let j = self.parse_j(s, rest, line, col + 2)?;
            self.sections[s].j = Some(j);
            return Ok(());
        }
        let (lhs, rhs, rcol) = split_assignment(body, line, col)?;
        let words: Vec<&str> = lhs.split_whitespace().collect();
        match words.as_slice() {
            ["param"] | ["domain"] | ["target"] | ["note"] => {
                let key = words[0];
                if self.sections[s].setting(key).is_some() {
                    return Err(Error::Duplicate(key.into()));
                }
                if key == "domain" {
                    parse_domain(rhs).map_err(|_| Error::syntax(line, rcol, "malformed domain"))?;
                }
                self.sections[s].settings.push((key.to_string(), rhs.trim().to_string()));
            }
            ["d", gen] => {
                let k = generator_index(gen, n).ok_or_else(|| {
                    Error::syntax(line, col, format!("expected a generator like e3 after d, found {gen:?}"))
                })??;
                if self.sections[s].differentials.iter().any(|(i, _)| *i == k) {
                    return Err(Error::Duplicate(format!("d e{k}")));
                }
                let f = Expr::parse(rhs, n, line, rcol, &|id| self.lookup(s, id))?;
                check_degree(&f, 2, line, rcol)?;
                self.sections[s].differentials.push((k, f));
            }
            [name] if is_identifier(name) => {
                if self.sections[s].form(name).is_some() {
                    return Err(Error::Duplicate(format!("{name} in [{}]", self.sections[s].kind)));
                }
                let f = Expr::parse(rhs, n, line, rcol, &|id| self.lookup(s, id))?;
                self.sections[s].forms.push((name.to_string(), f));
            }
            _ => return Err(Error::syntax(line, col, format!("expected `name = expression`, found {lhs:?}"))),
        }
        Ok(())
    }

    fn parse_j(&self, s: usize, text: &str, line: usize, col: usize) -> Result<CoframeMap> {
        let n = self.dim.unwrap();
        let mut rows: Vec<Option<Vec<Scalar>>> = vec![None; n];
        let mut offset = col;
        for item in text.split(',') {
            let here = offset + item.len() - item.trim_start().len();
            offset += item.len() + 1;
            let (lhs, rhs) = item
                .split_once("->")
                .ok_or_else(|| Error::syntax(line, here, "expected `e<i> -> <1-form>`"))?;
            let k = generator_index(lhs.trim(), n)
                .ok_or_else(|| Error::syntax(line, here, format!("expected a generator, found {:?}", lhs.trim())))??;
            if rows[k - 1].is_some() {
                return Err(Error::Duplicate(format!("J e{k}")));
            }
            let rcol = here + lhs.trim().len() + 2;
            let img = Expr::parse(rhs, n, line, rcol, &|id| self.lookup(s, id))?;
            check_degree(&img, 1, line, rcol)?;
            rows[k - 1] = Some((1..=n).map(|j| img.coeff_of(&[j])).collect());
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::Missing(format!("J e{} on line {line}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        CoframeMap::new(rows)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '\'')
        && !s.ends_with('-')
}

/// `e<k>` → `Some(Ok(k))`; not of that shape → `None`.
fn generator_index(s: &str, n: usize) -> Option<Result<usize>> {
    let digits = s.strip_prefix('e')?;
    let digits = digits.strip_prefix('{').and_then(|d| d.strip_suffix('}')).unwrap_or(digits);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    Some(if k == 0 || k > n { Err(Error::IndexOutOfRange { index: k, dim: n }) } else { Ok(k) })
}

fn split_assignment(body: &str, line: usize, col: usize) -> Result<(&str, &str, usize)> {
    let eq = body.find('=').ok_or_else(|| Error::syntax(line, col, "expected `=`"))?;
    let (lhs, rhs) = (body[..eq].trim(), &body[eq + 1..]);
    if lhs.is_empty() {
        return Err(Error::syntax(line, col, "missing name before `=`"));
    }
    Ok((lhs, rhs, col + eq + 1))
}

fn check_degree(f: &Form, degree: usize, line: usize, col: usize) -> Result<()> {
    if !f.is_zero() && f.degree() != degree {
        return Err(Error::syntax(line, col, format!("expected a {degree}-form, found degree {}", f.degree())));
    }
    Ok(())
}

// ---- expressions -----------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Gen(Vec<usize>),
    Op(char),
}

struct Expr<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dim: usize,
    line: usize,
    end_col: usize,
    lookup: &'a dyn Fn(&str) -> Option<Form>,
}

impl<'a> Expr<'a> {
    /// Parse a form expression; `col` is the 1-based column of `text[0]`.
    fn parse(
        text: &str,
        dim: usize,
        line: usize,
        col: usize,
        lookup: &'a dyn Fn(&str) -> Option<Form>,
    ) -> Result<Form> {
        let toks = tokenize(text, dim, line, col)?;
        let end_col = col + text.len();
        if toks.is_empty() {
            return Err(Error::syntax(line, end_col, "missing expression"));
        }
        let mut p = Expr { toks, pos: 0, dim, line, end_col, lookup };
        let f = p.sum()?;
        if let Some((t, c)) = p.toks.get(p.pos) {
            return Err(Error::syntax(line, *c, format!("unexpected {}", describe(t))));
        }
        Ok(f)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, col, msg)
    }

    fn add(&self, a: Form, b: Form, col: usize) -> Result<Form> {
        a.try_add(&b).map_err(|_| {
            self.err(col, format!("cannot add a {}-form and a {}-form", a.degree(), b.degree()))
        })
    }

    fn sum(&mut self) -> Result<Form> {
        let mut acc = self.signed_term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            let col = self.col();
            self.pos += 1;
            let t = self.product()?;
            acc = self.add(acc, if c == '-' { t.neg() } else { t }, col)?;
        }
        Ok(acc)
    }

    fn signed_term(&mut self) -> Result<Form> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.product()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.product()
            }
            _ => self.product(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Gen(_) | Tok::Op('(')))
    }

    fn product(&mut self) -> Result<Form> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = acc.wedge(&rhs);
                }
                Some(Tok::Op('/')) => {
                    let col = self.col();
                    self.pos += 1;
                    let rhs = self.power()?;
                    let s = as_scalar(&rhs).ok_or_else(|| self.err(col, "can only divide by a 0-form"))?;
                    let inv = s.recip().map_err(|e| self.err(col, e.to_string()))?;
                    acc = acc.scale(&inv);
                }
                _ if self.starts_atom() => {
                    let rhs = self.power()?;
                    acc = acc.wedge(&rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Form> {
        let mut acc = self.atom()?;
        while let Some(Tok::Op('^')) = self.peek() {
            let col = self.col();
            self.pos += 1;
            let negate = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let mut rhs = self.atom()?;
            if negate {
                rhs = rhs.neg();
            }
            let exponent = as_scalar(&rhs).and_then(|s| s.as_rational());
            match (as_scalar(&acc), exponent) {
                (Some(base), Some(q)) => {
                    let p = base.pow(&q).map_err(|e| self.err(col, e.to_string()))?;
                    acc = Form::scalar(self.dim, p);
                }
                _ if rhs.degree() == 0 && !rhs.is_zero() || acc.degree() == 0 && !acc.is_zero() => {
                    return Err(self.err(col, "`^` needs two forms of positive degree or a 0-form power"));
                }
                _ => acc = acc.wedge(&rhs),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Form> {
        let col = self.col();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(self.err(col, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Form::scalar(self.dim, Scalar::from_rational(Rational::from_integer(n)))),
            Tok::Gen(idx) => Ok(Form::basis(self.dim, &idx)),
            Tok::Ident(name) if name == "t" => Ok(Form::scalar(self.dim, Scalar::t())),
            Tok::Ident(name) => (self.lookup)(&name).ok_or_else(|| self.err(col, format!("undefined name {name:?}"))),
            Tok::Op('(') => {
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err(self.col(), "expected `)`")),
                }
            }
            Tok::Op(c) => Err(self.err(col, format!("unexpected {c:?}"))),
        }
    }
}

fn as_scalar(f: &Form) -> Option<Scalar> {
    if f.is_zero() {
        return Some(Scalar::zero());
    }
    (f.degree() == 0).then(|| f.coeff(crate::exterior::MultiIndex::EMPTY))
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("name {s:?}"),
        Tok::Gen(g) => format!("generator e{}", g.iter().map(|i| i.to_string()).collect::<String>()),
        Tok::Op(c) => format!("{c:?}"),
    }
}

fn tokenize(text: &str, dim: usize, line: usize, col: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let here = col + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().unwrap()), here));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            if c == 'e' && chars.get(i + 1) == Some(&'{') {
                let close = chars[i..]
                    .iter()
                    .position(|&x| x == '}')
                    .ok_or_else(|| Error::syntax(line, here, "unterminated `e{`"))?;
                let inner: String = chars[i + 2..i + close].iter().collect();
                let mut idx = Vec::new();
                for part in inner.split(',') {
                    let k: usize = part
                        .trim()
                        .parse()
                        .map_err(|_| Error::syntax(line, here, format!("bad generator index {part:?}")))?;
                    idx.push(check_index(k, dim)?);
                }
                out.push((Tok::Gen(idx), here));
                i += close + 1;
                continue;
            }
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let digits = &word[1..];
            if word.starts_with('e') && !digits.is_empty() && digits.chars().all(|d| d.is_ascii_digit()) {
                let idx = if dim <= 9 {
                    digits.chars().map(|d| check_index(d.to_digit(10).unwrap() as usize, dim)).collect::<Result<Vec<_>>>()?
                } else {
                    vec![check_index(digits.parse().unwrap_or(usize::MAX), dim)?]
                };
                out.push((Tok::Gen(idx), here));
            } else {
                out.push((Tok::Ident(word), here));
            }
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), here));
            i += 1;
        } else {
            return Err(Error::syntax(line, here, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn check_index(k: usize, dim: usize) -> Result<usize> {
    if k == 0 || k > dim {
        Err(Error::IndexOutOfRange { index: k, dim })
    } else {
        Ok(k)
    }
}

/// Render a form in the expression syntax accepted by [`parse_equations`].
pub fn render_expr(f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let blade = if m.degree() == 0 {
            None
        } else if f.dim() <= 9 {
            Some(format!("e{}", m.label(f.dim())))
        } else {
            Some(format!("e{{{}}}", m.indices().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
        };
        let (neg, coeff) = match c.as_rational() {
            Some(q) => (q.is_negative(), Some(q.abs()).filter(|q| !q.is_one() || blade.is_none()).map(|q| crate::scalars::fmt_rational(&q))),
            None => (false, Some(format!("({})", render_scalar(c)))),
        };
        s.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        match (coeff, blade) {
            (Some(c), Some(b)) => s.push_str(&format!("{c} {b}")),
            (Some(c), None) => s.push_str(&c),
            (None, Some(b)) => s.push_str(&b),
            (None, None) => unreachable!(),
        }
    }
    s
}

/// Scalar display uses `*` and `^(p/q)`, which the expression grammar reads.
fn render_scalar(s: &Scalar) -> String {
    s.to_string()
}
