//! Graded exterior algebra over an `n`-dimensional coframe `e^1, …, e^n`
//! with [`Scalar`] coefficients.

mod coframe;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};

pub use coframe::CoframeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{fmt_rational, Rational, Scalar};

/// Maximum coframe dimension representable by a [`MultiIndex`].
pub const MAX_DIM: usize = 32;

/// Strictly increasing index tuple, stored as a bit set (bit `i-1` for `e^i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Canonical index from 1-based, possibly unsorted indices, together with
    /// the sign of the sorting permutation. Repeated indices give `None`.
    pub fn from_indices(indices: &[usize]) -> Option<(i32, MultiIndex)> {
        let mut bits = 0u32;
        let mut sign = 1;
        for &i in indices {
            assert!((1..=MAX_DIM).contains(&i), "index {i} out of range");
            let b = 1u32 << (i - 1);
            if bits & b != 0 {
                return None;
            }
            // every already-present larger index must hop over e^i
            if (bits & !(b | (b - 1))).count_ones() % 2 == 1 {
                sign = -sign;
            }
            bits |= b;
        }
        Some((sign, MultiIndex(bits)))
    }

    pub fn single(i: usize) -> MultiIndex {
        MultiIndex(1 << (i - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Sign and product `e^I ∧ e^J`, or `None` when they share an index.
    pub fn wedge(self, other: MultiIndex) -> Option<(i32, MultiIndex)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0;
        let mut rest = other.0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            swaps += (self.0 >> b).count_ones();
            rest &= rest - 1;
        }
        Some((if swaps % 2 == 0 { 1 } else { -1 }, MultiIndex(self.0 | other.0)))
    }

    /// All multi-indices of a given degree in dimension `n`, in canonical order.
    pub fn all(n: usize, degree: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0u64..(1u64 << n))
            .filter(|m| m.count_ones() as usize == degree)
            .map(|m| MultiIndex(m as u32))
            .collect();
        out.sort();
        out
    }

    pub fn label(self, dim: usize) -> String {
        let idx = self.indices();
        if dim <= 9 {
            idx.iter().map(|i| i.to_string()).collect()
        } else {
            format!("{{{}}}", idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

impl Ord for MultiIndex {
    /// Degree first, then lexicographic on the sorted index tuple.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        if self.0 & low != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Homogeneous exterior form. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Form {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Form {
        assert!(dim <= MAX_DIM);
        Form { dim, degree, coeffs: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, s: Scalar) -> Form {
        let mut f = Form::zero(dim, 0);
        f.add_term(MultiIndex::EMPTY, s);
        f
    }

    /// `e^i`, 1-based.
    pub fn generator(dim: usize, i: usize) -> Form {
        Form::basis(dim, &[i])
    }

    /// `e^{i1 i2 …}` for arbitrary order; unsorted indices pick up the
    /// permutation sign (`e^{53} = -e^{35}`).
    pub fn basis(dim: usize, indices: &[usize]) -> Form {
        let mut f = Form::zero(dim, indices.len());
        if let Some((sign, m)) = MultiIndex::from_indices(indices) {
            assert!(indices.iter().all(|&i| i <= dim), "index beyond dimension {dim}");
            f.add_term(m, Scalar::from_int(sign as i64));
        }
        f
    }

    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Form {
        let mut f = Form::zero(dim, degree);
        for (m, s) in terms {
            assert_eq!(m.degree(), degree, "term degree mismatch");
            f.add_term(m, s);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: MultiIndex) -> Scalar {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    /// Coefficient on `e^{indices}` (any order, sign included).
    pub fn coeff_of(&self, indices: &[usize]) -> Scalar {
        match MultiIndex::from_indices(indices) {
            Some((sign, m)) => self.coeff(m).scale(&Rational::from_integer((sign as i64).into())),
            None => Scalar::zero(),
        }
    }

    fn add_term(&mut self, m: MultiIndex, s: Scalar) {
        if s.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&m) {
            Some(c) => {
                let sum = &*c + &s;
                if sum.is_zero() {
                    self.coeffs.remove(&m);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.coeffs.insert(m, s);
            }
        }
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Invalid(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (m, s) in &other.coeffs {
            out.add_term(*m, s.clone());
        }
        Ok(out)
    }

    /// Sum of two homogeneous forms; panics on a dimension or degree mismatch.
    pub fn add(&self, other: &Form) -> Form {
        self.try_add(other).expect("form addition")
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut out = Form::zero(self.dim, self.degree);
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.coeffs {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Form {
        self.scale(&Scalar::from_rational(q.clone()))
    }

    pub fn try_wedge(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        let mut out = Form::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some((sign, m)) = a.wedge(*b) {
                    let c = ca * cb;
                    out.add_term(m, if sign > 0 { c } else { -c });
                }
            }
        }
        Ok(out)
    }

    /// Wedge product; panics on a dimension mismatch.
    pub fn wedge(&self, other: &Form) -> Form {
        self.try_wedge(other).expect("wedge of forms in different dimensions")
    }

    /// `self ∧ self ∧ … ` (`k` factors; `k = 0` gives the constant 1).
    pub fn power(&self, k: usize) -> Form {
        let mut acc = Form::scalar(self.dim, Scalar::one());
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Interior product `i_X` with a vector given by its components in the
    /// dual frame `e_1, …, e_n`.
    pub fn contract(&self, x: &[Scalar]) -> Result<Form> {
        if self.degree == 0 {
            return Err(Error::DegreeZero);
        }
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(x.len(), self.dim));
        }
        let mut out = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.coeffs {
            for (pos, i) in m.indices().into_iter().enumerate() {
                let xi = &x[i - 1];
                if xi.is_zero() {
                    continue;
                }
                let rest = MultiIndex(m.0 & !(1 << (i - 1)));
                let term = c * xi;
                out.add_term(rest, if pos % 2 == 0 { term } else { -term });
            }
        }
        Ok(out)
    }

    /// Contraction with the frame vector `e_i`.
    pub fn contract_frame(&self, i: usize) -> Result<Form> {
        let mut x = vec![Scalar::zero(); self.dim];
        x[i - 1] = Scalar::one();
        self.contract(&x)
    }

    /// Evaluate a 2-form on frame vectors: `a(e_i, e_j)`.
    pub fn eval2(&self, i: usize, j: usize) -> Scalar {
        debug_assert_eq!(self.degree, 2);
        self.coeff_of(&[i, j])
    }

    /// Coefficient-wise `∂/∂t`.
    pub fn partial_t(&self) -> Form {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(*m, c.diff());
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<Form> {
        let mut out = Form::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(*m, f(c)?);
        }
        Ok(out)
    }

    /// Substitute `t = t0` in every coefficient.
    pub fn substitute(&self, t0: &Rational) -> Result<Form> {
        self.map_coeffs(|c| c.substitute(t0))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.values().all(Scalar::is_rational)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.values().all(Scalar::is_constant)
    }

    /// Coefficient vector against [`MultiIndex::all`] for this degree.
    pub fn rational_vector(&self) -> Result<Vec<Rational>> {
        MultiIndex::all(self.dim, self.degree)
            .into_iter()
            .map(|m| {
                self.coeff(m)
                    .as_rational()
                    .ok_or_else(|| Error::Parametric(format!("non-rational coefficient in {self}")))
            })
            .collect()
    }

    pub fn from_rational_vector(dim: usize, degree: usize, v: &[Rational]) -> Form {
        Form::from_terms(
            dim,
            degree,
            MultiIndex::all(dim, degree)
                .into_iter()
                .zip(v)
                .map(|(m, q)| (m, Scalar::from_rational(q.clone()))),
        )
    }

    /// Pad into a higher-dimensional coframe (same indices).
    pub fn embed(&self, dim: usize) -> Form {
        assert!(dim >= self.dim);
        Form { dim, degree: self.degree, coeffs: self.coeffs.clone() }
    }

    /// Relabel indices through `map[i-1] = new index` (or drop terms whose
    /// indices map to `None`), landing in dimension `dim`.
    pub fn reindex(&self, dim: usize, map: &[Option<usize>]) -> Form {
        let mut out = Form::zero(dim, self.degree);
        for (m, c) in &self.coeffs {
            let idx: Option<Vec<usize>> = m.indices().iter().map(|&i| map[i - 1]).collect();
            if let Some(idx) = idx {
                if let Some((sign, mm)) = MultiIndex::from_indices(&idx) {
                    out.add_term(mm, if sign > 0 { c.clone() } else { -c });
                }
            }
        }
        out
    }

    /// `Ψ₊ = Re`-style bookkeeping helper: top-degree coefficient.
    pub fn top_coefficient(&self) -> Scalar {
        if self.degree != self.dim {
            return Scalar::zero();
        }
        self.coeff(MultiIndex(((1u64 << self.dim) - 1) as u32))
    }

    /// Render with an explicit prefix for the generators (e.g. `f`).
    pub fn render_with(&self, symbol: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.coeffs.iter().enumerate() {
            let (neg, body) = render_coefficient(c);
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let blade = if m.degree() == 0 { String::new() } else { format!("{symbol}{}", m.label(self.dim)) };
            match (body.as_str(), blade.is_empty()) {
                ("1", false) => s.push_str(&blade),
                (_, true) if c.as_rational().is_none() => s.push_str(&c.to_string()),
                (_, true) => s.push_str(&body),
                (b, false) => {
                    s.push_str(b);
                    s.push(' ');
                    s.push_str(&blade);
                }
            }
        }
        s
    }
}

/// Sign and magnitude text for a coefficient.
fn render_coefficient(c: &Scalar) -> (bool, String) {
    match c.as_rational() {
        Some(q) => (q.is_negative(), fmt_rational(&q.abs())),
        None => (false, format!("({c})")),
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with("e"))
    }
}

/// Checked wedge product.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    a.try_wedge(b)
}

/// Checked interior product.
pub fn contract(x: &[Scalar], a: &Form) -> Result<Form> {
    a.contract(x)
}

pub fn partial_t(a: &Form) -> Form {
    a.partial_t()
}

pub fn apply_coframe_map(j: &CoframeMap, a: &Form) -> Result<Form> {
    j.apply(a)
}

/// Result of [`span_rank`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanRank {
    Exact { rank: usize, basis_indices: Vec<usize> },
    /// Parametric items: rank at the user point and at an engine-chosen
    /// second point; they agree unless the rank jumps.
    Parametric { at: Vec<(Rational, usize, Vec<usize>)> },
}

impl SpanRank {
    /// The rank when it is unambiguous.
    pub fn rank(&self) -> Option<usize> {
        match self {
            SpanRank::Exact { rank, .. } => Some(*rank),
            SpanRank::Parametric { at } => {
                let r = at[0].1;
                at.iter().all(|(_, x, _)| *x == r).then_some(r)
            }
        }
    }
}

/// Rank of the linear span of homogeneous forms of one shape, by exact
/// elimination over ℚ. Parametric items need an evaluation point.
pub fn span_rank(items: &[Form], t0: Option<&Rational>) -> Result<SpanRank> {
    let Some(first) = items.first() else {
        return Ok(SpanRank::Exact { rank: 0, basis_indices: vec![] });
    };
    for f in items {
        if f.dim != first.dim || (f.degree != first.degree) {
            return Err(Error::Invalid("span_rank: items of mixed shape".into()));
        }
    }
    let width = MultiIndex::all(first.dim, first.degree).len();
    let exact = |forms: &[Form]| -> Result<(usize, Vec<usize>)> {
        let rows = forms.iter().map(Form::rational_vector).collect::<Result<Vec<_>>>()?;
        Ok(linalg::rank_with_basis(&rows, width))
    };
    if items.iter().all(Form::is_rational) {
        let (rank, basis_indices) = exact(items)?;
        return Ok(SpanRank::Exact { rank, basis_indices });
    }
    let t0 = t0.ok_or_else(|| Error::Parametric("span_rank of parametric forms needs an evaluation point".into()))?;
    let mut at = Vec::new();
    let mut points = vec![t0.clone()];
    // second point: first of t0+1, t0+2, … where every item is defined
    let mut shift = Rational::zero();
    loop {
        shift += Rational::from_integer(1.into());
        let p = t0 + &shift;
        if items.iter().all(|f| f.substitute(&p).is_ok()) {
            points.push(p);
            break;
        }
        if shift > Rational::from_integer(16.into()) {
            break;
        }
    }
    for p in points {
        let forms = items.iter().map(|f| f.substitute(&p)).collect::<Result<Vec<_>>>()?;
        let (r, b) = exact(&forms)?;
        at.push((p, r, b));
    }
    Ok(SpanRank::Parametric { at })
}
