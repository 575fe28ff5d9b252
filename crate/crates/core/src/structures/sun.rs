use std::fmt;

use crate::algebras::{scalar_inverse, LieAlgebra};
use crate::error::{Error, Result};
use crate::exterior::{CoframeMap, Form};
use crate::linalg::generic::{self as g, Field};
use crate::scalars::{Rational, Scalar};

use super::{
    numeric, to_f64_rows, two_form_matrix, validate_su2, Mat, NumMats, ResidualReport, Su2Structure, SunStructure,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SunReport {
    pub j_squared: bool,
    /// `J(F) = F`.
    pub j_f: bool,
    /// `J` rotates `Ψ = Ψ₊ + iΨ₋` by `i^n`.
    pub type_condition: bool,
    /// `g(X, Y) = F(X, JY)` symmetric and positive definite.
    pub symmetric: bool,
    pub positive: bool,
    /// `c` with `Ψ₊∧Ψ₋ = c F^n` (n odd) or `Ψ₊² + Ψ₋² = c F^n` (n even).
    pub normalization: Option<Scalar>,
    pub normalization_positive: bool,
    pub exact: bool,
    pub metric: Vec<Vec<f64>>,
}

impl SunReport {
    pub fn pass(&self) -> bool {
        self.j_squared && self.j_f && self.type_condition && self.symmetric && self.positive && self.normalization_positive
    }
}

impl fmt::Display for SunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "J^2 = -1: {}", yn(self.j_squared))?;
        writeln!(f, "J F = F: {}", yn(self.j_f))?;
        writeln!(f, "Psi of type (n,0): {}", yn(self.type_condition))?;
        writeln!(f, "metric symmetric: {}", yn(self.symmetric))?;
        writeln!(f, "metric positive: {}", yn(self.positive))?;
        match &self.normalization {
            Some(c) => writeln!(f, "normalization constant: {c}")?,
            None => writeln!(f, "normalization constant: undefined (F^n = 0)")?,
        }
        writeln!(f, "arithmetic: {}", if self.exact { "exact" } else { "floating point" })
    }
}

/// `J Ψ = i^n Ψ` split into real and imaginary parts.
fn type_condition(j: &CoframeMap, s: &SunStructure) -> Result<bool> {
    let (c, si) = match s.n() % 4 {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    let lin = |a: i64, x: &Form, b: i64, y: &Form| {
        x.scale_rational(&Rational::from_integer(a.into())).add(&y.scale_rational(&Rational::from_integer(b.into())))
    };
    let jp = j.apply(&s.psi_plus)?;
    let jm = j.apply(&s.psi_minus)?;
    Ok(jp == lin(c, &s.psi_plus, -si, &s.psi_minus) && jm == lin(si, &s.psi_plus, c, &s.psi_minus))
}

/// Quantity compared against `F^n` to fix the normalization of `Ψ`.
fn normalization_form(s: &SunStructure) -> Form {
    if s.n() % 2 == 1 {
        s.psi_plus.wedge(&s.psi_minus)
    } else {
        s.psi_plus.wedge(&s.psi_plus).add(&s.psi_minus.wedge(&s.psi_minus))
    }
}

fn is_positive_scalar(c: &Scalar) -> bool {
    match c.as_rational() {
        Some(q) => q > Rational::from_integer(0.into()),
        None => c.is_constant() && c.eval(&Rational::from_integer(0.into())).is_ok_and(|x| x > crate::linalg::generic::FLOAT_TOL),
    }
}

struct MetricChecks {
    symmetric: bool,
    positive: bool,
    metric: Vec<Vec<f64>>,
}

fn metric_checks<F: Field>(wf: &Mat<F>, m: &Mat<F>) -> MetricChecks {
    let gm = g::g_matmul(wf, m);
    MetricChecks {
        symmetric: g::g_is_symmetric(&gm),
        positive: g::g_is_symmetric(&gm) && g::g_is_positive_definite(&gm),
        metric: to_f64_rows(&gm),
    }
}

pub fn validate_sun(s: &SunStructure, t0: Option<&Rational>) -> Result<SunReport> {
    let s = substitute(s, t0)?;
    let j = s.j.as_ref().ok_or_else(|| Error::Missing("J".into()))?;
    let normalization = {
        let top = normalization_form(&s).top_coefficient();
        let fnc = s.f.power(s.n()).top_coefficient();
        if fnc.is_zero() { None } else { top.div(&fnc).ok() }
    };
    let mats = numeric(&[two_form_matrix(&s.f), j.matrix().to_vec()])?;
    let exact = mats.is_exact();
    let checks = match &mats {
        NumMats::Exact(m) => metric_checks(&m[0], &m[1]),
        NumMats::Float(m) => metric_checks(&m[0], &m[1]),
    };
    Ok(SunReport {
        j_squared: j.is_complex_structure(),
        j_f: j.apply(&s.f)? == s.f,
        type_condition: type_condition(j, &s)?,
        symmetric: checks.symmetric,
        positive: checks.positive,
        normalization_positive: normalization.as_ref().is_some_and(is_positive_scalar),
        normalization,
        exact,
        metric: checks.metric,
    })
}

fn substitute(s: &SunStructure, t0: Option<&Rational>) -> Result<SunStructure> {
    let constant = [&s.f, &s.psi_plus, &s.psi_minus].iter().all(|f| f.is_constant())
        && s.j.as_ref().is_none_or(|j| j.matrix().iter().all(|r| r.iter().all(Scalar::is_constant)));
    if constant {
        return Ok(s.clone());
    }
    let t0 = t0.ok_or_else(|| Error::Parametric("validating a parametric SU(n)-structure needs a value of t".into()))?;
    let j = match &s.j {
        Some(j) => Some(CoframeMap::new(
            j.matrix().iter().map(|r| r.iter().map(|x| x.substitute(t0)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?,
        )?),
        None => None,
    };
    SunStructure::new(s.algebra.clone(), s.f.substitute(t0)?, s.psi_plus.substitute(t0)?, s.psi_minus.substitute(t0)?, j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunBalanceReport {
    /// `d(F^{n-1})`, `dΨ₊`, `dΨ₋`.
    pub residuals: ResidualReport,
    pub df: Form,
    /// `dF = 0` as well.
    pub kahler: bool,
    /// `d(F^2) = 0` and `dΨ₊ = 0` (meaningful for n = 3).
    pub half_flat: bool,
}

impl SunBalanceReport {
    pub fn pass(&self) -> bool {
        self.residuals.pass()
    }
}

impl fmt::Display for SunBalanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residuals)?;
        writeln!(f, "dF = {}", self.df)?;
        writeln!(f, "half-flat: {}", if self.half_flat { "yes" } else { "no" })
    }
}

pub fn is_balanced_sun(s: &SunStructure) -> Result<SunBalanceReport> {
    let l = &s.algebra;
    let n = s.n();
    let fpow = s.f.power(n - 1);
    let dfp = l.d(&fpow)?;
    let dpp = l.d(&s.psi_plus)?;
    let dpm = l.d(&s.psi_minus)?;
    let df = l.d(&s.f)?;
    let half_flat = l.d(&s.f.power(2))?.is_zero() && dpp.is_zero();
    Ok(SunBalanceReport {
        residuals: ResidualReport {
            residuals: vec![(format!("d(F^{})", n - 1), dfp), ("d(psi_plus)".into(), dpp), ("d(psi_minus)".into(), dpm)],
        },
        kahler: df.is_zero(),
        df,
        half_flat,
    })
}

/// Metric of an SU(3)-structure recovered from `F` and `Ψ₊` alone: with
/// `φ = F∧e^7 + Ψ₊` on the product with a line,
/// `b(X, Y) = (ι_X φ ∧ ι_Y φ ∧ φ)` read off the top coefficient and
/// `g = b / b(e_7, e_7)`. Entries are polynomial in the coefficients, so
/// parametric data stays symbolic.
pub fn su3_metric(f: &Form, psi_plus: &Form) -> Result<Mat<Scalar>> {
    let (b, norm) = su3_metric_parts(f, psi_plus)?;
    b.iter().map(|row| row.iter().map(|v| v.div(&norm)).collect()).collect()
}

/// The unnormalised bilinear form `b` and the scale `b(e_7, e_7)`.
pub(crate) fn su3_metric_parts(f: &Form, psi_plus: &Form) -> Result<(Mat<Scalar>, Scalar)> {
    if f.dim() != 6 || psi_plus.dim() != 6 {
        return Err(Error::Invalid("the SU(3) metric formula needs 6-dimensional forms".into()));
    }
    let phi = f.embed(7).wedge(&Form::generator(7, 7)).add(&psi_plus.embed(7));
    let iphi: Vec<Form> = (1..=7).map(|a| phi.contract_frame(a)).collect::<Result<_>>()?;
    let b = |x: usize, y: usize| iphi[x].wedge(&iphi[y]).wedge(&phi).top_coefficient();
    let norm = b(6, 6);
    if norm.is_zero() {
        return Err(Error::Invalid("F^3 vanishes; the structure is degenerate".into()));
    }
    let mut out = vec![vec![Scalar::zero(); 6]; 6];
    for x in 0..6 {
        for y in x..6 {
            let v = b(x, y);
            out[x][y] = v.clone();
            out[y][x] = v;
        }
    }
    Ok((out, norm))
}

fn metric_of(s: &SunStructure) -> Result<Mat<Scalar>> {
    match &s.j {
        Some(j) => {
            let wf = two_form_matrix(&s.f);
            let n = wf.len();
            Ok((0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| (0..n).fold(Scalar::zero(), |acc, c| &acc + &(&wf[a][c] * j.entry(c, b))))
                        .collect()
                })
                .collect())
        }
        None => su3_metric(&s.f, &s.psi_plus),
    }
}

/// Restrict to the hypersurface `ker e^k` with unit normal `U = sign · e_k`:
/// `η = −i_U F, ω₁ = i_U Ψ₋, ω₂ = −i_U Ψ₊, ω₃ = F`, all pulled back by
/// dropping `e^k`. Requires `U` to be a unit normal and `ker e^k` to be a
/// subalgebra.
pub fn restrict_to_hypersurface(s: &SunStructure, k: usize, sign: i32) -> Result<Su2Structure> {
    if s.n() != 3 {
        return Err(Error::Invalid("restriction to a hypersurface needs an SU(3)-structure".into()));
    }
    if !(1..=6).contains(&k) || sign.abs() != 1 {
        return Err(Error::Invalid(format!("U must be ±e_k with 1 ≤ k ≤ 6, got {sign}·e_{k}")));
    }
    let g = metric_of(s)?;
    let unit = g[k - 1][k - 1].is_one() && (0..6).all(|j| j == k - 1 || g[k - 1][j].is_zero());
    if !unit {
        return Err(Error::Invalid(format!("e_{k} is not a unit normal to ker e^{k}")));
    }
    let l = &s.algebra;
    let ek = Form::generator(6, k);
    if !l.de(k).wedge(&ek).is_zero() {
        return Err(Error::Invalid(format!("ker e^{k} is not a subalgebra (d e^{k} ^ e^{k} != 0)")));
    }
    let mut u = vec![Scalar::zero(); 6];
    u[k - 1] = Scalar::from_int(sign as i64);
    let map: Vec<Option<usize>> = (1..=6).map(|i| (i != k).then(|| if i < k { i } else { i - 1 })).collect();
    let pull = |f: &Form| f.reindex(5, &map);
    let diffs: Vec<Form> = (1..=6).filter(|&i| i != k).map(|i| pull(l.de(i))).collect();
    let algebra = LieAlgebra::new(diffs)?;
    Su2Structure::new(
        algebra,
        pull(&s.f.contract(&u)?.neg()),
        pull(&s.psi_minus.contract(&u)?),
        pull(&s.psi_plus.contract(&u)?.neg()),
        pull(&s.f),
    )
}

/// The SU(3)-structure on the product with a line: `e^6 = dt`,
/// `F = ω₃ + η∧e^6`, `Ψ₊ = ω₁∧η − ω₂∧e^6`, `Ψ₋ = ω₂∧η + ω₁∧e^6`.
/// `J` is recovered from the metric as `W_F⁻¹ g` when the coefficients
/// allow exact inversion.
pub fn suspend_su2(s: &Su2Structure) -> Result<SunStructure> {
    if s.is_constant() {
        let report = validate_su2(s, None)?;
        if !report.pass() {
            return Err(Error::Invalid(format!("not an SU(2)-structure:\n{report}")));
        }
    }
    let algebra = s.algebra.extend_by_line();
    let up = |f: &Form| f.embed(6);
    let dt = Form::generator(6, 6);
    let (eta, w1, w2, w3) = (up(&s.eta), up(&s.omega1), up(&s.omega2), up(&s.omega3));
    let f = w3.add(&eta.wedge(&dt));
    let psi_plus = w1.wedge(&eta).sub(&w2.wedge(&dt));
    let psi_minus = w2.wedge(&eta).add(&w1.wedge(&dt));
    let j = su3_metric(&f, &psi_plus).ok().and_then(|gm| {
        let wf_inv = scalar_inverse(&two_form_matrix(&f)).ok()?;
        let m: Mat<Scalar> = (0..6)
            .map(|a| (0..6).map(|b| (0..6).fold(Scalar::zero(), |acc, c| &acc + &(&wf_inv[a][c] * &gm[c][b]))).collect())
            .collect();
        CoframeMap::new(m).ok()
    });
    SunStructure::new(algebra, f, psi_plus, psi_minus, j)
}
