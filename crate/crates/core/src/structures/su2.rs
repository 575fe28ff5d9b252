use std::fmt;

use crate::algebras::LieAlgebra;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::generic::{self as g, Field};
use crate::scalars::{Rational, Scalar};

use super::{numeric, to_f64_rows, two_form_matrix, Mat, NumMats, ResidualReport, Su2Structure};

#[derive(Clone, Debug, PartialEq)]
pub struct Su2Report {
    /// `ω_i ∧ ω_j = δ_ij v`.
    pub wedge_identities: bool,
    /// `v ∧ η ≠ 0`.
    pub volume: bool,
    pub a_squared: bool,
    pub b_squared: bool,
    pub anticommute: bool,
    /// Symmetric positive-definite `η⊗η − ω₂(·, A·)`.
    pub positive: bool,
    /// Matrix checks done over ℚ (otherwise in floating point).
    pub exact: bool,
    /// `−ω₂(·, A·)` on `ker η` in the basis `e_j − (η_j/η_k) e_k`.
    pub kernel_metric: Vec<Vec<f64>>,
    pub v: Form,
}

impl Su2Report {
    pub fn pass(&self) -> bool {
        self.wedge_identities && self.volume && self.a_squared && self.b_squared && self.anticommute && self.positive
    }
}

impl fmt::Display for Su2Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "wedge identities: {}", yn(self.wedge_identities))?;
        writeln!(f, "v ^ eta != 0: {}", yn(self.volume))?;
        writeln!(f, "A^2 = -1: {}", yn(self.a_squared))?;
        writeln!(f, "B^2 = -1: {}", yn(self.b_squared))?;
        writeln!(f, "AB = -BA: {}", yn(self.anticommute))?;
        writeln!(f, "metric positive: {}", yn(self.positive))?;
        writeln!(f, "arithmetic: {}", if self.exact { "exact" } else { "floating point" })
    }
}

struct MatrixChecks {
    a_squared: bool,
    b_squared: bool,
    anticommute: bool,
    positive: bool,
    metric: Vec<Vec<f64>>,
}

/// Restrict the three 2-forms to `ker η` and test the quaternionic relations.
fn su2_matrix_checks<F: Field>(eta: &[F], w: &[Mat<F>]) -> Result<MatrixChecks> {
    let n = eta.len();
    let k = (0..n)
        .max_by(|&a, &b| eta[a].pivot_score().partial_cmp(&eta[b].pivot_score()).unwrap().then(b.cmp(&a)))
        .filter(|&k| eta[k].pivot_score() > 0.0)
        .ok_or_else(|| Error::Invalid("eta = 0".into()))?;
    // basis of ker η: e_j − (η_j/η_k) e_k
    let p: Mat<F> = (0..n)
        .filter(|&j| j != k)
        .map(|j| {
            (0..n)
                .map(|c| {
                    if c == j {
                        F::one()
                    } else if c == k {
                        eta[j].div(&eta[k]).neg()
                    } else {
                        F::zero()
                    }
                })
                .collect()
        })
        .collect();
    let pt = g::g_transpose(&p);
    let restrict = |m: &Mat<F>| g::g_matmul(&g::g_matmul(&p, m), &pt);
    let (w1, w2, w3) = (restrict(&w[0]), restrict(&w[1]), restrict(&w[2]));
    let w3inv = g::g_inverse(&w3).map_err(|_| Error::Invalid("omega3 is degenerate on ker eta".into()))?;
    let a = g::g_matmul(&w3inv, &w1);
    let b = g::g_matmul(&w3inv, &w2);
    let m = a.len();
    let minus_id: Mat<F> = g::g_identity::<F>(m).iter().map(|r| r.iter().map(F::neg).collect()).collect();
    let a2 = g::g_matmul(&a, &a);
    let b2 = g::g_matmul(&b, &b);
    let ab = g::g_matmul(&a, &b);
    let ba = g::g_matmul(&b, &a);
    let metric: Mat<F> = g::g_matmul(&w2, &a).iter().map(|r| r.iter().map(F::neg).collect()).collect();
    Ok(MatrixChecks {
        a_squared: g::g_is_zero(&g::g_sub(&a2, &minus_id)),
        b_squared: g::g_is_zero(&g::g_sub(&b2, &minus_id)),
        anticommute: g::g_is_zero(&g::g_add(&ab, &ba)),
        positive: g::g_is_symmetric(&metric) && g::g_is_positive_definite(&metric),
        metric: to_f64_rows(&metric),
    })
}

/// Check the defining identities of an SU(2)-structure. Parametric data is
/// checked at `t0`.
pub fn validate_su2(s: &Su2Structure, t0: Option<&Rational>) -> Result<Su2Report> {
    let s = if s.is_constant() {
        s.clone()
    } else {
        let t0 = t0.ok_or_else(|| Error::Parametric("validating a parametric SU(2)-structure needs a value of t".into()))?;
        s.at(t0)?
    };
    if s.eta.is_zero() {
        return Err(Error::Invalid("eta = 0".into()));
    }
    let w = [&s.omega1, &s.omega2, &s.omega3];
    let v = w[2].wedge(w[2]);
    let wedge_identities = w[0].wedge(w[0]) == v
        && w[1].wedge(w[1]) == v
        && w[0].wedge(w[1]).is_zero()
        && w[0].wedge(w[2]).is_zero()
        && w[1].wedge(w[2]).is_zero();
    let volume = !v.wedge(&s.eta).is_zero();
    let eta_row: Mat<Scalar> = vec![(1..=5).map(|i| s.eta.coeff_of(&[i])).collect()];
    let mats = numeric(&[eta_row, two_form_matrix(w[0]), two_form_matrix(w[1]), two_form_matrix(w[2])])?;
    let exact = mats.is_exact();
    let checks = match mats {
        NumMats::Exact(m) => su2_matrix_checks(&m[0][0], &m[1..])?,
        NumMats::Float(m) => su2_matrix_checks(&m[0][0], &m[1..])?,
    };
    Ok(Su2Report {
        wedge_identities,
        volume,
        a_squared: checks.a_squared,
        b_squared: checks.b_squared,
        anticommute: checks.anticommute,
        positive: checks.positive,
        exact,
        kernel_metric: checks.metric,
        v,
    })
}

fn residual(l: &LieAlgebra, name: &str, f: Form) -> Result<(String, Form)> {
    Ok((name.to_string(), l.d(&f)?))
}

/// `d(ω₁∧η)`, `d(ω₂∧η)`, `d(ω₃∧ω₃)`.
pub fn is_balanced_su2(s: &Su2Structure) -> Result<ResidualReport> {
    let l = &s.algebra;
    Ok(ResidualReport {
        residuals: vec![
            residual(l, "d(omega1^eta)", s.omega1.wedge(&s.eta))?,
            residual(l, "d(omega2^eta)", s.omega2.wedge(&s.eta))?,
            residual(l, "d(omega3^omega3)", s.omega3.wedge(&s.omega3))?,
        ],
    })
}

/// `d(ω₁∧η)`, `d(ω₂∧η)`, `dω₃`.
pub fn is_hypo(s: &Su2Structure) -> Result<ResidualReport> {
    let l = &s.algebra;
    Ok(ResidualReport {
        residuals: vec![
            residual(l, "d(omega1^eta)", s.omega1.wedge(&s.eta))?,
            residual(l, "d(omega2^eta)", s.omega2.wedge(&s.eta))?,
            residual(l, "d(omega3)", s.omega3.clone())?,
        ],
    })
}

/// Every closedness condition that mixes the balanced and hypo systems:
/// `d(ω_i∧η)` for all `i`, and `d(ω_i∧ω_i)` for `i = 2, 3`.
pub fn su2_residual_table(s: &Su2Structure) -> Result<ResidualReport> {
    let l = &s.algebra;
    Ok(ResidualReport {
        residuals: vec![
            residual(l, "d(omega1^eta)", s.omega1.wedge(&s.eta))?,
            residual(l, "d(omega2^eta)", s.omega2.wedge(&s.eta))?,
            residual(l, "d(omega3^eta)", s.omega3.wedge(&s.eta))?,
            residual(l, "d(omega2^omega2)", s.omega2.wedge(&s.omega2))?,
            residual(l, "d(omega3^omega3)", s.omega3.wedge(&s.omega3))?,
        ],
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleBundleReport {
    /// Every precondition, in a fixed order, with its outcome.
    pub checks: Vec<(String, bool)>,
    /// Present when the curvature form is closed and the extension exists.
    pub structure: Option<Su2Structure>,
    pub balanced: Option<ResidualReport>,
}

impl CircleBundleReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok) && self.balanced.as_ref().is_some_and(ResidualReport::pass)
    }
}

impl fmt::Display for CircleBundleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ok) in &self.checks {
            writeln!(f, "{name}: {}", if *ok { "yes" } else { "no" })?;
        }
        if let Some(s) = &self.structure {
            write!(f, "total space:\n{}", s.algebra)?;
        }
        if let Some(b) = &self.balanced {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// The rotated quadruplet on the circle bundle with curvature `omega`
/// (`dη = Ω`), for `θ` given through `(cos θ, sin θ)`.
pub fn circle_bundle_structure(
    x: &LieAlgebra,
    omega1: &Form,
    omega2: &Form,
    omega3: &Form,
    curvature: &Form,
    cos_sin: (&Rational, &Rational),
) -> Result<CircleBundleReport> {
    if x.dim() != 4 {
        return Err(Error::Invalid(format!("the base of the circle bundle must be 4-dimensional, not {}", x.dim())));
    }
    let (c, s) = (Scalar::from_rational(cos_sin.0.clone()), Scalar::from_rational(cos_sin.1.clone()));
    let one = &(&c * &c) + &(&s * &s);
    let w1t = omega1.scale(&c).add(&omega2.scale(&s));
    let w2t = omega1.scale(&(-&s)).add(&omega2.scale(&c));
    let sq1 = omega1.wedge(omega1);
    let dom = x.d(curvature)?;
    let checks = vec![
        ("cos^2 + sin^2 = 1".to_string(), one.is_one()),
        ("d omega1 = 0".into(), x.d(omega1)?.is_zero()),
        ("d omega2 = 0".into(), x.d(omega2)?.is_zero()),
        ("omega1^2 != 0".into(), !sq1.is_zero()),
        ("omega1^2 = omega2^2".into(), sq1 == omega2.wedge(omega2)),
        ("omega1^2 = omega3^2".into(), sq1 == omega3.wedge(omega3)),
        ("omega1^omega2 = 0".into(), omega1.wedge(omega2).is_zero()),
        ("omega1^omega3 = 0".into(), omega1.wedge(omega3).is_zero()),
        ("omega2^omega3 = 0".into(), omega2.wedge(omega3).is_zero()),
        ("d Omega = 0".into(), dom.is_zero()),
        ("Omega^omega1 = 0".into(), curvature.wedge(omega1).is_zero()),
        ("Omega^omega2 = 0".into(), curvature.wedge(omega2).is_zero()),
        ("Omega^omega1_theta = 0".into(), curvature.wedge(&w1t).is_zero()),
        ("Omega^omega2_theta = 0".into(), curvature.wedge(&w2t).is_zero()),
    ];
    if !dom.is_zero() {
        return Ok(CircleBundleReport { checks, structure: None, balanced: None });
    }
    let total = x.central_extension(curvature)?;
    let structure = Su2Structure::new(total, Form::generator(5, 5), w1t.embed(5), w2t.embed(5), omega3.embed(5))?;
    let balanced = is_balanced_su2(&structure)?;
    Ok(CircleBundleReport { checks, structure: Some(structure), balanced: Some(balanced) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalCoupleReport {
    /// Closedness of `ω₁, ω₂, ω₃`.
    pub closed: [bool; 3],
    /// `ω₁∧ω₂, ω₁∧ω₃, ω₂∧ω₃` vanish.
    pub orthogonal: [bool; 3],
    pub squares: [Form; 3],
    pub squares_equal: bool,
}

impl ConformalCoupleReport {
    /// A conformal symplectic couple `(ω₁, ω₂)` with compatible `ω₃`;
    /// closedness of `ω₃` is reported but not required.
    pub fn pass(&self) -> bool {
        self.closed[0]
            && self.closed[1]
            && self.orthogonal.iter().all(|b| *b)
            && self.squares_equal
            && !self.squares[0].is_zero()
    }
}

pub fn check_conformal_couple(x: &LieAlgebra, omega1: &Form, omega2: &Form, omega3: &Form) -> Result<ConformalCoupleReport> {
    let squares = [omega1.wedge(omega1), omega2.wedge(omega2), omega3.wedge(omega3)];
    Ok(ConformalCoupleReport {
        closed: [x.d(omega1)?.is_zero(), x.d(omega2)?.is_zero(), x.d(omega3)?.is_zero()],
        orthogonal: [
            omega1.wedge(omega2).is_zero(),
            omega1.wedge(omega3).is_zero(),
            omega2.wedge(omega3).is_zero(),
        ],
        squares_equal: squares[0] == squares[1] && squares[1] == squares[2],
        squares,
    })
}
