//! SU(2)-structures on 5-dimensional algebras and SU(n)-structures in
//! dimension 2n: validity, balanced and hypo conditions, hypersurface
//! restriction, suspension and the circle-bundle construction.

mod su2;
mod sun;

use std::fmt;

pub use su2::{
    check_conformal_couple, circle_bundle_structure, is_balanced_su2, is_hypo, su2_residual_table, validate_su2,
    CircleBundleReport, ConformalCoupleReport, Su2Report,
};
pub(crate) use sun::su3_metric_parts;
pub use sun::{
    is_balanced_sun, restrict_to_hypersurface, su3_metric, suspend_su2, validate_sun, SunBalanceReport, SunReport,
};

use crate::algebras::LieAlgebra;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::generic::Field;
use crate::scalars::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Su2Structure {
    pub algebra: LieAlgebra,
    pub eta: Form,
    pub omega1: Form,
    pub omega2: Form,
    pub omega3: Form,
}

impl Su2Structure {
    pub fn new(algebra: LieAlgebra, eta: Form, omega1: Form, omega2: Form, omega3: Form) -> Result<Self> {
        if algebra.dim() != 5 {
            return Err(Error::Invalid(format!("SU(2)-structures live on 5-dimensional algebras, not {}", algebra.dim())));
        }
        for (name, f, deg) in [("eta", &eta, 1), ("omega1", &omega1, 2), ("omega2", &omega2, 2), ("omega3", &omega3, 2)] {
            if f.dim() != 5 {
                return Err(Error::DimensionMismatch(f.dim(), 5));
            }
            if !f.is_zero() && f.degree() != deg {
                return Err(Error::Invalid(format!("{name} must be a {deg}-form")));
            }
        }
        let fix = |f: Form, deg| if f.is_zero() { Form::zero(5, deg) } else { f };
        Ok(Su2Structure {
            algebra,
            eta: fix(eta, 1),
            omega1: fix(omega1, 2),
            omega2: fix(omega2, 2),
            omega3: fix(omega3, 2),
        })
    }

    /// `η = e^1, ω₁ = e^{24} + e^{53}, ω₂ = e^{25} + e^{34}, ω₃ = e^{23} + e^{45}`.
    pub fn standard(algebra: LieAlgebra) -> Result<Self> {
        let e = |i: &[usize]| Form::basis(5, i);
        Su2Structure::new(
            algebra,
            e(&[1]),
            e(&[2, 4]).add(&e(&[5, 3])),
            e(&[2, 5]).add(&e(&[3, 4])),
            e(&[2, 3]).add(&e(&[4, 5])),
        )
    }

    pub fn forms(&self) -> [&Form; 4] {
        [&self.eta, &self.omega1, &self.omega2, &self.omega3]
    }

    pub fn is_constant(&self) -> bool {
        self.forms().iter().all(|f| f.is_constant())
    }

    /// Substitute `t = t0` in every form.
    pub fn at(&self, t0: &Rational) -> Result<Su2Structure> {
        Ok(Su2Structure {
            algebra: self.algebra.clone(),
            eta: self.eta.substitute(t0)?,
            omega1: self.omega1.substitute(t0)?,
            omega2: self.omega2.substitute(t0)?,
            omega3: self.omega3.substitute(t0)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SunStructure {
    pub algebra: LieAlgebra,
    pub f: Form,
    pub psi_plus: Form,
    pub psi_minus: Form,
    pub j: Option<crate::exterior::CoframeMap>,
}

impl SunStructure {
    pub fn new(
        algebra: LieAlgebra,
        f: Form,
        psi_plus: Form,
        psi_minus: Form,
        j: Option<crate::exterior::CoframeMap>,
    ) -> Result<Self> {
        let dim = algebra.dim();
        if dim % 2 == 1 {
            return Err(Error::Invalid(format!("SU(n)-structures need even dimension, not {dim}")));
        }
        let n = dim / 2;
        for (name, form, deg) in [("F", &f, 2), ("psi_plus", &psi_plus, n), ("psi_minus", &psi_minus, n)] {
            if form.dim() != dim {
                return Err(Error::DimensionMismatch(form.dim(), dim));
            }
            if !form.is_zero() && form.degree() != deg {
                return Err(Error::Invalid(format!("{name} must be a {deg}-form")));
            }
        }
        if let Some(j) = &j {
            if j.dim() != dim {
                return Err(Error::DimensionMismatch(j.dim(), dim));
            }
        }
        Ok(SunStructure { algebra, f, psi_plus, psi_minus, j })
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.algebra.dim() / 2
    }

    /// `F = Σ e^{2k-1,2k}`, `Ψ = Π (e^{2k-1} + i e^{2k})` with the matching `J`.
    pub fn standard(algebra: LieAlgebra) -> Result<Self> {
        let dim = algebra.dim();
        let n = dim / 2;
        let f = (0..n).fold(Form::zero(dim, 2), |acc, k| acc.add(&Form::basis(dim, &[2 * k + 1, 2 * k + 2])));
        // expand the product of (e^{2k-1} + i e^{2k}) keeping real and imaginary parts
        let mut re = Form::scalar(dim, Scalar::one());
        let mut im = Form::zero(dim, 0);
        for k in 0..n {
            let a = Form::generator(dim, 2 * k + 1);
            let b = Form::generator(dim, 2 * k + 2);
            let new_re = re.wedge(&a).sub(&im.wedge(&b));
            let new_im = re.wedge(&b).add(&im.wedge(&a));
            re = new_re;
            im = new_im;
        }
        let mut m = vec![vec![Rational::from_integer(0.into()); dim]; dim];
        for k in 0..n {
            m[2 * k][2 * k + 1] = Rational::from_integer((-1).into());
            m[2 * k + 1][2 * k] = Rational::from_integer(1.into());
        }
        let j = crate::exterior::CoframeMap::from_rational(&m)?;
        SunStructure::new(algebra, f, re, im, Some(j))
    }
}

/// Named residual forms, each expected to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    pub residuals: Vec<(String, Form)>,
}

impl ResidualReport {
    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|(_, f)| f.is_zero())
    }

    pub fn get(&self, name: &str) -> Option<&Form> {
        self.residuals.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, r) in &self.residuals {
            writeln!(f, "{name} = {r}{}", if r.is_zero() { "" } else { "  (nonzero)" })?;
        }
        Ok(())
    }
}

pub(crate) type Mat<F> = Vec<Vec<F>>;

/// Several matrices of constant scalars, all exact when every entry is
/// rational and all floating point otherwise.
#[derive(Clone, Debug)]
pub(crate) enum NumMats {
    Exact(Vec<Mat<Rational>>),
    Float(Vec<Mat<f64>>),
}

impl NumMats {
    pub(crate) fn is_exact(&self) -> bool {
        matches!(self, NumMats::Exact(_))
    }
}

pub(crate) fn numeric(mats: &[Mat<Scalar>]) -> Result<NumMats> {
    let exact = mats.iter().all(|m| m.iter().all(|r| r.iter().all(Scalar::is_rational)));
    if exact {
        return Ok(NumMats::Exact(
            mats.iter().map(|m| m.iter().map(|r| r.iter().map(|s| s.as_rational().unwrap()).collect()).collect()).collect(),
        ));
    }
    let zero = Rational::from_integer(0.into());
    let eval = |s: &Scalar| -> Result<f64> {
        if !s.is_constant() {
            return Err(Error::Parametric(format!("coefficient {s} depends on t")));
        }
        s.eval(&zero)
    };
    mats.iter()
        .map(|m| m.iter().map(|r| r.iter().map(eval).collect::<Result<Vec<f64>>>()).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map(NumMats::Float)
}

/// Skew matrix `W[a][b] = ω(e_a, e_b)` of a 2-form.
pub(crate) fn two_form_matrix(w: &Form) -> Vec<Vec<Scalar>> {
    let n = w.dim();
    (1..=n).map(|a| (1..=n).map(|b| if a == b { Scalar::zero() } else { w.eval2(a, b) }).collect()).collect()
}

pub(crate) fn to_f64_rows<F: Field>(m: &[Vec<F>]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(F::to_f64).collect()).collect()
}

#[cfg(test)]
mod tests;
