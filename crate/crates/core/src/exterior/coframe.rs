use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{Rational, Scalar};

use super::{Form, MultiIndex};

/// Linear endomorphism of the coframe, `J e^i = Σ_j m[i][j] e^j`, extended to
/// forms factor by factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoframeMap {
    m: Vec<Vec<Scalar>>,
}

impl CoframeMap {
    pub fn new(m: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = m.len();
        if let Some(row) = m.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(row.len(), n));
        }
        Ok(CoframeMap { m })
    }

    pub fn from_rational(m: &[Vec<Rational>]) -> Result<Self> {
        Self::new(m.iter().map(|r| r.iter().cloned().map(Scalar::from_rational).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        CoframeMap::from_rational(&linalg::identity(n)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i][j]
    }

    pub fn rational_matrix(&self) -> Option<Vec<Vec<Rational>>> {
        self.m.iter().map(|r| r.iter().map(Scalar::as_rational).collect()).collect()
    }

    /// Image of the generator `e^i` (1-based).
    pub fn image(&self, i: usize) -> Form {
        let n = self.dim();
        Form::from_terms(n, 1, (1..=n).map(|j| (MultiIndex::single(j), self.m[i - 1][j - 1].clone())))
    }

    pub fn apply(&self, a: &Form) -> Result<Form> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch(a.dim(), self.dim()));
        }
        let images: Vec<Form> = (1..=self.dim()).map(|i| self.image(i)).collect();
        let mut out = Form::zero(a.dim(), a.degree());
        for (m, c) in a.terms() {
            let mut prod = Form::scalar(a.dim(), c.clone());
            for i in m.indices() {
                prod = prod.wedge(&images[i - 1]);
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// `self ∘ other` on 1-forms: first `other`, then `self`.
    pub fn compose(&self, other: &CoframeMap) -> CoframeMap {
        let n = self.dim();
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Scalar::zero(), |acc, k| &acc + &(&other.m[i][k] * &self.m[k][j]))
                    })
                    .collect()
            })
            .collect();
        CoframeMap { m }
    }

    /// True when `J² = -1` on the coframe.
    pub fn is_complex_structure(&self) -> bool {
        let sq = self.compose(self);
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| sq.m[i][j] == Scalar::from_int(if i == j { -1 } else { 0 })))
    }
}
