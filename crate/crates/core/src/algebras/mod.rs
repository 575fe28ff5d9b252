//! Lie algebras given by structure equations `d e^i = Σ c^i_{jk} e^{jk}`.

mod compact;
pub mod grammar;

use std::fmt;

use num::Zero;

pub use compact::parse_compact;
pub use grammar::{parse_domain, parse_equations, parse_form, render_expr, FamilyDecl, Interval, Section, StructureFile};

use crate::error::{Error, Result};
use crate::exterior::{CoframeMap, Form, MultiIndex};
use crate::linalg::{self, Echelon};
use crate::scalars::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    differentials: Vec<Form>,
    name: Option<String>,
}

impl LieAlgebra {
    pub fn new(differentials: Vec<Form>) -> Result<Self> {
        let dim = differentials.len();
        for (i, f) in differentials.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch(f.dim(), dim));
            }
            if f.degree() != 2 && !f.is_zero() {
                return Err(Error::Invalid(format!("d e{} must be a 2-form", i + 1)));
            }
        }
        let differentials = differentials
            .into_iter()
            .map(|f| if f.is_zero() { Form::zero(dim, 2) } else { f })
            .collect();
        Ok(LieAlgebra { dim, differentials, name: None })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra { dim, differentials: vec![Form::zero(dim, 2); dim], name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `d e^i`, 1-based.
    pub fn de(&self, i: usize) -> &Form {
        &self.differentials[i - 1]
    }

    pub fn differentials(&self) -> &[Form] {
        &self.differentials
    }

    pub fn generator(&self, i: usize) -> Form {
        Form::generator(self.dim, i)
    }

    /// Structure constant `c^i_{jk}` (coefficient of `e^{jk}` in `d e^i`).
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.differentials[i - 1].coeff_of(&[j, k])
    }

    pub fn is_rational(&self) -> bool {
        self.differentials.iter().all(Form::is_rational)
    }

    /// Exterior derivative on invariant forms, extended as an antiderivation.
    pub fn d(&self, a: &Form) -> Result<Form> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch(a.dim(), self.dim));
        }
        let mut out = Form::zero(self.dim, a.degree() + 1);
        for (m, c) in a.terms() {
            let idx = m.indices();
            for (p, &i) in idx.iter().enumerate() {
                let de = &self.differentials[i - 1];
                if de.is_zero() {
                    continue;
                }
                let before = Form::basis(self.dim, &idx[..p]);
                let after = Form::basis(self.dim, &idx[p + 1..]);
                let mut term = before.wedge(de).wedge(&after).scale(c);
                if p % 2 == 1 {
                    term = term.neg();
                }
                out = out.add(&term);
            }
        }
        Ok(out)
    }

    pub fn check_jacobi(&self) -> JacobiReport {
        let offending = (1..=self.dim)
            .filter_map(|i| {
                let dd = self.d(self.de(i)).expect("same dimension");
                (!dd.is_zero()).then_some((i, dd))
            })
            .collect();
        JacobiReport { offending }
    }

    /// Matrix of `d` from degree `k` to `k+1`; column `c` is `d` of the
    /// `c`-th basis `k`-form.
    fn d_matrix(&self, k: usize) -> Result<Vec<Vec<Rational>>> {
        let src = MultiIndex::all(self.dim, k);
        let tgt_len = MultiIndex::all(self.dim, k + 1).len();
        let cols = src
            .iter()
            .map(|m| {
                let f = Form::from_terms(self.dim, k, [(*m, Scalar::one())]);
                let df = self.d(&f)?;
                if df.is_zero() {
                    Ok(vec![Rational::zero(); tgt_len])
                } else {
                    df.rational_vector()
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(if cols.is_empty() { vec![] } else { linalg::transpose(&cols) })
    }

    /// Chevalley–Eilenberg cohomology of the complex of invariant forms.
    pub fn ce_cohomology(&self, max_degree: usize) -> Result<CohomologyReport> {
        if !self.is_rational() {
            return Err(Error::Parametric("cohomology needs rational structure constants".into()));
        }
        let top = max_degree.min(self.dim);
        let mut degrees = Vec::new();
        for k in 0..=top {
            let width = MultiIndex::all(self.dim, k).len();
            let kernel = if k == self.dim {
                linalg::identity(width)
            } else {
                let m = self.d_matrix(k)?;
                if m.is_empty() {
                    linalg::identity(width)
                } else {
                    linalg::kernel(&m, width)
                }
            };
            // images of d_{k-1}, as rows in the degree-k coordinates
            let mut ech = Echelon::new(width);
            if k > 0 {
                let prev = self.d_matrix(k - 1)?;
                for col in linalg::transpose(&prev) {
                    ech.insert(&col);
                }
            }
            let mut reps = Vec::new();
            for v in &kernel {
                if ech.insert(v) {
                    reps.push(Form::from_rational_vector(self.dim, k, v));
                }
            }
            degrees.push(CohomologyDegree { degree: k, betti: reps.len(), representatives: reps });
        }
        Ok(CohomologyReport { dim: self.dim, degrees })
    }

    /// `𝔤 ⊕ ℝ`: a closed generator appended as `e^{n+1}`.
    pub fn extend_by_line(&self) -> LieAlgebra {
        let n = self.dim + 1;
        let mut diffs: Vec<Form> = self.differentials.iter().map(|f| f.embed(n)).collect();
        diffs.push(Form::zero(n, 2));
        LieAlgebra { dim: n, differentials: diffs, name: None }
    }

    /// Central extension by a closed 2-form: `e^{n+1}` with `d e^{n+1} = Ω`.
    pub fn central_extension(&self, omega: &Form) -> Result<LieAlgebra> {
        if omega.dim() != self.dim {
            return Err(Error::DimensionMismatch(omega.dim(), self.dim));
        }
        if omega.degree() != 2 && !omega.is_zero() {
            return Err(Error::Invalid("curvature form must be a 2-form".into()));
        }
        let dom = self.d(omega)?;
        if !dom.is_zero() {
            return Err(Error::Invalid(format!("curvature form is not closed: d Omega = {dom}")));
        }
        let mut ext = self.extend_by_line();
        ext.differentials[self.dim] = if omega.is_zero() { Form::zero(ext.dim, 2) } else { omega.embed(ext.dim) };
        Ok(ext)
    }

    /// Express the structure equations in the coframe `f^i = Σ_j m[i][j] e^j`
    /// and compare with `target`.
    pub fn verify_basis_change(&self, m: &CoframeMap, target: &LieAlgebra) -> Result<BasisChangeReport> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch(m.dim(), self.dim));
        }
        if target.dim != self.dim {
            return Err(Error::DimensionMismatch(target.dim, self.dim));
        }
        let inv = scalar_inverse(m.matrix())?;
        let back = CoframeMap::new(inv)?;
        // d f^i in e-coordinates, then rewritten with e^j = Σ inv[j][k] f^k
        let computed = (1..=self.dim)
            .map(|i| back.apply(&self.d(&m.image(i))?))
            .collect::<Result<Vec<_>>>()?;
        let pass = computed.iter().zip(&target.differentials).all(|(a, b)| a == b);
        let scaling_hint = if pass { None } else { diagonal_scaling(&computed, &target.differentials) };
        Ok(BasisChangeReport { computed, pass, scaling_hint })
    }
}

/// Gauss–Jordan inverse over scalars; pivots prefer rational entries.
pub fn scalar_inverse(a: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Scalar::from_int((i == j) as i64)));
            r
        })
        .collect();
    for c in 0..n {
        let candidates: Vec<usize> = (c..n).filter(|&i| !m[i][c].is_zero()).collect();
        let Some(&p) = candidates.iter().find(|&&i| m[i][c].is_rational()).or(candidates.first()) else {
            return Err(Error::Singular);
        };
        m.swap(c, p);
        let inv = m[c][c].recip()?;
        m[c] = m[c].iter().map(|x| x * &inv).collect();
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let pivot = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Per-generator factors `λ_i` with `computed_i = λ_i · target_i`, when such
/// a relation holds for every generator.
fn diagonal_scaling(computed: &[Form], target: &[Form]) -> Option<Vec<Scalar>> {
    computed
        .iter()
        .zip(target)
        .map(|(a, b)| {
            if a.is_zero() && b.is_zero() {
                return Some(Scalar::one());
            }
            let (m, cb) = b.terms().next()?;
            let lambda = a.coeff(*m).div(cb).ok()?;
            (!lambda.is_zero() && b.scale(&lambda) == *a).then_some(lambda)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    /// `(i, d²e^i)` for every generator where it fails to vanish.
    pub offending: Vec<(usize, Form)>,
}

impl JacobiReport {
    pub fn pass(&self) -> bool {
        self.offending.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyDegree {
    pub degree: usize,
    pub betti: usize,
    pub representatives: Vec<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dim: usize,
    pub degrees: Vec<CohomologyDegree>,
}

impl CohomologyReport {
    pub fn betti(&self, k: usize) -> Option<usize> {
        self.degrees.get(k).map(|d| d.betti)
    }

    /// Alternating sum, meaningful only when every degree up to the
    /// dimension was computed.
    pub fn euler_characteristic(&self) -> Option<i64> {
        (self.degrees.len() == self.dim + 1).then(|| {
            self.degrees.iter().map(|d| if d.degree % 2 == 0 { d.betti as i64 } else { -(d.betti as i64) }).sum()
        })
    }
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.degrees {
            let reps: Vec<String> = d.representatives.iter().map(|r| format!("[{r}]")).collect();
            writeln!(f, "b{} = {}: {}", d.degree, d.betti, reps.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChangeReport {
    /// `d f^i` written in the `f` coframe.
    pub computed: Vec<Form>,
    pub pass: bool,
    /// Factors `λ_i` with `d f^i = λ_i · target_i` when the match only holds
    /// up to diagonal rescaling. Never counts as a pass.
    pub scaling_hint: Option<Vec<Scalar>>,
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.differentials.iter().enumerate() {
            writeln!(f, "d e{} = {}", i + 1, d)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
