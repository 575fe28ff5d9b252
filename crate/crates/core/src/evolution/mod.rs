//! One-parameter families of SU(2)-structures: the balanced and hypo
//! evolution equations, suspension to the product with an interval, and
//! orthonormal coframe and volume checks along the family.

use std::fmt;

use crate::algebras::{Interval, LieAlgebra, StructureFile};
use crate::error::{Error, Result};
use crate::exterior::{CoframeMap, Form};
use crate::scalars::{fmt_rational, Rational, Scalar};
use crate::structures::{
    is_balanced_su2, su3_metric_parts, suspend_su2, validate_su2, ResidualReport, Su2Structure,
};


/// A family `t ↦ (η(t), ω₁(t), ω₂(t), ω₃(t))` on a fixed 5-dimensional
/// algebra, valid on a union of open intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    pub structure: Su2Structure,
    pub domain: Vec<Interval>,
}

/// Interior points used for positivity and sign checks.
pub fn samples(i: &Interval) -> Vec<Rational> {
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    match (&i.lo, &i.hi) {
        (None, None) => vec![r(-1, 1), r(0, 1), r(2, 1)],
        (Some(lo), None) => vec![lo + r(1, 2), lo + r(1, 1), lo + r(5, 1)],
        (None, Some(hi)) => vec![hi - r(1, 2), hi - r(1, 1), hi - r(5, 1)],
        (Some(lo), Some(hi)) => {
            let w = hi - lo;
            vec![lo + &w * r(1, 4), lo + &w * r(1, 2), lo + &w * r(3, 4)]
        }
    }
}

impl ParamFamily {
    /// Checks that the quadruplet is an SU(2)-structure at sample points of
    /// every domain interval.
    pub fn new(structure: Su2Structure, domain: Vec<Interval>) -> Result<Self> {
        if !structure.algebra.is_rational() {
            return Err(Error::Unsupported("structure constants must be rational".into()));
        }
        if domain.is_empty() {
            return Err(Error::Invalid("empty domain".into()));
        }
        let fam = ParamFamily { structure, domain };
        for i in &fam.domain {
            for t0 in samples(i) {
                let r = validate_su2(&fam.structure, Some(&t0))?;
                if !r.pass() {
                    return Err(Error::Invalid(format!("not an SU(2)-structure at t = {}:\n{r}", fmt_rational(&t0))));
                }
            }
        }
        Ok(fam)
    }

    /// Reads `eta`, `omega1`, `omega2`, `omega3` and the domain from the
    /// `[family]` section.
    pub fn from_file(file: &StructureFile) -> Result<Self> {
        let decl = file.family()?.ok_or_else(|| Error::Missing("[family] section".into()))?;
        let get = |n: &str| decl.form(n).cloned().ok_or_else(|| Error::Missing(n.to_string()));
        let s = Su2Structure::new(file.algebra.clone(), get("eta")?, get("omega1")?, get("omega2")?, get("omega3")?)?;
        ParamFamily::new(s, decl.domain)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.structure.algebra
    }

    pub fn in_domain(&self, t0: &Rational) -> bool {
        self.domain.iter().any(|i| i.contains(t0))
    }

    pub fn at(&self, t0: &Rational) -> Result<Su2Structure> {
        self.structure.at(t0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionReport {
    /// `∂_t(ω₁∧η) + dω₂`, `∂_t(ω₂∧η) − dω₁`, `∂_t(ω₃²) + 2d(ω₃∧η)`.
    pub evolution: ResidualReport,
    /// The balanced condition at every `t`.
    pub balanced: ResidualReport,
}

impl EvolutionReport {
    pub fn pass(&self) -> bool {
        self.evolution.pass() && self.balanced.pass()
    }
}

impl fmt::Display for EvolutionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.evolution, self.balanced)
    }
}

pub fn verify_balanced_evolution(fam: &ParamFamily) -> Result<EvolutionReport> {
    let s = &fam.structure;
    let l = &s.algebra;
    let w1e = s.omega1.wedge(&s.eta);
    let w2e = s.omega2.wedge(&s.eta);
    let w33 = s.omega3.wedge(&s.omega3);
    let w3e = s.omega3.wedge(&s.eta);
    let two = Scalar::from_int(2);
    let evolution = ResidualReport {
        residuals: vec![
            ("dt(omega1^eta) + d(omega2)".into(), w1e.partial_t().add(&l.d(&s.omega2)?)),
            ("dt(omega2^eta) - d(omega1)".into(), w2e.partial_t().sub(&l.d(&s.omega1)?)),
            ("dt(omega3^omega3) + 2 d(omega3^eta)".into(), w33.partial_t().add(&l.d(&w3e)?.scale(&two))),
        ],
    };
    Ok(EvolutionReport { evolution, balanced: is_balanced_su2(s)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypoEvolutionReport {
    /// `∂_t(ω₁∧η) + dω₂`, `∂_t(ω₂∧η) − dω₁`, `∂_tω₃ + dη`.
    pub residuals: ResidualReport,
    pub balanced_evolution: bool,
}

impl HypoEvolutionReport {
    pub fn pass(&self) -> bool {
        self.residuals.pass()
    }

    /// A hypo-evolving family also satisfies the balanced evolution.
    pub fn consistent(&self) -> bool {
        !self.pass() || self.balanced_evolution
    }
}

pub fn verify_hypo_evolution(fam: &ParamFamily) -> Result<HypoEvolutionReport> {
    let s = &fam.structure;
    let l = &s.algebra;
    let residuals = ResidualReport {
        residuals: vec![
            ("dt(omega1^eta) + d(omega2)".into(), s.omega1.wedge(&s.eta).partial_t().add(&l.d(&s.omega2)?)),
            ("dt(omega2^eta) - d(omega1)".into(), s.omega2.wedge(&s.eta).partial_t().sub(&l.d(&s.omega1)?)),
            ("dt(omega3) + d(eta)".into(), s.omega3.partial_t().add(&l.d(&s.eta)?)),
        ],
    };
    let balanced_evolution = verify_balanced_evolution(fam)?.evolution.pass();
    Ok(HypoEvolutionReport { residuals, balanced_evolution })
}

/// The SU(3)-structure on `G × I` with `e^6 = dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspendedStructure {
    pub base: ParamFamily,
    pub ambient: LieAlgebra,
    pub f: Form,
    pub psi_plus: Form,
    pub psi_minus: Form,
    /// Present when the metric can be inverted exactly.
    pub j: Option<CoframeMap>,
}

impl SuspendedStructure {
    /// `d = d_N + dt ∧ ∂_t`.
    pub fn d_total(&self, a: &Form) -> Result<Form> {
        let dt = Form::generator(6, 6);
        Ok(self.ambient.d(a)?.add(&dt.wedge(&a.partial_t())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessReport {
    /// `d(F²)`, `dΨ₊`, `dΨ₋`.
    pub residuals: ResidualReport,
    pub df: Form,
}

impl ClosednessReport {
    pub fn pass(&self) -> bool {
        self.residuals.pass()
    }

    pub fn integrable_kahler(&self) -> bool {
        self.df.is_zero()
    }
}

pub fn suspend_family(fam: &ParamFamily) -> Result<(SuspendedStructure, ClosednessReport)> {
    let sun = suspend_su2(&fam.structure)?;
    let s = SuspendedStructure {
        base: fam.clone(),
        ambient: sun.algebra,
        f: sun.f,
        psi_plus: sun.psi_plus,
        psi_minus: sun.psi_minus,
        j: sun.j,
    };
    let report = ClosednessReport {
        residuals: ResidualReport {
            residuals: vec![
                ("d(F^2)".into(), s.d_total(&s.f.wedge(&s.f))?),
                ("d(psi_plus)".into(), s.d_total(&s.psi_plus)?),
                ("d(psi_minus)".into(), s.d_total(&s.psi_minus)?),
            ],
        },
        df: s.d_total(&s.f)?,
    };
    Ok((s, report))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoframeReport {
    /// `g(e_a, e_b) − Σ_i α^i(e_a) α^i(e_b)`, each required to vanish.
    pub defect: Vec<Vec<Scalar>>,
}

impl CoframeReport {
    pub fn pass(&self) -> bool {
        self.defect.iter().all(|r| r.iter().all(Scalar::is_zero))
    }
}

/// Checks `g = Σ α^i ⊗ α^i` as identities in `t`, comparing against the
/// unnormalised metric so that no division is needed.
pub fn verify_orthonormal_coframe(s: &SuspendedStructure, alphas: &[Form]) -> Result<CoframeReport> {
    if alphas.len() != 6 {
        return Err(Error::Invalid(format!("expected 6 one-forms, got {}", alphas.len())));
    }
    for a in alphas {
        if a.dim() != 6 {
            return Err(Error::DimensionMismatch(a.dim(), 6));
        }
        if !a.is_zero() && a.degree() != 1 {
            return Err(Error::Invalid("coframe entries must be 1-forms".into()));
        }
    }
    let (b, norm) = su3_metric_parts(&s.f, &s.psi_plus)?;
    let p: Vec<Vec<Scalar>> = alphas.iter().map(|a| (1..=6).map(|j| a.coeff_of(&[j])).collect()).collect();
    let mut defect = vec![vec![Scalar::zero(); 6]; 6];
    for x in 0..6 {
        for y in 0..6 {
            let gram = (0..6).fold(Scalar::zero(), |acc, i| &acc + &(&p[i][x] * &p[i][y]));
            defect[x][y] = &b[x][y] - &(&norm * &gram);
        }
    }
    Ok(CoframeReport { defect })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport {
    /// Coefficient of `e^{12345}` in `ω₁∧ω₁∧η`.
    pub coefficient: Scalar,
    /// `(interval, sample, value)` for each domain sample.
    pub signs: Vec<(Interval, Rational, f64)>,
}

impl VolumeReport {
    /// The sign is constant on each interval.
    pub fn constant_sign_per_interval(&self) -> bool {
        self.domain_signs().iter().all(|s| s.is_some())
    }

    /// Sign on each domain interval, or `None` if samples disagree or vanish.
    pub fn domain_signs(&self) -> Vec<Option<i8>> {
        let mut out: Vec<(Interval, Option<i8>)> = Vec::new();
        for (i, _, v) in &self.signs {
            let s = if *v > 0.0 { Some(1) } else if *v < 0.0 { Some(-1) } else { None };
            match out.iter_mut().find(|(j, _)| j == i) {
                Some((_, cur)) => {
                    if *cur != s {
                        *cur = None;
                    }
                }
                None => out.push((i.clone(), s)),
            }
        }
        out.into_iter().map(|(_, s)| s).collect()
    }
}

impl fmt::Display for VolumeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "omega1^omega1^eta = ({}) e12345", self.coefficient)?;
        for (i, t0, v) in &self.signs {
            writeln!(f, "  t = {} in {i}: {v:+.6}", fmt_rational(t0))?;
        }
        Ok(())
    }
}

pub fn family_volume(fam: &ParamFamily) -> Result<VolumeReport> {
    let s = &fam.structure;
    let coefficient = s.omega1.wedge(&s.omega1).wedge(&s.eta).top_coefficient();
    let mut signs = Vec::new();
    for i in &fam.domain {
        for t0 in samples(i) {
            signs.push((i.clone(), t0.clone(), coefficient.eval(&t0)?));
        }
    }
    Ok(VolumeReport { coefficient, signs })
}
