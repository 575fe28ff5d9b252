//! Levi-Civita and Bismut connections of a left-invariant Hermitian metric
//! in an orthonormal coframe, their curvature, covariant derivatives of the
//! curvature and the infinitesimal holonomy algebra.
//!
//! Frame vectors `e_i` are dual to the coframe `e^i`, brackets come from
//! `dα(X, Y) = −α([X, Y])`, and `Γ^i_{jk}` is the `e_i` component of
//! `∇_{e_k} e_j`, so that `ω^i_j = Σ_k Γ^i_{jk} e^k`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::algebras::{LieAlgebra, StructureFile};
use crate::error::{Error, Result};
use crate::exterior::{CoframeMap, Form};
use crate::linalg::{self, Echelon};
use crate::scalars::{Rational, Scalar};


type Mat = Vec<Vec<Rational>>;
/// `gamma[i][j][k] = Γ^i_{jk}`, zero-based.
type Christoffel = Vec<Vec<Vec<Rational>>>;

fn rational(s: &Scalar) -> Result<Rational> {
    s.as_rational().ok_or_else(|| Error::Unsupported(format!("non-rational coefficient {s}")))
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// An algebra whose coframe `e^1, …, e^{2n}` is declared orthonormal,
/// together with an orthogonal complex structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricFrame {
    pub algebra: LieAlgebra,
    pub j: CoframeMap,
    jm: Mat,
    /// `brackets[k][a][b]`: the `e_k` component of `[e_a, e_b]`.
    brackets: Vec<Mat>,
}

impl MetricFrame {
    pub fn new(algebra: LieAlgebra, j: CoframeMap) -> Result<Self> {
        let n = algebra.dim();
        if j.dim() != n {
            return Err(Error::DimensionMismatch(j.dim(), n));
        }
        if n % 2 == 1 {
            return Err(Error::Invalid(format!("odd dimension {n}")));
        }
        let jm = j.rational_matrix().ok_or_else(|| Error::Unsupported("J must have rational entries".into()))?;
        if !j.is_complex_structure() {
            return Err(Error::Invalid("J^2 != -1".into()));
        }
        if linalg::matmul(&jm, &linalg::transpose(&jm)) != linalg::identity(n) {
            return Err(Error::Invalid("J is not orthogonal for g = sum e^i (x) e^i".into()));
        }
        let mut brackets = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (k, row) in brackets.iter_mut().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        row[a][b] = -rational(&algebra.de(k + 1).coeff_of(&[a + 1, b + 1]))?;
                    }
                }
            }
        }
        Ok(MetricFrame { algebra, j, jm, brackets })
    }

    /// Reads `F` and `J` from the `[structure]` section.
    pub fn from_file(file: &StructureFile) -> Result<(MetricFrame, Form)> {
        let sec = file.section("structure").ok_or_else(|| Error::Missing("[structure] section".into()))?;
        let j = sec.j.clone().ok_or_else(|| Error::Missing("J in [structure]".into()))?;
        let f = sec.require("F")?.clone();
        Ok((MetricFrame::new(file.algebra.clone(), j)?, f))
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Coframe matrix of `J`.
    pub fn j_matrix(&self) -> &Mat {
        &self.jm
    }

    /// The fundamental form `F(X, Y) = g(JX, Y)` written as `Σ_{a<b} F_{ab} e^{ab}`
    /// with `F_{ab} = M_{ba}` for the coframe matrix `M`.
    pub fn fundamental_form(&self) -> Form {
        let n = self.dim();
        let mut f = Form::zero(n, 2);
        for a in 0..n {
            for b in a + 1..n {
                if !self.jm[b][a].is_zero() {
                    f = f.add(&Form::basis(n, &[a + 1, b + 1]).scale_rational(&self.jm[b][a]));
                }
            }
        }
        f
    }
}

/// Connection coefficients plus the torsion they were built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionSheet {
    pub gamma: Christoffel,
    /// `torsion[i][j][k] = T_{ijk}`.
    pub torsion: Vec<Vec<Vec<Rational>>>,
}

impl ConnectionSheet {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `ω^i_j`, one-based.
    pub fn omega(&self, i: usize, j: usize) -> Form {
        let n = self.dim();
        let v: Vec<Rational> = (0..n).map(|k| self.gamma[i - 1][j - 1][k].clone()).collect();
        Form::from_rational_vector(n, 1, &v)
    }

    /// `τ^i = Σ_{j<k} T_{ijk} e^{jk}`, one-based.
    pub fn tau(&self, i: usize) -> Form {
        let n = self.dim();
        let mut f = Form::zero(n, 2);
        for j in 0..n {
            for k in j + 1..n {
                let c = &self.torsion[i - 1][j][k];
                if !c.is_zero() {
                    f = f.add(&Form::basis(n, &[j + 1, k + 1]).scale_rational(c));
                }
            }
        }
        f
    }

    pub fn is_skew(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.gamma[i][j][k] == -self.gamma[j][i][k].clone())))
    }

    /// `de^i + Σ_j ω^i_j ∧ e^j − τ^i` for each `i`.
    pub fn cartan_residuals(&self, l: &LieAlgebra) -> Result<Vec<Form>> {
        let n = self.dim();
        (1..=n)
            .map(|i| {
                let mut f = l.de(i).clone();
                for j in 1..=n {
                    f = f.add(&self.omega(i, j).wedge(&Form::generator(n, j)));
                }
                Ok(f.sub(&self.tau(i)))
            })
            .collect()
    }

    /// `∇J = 0`: each `Γ_k = (Γ^i_{jk})_{ij}` commutes with `J`.
    pub fn preserves_j(&self, m: &MetricFrame) -> bool {
        let n = self.dim();
        (0..n).all(|k| {
            let g: Mat = (0..n).map(|i| (0..n).map(|j| self.gamma[i][j][k].clone()).collect()).collect();
            linalg::matmul(&g, &m.jm) == linalg::matmul(&m.jm, &g)
        })
    }

    /// The nonzero `ω^i_j` with `i < j`.
    pub fn nonzero_forms(&self) -> Vec<(usize, usize, Form)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let w = self.omega(i, j);
                if !w.is_zero() {
                    out.push((i, j, w));
                }
            }
        }
        out
    }
}

impl fmt::Display for ConnectionSheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, w) in self.nonzero_forms() {
            writeln!(f, "omega^{i}_{j} = {w}")?;
        }
        Ok(())
    }
}

/// `T = J dF` and its components `T_{ijk}`.
pub fn torsion_form(m: &MetricFrame, f: &Form) -> Result<(Form, Vec<Vec<Vec<Rational>>>)> {
    if m.j.apply(f)? != *f {
        return Err(Error::Invalid("F is not J-invariant".into()));
    }
    let t = m.j.apply(&m.algebra.d(f)?)?;
    let n = m.dim();
    let mut comps = vec![vec![vec![Rational::zero(); n]; n]; n];
    for (i, plane) in comps.iter_mut().enumerate() {
        for (j, row) in plane.iter_mut().enumerate() {
            for (k, c) in row.iter_mut().enumerate() {
                *c = rational(&t.coeff_of(&[i + 1, j + 1, k + 1]))?;
            }
        }
    }
    Ok((t, comps))
}

/// Koszul formula `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(m: &MetricFrame) -> ConnectionSheet {
    let n = m.dim();
    let b = &m.brackets;
    let mut gamma = vec![vec![vec![Rational::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let s = &b[i][k][j] - &b[k][j][i] + &b[j][i][k];
                gamma[i][j][k] = s * half();
            }
        }
    }
    ConnectionSheet { gamma, torsion: vec![vec![vec![Rational::zero(); n]; n]; n] }
}

fn fundamental_form_check(m: &MetricFrame, f: &Form) -> Result<()> {
    if *f != m.fundamental_form() {
        return Err(Error::Invalid(format!(
            "F = {f} is not the fundamental form {} of (g, J)",
            m.fundamental_form()
        )));
    }
    Ok(())
}

/// `Γ^B = Γ^{LC} + ½T` in the orthonormal frame.
pub fn bismut_connection(m: &MetricFrame, f: &Form) -> Result<ConnectionSheet> {
    fundamental_form_check(m, f)?;
    let (_, t) = torsion_form(m, f)?;
    let mut c = levi_civita(m);
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c.gamma[i][j][k] += &t[k][j][i] * half();
            }
        }
    }
    c.torsion = t;
    Ok(c)
}

/// Solves `de^i + Σ ω^i_j ∧ e^j = τ^i` with `ω^i_j + ω^j_i = 0` directly as a
/// linear system in the `Γ^i_{jk}`, `i < j`.
pub fn solve_structure_equations(m: &MetricFrame, torsion: &[Vec<Vec<Rational>>]) -> Result<ConnectionSheet> {
    let n = m.dim();
    // unknown index of Γ^i_{jk}, i < j
    let mut index = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let next = index.len();
                index.insert((i, j, k), next);
            }
        }
    }
    let unknowns = index.len();
    let coeff = |i: usize, j: usize, k: usize| -> Option<(usize, Rational)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some((index[&(i, j, k)], Rational::one())),
            std::cmp::Ordering::Greater => Some((index[&(j, i, k)], -Rational::one())),
            std::cmp::Ordering::Equal => None,
        }
    };
    let mut rows = Vec::new();
    for i in 0..n {
        let de = m.algebra.de(i + 1);
        for a in 0..n {
            for b in a + 1..n {
                // coefficient of e^{ab}: Γ^i_{ba} − Γ^i_{ab} = T_{iab} − (de^i)_{ab}
                let mut row = vec![Rational::zero(); unknowns + 1];
                if let Some((u, s)) = coeff(i, b, a) {
                    row[u] += s;
                }
                if let Some((u, s)) = coeff(i, a, b) {
                    row[u] -= s;
                }
                row[unknowns] = &torsion[i][a][b] - rational(&de.coeff_of(&[a + 1, b + 1]))?;
                rows.push(row);
            }
        }
    }
    let pivots = linalg::rref(&mut rows);
    if pivots.contains(&unknowns) {
        return Err(Error::Invalid("the structure equations have no skew solution".into()));
    }
    if pivots.len() != unknowns {
        return Err(Error::Singular);
    }
    let mut gamma = vec![vec![vec![Rational::zero(); n]; n]; n];
    for (r, &p) in pivots.iter().enumerate() {
        let (&(i, j, k), _) = index.iter().find(|(_, &u)| u == p).unwrap();
        let v = rows[r][unknowns].clone();
        gamma[j][i][k] = -v.clone();
        gamma[i][j][k] = v;
    }
    Ok(ConnectionSheet { gamma, torsion: torsion.to_vec() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionChecks {
    pub skew: bool,
    pub cartan: bool,
    pub hermitian: bool,
    /// Agreement with the direct solution of the structure equations.
    pub matches_direct_solve: bool,
}

impl ConnectionChecks {
    pub fn pass(&self) -> bool {
        self.skew && self.cartan && self.hermitian && self.matches_direct_solve
    }
}

pub fn check_connection(m: &MetricFrame, c: &ConnectionSheet) -> Result<ConnectionChecks> {
    let direct = solve_structure_equations(m, &c.torsion)?;
    Ok(ConnectionChecks {
        skew: c.is_skew(),
        cartan: c.cartan_residuals(&m.algebra)?.iter().all(Form::is_zero),
        hermitian: c.preserves_j(m),
        matches_direct_solve: direct.gamma == c.gamma,
    })
}

/// `Ω^i_j`, stored as `R^i_{jkl} = Ω^i_j(e_k, e_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureSheet {
    pub omega: Vec<Vec<Form>>,
    pub tensor: Tensor,
}

impl CurvatureSheet {
    /// `Ω^i_j`, one-based.
    pub fn form(&self, i: usize, j: usize) -> &Form {
        &self.omega[i - 1][j - 1]
    }

    pub fn is_skew(&self) -> bool {
        let n = self.omega.len();
        (0..n).all(|i| (0..n).all(|j| self.omega[i][j] == self.omega[j][i].neg()))
    }

    pub fn nonzero_forms(&self) -> Vec<(usize, usize, &Form)> {
        let n = self.omega.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.omega[i][j].is_zero() {
                    out.push((i + 1, j + 1, &self.omega[i][j]));
                }
            }
        }
        out
    }

    /// `Σ_j Ω^i_j ∧ e^j`; vanishes for torsion-free connections only.
    pub fn bianchi_residuals(&self) -> Vec<Form> {
        let n = self.omega.len();
        (0..n)
            .map(|i| (0..n).fold(Form::zero(n, 3), |acc, j| acc.add(&self.omega[i][j].wedge(&Form::generator(n, j + 1)))))
            .collect()
    }
}

impl fmt::Display for CurvatureSheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, j, w) in self.nonzero_forms() {
            writeln!(f, "Omega^{i}_{j} = {w}")?;
        }
        Ok(())
    }
}

/// Sparse tensor with one upper index and `rank` lower indices; keys are
/// `[i, j1, …, j_rank]`, zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub dim: usize,
    pub rank: usize,
    pub entries: BTreeMap<Vec<u8>, Rational>,
}

impl Tensor {
    fn add_to(&mut self, key: Vec<u8>, v: Rational) {
        let e = self.entries.entry(key).or_insert_with(Rational::zero);
        *e += v;
    }

    fn prune(&mut self) {
        self.entries.retain(|_, v| !v.is_zero());
    }

    pub fn get(&self, key: &[u8]) -> Rational {
        self.entries.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(∇T)^i_{j…m} = Γ^i_{rm}T^r_{j…} − Σ_slots Γ^r_{x m}T^i_{…r…}`, with the
    /// derivative direction appended as the last lower index.
    pub fn covariant_derivative(&self, c: &ConnectionSheet) -> Tensor {
        let n = self.dim;
        let g = &c.gamma;
        // nonzero Γ^a_{bm} indexed by (b, m) -> [(a, value)] and by (a, m) -> [(b, value)]
        let mut by_lower: BTreeMap<(usize, usize), Vec<(usize, &Rational)>> = BTreeMap::new();
        let mut by_upper: BTreeMap<(usize, usize), Vec<(usize, &Rational)>> = BTreeMap::new();
        for (a, plane) in g.iter().enumerate() {
            for (b, row) in plane.iter().enumerate() {
                for (m, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        by_lower.entry((b, m)).or_default().push((a, v));
                        by_upper.entry((a, m)).or_default().push((b, v));
                    }
                }
            }
        }
        let mut out = Tensor { dim: n, rank: self.rank + 1, entries: BTreeMap::new() };
        for (key, val) in &self.entries {
            for m in 0..n {
                let mut base = key.clone();
                base.push(m as u8);
                // upper slot: T^r_{…} contributes Γ^i_{rm} to index i
                if let Some(list) = by_lower.get(&(key[0] as usize, m)) {
                    for (i, v) in list {
                        let mut k = base.clone();
                        k[0] = *i as u8;
                        out.add_to(k, val * *v);
                    }
                }
                // lower slots: T^i_{…r…} contributes −Γ^r_{xm} to slot value x
                for slot in 1..key.len() {
                    if let Some(list) = by_upper.get(&(key[slot] as usize, m)) {
                        for (x, v) in list {
                            let mut k = base.clone();
                            k[slot] = *x as u8;
                            out.add_to(k, -(val * *v));
                        }
                    }
                }
            }
        }
        out.prune();
        out
    }

    /// Endomorphisms `A^i_j = T^i_{j k l m…}` for every `k < l` and every
    /// choice of the remaining indices, in key order.
    pub fn endomorphisms(&self) -> Vec<(Vec<u8>, Mat)> {
        let n = self.dim;
        let mut out: BTreeMap<Vec<u8>, Mat> = BTreeMap::new();
        for (key, v) in &self.entries {
            if key[2] >= key[3] {
                continue;
            }
            let rest = key[2..].to_vec();
            let m = out.entry(rest).or_insert_with(|| vec![vec![Rational::zero(); n]; n]);
            m[key[0] as usize][key[1] as usize] = v.clone();
        }
        out.into_iter().collect()
    }

    /// The 2-form `Σ_{k<l} T^i_{j k l m…} e^{kl}` for fixed `i, j` and trailing indices.
    pub fn two_form(&self, i: usize, j: usize, trailing: &[usize]) -> Form {
        let n = self.dim;
        let mut f = Form::zero(n, 2);
        for k in 0..n {
            for l in k + 1..n {
                let mut key = vec![i as u8, j as u8, k as u8, l as u8];
                key.extend(trailing.iter().map(|&t| t as u8));
                let v = self.get(&key);
                if !v.is_zero() {
                    f = f.add(&Form::basis(n, &[k + 1, l + 1]).scale_rational(&v));
                }
            }
        }
        f
    }
}

/// `Ω^i_j = dω^i_j + Σ_r ω^i_r ∧ ω^r_j`.
pub fn curvature(m: &MetricFrame, c: &ConnectionSheet) -> Result<CurvatureSheet> {
    let n = m.dim();
    let omegas: Vec<Vec<Form>> = (1..=n).map(|i| (1..=n).map(|j| c.omega(i, j)).collect()).collect();
    let mut omega = vec![vec![Form::zero(n, 2); n]; n];
    let mut tensor = Tensor { dim: n, rank: 3, entries: BTreeMap::new() };
    for i in 0..n {
        for j in 0..n {
            let mut f = m.algebra.d(&omegas[i][j])?;
            for r in 0..n {
                f = f.add(&omegas[i][r].wedge(&omegas[r][j]));
            }
            for k in 0..n {
                for l in 0..n {
                    if k != l {
                        let v = rational(&f.coeff_of(&[k + 1, l + 1]))?;
                        if !v.is_zero() {
                            tensor.entries.insert(vec![i as u8, j as u8, k as u8, l as u8], v);
                        }
                    }
                }
            }
            omega[i][j] = f;
        }
    }
    Ok(CurvatureSheet { omega, tensor })
}

/// `∇R, ∇²R, …` up to `order`; element `g − 1` has `g` derivative directions
/// appended after `k, l`.
pub fn covariant_derivative_curvature(c: &ConnectionSheet, r: &CurvatureSheet, order: usize) -> Result<Vec<Tensor>> {
    if order == 0 {
        return Err(Error::Invalid("order must be at least 1".into()));
    }
    let mut out: Vec<Tensor> = Vec::with_capacity(order);
    let mut cur = r.tensor.clone();
    for _ in 0..order {
        cur = cur.covariant_derivative(c);
        out.push(cur.clone());
    }
    Ok(out)
}

/// `∇_{E_m} Ω^i_j`, one-based.
pub fn nabla_omega(first_derivative: &Tensor, m: usize, i: usize, j: usize) -> Form {
    first_derivative.two_form(i - 1, j - 1, &[m - 1])
}

/// `∇_{e_m} α` for a scalar-valued form `α`, using `∇_X e^k = −Σ_r ω^k_r(X) e^r`.
/// Applied to a curvature form `Ω^i_j` this ignores the endomorphism indices,
/// so it differs from [`nabla_omega`] by `Σ_r (Γ^i_{rm} Ω^r_j − Γ^r_{jm} Ω^i_r)`.
pub fn form_derivative(c: &ConnectionSheet, alpha: &Form, m: usize) -> Form {
    let n = c.dim();
    let nabla_e: Vec<Form> = (0..n)
        .map(|k| {
            let mut f = Form::zero(n, 1);
            for r in 0..n {
                let g = &c.gamma[k][r][m - 1];
                if !g.is_zero() {
                    f = f.sub(&Form::generator(n, r + 1).scale_rational(g));
                }
            }
            f
        })
        .collect();
    let mut out = Form::zero(n, alpha.degree());
    for (idx, coeff) in alpha.terms() {
        let slots = idx.indices();
        for s in 0..slots.len() {
            let mut term = Form::scalar(n, coeff.clone());
            for (p, &k) in slots.iter().enumerate() {
                let factor = if p == s { nabla_e[k - 1].clone() } else { Form::generator(n, k) };
                term = term.wedge(&factor);
            }
            out = out.add(&term);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generation {
    pub order: usize,
    /// Endomorphisms of this generation that enlarged the span.
    pub new_elements: Vec<Mat>,
    pub span_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolonomyReport {
    pub n: usize,
    pub generations: Vec<Generation>,
    pub span_dimension: usize,
    pub basis: Vec<Mat>,
    pub all_skew: bool,
    pub contained_in_u_n: bool,
    pub contained_in_su_n: bool,
    /// Last order that enlarged the span; `None` if `max_order` was reached
    /// while still growing.
    pub stabilized_at_order: Option<usize>,
}

impl HolonomyReport {
    /// The span is all of `su(n)`.
    pub fn is_full_su_n(&self) -> bool {
        self.contained_in_su_n && self.span_dimension == self.n * self.n - 1
    }
}

impl fmt::Display for HolonomyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes = |b: bool| if b { "yes" } else { "no" };
        write!(f, "holonomy: dim={}, su({})={}", self.span_dimension, self.n, yes(self.contained_in_su_n))?;
        match self.stabilized_at_order {
            Some(k) => write!(f, ", stabilized at order {k}"),
            None => write!(f, ", not stabilized"),
        }
    }
}

fn flatten(m: &Mat) -> Vec<Rational> {
    m.iter().flatten().cloned().collect()
}

/// Span of the curvature endomorphisms and their iterated covariant
/// derivatives, stopping once a generation adds nothing.
pub fn holonomy_algebra(m: &MetricFrame, c: &ConnectionSheet, max_order: usize) -> Result<HolonomyReport> {
    let n = m.dim();
    let r = curvature(m, c)?;
    let mut echelon = Echelon::new(n * n);
    let mut generations = Vec::new();
    let mut basis = Vec::new();
    let mut tensor = r.tensor.clone();
    let mut stabilized = None;
    for order in 0..=max_order {
        if order > 0 {
            tensor = tensor.covariant_derivative(c);
        }
        let mut new_elements = Vec::new();
        for (_, a) in tensor.endomorphisms() {
            if echelon.insert(&flatten(&a)) {
                basis.push(a.clone());
                new_elements.push(a);
            }
        }
        let grew = !new_elements.is_empty();
        generations.push(Generation { order, new_elements, span_dimension: echelon.rank() });
        if !grew {
            stabilized = Some(order.saturating_sub(1));
            break;
        }
    }
    if basis.is_empty() {
        stabilized = Some(0);
    }
    let jm = &m.jm;
    let all_skew = basis.iter().all(|a| linalg::transpose(a).iter().zip(a).all(|(x, y)| x.iter().zip(y).all(|(p, q)| *p == -q.clone())));
    let commutes = basis.iter().all(|a| linalg::matmul(a, jm) == linalg::matmul(jm, a));
    let traceless = basis.iter().all(|a| {
        let p = linalg::matmul(jm, a);
        (0..n).fold(Rational::zero(), |acc, i| acc + &p[i][i]).is_zero()
    });
    Ok(HolonomyReport {
        n: n / 2,
        generations,
        span_dimension: echelon.rank(),
        basis,
        all_skew,
        contained_in_u_n: commutes,
        contained_in_su_n: commutes && traceless,
        stabilized_at_order: stabilized,
    })
}
