#![allow(dead_code)]

use balanced::algebras::parse_equations;
use balanced::catalog;
use balanced::connection::{bismut_connection, check_connection, holonomy_algebra, levi_civita, torsion_form};
use balanced::exterior::MultiIndex;
use balanced::structures::{
    is_balanced_su2, is_balanced_sun, is_hypo, restrict_to_hypersurface, suspend_su2, validate_su2, validate_sun,
};
use balanced::{parse_compact, CoframeMap, Error, Form, LieAlgebra, MetricFrame, Rational, Scalar, Su2Structure, SunStructure};
use num::{One, Zero};
use proptest::prelude::*;

pub type Outcome = std::result::Result<(), String>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// 5d nilpotent algebras, the abelian one included so hypo cases occur.
pub const QUADRUPLET_ALGEBRAS: [&str; 5] =
    ["(0,0,0,0,0)", "(0,0,0,0,12)", "(0,0,0,12,14)", "(0,0,12,13,23)", "(0,0,12,13,14+23)"];

const TRIPLES: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

/// A rotation `(i, j, triple, flip)` in the plane of `e^i, e^j`.
pub type Givens = (usize, usize, usize, bool);

pub fn arb_givens(n: usize) -> impl Strategy<Value = Vec<Givens>> {
    prop::collection::vec((0..n, 0..n, 0..TRIPLES.len(), any::<bool>()), 0..4)
}

/// Product of rational Givens rotations; orthogonal and exact.
pub fn rotation(n: usize, steps: &[Givens]) -> CoframeMap {
    let mut m: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for &(i, j, t, flip) in steps {
        if i == j {
            continue;
        }
        let (a, b, c) = TRIPLES[t];
        let (cs, sn) = (q(a, c), if flip { q(-b, c) } else { q(b, c) });
        for row in m.iter_mut() {
            let (x, y) = (row[i].clone(), row[j].clone());
            row[i] = &cs * &x - &sn * &y;
            row[j] = &sn * &x + &cs * &y;
        }
    }
    CoframeMap::from_rational(&m).unwrap()
}

/// The standard quadruplet written in a rotated orthonormal coframe.
pub fn rotated_quadruplet(algebra: &str, steps: &[Givens]) -> Su2Structure {
    let l = parse_compact(algebra).unwrap();
    let s = Su2Structure::standard(l.clone()).unwrap();
    let r = rotation(5, steps);
    let [eta, w1, w2, w3] = s.forms().map(|f| r.apply(f).unwrap());
    Su2Structure::new(l, eta, w1, w2, w3).unwrap()
}

pub fn hypo_implies_balanced(s: &Su2Structure) -> Outcome {
    let v = validate_su2(s, None).map_err(|e| e.to_string())?;
    if !v.pass() {
        return Err(format!("rotated quadruplet is not an SU(2)-structure:\n{v}"));
    }
    let hypo = is_hypo(s).map_err(|e| e.to_string())?.pass();
    let balanced = is_balanced_su2(s).map_err(|e| e.to_string())?.pass();
    if hypo && !balanced {
        return Err("hypo but not balanced".into());
    }
    Ok(())
}

pub fn restrict_after_suspend(s: &Su2Structure) -> Outcome {
    let up = suspend_su2(s).map_err(|e| e.to_string())?;
    let back = restrict_to_hypersurface(&up, 6, 1).map_err(|e| e.to_string())?;
    if back != *s {
        return Err("restriction of the suspension differs from the original".into());
    }
    Ok(())
}

/// `Ψ = Π (e^a + i J e^a)` over a J-adapted pairing of the coframe, with the
/// sign of `J` that makes it of type (3,0).
fn psi_from_frame(m: &MetricFrame) -> Option<(Form, Form)> {
    let n = m.dim();
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    for a in 0..n {
        if used[a] {
            continue;
        }
        let img = m.j.image(a + 1);
        let (idx, c) = img.terms().next()?;
        let b = idx.indices()[0] - 1;
        used[a] = true;
        used[b] = true;
        pairs.push((a + 1, b + 1, c.clone()));
    }
    for sign in [1i64, -1] {
        let mut re = Form::scalar(n, Scalar::one());
        let mut im = Form::zero(n, 0);
        for (a, b, c) in &pairs {
            let x = Form::generator(n, *a);
            let y = Form::generator(n, *b).scale(&(c * &Scalar::from_int(sign)));
            let nre = re.wedge(&x).sub(&im.wedge(&y));
            let nim = re.wedge(&y).add(&im.wedge(&x));
            re = nre;
            im = nim;
        }
        let s = SunStructure::new(m.algebra.clone(), m.fundamental_form(), re.clone(), im.clone(), Some(m.j.clone())).ok()?;
        if validate_sun(&s, None).ok()?.pass() {
            return Some((re, im));
        }
    }
    None
}

/// Every 6d catalog structure that is a balanced SU(3)-structure: the
/// Hermitian frames with a closed (3,0)-form, and the suspensions at `t = 0`.
pub fn catalog_balanced_su3() -> Vec<(String, SunStructure)> {
    let mut out = Vec::new();
    for e in catalog::manifest() {
        let text = e.payload().unwrap();
        let file = parse_equations(&text).unwrap();
        if file.algebra.dim() == 6 && file.section("structure").is_some() {
            let (m, f) = MetricFrame::from_file(&file).unwrap();
            if let Some((re, im)) = psi_from_frame(&m) {
                let s = SunStructure::new(m.algebra.clone(), f, re, im, Some(m.j.clone())).unwrap();
                if is_balanced_sun(&s).unwrap().pass() {
                    out.push((e.name.clone(), s));
                }
            }
        }
        if let Some(c) = e.companion_payload().unwrap() {
            let file = parse_equations(c).unwrap();
            let sec = file.section("sun").unwrap();
            let at = |k: &str| sec.require(k).unwrap().substitute(&Rational::zero()).unwrap();
            let s = SunStructure::new(file.algebra.clone(), at("F"), at("psi_plus"), at("psi_minus"), None).unwrap();
            if is_balanced_sun(&s).unwrap().pass() {
                out.push((format!("{} (suspension)", e.name), s));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

/// Restrictions along `±e_k` are balanced wherever they are defined; returns
/// how many were checked.
pub fn restriction_property(name: &str, s: &SunStructure) -> std::result::Result<usize, String> {
    let mut checked = 0;
    for k in 1..=6 {
        for sign in [1, -1] {
            match restrict_to_hypersurface(s, k, sign) {
                Ok(r) => {
                    let v = validate_su2(&r, None).map_err(|e| e.to_string())?;
                    let b = is_balanced_su2(&r).map_err(|e| e.to_string())?;
                    if !v.pass() || !b.pass() {
                        return Err(format!("{name} along {sign} e_{k}:\n{v}{b}"));
                    }
                    checked += 1;
                }
                Err(Error::Invalid(_)) => {}
                Err(e) => return Err(format!("{name}: {e}")),
            }
        }
    }
    Ok(checked)
}

/// Algebras of the catalog, `d^2 = 0` ones only.
pub fn catalog_algebras() -> Vec<LieAlgebra> {
    let mut out: Vec<LieAlgebra> = Vec::new();
    for e in catalog::manifest() {
        let l = parse_equations(&e.payload().unwrap()).unwrap().algebra;
        if l.check_jacobi().pass() && !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

pub fn arb_form(n: usize, degree: usize) -> impl Strategy<Value = Form> {
    let basis = MultiIndex::all(n, degree);
    prop::collection::vec((0..basis.len(), -3i64..=3), 0..5).prop_map(move |terms| {
        Form::from_terms(n, degree, terms.into_iter().map(|(i, c)| (basis[i], Scalar::from_int(c))))
    })
}

pub fn sign(p: usize) -> Scalar {
    Scalar::from_int(if p % 2 == 0 { 1 } else { -1 })
}

/// `d(a∧b) = da∧b + (−1)^p a∧db`, `d² = 0` and `a∧b = (−1)^{pq} b∧a`.
pub fn exterior_laws(l: &LieAlgebra, a: &Form, b: &Form) -> Outcome {
    let (p, qd) = (a.degree(), b.degree());
    let lhs = l.d(&a.wedge(b)).map_err(|e| e.to_string())?;
    let rhs = l.d(a).unwrap().wedge(b).add(&a.wedge(&l.d(b).unwrap()).scale(&sign(p)));
    if lhs != rhs {
        return Err(format!("Leibniz fails for a = {a}, b = {b}"));
    }
    if !l.d(&l.d(a).unwrap()).unwrap().is_zero() {
        return Err(format!("d^2 a != 0 for a = {a}"));
    }
    if a.wedge(b) != b.wedge(a).scale(&sign(p * qd)) {
        return Err(format!("graded commutativity fails for a = {a}, b = {b}"));
    }
    Ok(())
}

/// Hermitian frames of the catalog with their fundamental forms.
pub fn catalog_frames() -> Vec<(String, MetricFrame, Form)> {
    let mut out = Vec::new();
    for e in catalog::manifest() {
        let file = parse_equations(&e.payload().unwrap()).unwrap();
        if file.section("structure").is_some() && !out.iter().any(|(n, _, _): &(String, MetricFrame, Form)| *n == e.file) {
            let (m, f) = MetricFrame::from_file(&file).unwrap();
            out.push((e.file.clone(), m, f));
        }
    }
    out.dedup_by(|a, b| a.1.algebra == b.1.algebra && a.2 == b.2);
    out
}

/// `Γ^B = Γ^LC + ½ T` entry by entry.
pub fn dual_path(name: &str, m: &MetricFrame, f: &Form) -> Outcome {
    let lc = levi_civita(m);
    let b = bismut_connection(m, f).map_err(|e| e.to_string())?;
    let (_, t) = torsion_form(m, f).map_err(|e| e.to_string())?;
    let half = q(1, 2);
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if &b.gamma[i][j][k] - &lc.gamma[i][j][k] != &t[k][j][i] * &half {
                    return Err(format!("{name}: Gamma^{}_{}{} disagrees", i + 1, j + 1, k + 1));
                }
            }
        }
    }
    Ok(())
}

/// Relabel the frame by `e_i -> e_{p(i)}`, transporting `J` along.
pub fn permuted(m: &MetricFrame, p: &[usize]) -> MetricFrame {
    let n = m.dim();
    let map: Vec<Option<usize>> = (0..n).map(|i| Some(p[i] + 1)).collect();
    let mut diffs = vec![Form::zero(n, 2); n];
    let mut jm = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        diffs[p[i]] = m.algebra.de(i + 1).reindex(n, &map);
        for j in 0..n {
            jm[p[i]][p[j]] = m.j_matrix()[i][j].clone();
        }
    }
    MetricFrame::new(LieAlgebra::new(diffs).unwrap(), CoframeMap::from_rational(&jm).unwrap()).unwrap()
}

pub fn holonomy_dim(m: &MetricFrame) -> std::result::Result<usize, String> {
    let f = m.fundamental_form();
    let c = bismut_connection(m, &f).map_err(|e| e.to_string())?;
    if !check_connection(m, &c).map_err(|e| e.to_string())?.pass() {
        return Err("connection checks fail".into());
    }
    Ok(holonomy_algebra(m, &c, 4).map_err(|e| e.to_string())?.span_dimension)
}

pub fn permutation_invariance(m: &MetricFrame, p: &[usize]) -> Outcome {
    let (a, b) = (holonomy_dim(m)?, holonomy_dim(&permuted(m, p))?);
    if a != b {
        return Err(format!("holonomy dimension {a} becomes {b} under {p:?}"));
    }
    Ok(())
}

/// `Ψ₊∧Ψ₋ = (2/3) F³` for the standard model on R^6.
pub fn psi_identity() -> Outcome {
    let s = SunStructure::standard(LieAlgebra::abelian(6)).map_err(|e| e.to_string())?;
    let lhs = s.psi_plus.wedge(&s.psi_minus);
    let rhs = s.f.power(3).scale(&Scalar::from_rational(q(2, 3)));
    if lhs != rhs {
        return Err(format!("{lhs} != {rhs}"));
    }
    Ok(())
}

/// Fixed-seed runner shared by the acceptance report.
pub fn runner(cases: u32) -> proptest::test_runner::TestRunner {
    proptest::test_runner::TestRunner::new_with_rng(
        proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() },
        proptest::test_runner::TestRng::from_seed(proptest::test_runner::RngAlgorithm::ChaCha, &[7; 32]),
    )
}
