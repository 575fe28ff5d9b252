use super::*;
use crate::algebras::{parse_compact, parse_equations};
use crate::exterior::CoframeMap;
use crate::scalars::{int, rat};

fn e(n: usize, idx: &[usize]) -> Form {
    Form::basis(n, idx)
}

fn iwasawa() -> LieAlgebra {
    parse_equations("[algebra]\ndim = 6\nd e5 = e13 - e24\nd e6 = e14 + e23\n").unwrap().algebra
}

fn case_two() -> LieAlgebra {
    parse_equations(
        "[algebra]\ndim = 6\nd e3 = e13 - e24\nd e4 = e14 + e23\nd e5 = -e15 + e26\nd e6 = -e16 - e25\n",
    )
    .unwrap()
    .algebra
}

fn solvable() -> LieAlgebra {
    parse_equations("[algebra]\ndim = 5\nd e3 = e13\nd e4 = -e14\nd e5 = e34\n").unwrap().algebra
}

fn kodaira_thurston() -> LieAlgebra {
    parse_equations("[algebra]\ndim = 4\nd e4 = -e23\n").unwrap().algebra
}

#[test]
fn standard_quadruplet_is_valid_everywhere() {
    for alg in ["(0,0,0,12,14)", "(0,0,12,13,23)", "(0,0,12,13,14+23)", "(0,0,0,0,0)"] {
        let s = Su2Structure::standard(parse_compact(alg).unwrap()).unwrap();
        let r = validate_su2(&s, None).unwrap();
        assert!(r.pass(), "{alg}: {r}");
        assert!(r.exact);
        // the reconstructed metric on ker η is the identity
        for (i, row) in r.kernel_metric.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { 1.0 } else { 0.0 });
            }
        }
    }
}

#[test]
fn flipped_omega2_fails_positivity_only() {
    let mut s = Su2Structure::standard(LieAlgebra::abelian(5)).unwrap();
    s.omega2 = s.omega2.neg();
    let r = validate_su2(&s, None).unwrap();
    assert!(r.wedge_identities && r.volume && r.a_squared && r.b_squared && r.anticommute);
    assert!(!r.positive);
    assert_eq!(r.kernel_metric[0][0], -1.0);
}

#[test]
fn equal_omegas_fail_orthogonality() {
    let mut s = Su2Structure::standard(LieAlgebra::abelian(5)).unwrap();
    s.omega2 = s.omega1.clone();
    assert!(!validate_su2(&s, None).unwrap().wedge_identities);
    let mut z = Su2Structure::standard(LieAlgebra::abelian(5)).unwrap();
    z.eta = Form::zero(5, 1);
    assert!(matches!(validate_su2(&z, None), Err(Error::Invalid(_))));
}

#[test]
fn balanced_but_not_hypo() {
    for alg in ["(0,0,0,12,14)", "(0,0,12,13,23)", "(0,0,12,13,14+23)"] {
        let s = Su2Structure::standard(parse_compact(alg).unwrap()).unwrap();
        assert!(is_balanced_su2(&s).unwrap().pass(), "{alg}");
    }
    let s = Su2Structure::standard(parse_compact("(0,0,0,12,14)").unwrap()).unwrap();
    let h = is_hypo(&s).unwrap();
    assert!(!h.pass());
    assert!(!h.get("d(omega3)").unwrap().is_zero());
    let flat = Su2Structure::standard(LieAlgebra::abelian(5)).unwrap();
    assert!(is_hypo(&flat).unwrap().pass() && is_balanced_su2(&flat).unwrap().pass());
}

#[test]
fn solvable_residual_table() {
    let s = Su2Structure::standard(solvable()).unwrap();
    let table = su2_residual_table(&s).unwrap();
    assert_eq!(table.residuals.len(), 5);
    let l = solvable();
    for (name, f) in &table.residuals {
        let direct = match name.as_str() {
            "d(omega1^eta)" => l.d(&s.omega1.wedge(&s.eta)).unwrap(),
            "d(omega2^eta)" => l.d(&s.omega2.wedge(&s.eta)).unwrap(),
            "d(omega3^eta)" => l.d(&s.omega3.wedge(&s.eta)).unwrap(),
            "d(omega2^omega2)" => l.d(&s.omega2.wedge(&s.omega2)).unwrap(),
            _ => l.d(&s.omega3.wedge(&s.omega3)).unwrap(),
        };
        assert_eq!(f, &direct);
    }
}

#[test]
fn standard_sun_models() {
    let s3 = SunStructure::standard(LieAlgebra::abelian(6)).unwrap();
    assert_eq!(s3.psi_plus.wedge(&s3.psi_minus), e(6, &[1, 2, 3, 4, 5, 6]).scale_rational(&int(4)));
    let r = validate_sun(&s3, None).unwrap();
    assert!(r.pass(), "{r}");
    assert_eq!(r.normalization, Some(Scalar::from_rational(rat(2, 3))));
    let s4 = SunStructure::standard(LieAlgebra::abelian(8)).unwrap();
    let r = validate_sun(&s4, None).unwrap();
    assert!(r.pass(), "{r}");
    assert_eq!(r.normalization, Some(Scalar::from_rational(rat(2, 3))));
    let b = is_balanced_sun(&s3).unwrap();
    assert!(b.pass() && b.kahler);
}

#[test]
fn iwasawa_structure() {
    let s = SunStructure::standard(iwasawa()).unwrap();
    assert!(validate_sun(&s, None).unwrap().pass());
    let b = is_balanced_sun(&s).unwrap();
    assert!(b.pass());
    assert!(!b.kahler);
    let j = s.j.as_ref().unwrap();
    let expected_t = e(6, &[1, 3, 5]).neg().sub(&e(6, &[1, 4, 6])).sub(&e(6, &[2, 3, 6])).add(&e(6, &[2, 4, 5]));
    assert_eq!(j.apply(&b.df).unwrap(), expected_t);
    let cs2 = SunStructure::standard(case_two()).unwrap();
    let b2 = is_balanced_sun(&cs2).unwrap();
    assert!(b2.pass());
    assert_eq!(b2.df, e(6, &[1, 3, 4]).sub(&e(6, &[1, 5, 6])).scale_rational(&int(2)));
}

#[test]
fn reversed_kahler_form_is_not_positive() {
    let mut s = SunStructure::standard(LieAlgebra::abelian(6)).unwrap();
    s.f = s.f.neg();
    let r = validate_sun(&s, None).unwrap();
    assert!(!r.positive);
    assert!(!r.pass());
    let mut nj = SunStructure::standard(LieAlgebra::abelian(6)).unwrap();
    nj.j = None;
    assert!(matches!(validate_sun(&nj, None), Err(Error::Missing(_))));
}

#[test]
fn metric_from_forms_matches_standard() {
    let s = SunStructure::standard(LieAlgebra::abelian(6)).unwrap();
    let g = su3_metric(&s.f, &s.psi_plus).unwrap();
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            assert_eq!(*x, Scalar::from_int((i == j) as i64));
        }
    }
}

#[test]
fn suspension_and_restriction_round_trip() {
    for alg in ["(0,0,0,12,14)", "(0,0,12,13,23)", "(0,0,0,0,0)"] {
        let s = Su2Structure::standard(parse_compact(alg).unwrap()).unwrap();
        let up = suspend_su2(&s).unwrap();
        let r = validate_sun(&up, None).unwrap();
        assert!(r.pass(), "{alg}: {r}");
        let back = restrict_to_hypersurface(&up, 6, 1).unwrap();
        assert_eq!(back, s);
    }
}

#[test]
fn restriction_of_balanced_structures_is_balanced() {
    // every unit frame vector whose orthogonal complement is a subalgebra
    for l in [iwasawa(), case_two()] {
        let s = SunStructure::standard(l.clone()).unwrap();
        assert!(is_balanced_sun(&s).unwrap().pass());
        let mut tried = 0;
        for k in 1..=6 {
            match restrict_to_hypersurface(&s, k, 1) {
                Ok(q) => {
                    tried += 1;
                    assert!(validate_su2(&q, None).unwrap().pass(), "k = {k}");
                    assert!(is_balanced_su2(&q).unwrap().pass(), "k = {k}");
                }
                Err(Error::Invalid(msg)) => assert!(msg.contains("subalgebra"), "{msg}"),
                Err(other) => panic!("{other:?}"),
            }
        }
        assert!(tried >= 2);
    }
    // Iwasawa along e6: not a subalgebra
    assert!(matches!(restrict_to_hypersurface(&SunStructure::standard(iwasawa()).unwrap(), 6, 1), Err(Error::Invalid(_))));
}

#[test]
fn scaled_normal_is_rejected() {
    let mut s = SunStructure::standard(LieAlgebra::abelian(6)).unwrap();
    // metric 4 e^1⊗e^1 + ...: e_1 is no longer unit
    s.f = s.f.add(&e(6, &[1, 2]).scale_rational(&int(3)));
    let j = CoframeMap::from_rational(&{
        let mut m = vec![vec![int(0); 6]; 6];
        m[0][1] = rat(-1, 1);
        m[1][0] = int(1);
        m[2][3] = int(-1);
        m[3][2] = int(1);
        m[4][5] = int(-1);
        m[5][4] = int(1);
        m
    })
    .unwrap();
    s.j = Some(j);
    assert!(matches!(restrict_to_hypersurface(&s, 1, 1), Err(Error::Invalid(_))));
    assert!(matches!(restrict_to_hypersurface(&s, 1, 2), Err(Error::Invalid(_))));
}

#[test]
fn circle_bundles_over_kodaira_thurston() {
    let x = kodaira_thurston();
    let w1 = e(4, &[1, 2]).add(&e(4, &[3, 4]));
    let w2 = e(4, &[1, 3]).sub(&e(4, &[2, 4]));
    let w3 = e(4, &[1, 4]).add(&e(4, &[2, 3]));
    let (c, s) = (int(1), int(0));
    let r = circle_bundle_structure(&x, &w1, &w2, &w3, &e(4, &[2, 3]), (&c, &s)).unwrap();
    assert!(r.pass(), "{r}");
    let q = r.structure.unwrap();
    assert!(!is_hypo(&q).unwrap().pass());
    assert!(q.algebra.check_jacobi().pass());
    // Ω = 0 gives the product
    let r0 = circle_bundle_structure(&x, &w1, &w2, &w3, &Form::zero(4, 2), (&c, &s)).unwrap();
    assert!(r0.pass());
    assert_eq!(r0.structure.unwrap().algebra, x.extend_by_line());
    // the generators of the admissible curvature forms, for both bases
    for eps in [0, 1] {
        let base = if eps == 1 { kodaira_thurston() } else { LieAlgebra::abelian(4) };
        let mut gens = vec![e(4, &[1, 2]).sub(&e(4, &[3, 4])), e(4, &[1, 3]).add(&e(4, &[2, 4])), e(4, &[2, 3])];
        if eps == 0 {
            gens.push(e(4, &[1, 4]));
        }
        for omega in gens {
            for (c, s) in [(int(1), int(0)), (int(0), int(1)), (rat(3, 5), rat(4, 5))] {
                let r = circle_bundle_structure(&base, &w1, &w2, &w3, &omega, (&c, &s)).unwrap();
                assert!(r.pass(), "eps {eps}, Omega {omega}: {r}");
            }
        }
    }
}

#[test]
fn circle_bundle_reports_failed_preconditions() {
    let x = LieAlgebra::abelian(4);
    let w1 = e(4, &[1, 2]).add(&e(4, &[3, 4]));
    let w2 = e(4, &[1, 3]).sub(&e(4, &[2, 4]));
    let w3 = e(4, &[1, 4]).add(&e(4, &[2, 3]));
    let r = circle_bundle_structure(&x, &w1, &w2, &w3, &e(4, &[1, 2]), (&int(1), &int(0))).unwrap();
    assert!(!r.pass());
    assert!(r.checks.iter().any(|(n, ok)| n == "Omega^omega1 = 0" && !ok));
    let bad = circle_bundle_structure(&x, &w1, &w2, &w3, &Form::zero(4, 2), (&int(1), &int(1))).unwrap();
    assert!(!bad.pass());
}

#[test]
fn conformal_couples() {
    let w1 = e(4, &[1, 2]).add(&e(4, &[3, 4]));
    let w2 = e(4, &[1, 3]).sub(&e(4, &[2, 4]));
    let w3 = e(4, &[1, 4]).add(&e(4, &[2, 3]));
    for x in [kodaira_thurston(), LieAlgebra::abelian(4)] {
        let r = check_conformal_couple(&x, &w1, &w2, &w3).unwrap();
        assert!(r.pass());
        assert_eq!(r.squares[0], e(4, &[1, 2, 3, 4]).scale_rational(&int(2)));
    }
    assert!(!check_conformal_couple(&kodaira_thurston(), &w1, &w2, &w3).unwrap().closed[2]);
    assert!(check_conformal_couple(&LieAlgebra::abelian(4), &w1, &w2, &w3).unwrap().closed[2]);
    assert!(!check_conformal_couple(&LieAlgebra::abelian(4), &w1, &w1, &w3).unwrap().pass());
}

#[test]
fn product_quadruplet_over_kodaira_thurston() {
    let q = Su2Structure::new(
        kodaira_thurston().extend_by_line(),
        e(5, &[5]),
        e(5, &[1, 2]).add(&e(5, &[3, 4])),
        e(5, &[1, 3]).sub(&e(5, &[2, 4])),
        e(5, &[1, 4]).add(&e(5, &[2, 3])),
    )
    .unwrap();
    let r = validate_su2(&q, None).unwrap();
    assert!(r.pass(), "{r}");
}
