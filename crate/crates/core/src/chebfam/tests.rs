use super::*;
use crate::exactpoly::{jacobian_det, rat};
use crate::projgeom::AdaptedChart;
use rand::Rng;

fn p(s: &str) -> HomPoly3 {
    parse_poly(s, &["x1", "x2", "x3"]).unwrap()
}

fn real(x: [f64; 3]) -> ProjPoint {
    ProjPoint::real(x).unwrap()
}

#[test]
fn f_is_hand_expanded_g_of_h() {
    assert_eq!(
        f_components(),
        [
            p("x1^2*(-x1+x2+x3)^2"),
            p("x2^2*(x1-x2+x3)^2"),
            p("x3^2*(x1+x2-x3)^2")
        ]
    );
    let f = f_map();
    assert_eq!(f.components(), &f_components());
    assert_eq!(f.two_form_weight(), Some(&Rational::from_integer(4.into())));
}

#[test]
fn degenerate_parameter_lands_in_l0() {
    let t0 = FamilyParameter::parse("0").unwrap();
    assert!(t0.is_degenerate());
    let c = ft_components(t0.exact());
    assert!((&(&c[0] + &c[1]) + &c[2]).is_zero());
    let m = build_family_map(&t0);
    assert!(m.inverse().is_none());
    let inv = FamilyInverse { t: 0.0 };
    assert_eq!(inv.preimages(&center()), Err(MapError::DegenerateParameter));
}

#[test]
fn t_half_scales_adapted_chart_by_two() {
    let ch = AdaptedChart::new();
    for (a, b) in [(0.1, 0.2), (-0.3, 0.05), (0.7, -0.4)] {
        let q = ch.from_real(a, b);
        let img = ProjPoint::new(t_apply(0.5, q.coords())).unwrap();
        let z = ch.to_chart(&img).unwrap();
        assert!((z[0].re - 2.0 * a).abs() < 1e-14 && (z[1].re - 2.0 * b).abs() < 1e-14);
    }
}

#[test]
fn evaluation_examples() {
    let f = f_map();
    assert!(fs_distance(&f.evaluate(&center()).unwrap(), &center()) < 1e-15);
    let img = f.evaluate(&real([2.0, 1.0, 0.0])).unwrap();
    assert!(fs_distance(&img, &real([4.0, 1.0, 0.0])) < 1e-15);
    assert!(matches!(
        f.evaluate(&real([0.0, 1.0, 1.0])),
        Err(MapError::NearIndeterminacy { .. })
    ));
}

#[test]
fn closed_form_evaluator_matches_polynomials() {
    let t = FamilyParameter::parse("1/20").unwrap();
    let exact = PlaneMap::new("x", ft_components(t.exact())).unwrap();
    let fast = FamilyEval { t: t.value() };
    let mut r = crate::rng::stream(9, 0);
    for _ in 0..200 {
        let x = [0; 3].map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        let a = ProjPoint::new(exact.eval_raw(&x)).unwrap();
        let b = ProjPoint::new(fast.eval(&x)).unwrap();
        assert!(fs_distance(&a, &b) < 1e-12);
        let ja = exact.evaluator().jacobian(&x);
        let jb = fast.jacobian(&x);
        // components of the stripped map differ from T_t f by a constant factor
        let scale = exact.eval_raw(&x)[0] / fast.eval(&x)[0];
        for i in 0..3 {
            for k in 0..3 {
                assert!((ja[i][k] - jb[i][k] * scale).norm() < 1e-10 * (1.0 + ja[i][k].norm()));
            }
        }
    }
}

#[test]
fn inverse_branch_examples() {
    let inv = FamilyInverse { t: 1.0 };
    let f = f_map();
    let pre = inv.preimages(&center()).unwrap();
    assert_eq!(pre.len(), 4);
    assert!(pre.iter().any(|q| fs_distance(q, &center()) < 1e-14));
    let target = real([1.0, 4.0, 4.0]);
    let pre = inv.preimages(&target).unwrap();
    assert!(pre.iter().any(|q| fs_distance(q, &real([3.0, 2.0, 2.0])) < 1e-14));
    for q in pre {
        assert!(fs_distance(&f.evaluate(&q).unwrap(), &target) < 1e-12);
    }
    assert!(matches!(
        inv.preimages(&real([0.0, 1.0, 2.0])),
        Err(MapError::CriticalTarget(_))
    ));
}

#[test]
fn branches_are_distinct_and_exact_for_all_t() {
    for t in [1.0, 0.5, 0.05, 0.3] {
        let map = build_family_map(&FamilyParameter::from_f64(t).unwrap());
        assert!(map.verify_branches(500, 4).unwrap() < 1e-9);
        let rep = map.topological_degree(100, 7).unwrap();
        assert!(rep.exact);
        assert_eq!(rep.estimate, 4);
    }
}

#[test]
fn rho_examples() {
    assert!((rho(&center()).re + 3.0).abs() < 1e-15);
    assert!((rho(&ProjPoint::basis(0)).re - 1.0).abs() < 1e-15);
    assert!(rho(&real([1.0, 1.0, 0.0])).norm() < 1e-15);
    assert!(rho_aff(1.0, 1.0) < 0.0);
}

#[test]
fn region_examples() {
    assert_eq!(classify_region(&center()).unwrap(), RegionLabel::U0);
    assert_eq!(classify_region(&real([1.0, 1.0, 3.0])).unwrap(), RegionLabel::U3);
    assert_eq!(classify_region(&real([1.0, 1.0, 4.0])).unwrap(), RegionLabel::BoundaryAmbiguous);
    assert_eq!(classify_region(&ProjPoint::basis(0)).unwrap(), RegionLabel::OutsideU);
    assert_eq!(classify_region(&real([3.0, 1.0, 1.0])).unwrap(), RegionLabel::U1);
    assert_eq!(classify_region(&real([1.0, 3.0, 1.0])).unwrap(), RegionLabel::U2);
    let nonreal = ProjPoint::new([C64::new(1.0, 0.0), C64::new(0.5, 0.3), C64::new(0.2, 0.0)]).unwrap();
    assert!(classify_region(&nonreal).is_err());
}

#[test]
fn q_parametrization_lies_on_rho_zero() {
    let q = q_parametrization();
    for k in -5..=5 {
        let s = rat(k, 3);
        let v = [0, 1, 2].map(|i| q[i].eval(&s));
        let r = &v[0] * &v[0] + &v[1] * &v[1] + &v[2] * &v[2]
            - Rational::from_integer(2.into()) * (&v[0] * &v[1] + &v[1] * &v[2] + &v[2] * &v[0]);
        assert_eq!(r, Rational::zero());
    }
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    assert_eq!(q_point(one, one).unwrap(), real([1.0, 1.0, 4.0]));
    assert_eq!(q_point(one, zero).unwrap(), real([1.0, 0.0, 1.0]));
    assert_eq!(q_point(zero, one).unwrap(), real([0.0, 1.0, 1.0]));
}

#[test]
fn q_fixed_only_for_t_one() {
    assert!(verify_q_pointwise_fixed(2000, &FamilyParameter::one(), 0) < 1e-9);
    assert!(verify_q_pointwise_fixed(200, &FamilyParameter::parse("1/2").unwrap(), 0) > 1e-2);
}

#[test]
fn rho_identity_constant_is_one() {
    let r = verify_rho_functional_equation(2000, 1);
    assert!((r.c - 1.0).abs() < 1e-9);
    assert!(r.max_rel_dev < 1e-8);
    assert!(r.sign_preserved);
}

#[test]
fn h_is_an_involution() {
    let mut r = crate::rng::stream(3, 0);
    for _ in 0..10_000 {
        let x = [0; 3].map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        let p = ProjPoint::new(x).unwrap();
        let back = ProjPoint::new(h_apply(h_apply(p.coords()))).unwrap();
        assert!(fs_distance(&p, &back) < 1e-10);
    }
}

#[test]
fn coordinate_lines_are_invariant() {
    let f = f_components();
    for j in 0..3 {
        assert!(f[j].div_exact(&HomPoly3::var(j)).is_some());
    }
    // on X_3 the map is [x:y] -> [x^2:y^2] once the factor (x-y)^2 is removed
    let zero = Rational::zero();
    for (x, y) in [(2, 1), (3, -5), (7, 4)] {
        let pt = [Rational::from_integer(x.into()), Rational::from_integer(y.into()), zero.clone()];
        let v = f.each_ref().map(|c| c.eval(&pt));
        let k = Rational::from_integer(((x - y) * (x - y)).into());
        assert_eq!(v[0], Rational::from_integer((x * x).into()) * &k);
        assert_eq!(v[1], Rational::from_integer((y * y).into()) * &k);
        assert_eq!(v[2], zero);
    }
}

#[test]
fn fixed_point_inventory() {
    let f = f_map();
    for j in 0..3 {
        let jac = f.affine_jacobian(&ProjPoint::basis(j)).unwrap();
        assert!(jac.iter().flatten().all(|z| z.norm() < 1e-14));
    }
    let jac = f.affine_jacobian(&center()).unwrap();
    let ev = crate::planemap::eigenvalues2(&jac);
    assert!(ev.iter().all(|z| z.norm() > 1.0));
}

#[test]
fn jacobian_factorization() {
    let j = jacobian_det(&f_components()).unwrap();
    assert_eq!(j.degree(), 9);
    assert_eq!(
        j,
        p("16*x1*x2*x3*(-x1+x2+x3)^2*(x1-x2+x3)^2*(x1+x2-x3)^2")
    );
}

#[test]
fn attractors_move_from_vertices() {
    let a = attractors(1.0);
    for j in 0..3 {
        assert!(fs_distance(&a[j], &ProjPoint::basis(j)) < 1e-15);
    }
    let f = build_family_map(&FamilyParameter::parse("1/20").unwrap());
    for (j, q) in attractors(0.05).iter().enumerate() {
        assert!(fs_distance(&f.evaluate(q).unwrap(), q) < 1e-13);
        let ev = crate::planemap::eigenvalues2(&f.affine_jacobian(q).unwrap());
        assert!(ev.iter().all(|z| z.norm() < 1.0), "p_{j} not attracting: {ev:?}");
    }
}

#[test]
fn markov_property_one_branch_per_region() {
    for t in [1.0, 0.5, 0.05] {
        let inv = FamilyInverse { t };
        let ch = AdaptedChart::new();
        let mut r = crate::rng::stream(11, 0);
        let mut n = 0;
        while n < 300 {
            let (a, b): (f64, f64) = (r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
            if a * a + b * b > 0.24 {
                continue;
            }
            let p = ch.from_real(a, b);
            if classify_region(&p) == Ok(RegionLabel::BoundaryAmbiguous) {
                continue;
            }
            let mut labels: Vec<RegionLabel> = inv
                .preimages(&p)
                .unwrap()
                .iter()
                .map(|q| {
                    assert!(q.is_real(1e-12));
                    classify_region(q).unwrap()
                })
                .collect();
            labels.sort();
            assert_eq!(labels, vec![RegionLabel::U0, RegionLabel::U1, RegionLabel::U2, RegionLabel::U3], "t={t}");
            n += 1;
        }
    }
}

#[test]
fn markov_check_reports_no_exceptions() {
    let c = verify_markov_property(200, &FamilyParameter::parse("1/2").unwrap(), 3);
    assert_eq!(c.samples, 200);
    assert!(c.exceptions.is_empty(), "{:?}", c.exceptions);
}
