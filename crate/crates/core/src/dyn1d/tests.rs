use super::*;
use crate::exactpoly::rat;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn square() -> RatMap1D {
    RatMap1D::new(UniPoly::from_ints(&[0, 0, 1]), UniPoly::one()).unwrap()
}

#[test]
fn literal_values() {
    let r = RatMap1D::literal_boundary_map();
    assert_eq!(r.degree(), 4);
    assert_eq!(r.eval_finite(c(0.0, 0.0)), c(0.0, 0.0));
    assert!((r.eval_finite(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(r.eval(ExtC::Infinity), ExtC::Infinity);
    assert_eq!(r.numerator().eval(&rat(1, 1)), rat(5, 4));
}

#[test]
fn constructions_agree() {
    let r = induced_boundary_map().unwrap();
    let comp = composed_boundary_map().unwrap();
    assert_eq!(r.numerator(), comp.numerator());
    assert_eq!(r.denominator(), comp.denominator());
}

#[test]
fn embedding_round_trip() {
    let e = l0_embedding();
    for z in [0.3, -2.0, 5.5] {
        let y = [
            e[0].eval_c64(c(z, 0.0)),
            e[1].eval_c64(c(z, 0.0)),
            e[2].eval_c64(c(z, 0.0)),
        ];
        assert!((y[0] + y[1] + y[2]).norm() < 1e-14);
        let back = l0_coordinate(&y).finite().unwrap();
        assert!((back - c(z, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn critical_points_of_r() {
    let r = RatMap1D::literal_boundary_map();
    let cps = r.critical_points().unwrap();
    let total: usize = cps.iter().map(|p| p.1).sum();
    assert_eq!(total, 6);
    assert_eq!(cps.len(), 6);
    let w = r.wronskian().to_c64();
    for (p, _) in &cps {
        let z = p.finite().unwrap();
        assert!(relative_residual(&w, z) < 1e-10);
        assert!(z.im.abs() > 1e-6);
        let partner = cps
            .iter()
            .filter_map(|q| q.0.finite())
            .map(|q| (q - z.conj()).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(partner < 1e-8);
    }
}

#[test]
fn critical_points_of_square() {
    let cps = square().critical_points().unwrap();
    assert_eq!(cps.len(), 2);
    assert!(cps.iter().any(|p| p.0 == ExtC::Infinity));
    assert!(cps.iter().any(|p| p.0.finite().is_some_and(|z| z.norm() < 1e-12)));
}

#[test]
fn fixed_points_of_r() {
    let r = RatMap1D::literal_boundary_map();
    let fps = r.fixed_points_with_multipliers().unwrap();
    assert_eq!(fps.iter().map(|f| f.multiplicity).sum::<usize>(), 5);
    let attracting: Vec<_> = fps.iter().filter(|f| f.kind == FixedType::Attracting).collect();
    assert_eq!(attracting.len(), 3);
    for f in attracting {
        assert!((f.multiplier - c(-0.8, 0.0)).norm() < 1e-10, "{f:?}");
    }
    let zero = fps
        .iter()
        .find(|f| f.location.finite().is_some_and(|z| z.norm() < 1e-12))
        .unwrap();
    assert!((zero.multiplier - c(-0.8, 0.0)).norm() < 1e-12);
    assert!(fps.iter().any(|f| f.location == ExtC::Infinity));
}

#[test]
fn fixed_points_of_square() {
    let fps = square().fixed_points_with_multipliers().unwrap();
    assert_eq!(fps.len(), 3);
    let at = |z: f64| {
        fps.iter()
            .find(|f| f.location.finite().is_some_and(|w| (w - c(z, 0.0)).norm() < 1e-10))
            .unwrap()
    };
    assert!(at(0.0).multiplier.norm() < 1e-12);
    assert!((at(1.0).multiplier - c(2.0, 0.0)).norm() < 1e-10);
    assert_eq!(at(1.0).kind, FixedType::Repelling);
    let inf = fps.iter().find(|f| f.location == ExtC::Infinity).unwrap();
    assert_eq!(inf.kind, FixedType::Attracting);
}

#[test]
fn certificate_for_r() {
    let r = RatMap1D::literal_boundary_map();
    let rep = hyperbolicity_certificate(&r, 10_000, 1e-6).unwrap();
    assert_eq!(rep.cycles.len(), 3);
    assert_eq!(rep.absorbed_per_cycle(), vec![2, 2, 2]);
    for t in 0..3 {
        let pts: Vec<C64> = rep
            .critical
            .iter()
            .filter(|f| f.target == t)
            .map(|f| f.point.finite().unwrap())
            .collect();
        assert!((pts[0] - pts[1].conj()).norm() < 1e-8);
    }
}

#[test]
fn certificate_for_square() {
    let rep = hyperbolicity_certificate(&square(), 100, 1e-6).unwrap();
    assert_eq!(rep.critical.len(), 2);
    assert!(rep.critical.iter().all(|f| f.absorption_time == 0));
}

#[test]
fn parabolic_map_is_inconclusive() {
    let m = RatMap1D::new(
        UniPoly::new(vec![rat(1, 4), rat(0, 1), rat(1, 1)]),
        UniPoly::one(),
    )
    .unwrap();
    assert!(matches!(
        hyperbolicity_certificate(&m, 10_000, 1e-6),
        Err(Dyn1dError::Inconclusive(_))
    ));
}

#[test]
fn basin_examples() {
    let r = RatMap1D::literal_boundary_map();
    let bc = BasinClassifier::new(&r).unwrap();
    let near = bc.classify(ExtC::Finite(c(0.01, 0.0)), 1000);
    assert_eq!(near.target, Some(0));
    assert!(near.escape_time <= 2);
    let two = bc.classify(ExtC::Finite(c(2.0, 0.0)), 1000);
    assert!(two.target.is_some());
    assert_eq!(bc.classify(ExtC::Infinity, 10).target, Some(2));
}

#[test]
fn basin_symmetries() {
    let r = RatMap1D::literal_boundary_map();
    let bc = BasinClassifier::new(&r).unwrap();
    // sigma(z) = 1/(1 - z) sends 0 -> 1 -> infinity -> 0
    let sigma = |z: C64| (c(1.0, 0.0) - z).inv();
    for k in 0..200 {
        let z = c(-3.3 + 0.037 * k as f64, -1.4 + 0.0131 * k as f64);
        let lhs = r.eval_finite(sigma(z));
        let rhs = sigma(r.eval_finite(z));
        assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
        let a = bc.classify(ExtC::Finite(z), 1000);
        let b = bc.classify(ExtC::Finite(z.conj()), 1000);
        assert_eq!(a.target, b.target);
        let s = bc.classify(ExtC::Finite(sigma(z)), 1000);
        if let (Some(x), Some(y)) = (a.target, s.target) {
            assert_eq!(y, (x + 1) % 3);
        }
    }
}

#[test]
fn conjugation_commutes() {
    let r = RatMap1D::literal_boundary_map();
    for k in 0..50 {
        let z = C64::from_polar(0.1 + 0.1 * k as f64, k as f64);
        assert_eq!(r.eval_finite(z.conj()), r.eval_finite(z).conj());
    }
}

#[test]
fn chordal_is_bounded() {
    assert!((chordal(ExtC::Finite(c(0.0, 0.0)), ExtC::Infinity) - 1.0).abs() < 1e-15);
    assert_eq!(chordal(ExtC::Infinity, ExtC::Infinity), 0.0);
}
