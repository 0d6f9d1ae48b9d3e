use super::*;
use crate::exactpoly::{int, parse_poly, parse_unipoly};

fn p(s: &str) -> HomPoly3 {
    parse_poly(s, &["x1", "x2", "x3"]).unwrap()
}

fn g_map() -> PlaneMap {
    PlaneMap::new("g", [p("x1^2"), p("x2^2"), p("x3^2")])
        .unwrap()
        .with_two_form_weight(int(4))
}

fn id_map() -> PlaneMap {
    PlaneMap::new("id", [p("x1"), p("x2"), p("x3")]).unwrap()
}

#[test]
fn construction_strips_and_normalizes() {
    let m = PlaneMap::new("m", [p("2*x1*x3"), p("2*x2*x3"), p("2*x3^2")]).unwrap();
    assert_eq!(m.components(), &[p("x1"), p("x2"), p("x3")]);
    assert_eq!(m.degree(), 1);
}

#[test]
fn identity_sequences() {
    let id = id_map();
    let s = id.degree_sequence(4, 100).unwrap();
    assert!(s.entries.iter().all(|e| e.1 == 1));
    let top = id.topological_degree(5, 0).unwrap();
    assert_eq!(top.estimate, 1);
    assert!(!top.exact);
    let curve = [parse_unipoly("z^2", "z").unwrap(), UniPoly::one(), parse_unipoly("z+3", "z").unwrap()];
    assert_eq!(id.image_curve_degree(&curve, 0, 100).unwrap(), 2);
    assert_eq!(id.image_curve_degree(&curve, 3, 100).unwrap(), 2);
    let r = id.check_stability(5).unwrap();
    assert!(r.is_stable());
    assert_eq!(r.stable_to_depth, 5);
}

#[test]
fn g_degrees_and_curves() {
    let g = g_map();
    let s = g.degree_sequence(3, 100).unwrap();
    assert_eq!(s.entries, vec![(1, 2), (2, 4), (3, 8)]);
    assert!(s.is_submultiplicative());
    let l0 = [parse_unipoly("z", "z").unwrap(), UniPoly::one(), parse_unipoly("-z-1", "z").unwrap()];
    assert_eq!(g.image_curve_degree(&l0, 1, 100).unwrap(), 2);
    assert_eq!(g.image_curve_degree(&l0, 2, 100).unwrap(), 4);
    assert!(matches!(
        g.degree_sequence(10, 100),
        Err(MapError::BudgetExceeded(_))
    ));
}

#[test]
fn covering_degree_is_divided_out() {
    // (s^2 : s^4 : 1) is a 2-to-1 parametrization of the conic x2 x3 = x1^2
    let c = [parse_unipoly("z^2", "z").unwrap(), parse_unipoly("z^4", "z").unwrap(), UniPoly::one()];
    assert_eq!(id_map().image_curve_degree(&c, 0, 100).unwrap(), 2);
}

#[test]
fn newton_finds_all_preimages_of_g() {
    let g = g_map();
    let top = g.topological_degree(6, 3).unwrap();
    assert_eq!(top.estimate, 4);
    assert!(top.max_residual < 1e-9);
}

#[test]
fn two_form_of_g() {
    assert!(g_map().verify_two_form(2000, 1).unwrap() < 1e-9);
}

#[test]
fn jacobian_matches_finite_differences() {
    let m = PlaneMap::new("m", [p("x1^2 + x2*x3"), p("x2^2 - 3*x1*x3"), p("x3^2 + x1*x2")]).unwrap();
    let ch = LinearChart::adapted();
    let pt = ch.from_chart([C64::new(0.3, 0.0), C64::new(-0.2, 0.0)]).unwrap();
    let j = m.affine_jacobian(&pt).unwrap();
    let base = ch.to_chart(&pt).unwrap();
    let h = 1e-6;
    for col in 0..2 {
        let mut plus = base;
        let mut minus = base;
        plus[col] += h;
        minus[col] -= h;
        let fp = ch.to_chart(&m.evaluate(&ch.from_chart(plus).unwrap()).unwrap()).unwrap();
        let fm = ch.to_chart(&m.evaluate(&ch.from_chart(minus).unwrap()).unwrap()).unwrap();
        for row in 0..2 {
            let fd = (fp[row] - fm[row]) / (2.0 * h);
            assert!((fd - j[row][col]).norm() < 1e-6 * (1.0 + j[row][col].norm()));
        }
    }
}

#[test]
fn declaration_validation() {
    let g = g_map();
    let bad = g.clone().with_indeterminacy(vec![ProjPoint::basis(0)]);
    assert!(matches!(bad, Err(MapError::InvalidDeclaration(_))));
    let h = PlaneMap::new("h", [p("x1*(-x1+x2+x3)"), p("x2*(x1-x2+x3)"), p("x3*(x1+x2-x3)")]).unwrap();
    let ok = h.with_indeterminacy(vec![ProjPoint::real([0.0, 1.0, 1.0]).unwrap()]);
    assert!(ok.is_ok());
}

#[test]
fn map_file_round_trip() {
    let text = "\
# squaring map
name = sq
component1 = x1^2
component2 = x2^2
component3 = x3^2
two_form_weight = 4
";
    let m = parse_map_file(text).unwrap();
    assert_eq!(m.name(), "sq");
    assert_eq!(m.two_form_weight(), Some(&int(4)));
    let text2 = "\
component1 = x1*(-x1+x2+x3)
component2 = x2*(x1-x2+x3)
component3 = x3*(x1+x2-x3)
indeterminacy = [0:1:1];[1:0:1];[1:1:0]
exceptional = param(1, s, 1-s) -> [0:1:1]
";
    let h = parse_map_file(text2).unwrap();
    assert_eq!(h.indeterminacy().len(), 3);
    assert_eq!(h.exceptional().len(), 1);
    assert!(matches!(
        parse_map_file("component1 = x1\nfoo = 3\n"),
        Err(MapError::MapFile { line: 2, .. })
    ));
    assert!(matches!(
        parse_map_file("component1 = x1\n"),
        Err(MapError::MapFile { .. })
    ));
}
