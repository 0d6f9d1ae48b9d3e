//! The perturbed Chebyshev family `f_t = T_t ∘ g ∘ h`.
//!
//! * `g = [x1² : x2² : x3²]`
//! * `h = [x1 ℓ1 : x2 ℓ2 : x3 ℓ3]` with `ℓ1 = −x1+x2+x3`, `ℓ2 = x1−x2+x3`,
//!   `ℓ3 = x1+x2−x3`
//! * `T_t(x) = x − (1−t)/3 · (x1+x2+x3) · (1,1,1)`

mod checks;
mod region;

pub use checks::{
    verify_markov_property, verify_q_pointwise_fixed, verify_rho_functional_equation, MarkovCheck,
    RhoCheck,
};
pub use region::{classify_region, ell, rho, rho_aff, RegionError, RegionLabel, BOUNDARY_BAND};

use std::fmt;
use std::sync::Arc;

use num_traits::{One, ToPrimitive, Zero};

use crate::exactpoly::{parse_poly, parse_rational, HomPoly3, Rational, UniPoly};
use crate::planemap::{ExceptionalCurve, InverseBranches, MapError, MapEval, PlaneMap};
use crate::projgeom::{fs_distance, ProjLine, ProjPoint, C64};

/// A parameter `t ∈ [0, 1]`, kept exact.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParameter {
    exact: Rational,
}

impl FamilyParameter {
    pub fn new(t: Rational) -> Option<Self> {
        (t >= Rational::zero() && t <= Rational::one()).then_some(Self { exact: t })
    }

    /// Exact binary value of a float in `[0, 1]`.
    pub fn from_f64(t: f64) -> Option<Self> {
        Self::new(Rational::from_float(t)?)
    }

    /// Accepts `p/q`, integers and decimals such as `0.05` (read exactly).
    pub fn parse(s: &str) -> Option<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn one() -> Self {
        Self {
            exact: Rational::one(),
        }
    }

    pub fn exact(&self) -> &Rational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::NAN)
    }

    /// `t = 0`: `T_0` is the central projection onto `L_0`.
    pub fn is_degenerate(&self) -> bool {
        self.exact.is_zero()
    }
}

impl fmt::Display for FamilyParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}

fn polys(src: [&str; 3]) -> [HomPoly3; 3] {
    src.map(|s| parse_poly(s, &["x1", "x2", "x3"]).expect("built-in polynomial parses"))
}

pub fn g_components() -> [HomPoly3; 3] {
    polys(["x1^2", "x2^2", "x3^2"])
}

pub fn h_components() -> [HomPoly3; 3] {
    polys(["x1*(-x1+x2+x3)", "x2*(x1-x2+x3)", "x3*(x1+x2-x3)"])
}

/// `f = g∘h`, composed exactly.
pub fn f_components() -> [HomPoly3; 3] {
    let h = h_components();
    g_components().map(|c| c.compose(&h).expect("equal inner degrees"))
}

/// `T_t ∘ f`.
pub fn ft_components(t: &Rational) -> [HomPoly3; 3] {
    let f = f_components();
    let s = &(&f[0] + &f[1]) + &f[2];
    let k = (Rational::one() - t) / Rational::from_integer(3.into());
    let shift = s.scale(&k);
    f.map(|c| &c - &shift)
}

/// Indeterminacy points `a_1 = [0:1:1]`, `a_2 = [1:0:1]`, `a_3 = [1:1:0]`.
pub fn indeterminacy_points() -> [ProjPoint; 3] {
    [[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]].map(|c| ProjPoint::real(c).expect("nonzero"))
}

/// The repelling fixed point `[1:1:1]`.
pub fn center() -> ProjPoint {
    ProjPoint::real([1.0, 1.0, 1.0]).expect("nonzero")
}

/// `L_0 = {x1 + x2 + x3 = 0}`.
pub fn line_l0() -> ProjLine {
    ProjLine::real([1.0, 1.0, 1.0]).expect("nonzero")
}

/// Lines `A_j = {ℓ_j = 0}`.
pub fn lines_a() -> [ProjLine; 3] {
    [[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]].map(|d| ProjLine::real(d).expect("nonzero"))
}

/// Parametrizations of `A_1, A_2, A_3`.
pub fn a_parametrizations() -> [[UniPoly; 3]; 3] {
    let s = UniPoly::x();
    let one = UniPoly::one();
    let oms = &one - &s;
    [
        [one.clone(), s.clone(), oms.clone()],
        [s.clone(), one.clone(), oms.clone()],
        [s.clone(), oms, one],
    ]
}

/// The invariant conic `Q = g(L_0)` as `(s², 1, (s+1)²)`.
pub fn q_parametrization() -> [UniPoly; 3] {
    let s = UniPoly::x();
    let s1 = &s + &UniPoly::one();
    [&s * &s, UniPoly::one(), &s1 * &s1]
}

/// Point of `Q` at the homogeneous parameter `(s : u)`.
pub fn q_point(s: C64, u: C64) -> Result<ProjPoint, crate::projgeom::GeomError> {
    ProjPoint::new([s * s, u * u, (s + u) * (s + u)])
}

/// Applies `T_t` to homogeneous coordinates.
pub fn t_apply(t: f64, x: [C64; 3]) -> [C64; 3] {
    let k = (1.0 - t) / 3.0 * (x[0] + x[1] + x[2]);
    x.map(|v| v - k)
}

/// A representative of `T_t^{-1}(y)`, or `None` for `t = 0`.
pub fn t_inverse(t: f64, y: [C64; 3]) -> Option<[C64; 3]> {
    if t == 0.0 {
        return None;
    }
    let s = (1.0 - t) * (y[0] + y[1] + y[2]);
    Some(y.map(|v| v * (3.0 * t) + s))
}

pub fn h_apply(x: [C64; 3]) -> [C64; 3] {
    let l = [-x[0] + x[1] + x[2], x[0] - x[1] + x[2], x[0] + x[1] - x[2]];
    [x[0] * l[0], x[1] * l[1], x[2] * l[2]]
}

/// Closed-form evaluation of `f_t` and its Jacobian.
#[derive(Clone, Copy, Debug)]
pub struct FamilyEval {
    pub t: f64,
}

impl MapEval for FamilyEval {
    fn eval(&self, x: &[C64; 3]) -> [C64; 3] {
        let y = h_apply(*x);
        t_apply(self.t, y.map(|v| v * v))
    }

    fn jacobian(&self, x: &[C64; 3]) -> [[C64; 3]; 3] {
        let l = [-x[0] + x[1] + x[2], x[0] - x[1] + x[2], x[0] + x[1] - x[2]];
        let y = [x[0] * l[0], x[1] * l[1], x[2] * l[2]];
        let mut dg = [[C64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                let dl = if i == k { -1.0 } else { 1.0 };
                let dh = if i == k { l[i] } else { C64::new(0.0, 0.0) } + x[i] * dl;
                dg[i][k] = y[i] * 2.0 * dh;
            }
        }
        let c = (1.0 - self.t) / 3.0;
        let col: [C64; 3] = [0, 1, 2].map(|k| dg[0][k] + dg[1][k] + dg[2][k]);
        dg.map(|row| [0, 1, 2].map(|k| row[k] - col[k] * c))
    }
}

/// Square-root inverse branches `h([±√u : ±√v : √w])`, `[u:v:w] = T_t^{-1}(p)`.
#[derive(Clone, Copy, Debug)]
pub struct FamilyInverse {
    pub t: f64,
}

/// Sign pairs applied to the first two square roots, in branch order.
pub const BRANCH_SIGNS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

impl FamilyInverse {
    /// `T_t^{-1}(p)` at a canonical representative: positive when all
    /// coordinates are real of one sign, max-modulus normalized otherwise.
    fn pulled_back(&self, p: &ProjPoint) -> Result<[C64; 3], MapError> {
        let u = t_inverse(self.t, p.coords()).ok_or(MapError::DegenerateParameter)?;
        let m = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let real = u.iter().all(|z| z.im.abs() <= 1e-14 * m);
        if real && (u.iter().all(|z| z.re > 0.0) || u.iter().all(|z| z.re < 0.0)) {
            let s = if u[0].re > 0.0 { 1.0 / m } else { -1.0 / m };
            return Ok(u.map(|z| C64::new(z.re * s, 0.0)));
        }
        let n = ProjPoint::new(u).map_err(|_| MapError::CriticalTarget(*p))?;
        Ok(n.coords())
    }

    /// Branch `k` (index into [`BRANCH_SIGNS`]).
    pub fn branch(&self, p: &ProjPoint, k: usize) -> Result<ProjPoint, MapError> {
        let u = self.pulled_back(p)?;
        if u.iter().any(|z| z.norm() < 1e-14) {
            return Err(MapError::CriticalTarget(*p));
        }
        let r = u.map(|z| z.sqrt());
        let (a, b) = BRANCH_SIGNS[k];
        ProjPoint::new(h_apply([r[0] * a, r[1] * b, r[2]])).map_err(|_| MapError::CriticalTarget(*p))
    }
}

impl InverseBranches for FamilyInverse {
    fn preimages(&self, p: &ProjPoint) -> Result<Vec<ProjPoint>, MapError> {
        (0..4).map(|k| self.branch(p, k)).collect()
    }
}

/// Closed-form inverse of `g`: `[±√u : ±√v : √w]`.
#[derive(Clone, Copy, Debug)]
pub struct SquareRootInverse;

impl InverseBranches for SquareRootInverse {
    fn preimages(&self, p: &ProjPoint) -> Result<Vec<ProjPoint>, MapError> {
        let u = p.coords();
        if u.iter().any(|z| z.norm() < 1e-14) {
            return Err(MapError::CriticalTarget(*p));
        }
        let r = u.map(|z| z.sqrt());
        BRANCH_SIGNS
            .iter()
            .map(|&(a, b)| ProjPoint::new([r[0] * a, r[1] * b, r[2]]).map_err(MapError::from))
            .collect()
    }
}

/// `h` is an involution: its own inverse away from ℐ.
#[derive(Clone, Copy, Debug)]
pub struct InvolutionInverse;

impl InverseBranches for InvolutionInverse {
    fn preimages(&self, p: &ProjPoint) -> Result<Vec<ProjPoint>, MapError> {
        Ok(vec![ProjPoint::new(h_apply(p.coords())).map_err(|_| MapError::CriticalTarget(*p))?])
    }
}

pub fn g_map() -> PlaneMap {
    PlaneMap::new("g", g_components())
        .expect("g is well formed")
        .with_inverse(Arc::new(SquareRootInverse))
        .with_two_form_weight(Rational::from_integer(4.into()))
}

pub fn h_map() -> PlaneMap {
    let curves = a_parametrizations()
        .into_iter()
        .zip(indeterminacy_points())
        .enumerate()
        .map(|(j, (param, image))| ExceptionalCurve {
            name: format!("A{}", j + 1),
            param,
            image,
        })
        .collect();
    PlaneMap::new("h", h_components())
        .expect("h is well formed")
        .with_indeterminacy(indeterminacy_points().to_vec())
        .expect("h vanishes on a_j")
        .with_exceptional(curves)
        .expect("h collapses A_j to a_j")
        .with_inverse(Arc::new(InvolutionInverse))
        .with_two_form_weight(Rational::one())
}

/// The map `f_t` with exact components, declared ℐ, exceptional lines, a
/// closed-form evaluator and square-root inverse branches.
pub fn build_family_map(t: &FamilyParameter) -> PlaneMap {
    let tf = t.value();
    let name = if t.exact().is_one() {
        "f".to_string()
    } else {
        format!("f_t[t={t}]")
    };
    let mut map = PlaneMap::new(&name, ft_components(t.exact()))
        .expect("f_t is well formed")
        .with_indeterminacy(indeterminacy_points().to_vec())
        .expect("f_t vanishes on a_j")
        .with_evaluator(Arc::new(FamilyEval { t: tf }));
    let images: Vec<ProjPoint> = indeterminacy_points()
        .iter()
        .map(|a| ProjPoint::new(t_apply(tf, a.coords())).expect("T_t(a_j) is nonzero"))
        .collect();
    let curves = a_parametrizations()
        .into_iter()
        .zip(images)
        .enumerate()
        .map(|(j, (param, image))| ExceptionalCurve {
            name: format!("A{}", j + 1),
            param,
            image,
        })
        .collect();
    map = map.with_exceptional(curves).expect("f_t collapses A_j");
    if !t.is_degenerate() {
        map = map.with_inverse(Arc::new(FamilyInverse { t: tf }));
    }
    if t.exact().is_one() {
        map = map.with_two_form_weight(Rational::from_integer(4.into()));
    }
    map
}

pub fn f_map() -> PlaneMap {
    build_family_map(&FamilyParameter::one())
}

/// Resolves `g`, `h`, `f` or `ft` (which needs `t`).
pub fn builtin_map(name: &str, t: Option<&FamilyParameter>) -> Option<PlaneMap> {
    match name {
        "g" => Some(g_map()),
        "h" => Some(h_map()),
        "f" => Some(f_map()),
        "ft" => t.map(build_family_map),
        _ => None,
    }
}

/// The attracting fixed point of `f_t` near `e_{j+1}` (equal to it at `t = 1`),
/// found by forward iteration from `e_{j+1}`.
pub fn attracting_fixed_point(t: f64, j: usize) -> ProjPoint {
    let ev = FamilyEval { t };
    let mut p = ProjPoint::basis(j);
    for _ in 0..5000 {
        let q = ProjPoint::new(ev.eval(&p.coords())).expect("orbit of e_j avoids ℐ");
        let d = fs_distance(&p, &q);
        p = q;
        if d < 1e-16 {
            break;
        }
    }
    p
}

/// All three attracting fixed points for parameter `t`.
pub fn attractors(t: f64) -> [ProjPoint; 3] {
    [0, 1, 2].map(|j| attracting_fixed_point(t, j))
}

#[cfg(test)]
mod tests;
