//! Rational self-maps of P² given by three homogeneous polynomials.

mod checks;
mod degrees;
mod mapfile;
mod stability;
mod topdeg;

pub use degrees::DegreeSequence;
pub use mapfile::parse_map_file;
pub use stability::{StabilityReport, Violation};
pub use topdeg::TopDegreeReport;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactpoly::{strip_common_factor, Exps, HomPoly3, PolyError, Rational, UniPoly};
use crate::projgeom::{fs_distance, mat_vec, GeomError, LinearChart, ProjPoint, C64, POINT_EQ_TOL};

/// Declared points are matched against orbits at this FS tolerance.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("point {point} is within {distance:e} of indeterminacy point {near}")]
    NearIndeterminacy {
        point: ProjPoint,
        near: ProjPoint,
        distance: f64,
    },
    #[error("all components vanish at {0}")]
    Indeterminate(ProjPoint),
    #[error("symbolic budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("generic points have different preimage counts: {0:?}")]
    InconsistentCounts(Vec<(usize, usize)>),
    #[error("orbit lost precision at step {step}")]
    OrbitEscapedPrecision { step: usize },
    #[error("curve collapses into the indeterminacy set at step {step}")]
    CurveHitsIndeterminacy { step: usize },
    #[error("invalid declaration: {0}")]
    InvalidDeclaration(String),
    #[error("map has no inverse-branch provider")]
    NoInverseBranches,
    #[error("target {0} is a critical value (a coordinate of the pulled-back point vanishes)")]
    CriticalTarget(ProjPoint),
    #[error("parameter t = 0 gives a non-invertible map")]
    DegenerateParameter,
    #[error("map file line {line}: {msg}")]
    MapFile { line: usize, msg: String },
}

/// Numeric evaluation of a map in homogeneous coordinates.
pub trait MapEval: Send + Sync {
    fn eval(&self, x: &[C64; 3]) -> [C64; 3];
    /// Rows are components, columns are variables.
    fn jacobian(&self, x: &[C64; 3]) -> [[C64; 3]; 3];
}

/// Enumerates all preimages of a point.
pub trait InverseBranches: Send + Sync {
    fn preimages(&self, p: &ProjPoint) -> Result<Vec<ProjPoint>, MapError>;
}

#[derive(Clone, Debug)]
struct NumericPoly {
    terms: Vec<(Exps, f64)>,
}

impl NumericPoly {
    fn new(p: &HomPoly3) -> Self {
        Self {
            terms: p.to_f64_terms(),
        }
    }

    fn eval(&self, pw: &[Vec<C64>; 3]) -> C64 {
        self.terms.iter().fold(C64::new(0.0, 0.0), |acc, (e, c)| {
            acc + pw[0][e[0] as usize] * pw[1][e[1] as usize] * pw[2][e[2] as usize] * *c
        })
    }
}

fn powers(x: &[C64; 3], d: u32) -> [Vec<C64>; 3] {
    x.map(|v| {
        let mut list = Vec::with_capacity(d as usize + 1);
        let mut acc = C64::new(1.0, 0.0);
        for _ in 0..=d {
            list.push(acc);
            acc *= v;
        }
        list
    })
}

/// Term-by-term evaluation of exact components and their partials.
#[derive(Clone, Debug)]
pub struct PolyEval {
    comps: [NumericPoly; 3],
    partials: [[NumericPoly; 3]; 3],
    degree: u32,
}

impl PolyEval {
    pub fn new(components: &[HomPoly3; 3]) -> Self {
        Self {
            comps: components.each_ref().map(NumericPoly::new),
            partials: components
                .each_ref()
                .map(|c| [0, 1, 2].map(|v| NumericPoly::new(&c.partial(v)))),
            degree: components[0].degree(),
        }
    }
}

impl MapEval for PolyEval {
    fn eval(&self, x: &[C64; 3]) -> [C64; 3] {
        let pw = powers(x, self.degree);
        self.comps.each_ref().map(|c| c.eval(&pw))
    }

    fn jacobian(&self, x: &[C64; 3]) -> [[C64; 3]; 3] {
        let pw = powers(x, self.degree);
        self.partials.each_ref().map(|row| {
            row.each_ref().map(|p| p.eval(&pw))
        })
    }
}

/// A curve collapsed by the map, given by a parametrization and its image.
#[derive(Clone, Debug)]
pub struct ExceptionalCurve {
    pub name: String,
    pub param: [UniPoly; 3],
    pub image: ProjPoint,
}

/// Rational self-map of P² with declared indeterminacy and exceptional data.
#[derive(Clone)]
pub struct PlaneMap {
    name: String,
    components: [HomPoly3; 3],
    eval: Arc<dyn MapEval>,
    indeterminacy: Vec<ProjPoint>,
    exceptional: Vec<ExceptionalCurve>,
    inverse: Option<Arc<dyn InverseBranches>>,
    two_form_weight: Option<Rational>,
}

impl fmt::Debug for PlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneMap")
            .field("name", &self.name)
            .field("components", &self.components)
            .field("indeterminacy", &self.indeterminacy)
            .field("exceptional", &self.exceptional)
            .field("has_inverse", &self.inverse.is_some())
            .field("two_form_weight", &self.two_form_weight)
            .finish()
    }
}

/// Joint rescaling to coprime integer coefficients, positive leading term.
fn normalize_triple(t: [HomPoly3; 3]) -> [HomPoly3; 3] {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for p in &t {
        for (_, c) in p.terms() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
    }
    if num.is_zero() {
        return t;
    }
    let mut s = Rational::new(den, num);
    let lead = t.iter().find_map(|p| p.leading().map(|(_, c)| c.is_negative()));
    if lead == Some(true) {
        s = -s;
    }
    t.map(|p| p.scale(&s))
}

impl PlaneMap {
    /// Builds a map, removing any common factor of the components.
    pub fn new(name: &str, components: [HomPoly3; 3]) -> Result<Self, MapError> {
        let (stripped, _) = strip_common_factor(&components[0], &components[1], &components[2])?;
        let deg = stripped.iter().filter(|p| !p.is_zero()).map(|p| p.degree()).max();
        let stripped = stripped.map(|p| {
            if p.is_zero() {
                HomPoly3::zero(deg.unwrap_or(0))
            } else {
                p
            }
        });
        let components = normalize_triple(stripped);
        Ok(Self {
            name: name.to_string(),
            eval: Arc::new(PolyEval::new(&components)),
            components,
            indeterminacy: Vec::new(),
            exceptional: Vec::new(),
            inverse: None,
            two_form_weight: None,
        })
    }

    /// Declares indeterminacy points; each must annihilate all components.
    pub fn with_indeterminacy(mut self, pts: Vec<ProjPoint>) -> Result<Self, MapError> {
        for p in &pts {
            let v = self.eval.eval(&p.coords());
            let scale = self.coefficient_scale();
            if v.iter().any(|z| z.norm() > 1e-9 * scale) {
                return Err(MapError::InvalidDeclaration(format!(
                    "{p} is not a common zero of the components"
                )));
            }
        }
        self.indeterminacy = pts;
        Ok(self)
    }

    /// Declares exceptional curves; the map must be constant along each.
    pub fn with_exceptional(mut self, curves: Vec<ExceptionalCurve>) -> Result<Self, MapError> {
        for c in &curves {
            for k in 0..7 {
                let s = C64::new(0.37 + 0.61 * k as f64, 0.23 - 0.17 * k as f64);
                let x = c.param.each_ref().map(|u| u.eval_c64(s));
                let v = self.eval.eval(&x);
                let Ok(img) = ProjPoint::new(v) else {
                    continue;
                };
                if fs_distance(&img, &c.image) > MATCH_TOL {
                    return Err(MapError::InvalidDeclaration(format!(
                        "curve {} does not map to {}",
                        c.name, c.image
                    )));
                }
            }
        }
        self.exceptional = curves;
        Ok(self)
    }

    pub fn with_inverse(mut self, inv: Arc<dyn InverseBranches>) -> Self {
        self.inverse = Some(inv);
        self
    }

    pub fn with_two_form_weight(mut self, w: Rational) -> Self {
        self.two_form_weight = Some(w);
        self
    }

    /// Replaces the term-by-term evaluator by an equivalent faster one.
    pub fn with_evaluator(mut self, eval: Arc<dyn MapEval>) -> Self {
        self.eval = eval;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[HomPoly3; 3] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components[0].degree()
    }

    pub fn indeterminacy(&self) -> &[ProjPoint] {
        &self.indeterminacy
    }

    pub fn exceptional(&self) -> &[ExceptionalCurve] {
        &self.exceptional
    }

    pub fn two_form_weight(&self) -> Option<&Rational> {
        self.two_form_weight.as_ref()
    }

    pub fn inverse(&self) -> Option<&Arc<dyn InverseBranches>> {
        self.inverse.as_ref()
    }

    pub fn evaluator(&self) -> &Arc<dyn MapEval> {
        &self.eval
    }

    fn coefficient_scale(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|p| p.to_f64_terms())
            .map(|(_, c)| c.abs())
            .fold(1.0, f64::max)
    }

    /// Raw homogeneous evaluation without checks or normalization.
    pub fn eval_raw(&self, x: &[C64; 3]) -> [C64; 3] {
        self.eval.eval(x)
    }

    /// Nearest declared indeterminacy point and its distance.
    pub fn nearest_indeterminacy(&self, p: &ProjPoint) -> Option<(ProjPoint, f64)> {
        self.indeterminacy
            .iter()
            .map(|a| (*a, fs_distance(a, p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// `[f1(p) : f2(p) : f3(p)]`, normalized.
    pub fn evaluate(&self, p: &ProjPoint) -> Result<ProjPoint, MapError> {
        if let Some((near, distance)) = self.nearest_indeterminacy(p) {
            if distance <= POINT_EQ_TOL {
                return Err(MapError::NearIndeterminacy {
                    point: *p,
                    near,
                    distance,
                });
            }
        }
        ProjPoint::new(self.eval.eval(&p.coords())).map_err(|_| MapError::Indeterminate(*p))
    }

    /// Derivative of the map between two linear charts at `p`.
    pub fn chart_jacobian(
        &self,
        p: &ProjPoint,
        input: &LinearChart,
        output: &LinearChart,
    ) -> Result<[[C64; 2]; 2], MapError> {
        if let Some((near, distance)) = self.nearest_indeterminacy(p) {
            if distance <= POINT_EQ_TOL {
                return Err(MapError::NearIndeterminacy {
                    point: *p,
                    near,
                    distance,
                });
            }
        }
        let u = input.to_chart(p)?;
        let x = mat_vec(&input.inv, &[u[0], u[1], C64::new(1.0, 0.0)]);
        let fx = mat_vec(&output.m, &self.eval.eval(&x));
        let fnorm = fx.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if fnorm == 0.0 {
            return Err(MapError::Indeterminate(*p));
        }
        if fx[2].norm() < 1e-12 * fnorm {
            return Err(GeomError::AtInfinity.into());
        }
        let j = self.eval.jacobian(&x);
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for col in 0..2 {
            let dx = [0, 1, 2].map(|r| input.inv[r][col]);
            let df = mat_vec(&j, &dx);
            let dfo = mat_vec(&output.m, &df);
            for row in 0..2 {
                out[row][col] = (dfo[row] * fx[2] - fx[row] * dfo[2]) / (fx[2] * fx[2]);
            }
        }
        Ok(out)
    }

    /// Derivative in the adapted chart (same chart on both sides).
    pub fn affine_jacobian(&self, p: &ProjPoint) -> Result<[[C64; 2]; 2], MapError> {
        let ch = LinearChart::adapted();
        self.chart_jacobian(p, &ch, &ch)
    }
}

/// Eigenvalues of a complex 2×2 matrix.
pub fn eigenvalues2(m: &[[C64; 2]; 2]) -> [C64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

pub fn det2(m: &[[C64; 2]; 2]) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

#[cfg(test)]
mod tests;
