//! Rational maps of the Riemann sphere, in particular the restriction
//! `r = f_0|_{L_0}`.

mod aberth;
mod basin;

pub use aberth::{aberth, circle_start, eval_with_derivative, relative_residual};
pub use basin::{
    attracting_cycles, classify_basin, hyperbolicity_certificate, AttractingCycle, BasinClassifier,
    BasinResult, CertificateReport, CriticalFate, CONTRACTION_BOUND,
};

use num_complex::Complex64 as C64;
use num_traits::Zero;
use thiserror::Error;

use crate::chebfam::{ft_components, FamilyParameter};
use crate::exactpoly::{parse_unipoly, specialize_to_curve, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Dyn1dError {
    #[error("root finding stalled with residual {residual:e}")]
    RootFindingStalled { residual: f64 },
    #[error("the two constructions of the boundary map disagree: {0}")]
    ConstructionMismatch(String),
    #[error("map must have degree at least {0}")]
    DegreeTooLow(usize),
    #[error("numerator and denominator both vanish")]
    ZeroMap,
    #[error("hyperbolicity check inconclusive: {0}")]
    Inconclusive(String),
}

/// Point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtC {
    Finite(C64),
    Infinity,
}

impl ExtC {
    pub fn finite(self) -> Option<C64> {
        match self {
            ExtC::Finite(z) => Some(z),
            ExtC::Infinity => None,
        }
    }

    /// Homogeneous pair `[z : 1]` or `[1 : 0]`.
    pub fn pair(self) -> [C64; 2] {
        match self {
            ExtC::Finite(z) => [z, C64::new(1.0, 0.0)],
            ExtC::Infinity => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        }
    }

    pub fn from_pair(p: [C64; 2]) -> Self {
        if p[1].norm() <= 1e-300 * p[0].norm() || p[1] == C64::new(0.0, 0.0) {
            ExtC::Infinity
        } else {
            ExtC::Finite(p[0] / p[1])
        }
    }

    pub fn conj(self) -> Self {
        match self {
            ExtC::Finite(z) => ExtC::Finite(z.conj()),
            ExtC::Infinity => ExtC::Infinity,
        }
    }
}

/// Chordal distance on the sphere (at most 1).
pub fn chordal(a: ExtC, b: ExtC) -> f64 {
    let (p, q) = (a.pair(), b.pair());
    let num = (p[0] * q[1] - p[1] * q[0]).norm();
    let np = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
    let nq = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    num / (np * nq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedType {
    Attracting,
    Repelling,
    Indifferent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointRecord {
    pub location: ExtC,
    pub multiplier: C64,
    pub kind: FixedType,
    pub multiplicity: usize,
}

/// Band around `|λ| = 1` reported as indifferent.
pub const INDIFFERENT_BAND: f64 = 1e-9;

/// Roots closer than this are merged into one multiple root.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Rational map `num/den` with exact coefficients and no common factor.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMap1D {
    num: UniPoly,
    den: UniPoly,
    degree: usize,
    num_c: Vec<C64>,
    den_c: Vec<C64>,
}

impl RatMap1D {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, Dyn1dError> {
        if num.is_zero() && den.is_zero() {
            return Err(Dyn1dError::ZeroMap);
        }
        let g = num.gcd(&den);
        let (num, den) = (
            num.div_exact(&g).expect("gcd divides"),
            den.div_exact(&g).expect("gcd divides"),
        );
        let degree = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if degree == 0 {
            return Err(Dyn1dError::DegreeTooLow(1));
        }
        // scale so the denominator (or numerator) has a unit leading coefficient
        let s = den.leading().or(num.leading()).expect("nonzero").recip();
        let (num, den) = (num.scale(&s), den.scale(&s));
        let num_c = padded(&num, degree);
        let den_c = padded(&den, degree);
        Ok(Self {
            num,
            den,
            degree,
            num_c,
            den_c,
        })
    }

    /// `r(z) = −z(5z³−12z²+6z−4) / (4z³−6z²+12z−5)` as literally stated.
    pub fn literal_boundary_map() -> Self {
        let n = parse_unipoly("-z*(5*z^3-12*z^2+6*z-4)", "z").expect("literal parses");
        let d = parse_unipoly("4*z^3-6*z^2+12*z-5", "z").expect("literal parses");
        Self::new(n, d).expect("coprime literal")
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Homogeneous evaluation `[N(a,b) : D(a,b)]`, unnormalized.
    #[inline]
    pub fn eval_pair(&self, p: [C64; 2]) -> [C64; 2] {
        let (a, b) = (p[0], p[1]);
        let mut apow = vec![C64::new(1.0, 0.0); self.degree + 1];
        let mut bpow = vec![C64::new(1.0, 0.0); self.degree + 1];
        for k in 1..=self.degree {
            apow[k] = apow[k - 1] * a;
            bpow[k] = bpow[k - 1] * b;
        }
        let mut n = C64::new(0.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for k in 0..=self.degree {
            let m = apow[k] * bpow[self.degree - k];
            n += self.num_c[k] * m;
            d += self.den_c[k] * m;
        }
        [n, d]
    }

    pub fn eval(&self, z: ExtC) -> ExtC {
        ExtC::from_pair(self.eval_pair(z.pair()))
    }

    /// `r(z)` for finite `z` (may be infinite or NaN at poles).
    #[inline]
    pub fn eval_finite(&self, z: C64) -> C64 {
        let mut n = C64::new(0.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for k in (0..=self.degree).rev() {
            n = n * z + self.num_c[k];
            d = d * z + self.den_c[k];
        }
        n / d
    }

    /// `r'(z)` for finite `z`.
    pub fn derivative_finite(&self, z: C64) -> C64 {
        let (n, dn) = eval_with_derivative(&self.num_c, z);
        let (d, dd) = eval_with_derivative(&self.den_c, z);
        (dn * d - n * dd) / (d * d)
    }

    /// Derivative in the chart `w = 1/z` on both sides, at `w`.
    pub fn derivative_at_infinity_chart(&self, w: C64) -> C64 {
        // R(w) = 1/r(1/w) = D~(w)/N~(w) with reversed coefficient lists
        let nr: Vec<C64> = self.num_c.iter().rev().copied().collect();
        let dr: Vec<C64> = self.den_c.iter().rev().copied().collect();
        let (n, dn) = eval_with_derivative(&nr, w);
        let (d, dd) = eval_with_derivative(&dr, w);
        (dd * n - d * dn) / (n * n)
    }

    /// Multiplier of a fixed point.
    pub fn multiplier(&self, z: ExtC) -> C64 {
        match z {
            ExtC::Finite(z) if z.norm() <= 1.0 => self.derivative_finite(z),
            ExtC::Finite(z) => self.derivative_at_infinity_chart(z.inv()),
            ExtC::Infinity => self.derivative_at_infinity_chart(C64::new(0.0, 0.0)),
        }
    }

    /// Numerator of `r'`: `N'D − N D'`.
    pub fn wronskian(&self) -> UniPoly {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    /// All critical points with multiplicity (`2·degree − 2` in total).
    pub fn critical_points(&self) -> Result<Vec<(ExtC, usize)>, Dyn1dError> {
        if self.degree < 2 {
            return Err(Dyn1dError::DegreeTooLow(2));
        }
        let w = self.wronskian();
        let total = 2 * self.degree - 2;
        let roots = aberth(&to_c64(&w), None, 200, 1e-10)?;
        let mut out = cluster(&roots);
        let at_inf = total - w.degree().unwrap_or(0);
        if at_inf > 0 {
            out.push((ExtC::Infinity, at_inf));
        }
        Ok(out)
    }

    /// Fixed points with multiplicities summing to `degree + 1`.
    pub fn fixed_points_with_multipliers(&self) -> Result<Vec<FixedPointRecord>, Dyn1dError> {
        let zp = &(&UniPoly::x() * &self.den) - &self.num;
        let roots = aberth(&to_c64(&zp), None, 200, 1e-12)?;
        let mut pts = cluster(&roots);
        let at_inf = self.degree + 1 - zp.degree().unwrap_or(0);
        if at_inf > 0 {
            pts.push((ExtC::Infinity, at_inf));
        }
        Ok(pts
            .into_iter()
            .map(|(location, multiplicity)| {
                let multiplier = self.multiplier(location);
                let m = multiplier.norm();
                let kind = if (m - 1.0).abs() < INDIFFERENT_BAND {
                    FixedType::Indifferent
                } else if m < 1.0 {
                    FixedType::Attracting
                } else {
                    FixedType::Repelling
                };
                FixedPointRecord {
                    location,
                    multiplier,
                    kind,
                    multiplicity,
                }
            })
            .collect())
    }

    /// All preimages of a finite `z` (roots of `N(w) − z D(w)`).
    pub fn preimages(&self, z: C64, init: Option<Vec<C64>>) -> Result<Vec<C64>, Dyn1dError> {
        let p: Vec<C64> = self
            .num_c
            .iter()
            .zip(&self.den_c)
            .map(|(n, d)| n - z * d)
            .collect();
        aberth(&p, init, 200, 1e-10)
    }
}

fn padded(p: &UniPoly, degree: usize) -> Vec<C64> {
    let mut v = to_c64(p);
    v.resize(degree + 1, C64::new(0.0, 0.0));
    v
}

fn to_c64(p: &UniPoly) -> Vec<C64> {
    p.to_c64()
}

fn cluster(roots: &[C64]) -> Vec<(ExtC, usize)> {
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for &r in roots {
        match groups
            .iter_mut()
            .find(|(c, _)| (*c - r).norm() <= CLUSTER_TOL * (1.0 + c.norm()))
        {
            Some(g) => {
                g.0 = (g.0 * g.1 as f64 + r) / (g.1 as f64 + 1.0);
                g.1 += 1;
            }
            None => groups.push((r, 1)),
        }
    }
    groups.into_iter().map(|(c, m)| (ExtC::Finite(c), m)).collect()
}

/// Coordinate on `L_0` sending `[1:1:−2], [1:−2:1], [−2:1:1]` to `0, 1, ∞`.
pub fn l0_embedding() -> [UniPoly; 3] {
    [
        parse_unipoly("1 - 2*z", "z").expect("parses"),
        parse_unipoly("1 + z", "z").expect("parses"),
        parse_unipoly("z - 2", "z").expect("parses"),
    ]
}

/// Inverse of [`l0_embedding`]: `z = (y2 − y1)/(y2 − y3)`; also the central
/// projection from `[1:1:1]` followed by this coordinate.
pub fn l0_coordinate(y: &[C64; 3]) -> ExtC {
    ExtC::from_pair([y[1] - y[0], y[1] - y[2]])
}

/// `f_0|_{L_0}` in the coordinate of [`l0_embedding`], built by exact
/// composition.
pub fn composed_boundary_map() -> Result<RatMap1D, Dyn1dError> {
    let t0 = FamilyParameter::new(Rational::zero()).expect("0 is in range");
    let comps = ft_components(t0.exact());
    let img = specialize_to_curve(&comps, &l0_embedding())
        .map_err(|e| Dyn1dError::ConstructionMismatch(e.to_string()))?;
    RatMap1D::new(&img[1] - &img[0], &img[1] - &img[2])
}

/// Builds `r` literally and by composition and checks they coincide exactly
/// and numerically (to `1e-10` at sample points).
pub fn induced_boundary_map() -> Result<RatMap1D, Dyn1dError> {
    let lit = RatMap1D::literal_boundary_map();
    let comp = composed_boundary_map()?;
    let cross = &(lit.numerator() * comp.denominator()) - &(comp.numerator() * lit.denominator());
    if !cross.is_zero() {
        return Err(Dyn1dError::ConstructionMismatch(format!(
            "cross product {cross} is not zero"
        )));
    }
    for k in 0..32 {
        let z = C64::from_polar(0.3 + 0.17 * k as f64, 0.7 * k as f64);
        let d = chordal(lit.eval(ExtC::Finite(z)), comp.eval(ExtC::Finite(z)));
        if d > 1e-10 {
            return Err(Dyn1dError::ConstructionMismatch(format!(
                "values differ by {d:e} at {z}"
            )));
        }
    }
    Ok(lit)
}

#[cfg(test)]
mod tests;
