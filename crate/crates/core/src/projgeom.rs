//! Points, lines, charts and metrics on the complex projective plane.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Classification routines treat points closer than this (in FS distance) as equal.
pub const POINT_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("all homogeneous coordinates vanish")]
    ZeroVector,
    #[error("point lies on the chart's line at infinity")]
    AtInfinity,
    #[error("cannot project the projection center")]
    CenterProjection,
    #[error("projection center lies on the target line")]
    CenterOnTarget,
    #[error("cannot parse point: {0}")]
    Parse(String),
}

/// Scale factor making the Fubini–Study volume of P² equal to one.
pub fn fs_scale() -> f64 {
    (2.0 / (std::f64::consts::PI * std::f64::consts::PI)).powf(0.25)
}

/// Largest possible FS distance (between orthogonal points).
pub fn fs_diameter() -> f64 {
    fs_scale() * std::f64::consts::FRAC_PI_2
}

fn normalize(v: [C64; 3]) -> Option<[C64; 3]> {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m.is_nan() || m <= 0.0 || !m.is_finite() {
        return None;
    }
    let i = (0..3).find(|&i| v[i].norm() >= m * (1.0 - 1e-12))?;
    let s = v[i];
    let mut out = v.map(|z| z / s);
    out[i] = C64::new(1.0, 0.0);
    Some(out)
}

/// Point of P²; coordinates are stored normalized so that the first
/// coordinate of (near-)maximal modulus equals 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    coords: [C64; 3],
}

impl ProjPoint {
    pub fn new(coords: [C64; 3]) -> Result<Self, GeomError> {
        normalize(coords)
            .map(|coords| Self { coords })
            .ok_or(GeomError::ZeroVector)
    }

    pub fn real(x: [f64; 3]) -> Result<Self, GeomError> {
        Self::new(x.map(|v| C64::new(v, 0.0)))
    }

    /// Standard basis point `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut c = [C64::new(0.0, 0.0); 3];
        c[i] = C64::new(1.0, 0.0);
        Self { coords: c }
    }

    pub fn coords(&self) -> [C64; 3] {
        self.coords
    }

    /// Largest imaginary part among the normalized coordinates.
    pub fn max_imag(&self) -> f64 {
        self.coords.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Real parts of the normalized coordinates.
    pub fn real_coords(&self) -> [f64; 3] {
        self.coords.map(|z| z.re)
    }

    /// Affine coordinates in the standard chart `x_{var+1} = 1`.
    pub fn affine(&self, var: usize) -> Result<[C64; 2], GeomError> {
        let w = self.coords[var];
        if w.norm() < 1e-14 {
            return Err(GeomError::AtInfinity);
        }
        let o: Vec<C64> = (0..3).filter(|&i| i != var).map(|i| self.coords[i] / w).collect();
        Ok([o[0], o[1]])
    }

    /// Index of the coordinate used for normalization.
    pub fn dominant(&self) -> usize {
        (0..3)
            .find(|&i| self.coords[i] == C64::new(1.0, 0.0))
            .unwrap_or(0)
    }

    pub fn map_linear(&self, m: &[[C64; 3]; 3]) -> Result<Self, GeomError> {
        Self::new(mat_vec(m, &self.coords))
    }

    pub fn fs_distance(&self, other: &Self) -> f64 {
        fs_distance(self, other)
    }
}

pub fn mat_vec(m: &[[C64; 3]; 3], v: &[C64; 3]) -> [C64; 3] {
    [0, 1, 2].map(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2])
}

fn cross(a: &[C64; 3], b: &[C64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &[C64; 3], b: &[C64; 3]) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &[C64; 3]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Fubini–Study distance, scaled so that P² has unit volume.
pub fn fs_distance(p: &ProjPoint, q: &ProjPoint) -> f64 {
    let (a, b) = (&p.coords, &q.coords);
    let herm: C64 = (0..3).map(|i| a[i] * b[i].conj()).sum();
    let s = norm(&cross(a, b));
    fs_scale() * s.atan2(herm.norm())
}

/// Line `{a·x1 + b·x2 + c·x3 = 0}` stored by normalized dual coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjLine {
    dual: [C64; 3],
}

impl ProjLine {
    pub fn new(dual: [C64; 3]) -> Result<Self, GeomError> {
        normalize(dual)
            .map(|dual| Self { dual })
            .ok_or(GeomError::ZeroVector)
    }

    pub fn real(d: [f64; 3]) -> Result<Self, GeomError> {
        Self::new(d.map(|v| C64::new(v, 0.0)))
    }

    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self, GeomError> {
        Self::new(cross(&p.coords, &q.coords))
    }

    pub fn dual(&self) -> [C64; 3] {
        self.dual
    }

    /// `|L·p| / (|L||p|)`; zero exactly on the line.
    pub fn incidence(&self, p: &ProjPoint) -> f64 {
        dot(&self.dual, &p.coords).norm() / (norm(&self.dual) * norm(&p.coords))
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.incidence(p) <= tol
    }

    pub fn meet(&self, other: &Self) -> Result<ProjPoint, GeomError> {
        ProjPoint::new(cross(&self.dual, &other.dual))
    }
}

/// Projects `p` from `center` onto `target` along the line through both.
pub fn central_projection(
    center: &ProjPoint,
    target: &ProjLine,
    p: &ProjPoint,
) -> Result<ProjPoint, GeomError> {
    if target.contains(center, 1e-12) {
        return Err(GeomError::CenterOnTarget);
    }
    if fs_distance(center, p) < POINT_EQ_TOL {
        return Err(GeomError::CenterProjection);
    }
    let lp = dot(&target.dual, &p.coords);
    let lc = dot(&target.dual, &center.coords);
    let (c, x) = (&center.coords, &p.coords);
    ProjPoint::new([0, 1, 2].map(|i| lp * c[i] - lc * x[i]))
}

/// Affine chart with `L_0 = {x1+x2+x3 = 0}` at infinity, `[1:1:1]` at the
/// origin and `e_1, e_2, e_3` at the unit cube roots `1, ω, ω²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptedChart {
    m: [[f64; 3]; 3],
    inv: [[f64; 3]; 3],
}

impl Default for AdaptedChart {
    fn default() -> Self {
        Self::new()
    }
}

impl AdaptedChart {
    pub fn new() -> Self {
        let r = 3f64.sqrt();
        Self {
            m: [[1.0, -0.5, -0.5], [0.0, r / 2.0, -r / 2.0], [1.0, 1.0, 1.0]],
            inv: [
                [2.0 / 3.0, 0.0, 1.0 / 3.0],
                [-1.0 / 3.0, 1.0 / r, 1.0 / 3.0],
                [-1.0 / 3.0, -1.0 / r, 1.0 / 3.0],
            ],
        }
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn inverse_matrix(&self) -> [[f64; 3]; 3] {
        self.inv
    }

    /// Homogeneous chart vector `(a, b, w)` of a point.
    pub fn lift(&self, p: &ProjPoint) -> [C64; 3] {
        let x = p.coords();
        [0, 1, 2].map(|r| x[0] * self.m[r][0] + x[1] * self.m[r][1] + x[2] * self.m[r][2])
    }

    pub fn to_chart(&self, p: &ProjPoint) -> Result<[C64; 2], GeomError> {
        let v = self.lift(p);
        if v[2].norm() < 1e-12 * norm(&v) {
            return Err(GeomError::AtInfinity);
        }
        Ok([v[0] / v[2], v[1] / v[2]])
    }

    pub fn from_chart(&self, a: [C64; 2]) -> ProjPoint {
        self.from_homogeneous([a[0], a[1], C64::new(1.0, 0.0)])
            .expect("chart points are never the zero vector")
    }

    pub fn from_homogeneous(&self, v: [C64; 3]) -> Result<ProjPoint, GeomError> {
        ProjPoint::new(
            [0, 1, 2].map(|r| v[0] * self.inv[r][0] + v[1] * self.inv[r][1] + v[2] * self.inv[r][2]),
        )
    }

    pub fn from_real(&self, a: f64, b: f64) -> ProjPoint {
        self.from_chart([C64::new(a, 0.0), C64::new(b, 0.0)])
    }
}

/// General affine chart: homogeneous chart vector `v = M·x`, coordinates
/// `(v0/v2, v1/v2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearChart {
    pub m: [[C64; 3]; 3],
    pub inv: [[C64; 3]; 3],
}

fn to_c(m: [[f64; 3]; 3]) -> [[C64; 3]; 3] {
    m.map(|r| r.map(|v| C64::new(v, 0.0)))
}

impl LinearChart {
    /// Standard chart `x_{var+1} = 1`, remaining coordinates in increasing order.
    pub fn standard(var: usize) -> Self {
        let others: Vec<usize> = (0..3).filter(|&i| i != var).collect();
        let mut m = [[0.0; 3]; 3];
        m[0][others[0]] = 1.0;
        m[1][others[1]] = 1.0;
        m[2][var] = 1.0;
        let mut inv = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                inv[c][r] = m[r][c];
            }
        }
        Self {
            m: to_c(m),
            inv: to_c(inv),
        }
    }

    pub fn adapted() -> Self {
        let a = AdaptedChart::new();
        Self {
            m: to_c(a.matrix()),
            inv: to_c(a.inverse_matrix()),
        }
    }

    /// Chart from rows of `m`; `None` when singular.
    pub fn from_rows(m: [[C64; 3]; 3]) -> Option<Self> {
        let inv = invert3(&m)?;
        Some(Self { m, inv })
    }

    pub fn to_chart(&self, p: &ProjPoint) -> Result<[C64; 2], GeomError> {
        let v = mat_vec(&self.m, &p.coords());
        if v[2].norm() < 1e-12 * norm(&v) {
            return Err(GeomError::AtInfinity);
        }
        Ok([v[0] / v[2], v[1] / v[2]])
    }

    pub fn from_chart(&self, a: [C64; 2]) -> Result<ProjPoint, GeomError> {
        ProjPoint::new(mat_vec(&self.inv, &[a[0], a[1], C64::new(1.0, 0.0)]))
    }
}

/// Inverse of a 3×3 complex matrix by cofactors.
pub fn invert3(m: &[[C64; 3]; 3]) -> Option<[[C64; 3]; 3]> {
    let c = |r: usize, k: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        m[r1][k1] * m[r2][k2] - m[r1][k2] * m[r2][k1]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-14 * scale.powi(3) {
        return None;
    }
    let mut out = [[C64::new(0.0, 0.0); 3]; 3];
    for r in 0..3 {
        for k in 0..3 {
            out[k][r] = c(r, k) / det;
        }
    }
    Some(out)
}

fn fmt_c(z: C64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im < 0.0 {
        format!("{}-{}i", z.re, -im)
    } else {
        format!("{}+{}i", z.re, im)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coords;
        write!(f, "[{} : {} : {}]", fmt_c(c[0]), fmt_c(c[1]), fmt_c(c[2]))
    }
}

fn parse_c(s: &str) -> Option<C64> {
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| {
                (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
            })
            .map(|(i, _)| i)
            .last();
        return match split {
            Some(i) => Some(C64::new(
                body[..i].trim().parse().ok()?,
                body[i..].replace(' ', "").parse().ok()?,
            )),
            None => Some(C64::new(0.0, body.trim().parse().ok()?)),
        };
    }
    Some(C64::new(s.parse().ok()?, 0.0))
}

impl FromStr for ProjPoint {
    type Err = GeomError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeomError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut c = [C64::new(0.0, 0.0); 3];
        for (slot, part) in c.iter_mut().zip(parts) {
            *slot = parse_c(part).ok_or_else(bad)?;
        }
        Self::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_point(rng: &mut ChaCha8Rng) -> ProjPoint {
        ProjPoint::new([0; 3].map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .unwrap()
    }

    #[test]
    fn fs_distance_examples() {
        let e1 = ProjPoint::basis(0);
        let e2 = ProjPoint::basis(1);
        assert_eq!(fs_distance(&e1, &e1), 0.0);
        assert!((fs_distance(&e1, &e2) - fs_diameter()).abs() < 1e-15);
        assert!((fs_diameter() - 1.053_907_365).abs() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let (p, q) = (rand_point(&mut rng), rand_point(&mut rng));
            assert_eq!(fs_distance(&p, &q), fs_distance(&q, &p));
            assert!(fs_distance(&p, &q) <= fs_diameter() + 1e-12);
        }
    }

    #[test]
    fn normalization_is_projective() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let p = rand_point(&mut rng);
            let s = C64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let q = ProjPoint::new(p.coords().map(|z| z * s)).unwrap();
            for i in 0..3 {
                assert!((p.coords()[i] - q.coords()[i]).norm() < 1e-14);
            }
        }
        assert_eq!(
            ProjPoint::new([C64::new(0.0, 0.0); 3]),
            Err(GeomError::ZeroVector)
        );
    }

    #[test]
    fn central_projection_examples() {
        let c = ProjPoint::real([1.0, 1.0, 1.0]).unwrap();
        let l0 = ProjLine::real([1.0, 1.0, 1.0]).unwrap();
        let img = central_projection(&c, &l0, &ProjPoint::basis(0)).unwrap();
        let want = ProjPoint::real([2.0, -1.0, -1.0]).unwrap();
        assert!(fs_distance(&img, &want) < 1e-14);
        let on = ProjPoint::real([1.0, -3.0, 2.0]).unwrap();
        assert!(fs_distance(&central_projection(&c, &l0, &on).unwrap(), &on) < 1e-14);
        assert_eq!(
            central_projection(&c, &l0, &c),
            Err(GeomError::CenterProjection)
        );
    }

    #[test]
    fn chart_examples() {
        let ch = AdaptedChart::new();
        let o = ch.to_chart(&ProjPoint::real([1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert!(o[0].norm() < 1e-15 && o[1].norm() < 1e-15);
        let v: Vec<[C64; 2]> = (0..3)
            .map(|i| ch.to_chart(&ProjPoint::basis(i)).unwrap())
            .collect();
        assert!((v[0][0] - 1.0).norm() < 1e-15 && v[0][1].norm() < 1e-15);
        for i in 0..3 {
            let z = C64::new(v[i][0].re, v[i][1].re);
            assert!((z.norm() - 1.0).abs() < 1e-14);
            let w = C64::new(v[(i + 1) % 3][0].re, v[(i + 1) % 3][1].re);
            assert!(((w / z).arg() - 2.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-14);
        }
        let inf = ProjPoint::real([1.0, -1.0, 0.0]).unwrap();
        assert_eq!(ch.to_chart(&inf), Err(GeomError::AtInfinity));
    }

    #[test]
    fn chart_round_trip() {
        let ch = AdaptedChart::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l0 = ProjLine::real([1.0, 1.0, 1.0]).unwrap();
        let mut checked = 0;
        while checked < 10_000 {
            let p = rand_point(&mut rng);
            if l0.incidence(&p) < 1e-3 {
                continue;
            }
            let back = ch.from_chart(ch.to_chart(&p).unwrap());
            assert!(fs_distance(&p, &back) < 1e-12);
            checked += 1;
        }
    }

    #[test]
    fn linear_charts() {
        let p = ProjPoint::real([2.0, -1.0, 4.0]).unwrap();
        let a = LinearChart::standard(1).to_chart(&p).unwrap();
        assert!((a[0] + 2.0).norm() < 1e-15 && (a[1] + 4.0).norm() < 1e-15);
        let ad = LinearChart::adapted();
        let z = ad.to_chart(&p).unwrap();
        let w = AdaptedChart::new().to_chart(&p).unwrap();
        assert!((z[0] - w[0]).norm() < 1e-14 && (z[1] - w[1]).norm() < 1e-14);
        let back = ad.from_chart(z).unwrap();
        assert!(fs_distance(&back, &p) < 1e-14);
        let i = invert3(&ad.m).unwrap();
        for r in 0..3 {
            for k in 0..3 {
                assert!((i[r][k] - ad.inv[r][k]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn display_parse() {
        let p = ProjPoint::new([C64::new(1.0, 0.0), C64::new(-0.25, 2.5e-3), C64::new(0.5, -1e-20)])
            .unwrap();
        let q: ProjPoint = p.to_string().parse().unwrap();
        assert_eq!(p, q);
        let r: ProjPoint = "[1 : 0 : 1]".parse().unwrap();
        assert_eq!(r, ProjPoint::real([1.0, 0.0, 1.0]).unwrap());
        assert!("[1:2]".parse::<ProjPoint>().is_err());
    }
}
