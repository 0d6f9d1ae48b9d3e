//! Attracting cycles, contraction neighborhoods, critical-orbit certificates
//! and basin classification.

use num_complex::Complex64 as C64;

use super::{chordal, Dyn1dError, ExtC, FixedType, RatMap1D};

/// Derivative bound defining a contraction neighborhood.
pub const CONTRACTION_BOUND: f64 = 0.9;
const RAYS: usize = 24;
const RAY_SAMPLES: usize = 16;
const MAX_NEIGHBORHOOD: f64 = 0.5;
const MAX_PERIOD: usize = 3;

fn uses_w(z: ExtC) -> bool {
    match z {
        ExtC::Finite(z) => z.norm() > 1.0,
        ExtC::Infinity => true,
    }
}

fn to_chart(z: ExtC, w_chart: bool) -> Option<C64> {
    match (z, w_chart) {
        (ExtC::Finite(z), false) => Some(z),
        (ExtC::Infinity, false) => None,
        (ExtC::Finite(z), true) => Some(if z == C64::new(0.0, 0.0) {
            return None;
        } else {
            z.inv()
        }),
        (ExtC::Infinity, true) => Some(C64::new(0.0, 0.0)),
    }
}

fn from_chart(u: C64, w_chart: bool) -> ExtC {
    if !w_chart {
        ExtC::Finite(u)
    } else if u == C64::new(0.0, 0.0) {
        ExtC::Infinity
    } else {
        ExtC::Finite(u.inv())
    }
}

impl RatMap1D {
    /// Derivative of `r` read in the `z` or `w = 1/z` chart on each side.
    pub fn chart_derivative(&self, z: ExtC, in_w: bool, out_w: bool) -> C64 {
        if in_w {
            let w = to_chart(z, true).unwrap_or(C64::new(f64::INFINITY, 0.0));
            let nr: Vec<C64> = self.num_c.iter().rev().copied().collect();
            let dr: Vec<C64> = self.den_c.iter().rev().copied().collect();
            let (n, dn) = super::eval_with_derivative(&nr, w);
            let (d, dd) = super::eval_with_derivative(&dr, w);
            if out_w {
                (dd * n - d * dn) / (n * n)
            } else {
                (dn * d - n * dd) / (d * d)
            }
        } else {
            let z = z.finite().unwrap_or(C64::new(f64::INFINITY, 0.0));
            let dz = self.derivative_finite(z);
            if out_w {
                let v = self.eval_finite(z);
                -dz / (v * v)
            } else {
                dz
            }
        }
    }

    /// Derivative of `r^k` at `z`, read in `chart` at both ends.
    pub fn iterate_derivative(&self, z: ExtC, k: usize, chart: bool) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        let mut cur = z;
        let mut in_w = chart;
        for i in 0..k {
            let next = self.eval(cur);
            let out_w = if i + 1 == k { chart } else { uses_w(next) };
            acc *= self.chart_derivative(cur, in_w, out_w);
            cur = next;
            in_w = out_w;
        }
        acc
    }

    pub fn iterate(&self, z: ExtC, k: usize) -> ExtC {
        (0..k).fold(z, |c, _| self.eval(c))
    }
}

/// Attracting periodic orbit with its contraction neighborhoods.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractingCycle {
    pub points: Vec<ExtC>,
    pub multiplier: C64,
    /// Per point: chart choice and radius in that chart.
    pub charts: Vec<bool>,
    pub radii: Vec<f64>,
}

impl AttractingCycle {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    fn chart_distance(&self, i: usize, z: ExtC) -> f64 {
        let w = self.charts[i];
        match (to_chart(z, w), to_chart(self.points[i], w)) {
            (Some(a), Some(b)) => (a - b).norm(),
            _ => f64::INFINITY,
        }
    }

    /// Index of a cycle point whose neighborhood of radius `cap` (or the
    /// contraction radius, whichever is smaller) contains `z`.
    pub fn captures(&self, z: ExtC, cap: f64) -> Option<usize> {
        (0..self.points.len()).find(|&i| self.chart_distance(i, z) < self.radii[i].min(cap))
    }
}

fn contraction_radius(map: &RatMap1D, p: ExtC, period: usize, chart: bool) -> f64 {
    let centre = to_chart(p, chart).expect("chart contains its point");
    let ok = |s: f64, th: f64| {
        (1..=RAY_SAMPLES).all(|k| {
            let u = centre + C64::from_polar(s * k as f64 / RAY_SAMPLES as f64, th);
            let d = map.iterate_derivative(from_chart(u, chart), period, chart).norm();
            d.is_finite() && d <= CONTRACTION_BOUND
        })
    };
    if map.iterate_derivative(p, period, chart).norm() > CONTRACTION_BOUND {
        return 0.0;
    }
    let mut radius = MAX_NEIGHBORHOOD;
    for j in 0..RAYS {
        let th = std::f64::consts::TAU * j as f64 / RAYS as f64;
        if ok(radius, th) {
            continue;
        }
        let (mut lo, mut hi) = (0.0, radius);
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if ok(mid, th) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        radius = lo;
    }
    radius
}

fn make_cycle(map: &RatMap1D, points: Vec<ExtC>) -> Option<AttractingCycle> {
    let q = points.len();
    let charts: Vec<bool> = points.iter().map(|&p| uses_w(p)).collect();
    let multiplier = map.iterate_derivative(points[0], q, charts[0]);
    if multiplier.norm() >= 1.0 - super::INDIFFERENT_BAND {
        return None;
    }
    let radii: Vec<f64> = points
        .iter()
        .zip(&charts)
        .map(|(&p, &c)| contraction_radius(map, p, q, c))
        .collect();
    if radii.iter().any(|&r| r <= 0.0) {
        return None;
    }
    Some(AttractingCycle {
        points,
        multiplier,
        charts,
        radii,
    })
}

fn sort_key(z: &ExtC) -> (u8, f64, f64) {
    match z {
        ExtC::Finite(z) => (0, z.re, z.im),
        ExtC::Infinity => (1, 0.0, 0.0),
    }
}

/// Attracting fixed points, then attracting cycles of period 2 and 3 found
/// along critical orbits.
pub fn attracting_cycles(map: &RatMap1D) -> Result<Vec<AttractingCycle>, Dyn1dError> {
    let mut fixed: Vec<ExtC> = map
        .fixed_points_with_multipliers()?
        .into_iter()
        .filter(|f| f.kind == FixedType::Attracting)
        .map(|f| f.location)
        .collect();
    fixed.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).expect("finite keys"));
    let mut cycles: Vec<AttractingCycle> =
        fixed.into_iter().filter_map(|p| make_cycle(map, vec![p])).collect();
    if map.degree() >= 2 {
        for (c, _) in map.critical_points()? {
            let z = map.iterate(c, 2000);
            if cycles.iter().any(|cy| cy.captures(z, f64::INFINITY).is_some()) {
                continue;
            }
            for q in 2..=MAX_PERIOD {
                if chordal(map.iterate(z, q), z) < 1e-9 {
                    let pts: Vec<ExtC> = (0..q).map(|k| map.iterate(z, k)).collect();
                    if let Some(cy) = make_cycle(map, pts) {
                        cycles.push(cy);
                    }
                    break;
                }
            }
        }
    }
    Ok(cycles)
}

/// Outcome of [`BasinClassifier::classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasinResult {
    pub target: Option<usize>,
    pub escape_time: usize,
}

/// Precomputed attracting cycles for fast per-point classification.
#[derive(Clone, Debug)]
pub struct BasinClassifier {
    map: RatMap1D,
    cycles: Vec<AttractingCycle>,
}

impl BasinClassifier {
    pub fn new(map: &RatMap1D) -> Result<Self, Dyn1dError> {
        Ok(Self {
            map: map.clone(),
            cycles: attracting_cycles(map)?,
        })
    }

    pub fn cycles(&self) -> &[AttractingCycle] {
        &self.cycles
    }

    pub fn map(&self) -> &RatMap1D {
        &self.map
    }

    /// First entry time into a contraction neighborhood, or `target: None`
    /// when `max_iter` steps do not suffice.
    pub fn classify(&self, z0: ExtC, max_iter: usize) -> BasinResult {
        let mut z = z0;
        for n in 0..=max_iter {
            for (i, cy) in self.cycles.iter().enumerate() {
                if cy.captures(z, f64::INFINITY).is_some() {
                    return BasinResult {
                        target: Some(i),
                        escape_time: n,
                    };
                }
            }
            if n < max_iter {
                z = self.map.eval(z);
            }
        }
        BasinResult {
            target: None,
            escape_time: max_iter,
        }
    }
}

/// Convenience wrapper building a classifier for one point.
pub fn classify_basin(map: &RatMap1D, z0: C64, max_iter: usize) -> Result<BasinResult, Dyn1dError> {
    Ok(BasinClassifier::new(map)?.classify(ExtC::Finite(z0), max_iter))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalFate {
    pub point: ExtC,
    pub multiplicity: usize,
    pub target: usize,
    pub absorption_time: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub cycles: Vec<AttractingCycle>,
    pub critical: Vec<CriticalFate>,
}

impl CertificateReport {
    /// Critical points (with multiplicity) absorbed by each cycle.
    pub fn absorbed_per_cycle(&self) -> Vec<usize> {
        let mut v = vec![0; self.cycles.len()];
        for c in &self.critical {
            v[c.target] += c.multiplicity;
        }
        v
    }
}

const CONTRACTION_CHECK_STEPS: usize = 8;

/// Grants the certificate when every critical orbit enters the `radius`
/// neighborhood of an attracting cycle and keeps contracting there.
pub fn hyperbolicity_certificate(
    map: &RatMap1D,
    max_iter: usize,
    radius: f64,
) -> Result<CertificateReport, Dyn1dError> {
    let cycles = attracting_cycles(map)?;
    let mut critical = Vec::new();
    for (c, multiplicity) in map.critical_points()? {
        let mut z = c;
        let mut found = None;
        for n in 0..=max_iter {
            if let Some((t, i)) = cycles
                .iter()
                .enumerate()
                .find_map(|(t, cy)| cy.captures(z, radius).map(|i| (t, i)))
            {
                found = Some((t, i, n));
                break;
            }
            z = map.eval(z);
        }
        let Some((t, i, n)) = found else {
            return Err(Dyn1dError::Inconclusive(format!(
                "critical orbit of {c:?} not absorbed within {max_iter} steps"
            )));
        };
        let cy = &cycles[t];
        let q = cy.period();
        let mut d = cy.chart_distance(i, z);
        for _ in 0..CONTRACTION_CHECK_STEPS {
            z = map.iterate(z, q);
            let next = cy.chart_distance(i, z);
            if next > CONTRACTION_BOUND * d && next > 0.0 {
                return Err(Dyn1dError::Inconclusive(format!(
                    "orbit of {c:?} fails to contract near cycle {t}"
                )));
            }
            d = next;
        }
        critical.push(CriticalFate {
            point: c,
            multiplicity,
            target: t,
            absorption_time: n,
        });
    }
    Ok(CertificateReport { cycles, critical })
}
