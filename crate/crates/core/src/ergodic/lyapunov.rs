//! Lyapunov exponents by accumulated QR of Jacobian products.

use super::{Direction, ErgodicError, OrbitChart, OrbitRecord};
use crate::chebfam::{attractors, build_family_map, FamilyEval, FamilyParameter};
use crate::planemap::MapEval;
use crate::projgeom::{fs_distance, ProjPoint, C64};

/// Minimum orbit length accepted by [`lyapunov`].
pub const MIN_ORBIT: usize = 1000;
const BATCHES: usize = 20;
const SINK_LOG: f64 = -700.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovEstimate {
    /// `(λ⁺, λ⁻)` with `λ⁺ ≥ λ⁻`.
    pub exponents: [f64; 2],
    pub orbit_length: usize,
    pub standard_error: [f64; 2],
}

impl LyapunovEstimate {
    /// Signed distance of each exponent from zero in standard errors.
    pub fn z_scores(&self) -> [f64; 2] {
        [
            self.exponents[0] / self.standard_error[0],
            self.exponents[1] / self.standard_error[1],
        ]
    }

    pub fn csv_row(&self, seed: u64) -> String {
        format!(
            "{:.12e},{:.12e},{:.6e},{:.6e},{},{seed}",
            self.exponents[0],
            self.exponents[1],
            self.standard_error[0],
            self.standard_error[1],
            self.orbit_length
        )
    }
}

pub const LYAPUNOV_CSV_HEADER: &str = "lambda_plus,lambda_minus,se_plus,se_minus,length,seed";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LyapunovOutcome {
    Estimate(LyapunovEstimate),
    /// The orbit fell into a superattracting point; exponents diverge to −∞.
    NonHyperbolicSink { step: usize },
}

impl LyapunovOutcome {
    pub fn estimate(&self) -> Option<&LyapunovEstimate> {
        match self {
            LyapunovOutcome::Estimate(e) => Some(e),
            LyapunovOutcome::NonHyperbolicSink { .. } => None,
        }
    }
}

type M2 = [[C64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut o = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    o
}

/// Gram–Schmidt QR of a 2×2 complex matrix: `(Q, |r11|, |r22|)`.
fn qr(a: &M2) -> (M2, f64, f64) {
    let c1 = [a[0][0], a[1][0]];
    let c2 = [a[0][1], a[1][1]];
    let r11 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
    if r11 == 0.0 || !r11.is_finite() {
        return ([[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]], r11, 0.0);
    }
    let q1 = [c1[0] / r11, c1[1] / r11];
    let proj = q1[0].conj() * c2[0] + q1[1].conj() * c2[1];
    let w = [c2[0] - q1[0] * proj, c2[1] - q1[1] * proj];
    let r22 = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    // any unit vector orthogonal to q1 keeps the frame valid when r22 = 0
    let q2 = if r22 > 0.0 {
        [w[0] / r22, w[1] / r22]
    } else {
        [-q1[1].conj(), q1[0].conj()]
    };
    ([[q1[0], q2[0]], [q1[1], q2[1]]], r11, r22)
}

fn batch_standard_error(batches: &[f64]) -> f64 {
    let n = batches.len() as f64;
    let m = batches.iter().sum::<f64>() / n;
    let var = batches.iter().map(|b| (b - m).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

/// Exponents of the Jacobian cocycle along `record`, with batch-means
/// standard errors over 20 batches.
pub fn lyapunov(record: &OrbitRecord) -> Result<LyapunovOutcome, ErgodicError> {
    let n = record.jacobians.len();
    if n < MIN_ORBIT {
        return Err(ErgodicError::TooShort {
            needed: MIN_ORBIT,
            got: n,
        });
    }
    let sinks = attractors(record.t.value());
    let mut q: M2 = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    let mut logs = Vec::with_capacity(n);
    for (k, j) in record.jacobians.iter().enumerate() {
        let (nq, r1, r2) = qr(&mul(j, &q));
        let (l1, l2) = (r1.ln(), r2.ln());
        if !(l1 > SINK_LOG && l2 > SINK_LOG) || !l1.is_finite() || !l2.is_finite() {
            let p = &record.points[k];
            if sinks.iter().any(|s| fs_distance(s, p) < 1e-6) {
                return Ok(LyapunovOutcome::NonHyperbolicSink { step: k });
            }
            return Err(ErgodicError::SingularJacobian { step: k });
        }
        logs.push((l1, l2));
        q = nq;
    }
    let size = n / BATCHES;
    let mut b1 = Vec::with_capacity(BATCHES);
    let mut b2 = Vec::with_capacity(BATCHES);
    for b in 0..BATCHES {
        let chunk = &logs[b * size..(b + 1) * size];
        b1.push(chunk.iter().map(|x| x.0).sum::<f64>() / size as f64);
        b2.push(chunk.iter().map(|x| x.1).sum::<f64>() / size as f64);
    }
    let (s1, s2) = (batch_standard_error(&b1), batch_standard_error(&b2));
    let l1 = logs.iter().map(|x| x.0).sum::<f64>() / n as f64;
    let l2 = logs.iter().map(|x| x.1).sum::<f64>() / n as f64;
    let (exponents, standard_error) = if l1 >= l2 {
        ([l1, l2], [s1, s2])
    } else {
        ([l2, l1], [s2, s1])
    };
    Ok(LyapunovOutcome::Estimate(LyapunovEstimate {
        exponents,
        orbit_length: n,
        standard_error,
    }))
}

/// Forward orbit of `start` under `f_t` of the given length, then
/// [`lyapunov`] in the adapted chart.
pub fn lyapunov_forward(
    t: &FamilyParameter,
    start: &ProjPoint,
    length: usize,
) -> Result<LyapunovOutcome, ErgodicError> {
    let ev = FamilyEval { t: t.value() };
    let mut pts = Vec::with_capacity(length);
    let mut p = *start;
    for _ in 0..length {
        pts.push(p);
        p = ProjPoint::new(ev.eval(&p.coords())).map_err(|_| crate::planemap::MapError::Indeterminate(p))?;
    }
    let map = build_family_map(t);
    let chart = OrbitChart::Adapted.linear();
    let mut jacobians = Vec::with_capacity(length);
    for q in &pts {
        jacobians.push(map.chart_jacobian(q, &chart, &chart)?);
    }
    let record = OrbitRecord {
        labels: pts.iter().map(|p| crate::chebfam::classify_region(p).ok()).collect(),
        points: pts,
        jacobians,
        t: t.clone(),
        direction: Direction::Forward,
        chart: OrbitChart::Adapted,
        seed: 0,
    };
    lyapunov(&record)
}
