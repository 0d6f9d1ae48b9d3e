use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use super::{MapError, PlaneMap, MATCH_TOL};
use crate::projgeom::{fs_distance, LinearChart, ProjPoint, C64, POINT_EQ_TOL};
use crate::rng;

/// Distinct preimages closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct TopDegreeReport {
    pub estimate: usize,
    /// `true` when counted with an inverse-branch provider; otherwise the
    /// estimate is only a lower bound from a Newton search.
    pub exact: bool,
    pub trials: usize,
    /// `(count, number of targets with that count)`.
    pub histogram: Vec<(usize, usize)>,
    /// Worst FS distance between `f(preimage)` and its target.
    pub max_residual: f64,
}

fn random_target(seed: u64, i: usize) -> ProjPoint {
    let mut r = rng::stream(seed, i as u64);
    let c = [0; 3].map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    ProjPoint::new(c).expect("random vector is nonzero")
}

pub(crate) fn dedup(points: Vec<ProjPoint>, tol: f64) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::new();
    for p in points {
        if out.iter().all(|q| fs_distance(&p, q) > tol) {
            out.push(p);
        }
    }
    out
}

impl PlaneMap {
    /// Counts preimages of `trials` random targets.
    pub fn topological_degree(&self, trials: usize, seed: u64) -> Result<TopDegreeReport, MapError> {
        let exact = self.inverse.is_some();
        let results: Vec<Result<(usize, f64), MapError>> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let p = random_target(seed, i);
                let pre = match &self.inverse {
                    Some(inv) => inv.preimages(&p)?,
                    None => self.newton_preimages(&p),
                };
                let mut worst: f64 = 0.0;
                let mut good = Vec::new();
                for q in pre {
                    if let Ok(img) = self.evaluate(&q) {
                        let r = fs_distance(&img, &p);
                        worst = worst.max(r);
                        if r <= MATCH_TOL {
                            good.push(q);
                        }
                    }
                }
                Ok((dedup(good, DEDUP_TOL).len(), worst))
            })
            .collect();
        let mut hist = BTreeMap::new();
        let mut max_residual: f64 = 0.0;
        for r in results {
            let (n, w) = r?;
            *hist.entry(n).or_insert(0usize) += 1;
            max_residual = max_residual.max(w);
        }
        let histogram: Vec<(usize, usize)> = hist.into_iter().collect();
        if exact && histogram.len() > 1 {
            return Err(MapError::InconsistentCounts(histogram));
        }
        let estimate = if exact {
            histogram.first().map(|h| h.0).unwrap_or(0)
        } else {
            histogram.iter().map(|h| h.0).max().unwrap_or(0)
        };
        Ok(TopDegreeReport {
            estimate,
            exact,
            trials,
            histogram,
            max_residual,
        })
    }

    /// Newton search for preimages from a fixed grid of starts in two charts.
    pub fn newton_preimages(&self, p: &ProjPoint) -> Vec<ProjPoint> {
        let m = p.dominant();
        let pc = p.coords();
        let eqs: [usize; 2] = match m {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        };
        let levels = [-1.7, -0.6, 0.3, 1.4];
        let mut found = Vec::new();
        for chart_var in [2usize, 0] {
            let ch = LinearChart::standard(chart_var);
            for &a in &levels {
                for &b in &levels {
                    for &c in &levels {
                        for &d in &levels {
                            let mut y = [C64::new(a, b), C64::new(c, d)];
                            for _ in 0..60 {
                                let x = crate::projgeom::mat_vec(
                                    &ch.inv,
                                    &[y[0], y[1], C64::new(1.0, 0.0)],
                                );
                                let f = self.eval_raw(&x);
                                let j = self.evaluator().jacobian(&x);
                                let r = eqs.map(|i| f[i] * pc[m] - f[m] * pc[i]);
                                let mut jac = [[C64::new(0.0, 0.0); 2]; 2];
                                for (row, &i) in eqs.iter().enumerate() {
                                    for col in 0..2 {
                                        let dx = [0, 1, 2].map(|k| ch.inv[k][col]);
                                        let gi: C64 = (0..3).map(|k| j[i][k] * dx[k]).sum();
                                        let gm: C64 = (0..3).map(|k| j[m][k] * dx[k]).sum();
                                        jac[row][col] = gi * pc[m] - gm * pc[i];
                                    }
                                }
                                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                                if det.norm() < 1e-300 || !det.re.is_finite() {
                                    break;
                                }
                                let dy0 = (r[0] * jac[1][1] - r[1] * jac[0][1]) / det;
                                let dy1 = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
                                y = [y[0] - dy0, y[1] - dy1];
                                if (dy0.norm() + dy1.norm()) < 1e-14 * (1.0 + y[0].norm() + y[1].norm())
                                {
                                    break;
                                }
                            }
                            if let Ok(q) = ch.from_chart(y) {
                                let near_i = self
                                    .nearest_indeterminacy(&q)
                                    .is_some_and(|(_, dd)| dd < 1e3 * POINT_EQ_TOL);
                                if !near_i {
                                    found.push(q);
                                }
                            }
                        }
                    }
                }
            }
        }
        dedup(found, DEDUP_TOL)
    }
}
