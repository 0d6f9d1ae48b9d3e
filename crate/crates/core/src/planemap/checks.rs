use rand::Rng;
use rayon::prelude::*;

use super::{det2, MapError, PlaneMap};
use crate::exactpoly::to_f64;
use crate::projgeom::{fs_distance, LinearChart, ProjPoint, C64};
use crate::rng;

fn random_affine(seed: u64, i: usize) -> ProjPoint {
    let mut r = rng::stream(seed, i as u64);
    let x = C64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
    let y = C64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
    ProjPoint::new([x, y, C64::new(1.0, 0.0)]).expect("nonzero")
}

impl PlaneMap {
    /// Worst relative deviation of `J·x·y / (X·Y)` from the declared weight,
    /// where `(X, Y)` is the image in the chart `x3 = 1`.
    pub fn verify_two_form(&self, samples: usize, seed: u64) -> Result<f64, MapError> {
        let delta = self
            .two_form_weight
            .as_ref()
            .map(to_f64)
            .ok_or_else(|| MapError::InvalidDeclaration("no two-form weight".into()))?;
        let ch = LinearChart::standard(2);
        let devs: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let p = random_affine(seed, i);
                let Ok(j) = self.chart_jacobian(&p, &ch, &ch) else {
                    return 0.0;
                };
                let a = p.affine(2).expect("finite sample");
                let Ok(img) = self.evaluate(&p) else {
                    return 0.0;
                };
                let Ok(b) = img.affine(2) else {
                    return 0.0;
                };
                let ratio = det2(&j) * a[0] * a[1] / (b[0] * b[1]);
                (ratio - delta).norm() / delta.abs()
            })
            .collect();
        Ok(devs.into_iter().fold(0.0, f64::max))
    }

    /// Worst FS distance between `f(q)` and `p` over all branches `q` of `p`.
    pub fn verify_branches(&self, samples: usize, seed: u64) -> Result<f64, MapError> {
        let inv = self.inverse.as_ref().ok_or(MapError::NoInverseBranches)?;
        let devs: Vec<Result<f64, MapError>> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let p = random_affine(seed, i);
                let mut worst: f64 = 0.0;
                for q in inv.preimages(&p)? {
                    worst = worst.max(fs_distance(&self.evaluate(&q)?, &p));
                }
                Ok(worst)
            })
            .collect();
        devs.into_iter().try_fold(0.0, |a: f64, d| Ok(a.max(d?)))
    }
}
