use rand::Rng;
use rayon::prelude::*;

use super::{
    build_family_map, classify_region, ell, indeterminacy_points, q_point, rho_aff, FamilyInverse,
    FamilyParameter, RegionLabel,
};
use crate::projgeom::{fs_distance, AdaptedChart, C64};
use crate::rng;

/// Worst FS distance between `q` and `f_t(q)` over sampled `q ∈ Q`, with
/// samples within `1e-3` of ℐ excluded.
pub fn verify_q_pointwise_fixed(samples: usize, t: &FamilyParameter, seed: u64) -> f64 {
    let map = build_family_map(t);
    let ind = indeterminacy_points();
    let devs: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            let s = if i % 2 == 0 {
                C64::new(r.gen_range(-6.0..6.0), 0.0)
            } else {
                C64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0))
            };
            let Ok(q) = q_point(s, C64::new(1.0, 0.0)) else {
                return 0.0;
            };
            if ind.iter().any(|a| fs_distance(a, &q) < 1e-3) {
                return 0.0;
            }
            match map.evaluate(&q) {
                Ok(img) => fs_distance(&img, &q),
                Err(_) => f64::INFINITY,
            }
        })
        .collect();
    devs.into_iter().fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoCheck {
    /// Least-squares constant in `ρ(f(x)) = c · ρ(x) · (ℓ1 ℓ2 ℓ3)²(x)`.
    pub c: f64,
    pub max_rel_dev: f64,
    /// `sign ρ(f(p)) = sign ρ(p)` held at every real sample.
    pub sign_preserved: bool,
    pub samples: usize,
}

/// Fits and checks the homogeneous identity `ρ∘f = c ρ (ℓ1ℓ2ℓ3)²` at real
/// points `(x, y, 1)` away from the zero sets of `ρ` and the `ℓ_i`.
pub fn verify_rho_functional_equation(samples: usize, seed: u64) -> RhoCheck {
    let f = build_family_map(&FamilyParameter::one());
    let pairs: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            loop {
                let x: f64 = r.gen_range(-3.0..3.0);
                let y: f64 = r.gen_range(-3.0..3.0);
                let rho = rho_aff(x, y);
                let l = ell(x, y);
                if rho.abs() < 1e-3 || l.iter().any(|v| v.abs() < 1e-3) {
                    continue;
                }
                let v = f.eval_raw(&[x, y, 1.0].map(|c| C64::new(c, 0.0)));
                let fr = [v[0].re, v[1].re, v[2].re];
                let a = fr[0] * fr[0] + fr[1] * fr[1] + fr[2] * fr[2]
                    - 2.0 * (fr[0] * fr[1] + fr[1] * fr[2] + fr[2] * fr[0]);
                let prod = l[0] * l[1] * l[2];
                return (a, rho * prod * prod);
            }
        })
        .collect();
    let num: f64 = pairs.iter().map(|(a, b)| a * b).sum();
    let den: f64 = pairs.iter().map(|(_, b)| b * b).sum();
    let c = num / den;
    let max_rel_dev = pairs
        .iter()
        .map(|(a, b)| (a - c * b).abs() / a.abs())
        .fold(0.0, f64::max);
    let sign_preserved = pairs.iter().all(|(a, b)| (a > &0.0) == (b > &0.0));
    RhoCheck {
        c,
        max_rel_dev,
        sign_preserved,
        samples,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovCheck {
    pub t: f64,
    pub samples: usize,
    /// Targets drawn inside the boundary band of `U` and redrawn.
    pub redrawn: usize,
    /// Targets whose branches did not land one per region, with the labels seen.
    pub exceptions: Vec<([f64; 2], Vec<RegionLabel>)>,
}

/// Draws `samples` real points of `U` (uniform in the adapted disk, away
/// from its boundary band) and checks that the four inverse branches of
/// `f_t` land in `U0, …, U3`, one each.
pub fn verify_markov_property(samples: usize, t: &FamilyParameter, seed: u64) -> MarkovCheck {
    let inv = FamilyInverse { t: t.value() };
    let ch = AdaptedChart::new();
    type Draw = (usize, Option<([f64; 2], Vec<RegionLabel>)>);
    let drawn: Vec<Draw> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            let mut redrawn = 0;
            loop {
                let (a, b): (f64, f64) = (r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
                if a * a + b * b >= 0.25 {
                    continue;
                }
                let p = ch.from_real(a, b);
                if classify_region(&p).ok().and_then(RegionLabel::symbol).is_none() {
                    redrawn += 1;
                    continue;
                }
                let mut labels: Vec<RegionLabel> = (0..4)
                    .map(|k| {
                        inv.branch(&p, k)
                            .ok()
                            .filter(|q| q.is_real(1e-12))
                            .and_then(|q| classify_region(&q).ok())
                            .unwrap_or(RegionLabel::OutsideU)
                    })
                    .collect();
                labels.sort();
                let ok = labels == [RegionLabel::U0, RegionLabel::U1, RegionLabel::U2, RegionLabel::U3];
                return (redrawn, (!ok).then_some(([a, b], labels)));
            }
        })
        .collect();
    MarkovCheck {
        t: t.value(),
        samples,
        redrawn: drawn.iter().map(|d| d.0).sum(),
        exceptions: drawn.into_iter().filter_map(|d| d.1).collect(),
    }
}
