//! Forward fates of random starting points.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::OrbitRecord;
use crate::chebfam::{attractors, classify_region, indeterminacy_points, FamilyEval, FamilyParameter};
use crate::planemap::MapEval;
use crate::projgeom::{fs_distance, ProjPoint, C64};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fate {
    /// Converged to the attracting fixed point `p_j(t)`.
    Attracted(usize),
    /// Ended within the cloud tolerance of the sampled saddle set.
    NearOmega,
    /// Stayed real and inside `U` for the whole budget.
    TrappedInU,
    /// Landed on (or numerically at) an indeterminacy point.
    Indeterminate,
    /// Settled on something none of the classes describe.
    Outlier,
    Unresolved,
}

impl Fate {
    pub fn name(self) -> String {
        match self {
            Fate::Attracted(j) => format!("attracted_{}", j + 1),
            Fate::NearOmega => "near_omega".into(),
            Fate::TrappedInU => "trapped_in_u".into(),
            Fate::Indeterminate => "indeterminate".into(),
            Fate::Outlier => "outlier".into(),
            Fate::Unresolved => "unresolved".into(),
        }
    }

    pub fn is_classified(self) -> bool {
        matches!(self, Fate::Attracted(_) | Fate::NearOmega | Fate::TrappedInU)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FateConfig {
    pub budget: usize,
    pub attract_tol: f64,
    pub cloud_tol: f64,
    /// Final steps that must all lie near the cloud.
    pub cloud_window: usize,
}

impl Default for FateConfig {
    fn default() -> Self {
        Self {
            budget: 500,
            attract_tol: 1e-9,
            cloud_tol: 1e-2,
            cloud_window: 10,
        }
    }
}

fn near_cloud(p: &ProjPoint, cloud: &[ProjPoint], tol: f64) -> bool {
    cloud.iter().any(|c| fs_distance(c, p) < tol)
}

/// Fate of one start under `f_t`.
pub fn classify_fate(
    t: &FamilyParameter,
    start: &ProjPoint,
    cloud: &[ProjPoint],
    cfg: &FateConfig,
) -> (Fate, usize) {
    let ev = FamilyEval { t: t.value() };
    let sinks = attractors(t.value());
    let ind = indeterminacy_points();
    let mut p = *start;
    let mut in_u = true;
    let mut recent: Vec<ProjPoint> = Vec::with_capacity(cfg.budget + 1);
    for n in 0..=cfg.budget {
        if let Some(j) = sinks.iter().position(|s| fs_distance(s, &p) < cfg.attract_tol) {
            return (Fate::Attracted(j), n);
        }
        if ind.iter().any(|a| fs_distance(a, &p) < 1e-12) {
            return (Fate::Indeterminate, n);
        }
        in_u &= matches!(classify_region(&p).map(|l| l.symbol()), Ok(Some(_)));
        recent.push(p);
        if n == cfg.budget {
            break;
        }
        p = match ProjPoint::new(ev.eval(&p.coords())) {
            Ok(q) => q,
            Err(_) => return (Fate::Indeterminate, n),
        };
    }
    let n = cfg.budget;
    if in_u {
        return (Fate::TrappedInU, n);
    }
    let tail = &recent[recent.len().saturating_sub(cfg.cloud_window)..];
    if !cloud.is_empty() && tail.iter().all(|q| near_cloud(q, cloud, cfg.cloud_tol)) {
        return (Fate::NearOmega, n);
    }
    let last = recent[recent.len() - 1];
    let settled = (1..=3).any(|q| recent.len() > q && fs_distance(&recent[recent.len() - 1 - q], &last) < 1e-9);
    if settled {
        (Fate::Outlier, n)
    } else {
        (Fate::Unresolved, n)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FateSurvey {
    pub fates: Vec<(Fate, usize)>,
    pub starts: Vec<ProjPoint>,
}

impl FateSurvey {
    pub fn count(&self, pred: impl Fn(Fate) -> bool) -> usize {
        self.fates.iter().filter(|f| pred(f.0)).count()
    }

    pub fn resolved(&self) -> usize {
        self.count(|f| f != Fate::Unresolved)
    }

    /// Classified over resolved.
    pub fn classified_fraction(&self) -> f64 {
        let r = self.resolved();
        if r == 0 {
            return 0.0;
        }
        self.count(Fate::is_classified) as f64 / r as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,fate,steps\n");
        for (i, (f, n)) in self.fates.iter().enumerate() {
            out.push_str(&format!("{i},{},{n}\n", f.name()));
        }
        out
    }
}

/// Random start uniform for the Fubini–Study volume.
pub fn random_start(r: &mut rng::Rng) -> ProjPoint {
    loop {
        let c = [0, 1, 2].map(|_| C64::new(r.sample(StandardNormal), r.sample(StandardNormal)));
        if let Ok(p) = ProjPoint::new(c) {
            return p;
        }
    }
}

/// Fates of `n` random starts; the cloud is usually the first points of
/// `ν`-sample orbits.
pub fn fate_survey(
    t: &FamilyParameter,
    n: usize,
    cloud: &[OrbitRecord],
    cfg: &FateConfig,
    seed: u64,
) -> FateSurvey {
    let pts: Vec<ProjPoint> = cloud.iter().flat_map(|r| r.points.iter().copied()).collect();
    let starts: Vec<ProjPoint> = (0..n)
        .map(|i| random_start(&mut rng::stream(seed, i as u64)))
        .collect();
    let fates = starts
        .par_iter()
        .map(|s| classify_fate(t, s, &pts, cfg))
        .collect();
    FateSurvey { fates, starts }
}
