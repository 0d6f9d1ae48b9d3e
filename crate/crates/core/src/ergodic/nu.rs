//! The saddle measure `ν` for small `t`, sampled through histories of the
//! boundary map `r` on `L0`.

use rand::Rng;
use rayon::prelude::*;

use super::{Direction, ErgodicError, OrbitChart, OrbitRecord};
use crate::chebfam::{build_family_map, FamilyEval, FamilyParameter};
use crate::dyn1d::RatMap1D;
use crate::planemap::MapEval;
use crate::projgeom::{LinearChart, ProjPoint, C64};
use crate::rng;

/// Coordinates `(z, v)` with `y = (1 − 2z + v, 1 + z + v, z − 2 + v)`, so
/// `v = 0` is `L0` carrying the coordinate of `r`.
pub fn line_chart() -> LinearChart {
    let a = 1.0 / 3.0;
    let c = |x: f64| C64::new(x, 0.0);
    LinearChart::from_rows([
        [c(-a), c(a), c(0.0)],
        [c(a), c(a), c(a)],
        [c(0.0), c(a), c(-a)],
    ])
    .expect("invertible")
}

fn lift(z: C64, v: C64) -> [C64; 3] {
    let one = C64::new(1.0, 0.0);
    [one - z * 2.0 + v, one + z + v, z - one * 2.0 + v]
}

/// `f_t` in the `(z, v)` chart together with `∂z'/∂z`.
fn step(ev: &FamilyEval, z: C64, v: C64) -> (C64, C64, C64) {
    let y = lift(z, v);
    let f = ev.eval(&y);
    let j = ev.jacobian(&y);
    let dir = [C64::new(-2.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
    let df: [C64; 3] = [0, 1, 2].map(|r| j[r][0] * dir[0] + j[r][1] * dir[1] + j[r][2] * dir[2]);
    let den = f[1] - f[2];
    let num = f[1] - f[0];
    let zn = num / den;
    let vn = (f[0] + f[1] + f[2]) / den;
    let dz = ((df[1] - df[0]) * den - num * (df[1] - df[2])) / (den * den);
    (zn, vn, dz)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NuConfig {
    /// Steps between the start on `L0` and the first recorded point.
    pub history_depth: usize,
    pub orbit_length: usize,
    /// Steps after the last recorded point whose endpoint is pinned on `r`'s
    /// history.
    pub future_margin: usize,
    pub max_t: f64,
    /// Largest `|v|` tolerated along the orbit.
    pub neighborhood: f64,
    pub max_sweeps: usize,
}

impl Default for NuConfig {
    fn default() -> Self {
        Self {
            history_depth: 20,
            orbit_length: 1,
            future_margin: 40,
            max_t: 0.1,
            neighborhood: 1.0,
            max_sweeps: 200,
        }
    }
}

const WARMUP: usize = 64;
const BVP_TOL: f64 = 1e-14;

/// Backward history of `r`: `out[k+1] = r(out[k])`, drawn from the far end.
fn r_history(r: &RatMap1D, len: usize, rng: &mut rng::Rng) -> Result<Vec<C64>, ErgodicError> {
    let mut z = C64::new(0.3, 0.7);
    for _ in 0..WARMUP {
        let pre = r.preimages(z, None)?;
        z = pre[rng.gen_range(0..pre.len())];
    }
    let mut out = vec![z; len];
    for k in (0..len - 1).rev() {
        let pre = r.preimages(out[k + 1], None)?;
        out[k] = pre[rng.gen_range(0..pre.len())];
    }
    Ok(out)
}

/// Orbit `(z_k, v_k)` of `f_t` with `v_0 = 0` and `z_N` pinned, by
/// alternating forward sweeps in `v` and backward Newton sweeps in `z`.
fn solve_bvp(
    ev: &FamilyEval,
    mut z: Vec<C64>,
    cfg: &NuConfig,
) -> Result<Vec<(C64, C64)>, ErgodicError> {
    let n = z.len();
    let mut v = vec![C64::new(0.0, 0.0); n];
    for _ in 0..cfg.max_sweeps {
        for k in 0..n - 1 {
            v[k + 1] = step(ev, z[k], v[k]).1;
            if v[k + 1].norm() > cfg.neighborhood || !v[k + 1].norm().is_finite() {
                return Err(ErgodicError::OrbitLeftNeighborhood {
                    step: k + 1,
                    v: v[k + 1].norm(),
                });
            }
        }
        for k in (0..n - 1).rev() {
            let target = z[k + 1];
            let mut zk = z[k];
            for _ in 0..30 {
                let (zn, _, dz) = step(ev, zk, v[k]);
                let delta = (zn - target) / dz;
                if !delta.norm().is_finite() {
                    break;
                }
                zk -= delta;
                if delta.norm() <= 1e-16 * (1.0 + zk.norm()) {
                    break;
                }
            }
            z[k] = zk;
        }
        let residual = (0..n - 1)
            .map(|k| {
                let (zn, vn, _) = step(ev, z[k], v[k]);
                ((zn - z[k + 1]).norm() / (1.0 + z[k + 1].norm())).max((vn - v[k + 1]).norm())
            })
            .fold(0.0, f64::max);
        if residual < BVP_TOL {
            return Ok(z.into_iter().zip(v).collect());
        }
    }
    Err(ErgodicError::BudgetExceeded(format!(
        "boundary-value orbit did not settle in {} sweeps",
        cfg.max_sweeps
    )))
}

/// One `ν`-sample orbit per index: a shadowing orbit of `f_t` started on `L0`
/// and steered along a random history of `r`.
pub fn sample_nu(
    t: &FamilyParameter,
    n_samples: usize,
    history_depth: usize,
    seed: u64,
) -> Result<Vec<OrbitRecord>, ErgodicError> {
    let cfg = NuConfig {
        history_depth,
        ..NuConfig::default()
    };
    sample_nu_with(t, n_samples, &cfg, seed)
}

pub fn sample_nu_with(
    t: &FamilyParameter,
    n_samples: usize,
    cfg: &NuConfig,
    seed: u64,
) -> Result<Vec<OrbitRecord>, ErgodicError> {
    if t.is_degenerate() || t.value() > cfg.max_t {
        return Err(ErgodicError::ParameterOutOfRange(format!(
            "t = {t} outside (0, {}]",
            cfg.max_t
        )));
    }
    if cfg.history_depth < 20 || cfg.orbit_length == 0 {
        return Err(ErgodicError::TooShort {
            needed: 20,
            got: cfg.history_depth,
        });
    }
    let r = RatMap1D::literal_boundary_map();
    let ev = FamilyEval { t: t.value() };
    let map = build_family_map(t);
    let total = cfg.history_depth + cfg.orbit_length + cfg.future_margin;
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut g = rng::stream(seed, i as u64);
            let hist = r_history(&r, total, &mut g)?;
            let orbit = solve_bvp(&ev, hist, cfg)?;
            let pts = orbit[cfg.history_depth..cfg.history_depth + cfg.orbit_length]
                .iter()
                .map(|&(z, v)| ProjPoint::new(lift(z, v)).map_err(crate::planemap::MapError::from))
                .collect::<Result<Vec<_>, _>>()?;
            OrbitRecord::build(pts, t, &map, Direction::Forward, OrbitChart::LineL0, seed)
        })
        .collect()
}
