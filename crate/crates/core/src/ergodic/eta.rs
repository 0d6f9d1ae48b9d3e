//! Mass of `η = dx∧dy/(xy)` on `U = {ρ_aff < 0}`.
//!
//! With `x = e^{2a}`, `y = e^{2b}` the form becomes `4 da db` and `U` becomes
//! `{e^a + e^b > 1, |e^a − e^b| < 1}`, whose three thin ends run off along
//! the diagonal and the two axes.

use rand::Rng;
use rayon::prelude::*;

use super::ErgodicError;
use crate::rng;

/// Half-width of the integration box in `(a, b)`.
const BOX: f64 = 12.0;
const DENSITY: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaMethod {
    /// Dyadic cells refined until the certified half-width drops below
    /// `tol · estimate`, at most `max_depth` levels.
    Adaptive { max_depth: u32, tol: f64 },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaMass {
    pub estimate: f64,
    /// Half-width of an interval that contains the exact mass.
    pub error_bound: f64,
    /// Difference to the previous refinement level (adaptive only).
    pub richardson: f64,
    pub levels: u32,
    pub cells: usize,
}

/// Mass of `η` outside the box, summed over the three ends.
fn tail_bound() -> f64 {
    DENSITY * 3.0 * (-2.0 * (-(-BOX).exp()).ln_1p())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cell {
    Inside,
    Outside,
    Mixed,
}

/// Certified position of `[a0,a1]×[b0,b1]` relative to `U ∩ sector`.
fn classify(a0: f64, a1: f64, b0: f64, b1: f64, sector: Option<usize>) -> Cell {
    let (ea0, ea1, eb0, eb1) = (a0.exp(), a1.exp(), b0.exp(), b1.exp());
    let (smin, smax) = (ea0 + eb0, ea1 + eb1);
    let (dmin, dmax) = (ea0 - eb1, ea1 - eb0);
    let u = if smax <= 1.0 || dmin >= 1.0 || dmax <= -1.0 {
        Cell::Outside
    } else if smin > 1.0 && dmin > -1.0 && dmax < 1.0 {
        Cell::Inside
    } else {
        Cell::Mixed
    };
    let s = match sector {
        None => Cell::Inside,
        // the largest homogeneous coordinate is x3, x1 or x2 respectively
        Some(0) => half_planes(&[(a1 <= 0.0, a0 >= 0.0), (b1 <= 0.0, b0 >= 0.0)]),
        Some(1) => half_planes(&[(a0 >= 0.0, a1 <= 0.0), (a0 >= b1, a1 <= b0)]),
        Some(_) => half_planes(&[(b0 >= 0.0, b1 <= 0.0), (b0 >= a1, b1 <= a0)]),
    };
    match (u, s) {
        (Cell::Outside, _) | (_, Cell::Outside) => Cell::Outside,
        (Cell::Inside, Cell::Inside) => Cell::Inside,
        _ => Cell::Mixed,
    }
}

/// Each pair is (cell inside the half-plane, cell outside it).
fn half_planes(h: &[(bool, bool)]) -> Cell {
    if h.iter().any(|&(_, out)| out) {
        Cell::Outside
    } else if h.iter().all(|&(inside, _)| inside) {
        Cell::Inside
    } else {
        Cell::Mixed
    }
}

fn in_region(a: f64, b: f64, sector: Option<usize>) -> bool {
    let (ea, eb) = (a.exp(), b.exp());
    let u = ea + eb > 1.0 && (ea - eb).abs() < 1.0;
    u && match sector {
        None => true,
        Some(0) => a <= 0.0 && b <= 0.0,
        Some(1) => a >= 0.0 && a >= b,
        Some(_) => b >= 0.0 && b >= a,
    }
}

/// `∫_U η`, equal to `2π²` up to the reported bound.
pub fn eta_mass_on_u(method: EtaMethod) -> Result<EtaMass, ErgodicError> {
    eta_mass_region(method, None)
}

/// Mass of a sector cut out by the lines through `[1:1:1]`: sectors 0, 1, 2
/// are where `x3`, `x1`, `x2` is the largest coordinate.
pub fn eta_mass_sector(sector: usize, method: EtaMethod) -> Result<EtaMass, ErgodicError> {
    eta_mass_region(method, Some(sector % 3))
}

fn eta_mass_region(method: EtaMethod, sector: Option<usize>) -> Result<EtaMass, ErgodicError> {
    match method {
        EtaMethod::Adaptive { max_depth, tol } => adaptive(max_depth, tol, sector),
        EtaMethod::MonteCarlo { samples, seed } => Ok(monte_carlo(samples, seed, sector)),
    }
}

const MIN_LEVEL: u32 = 8;

fn adaptive(max_depth: u32, tol: f64, sector: Option<usize>) -> Result<EtaMass, ErgodicError> {
    let mut inside = 0.0;
    let mut mixed: Vec<(f64, f64)> = vec![(-BOX, -BOX)];
    let mut size = 2.0 * BOX;
    let mut previous = f64::NAN;
    let mut cells = 0usize;
    for level in 1..=max_depth {
        size *= 0.5;
        let h = size;
        let children: Vec<((f64, f64), Cell)> = mixed
            .par_iter()
            .flat_map_iter(|&(a, b)| {
                [(a, b), (a + h, b), (a, b + h), (a + h, b + h)]
                    .into_iter()
                    .map(move |(x, y)| ((x, y), classify(x, x + h, y, y + h, sector)))
            })
            .collect();
        cells += children.len();
        let area = h * h;
        mixed.clear();
        for (c, kind) in children {
            match kind {
                Cell::Inside => inside += area,
                Cell::Mixed => mixed.push(c),
                Cell::Outside => {}
            }
        }
        let mid: f64 = mixed
            .iter()
            .filter(|&&(a, b)| in_region(a + 0.5 * h, b + 0.5 * h, sector))
            .count() as f64
            * area;
        let tail = tail_bound();
        let lo = DENSITY * inside;
        let hi = DENSITY * (inside + area * mixed.len() as f64) + tail;
        let estimate = DENSITY * (inside + mid) + 0.5 * tail;
        let error_bound = (estimate - lo).max(hi - estimate);
        let richardson = (estimate - previous).abs();
        previous = estimate;
        if level >= MIN_LEVEL && error_bound <= tol * estimate {
            return Ok(EtaMass {
                estimate,
                error_bound,
                richardson,
                levels: level,
                cells,
            });
        }
    }
    Err(ErgodicError::BudgetExceeded(format!(
        "eta mass not within {tol} after {max_depth} levels"
    )))
}

fn monte_carlo(samples: usize, seed: u64, sector: Option<usize>) -> EtaMass {
    const CHUNK: usize = 4096;
    let chunks = samples.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::stream(seed, c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n)
                .filter(|_| in_region(r.gen_range(-BOX..BOX), r.gen_range(-BOX..BOX), sector))
                .count()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    let n = samples.max(1) as f64;
    let p = hits as f64 / n;
    let scale = DENSITY * (2.0 * BOX).powi(2);
    let tail = tail_bound();
    EtaMass {
        estimate: scale * p + 0.5 * tail,
        error_bound: 3.0 * scale * (p * (1.0 - p) / n).sqrt() + 0.5 * tail,
        richardson: f64::NAN,
        levels: 0,
        cells: samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRUE_MASS: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;

    #[test]
    fn adaptive_bound_covers_true_mass() {
        let m = eta_mass_on_u(EtaMethod::Adaptive { max_depth: 16, tol: 0.01 }).unwrap();
        assert!((m.estimate - TRUE_MASS).abs() <= m.error_bound, "{m:?}");
        assert!((m.estimate - TRUE_MASS).abs() < 0.02 * TRUE_MASS);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            eta_mass_on_u(EtaMethod::Adaptive { max_depth: 9, tol: 1e-6 }),
            Err(ErgodicError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn sectors_carry_equal_mass() {
        let method = EtaMethod::Adaptive { max_depth: 16, tol: 0.02 };
        let s: Vec<EtaMass> = (0..3).map(|k| eta_mass_sector(k, method).unwrap()).collect();
        for m in &s {
            assert!((m.estimate - TRUE_MASS / 3.0).abs() <= m.error_bound, "{m:?}");
        }
        assert!((s[1].estimate - s[2].estimate).abs() < 1e-9);
    }

    #[test]
    fn monte_carlo_agrees() {
        let m = eta_mass_on_u(EtaMethod::MonteCarlo { samples: 400_000, seed: 3 }).unwrap();
        assert!((m.estimate - TRUE_MASS).abs() <= m.error_bound, "{m:?}");
    }

    #[test]
    fn log_coordinates_match_the_conic() {
        for k in 0..2000 {
            let a = -3.0 + 6.0 * (k as f64 * 0.618).fract();
            let b = -3.0 + 6.0 * (k as f64 * 0.377).fract();
            let (x, y) = ((2.0 * a).exp(), (2.0 * b).exp());
            let r = crate::chebfam::rho_aff(x, y);
            if r.abs() > 1e-9 {
                assert_eq!(in_region(a, b, None), r < 0.0);
            }
        }
    }
}
