//! Orbit statistics for `f_t`: symbolic coding, the two natural measures,
//! Lyapunov spectra, the mass of `η` on `U` and entropy bounds.

mod eta;
mod fate;
mod lyapunov;
mod mu;
mod nu;

pub use eta::{eta_mass_on_u, eta_mass_sector, EtaMass, EtaMethod};
pub use fate::{classify_fate, fate_survey, random_start, Fate, FateConfig, FateSurvey};
pub use lyapunov::{
    lyapunov, lyapunov_forward, LyapunovEstimate, LyapunovOutcome, LYAPUNOV_CSV_HEADER, MIN_ORBIT,
};
pub use mu::{entropy_lower_bound, sample_mu, EntropyReport};
pub use nu::{line_chart, sample_nu, sample_nu_with, NuConfig};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chebfam::{classify_region, FamilyEval, FamilyInverse, FamilyParameter, RegionLabel};
use crate::dyn1d::Dyn1dError;
use crate::planemap::{MapError, MapEval, PlaneMap};
use crate::projgeom::{fs_distance, AdaptedChart, LinearChart, ProjPoint, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErgodicError {
    #[error("orbit entered the boundary band at step {step}")]
    BoundaryAmbiguous { step: usize, partial: ItineraryWord },
    #[error("orbit left U at step {step}")]
    LeftU { step: usize, partial: ItineraryWord },
    #[error("no inverse branch lands in U{symbol} at step {step}")]
    NoBranchInRegion { step: usize, symbol: u8 },
    #[error("realized point fails its own itinerary at step {step}")]
    RoundTripMismatch { step: usize },
    #[error("pushed orbit left the L0 neighborhood at step {step} (|v| = {v:e})")]
    OrbitLeftNeighborhood { step: usize, v: f64 },
    #[error("singular Jacobian at step {step}")]
    SingularJacobian { step: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("orbit of length {got} is shorter than {needed}")]
    TooShort { needed: usize, got: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(char),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Dyn1d(#[from] Dyn1dError),
}

/// Finite word over `{0, 1, 2, 3}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItineraryWord {
    symbols: Vec<u8>,
}

impl ItineraryWord {
    pub fn new(symbols: Vec<u8>) -> Option<Self> {
        symbols.iter().all(|&s| s < 4).then_some(Self { symbols })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Word number `index` of length `len` in base-4 order.
    pub fn from_index(mut index: usize, len: usize) -> Self {
        let mut s = vec![0u8; len];
        for k in (0..len).rev() {
            s[k] = (index % 4) as u8;
            index /= 4;
        }
        Self { symbols: s }
    }

    /// Base-4 value of the first `len` symbols.
    pub fn cylinder(&self, len: usize) -> usize {
        self.symbols[..len].iter().fold(0, |acc, &s| acc * 4 + s as usize)
    }

    /// The shifted word `σ(w)`.
    pub fn shift(&self) -> Self {
        Self {
            symbols: self.symbols.get(1..).unwrap_or(&[]).to_vec(),
        }
    }
}

impl fmt::Display for ItineraryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ItineraryWord {
    type Err = ErgodicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0'..='3' => Ok(c as u8 - b'0'),
                _ => Err(ErgodicError::InvalidSymbol(c)),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(|symbols| Self { symbols })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Chart in which an orbit's Jacobians are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitChart {
    Adapted,
    /// Coordinates `(z, v)` with `y = P(z) + v·(1,1,1)` near `L0`.
    LineL0,
}

impl OrbitChart {
    pub fn linear(self) -> LinearChart {
        match self {
            OrbitChart::Adapted => LinearChart::adapted(),
            OrbitChart::LineL0 => line_chart(),
        }
    }
}

/// Orbit segment with Jacobians of `f_t` at each point; `points[k+1]` is
/// `f_t(points[k])`.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub points: Vec<ProjPoint>,
    pub jacobians: Vec<[[C64; 2]; 2]>,
    pub labels: Vec<Option<RegionLabel>>,
    pub t: FamilyParameter,
    pub direction: Direction,
    pub chart: OrbitChart,
    pub seed: u64,
}

impl OrbitRecord {
    pub(crate) fn build(
        points: Vec<ProjPoint>,
        t: &FamilyParameter,
        map: &PlaneMap,
        direction: Direction,
        chart: OrbitChart,
        seed: u64,
    ) -> Result<Self, ErgodicError> {
        let lin = chart.linear();
        let jacobians = points
            .iter()
            .map(|p| map.chart_jacobian(p, &lin, &lin))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = points.iter().map(|p| classify_region(p).ok()).collect();
        Ok(Self {
            points,
            jacobians,
            labels,
            t: t.clone(),
            direction,
            chart,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest FS distance between `f_t(points[k])` and `points[k+1]`.
    pub fn max_relation_defect(&self) -> f64 {
        let ev = FamilyEval { t: self.t.value() };
        self.points
            .windows(2)
            .map(|w| match ProjPoint::new(ev.eval(&w[0].coords())) {
                Ok(q) => fs_distance(&q, &w[1]),
                Err(_) => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

/// Sample cloud CSV: `re_x,im_x,re_y,im_y,label,seed,index` in the adapted
/// chart; points at infinity in that chart are skipped.
pub fn cloud_csv(records: &[OrbitRecord]) -> String {
    let chart = AdaptedChart::new();
    let mut out = String::from("re_x,im_x,re_y,im_y,label,seed,index\n");
    for (i, r) in records.iter().enumerate() {
        let Some(p) = r.points.first() else { continue };
        let Ok(a) = chart.to_chart(p) else { continue };
        let label = r.labels[0].map_or("complex", RegionLabel::name);
        out.push_str(&format!(
            "{:.15e},{:.15e},{:.15e},{:.15e},{label},{},{i}\n",
            a[0].re, a[0].im, a[1].re, a[1].im, r.seed
        ));
    }
    out
}

/// Forward itinerary of a real point of `U`.
pub fn itinerary(
    t: &FamilyParameter,
    p: &ProjPoint,
    length: usize,
) -> Result<ItineraryWord, ErgodicError> {
    let ev = FamilyEval { t: t.value() };
    let mut symbols = Vec::with_capacity(length);
    let mut q = *p;
    for step in 0..length {
        let partial = ItineraryWord {
            symbols: symbols.clone(),
        };
        match classify_region(&q) {
            Ok(l) => match l.symbol() {
                Some(s) => symbols.push(s),
                None if l == RegionLabel::BoundaryAmbiguous => {
                    return Err(ErgodicError::BoundaryAmbiguous { step, partial })
                }
                None => return Err(ErgodicError::LeftU { step, partial }),
            },
            Err(_) => return Err(ErgodicError::LeftU { step, partial }),
        }
        if step + 1 < length {
            q = ProjPoint::new(ev.eval(&q.coords()))
                .map_err(|_| MapError::Indeterminate(q))?;
        }
    }
    Ok(ItineraryWord { symbols })
}

/// Tolerance for the one-step relation along realized chains.
pub const CHAIN_TOL: f64 = 1e-9;

/// Backward chain `z_0, …, z_N = anchor` with `z_k ∈ U_{w_k}` and
/// `f_t(z_k) = z_{k+1}`.
pub fn realize_chain(
    t: &FamilyParameter,
    word: &ItineraryWord,
    anchor: &ProjPoint,
) -> Result<Vec<ProjPoint>, ErgodicError> {
    if t.is_degenerate() {
        return Err(ErgodicError::ParameterOutOfRange("t must be positive".into()));
    }
    let inv = FamilyInverse { t: t.value() };
    let n = word.len();
    let mut chain = vec![*anchor; n + 1];
    for k in (0..n).rev() {
        let target = word.symbols[k];
        let mut ambiguous = false;
        let mut found = None;
        for b in 0..4 {
            let Ok(q) = inv.branch(&chain[k + 1], b) else {
                continue;
            };
            match classify_region(&q) {
                Ok(l) if l.symbol() == Some(target) => {
                    found = Some(q);
                    break;
                }
                Ok(RegionLabel::BoundaryAmbiguous) => ambiguous = true,
                _ => {}
            }
        }
        chain[k] = match found {
            Some(q) => q,
            None if ambiguous => {
                return Err(ErgodicError::BoundaryAmbiguous {
                    step: k,
                    partial: ItineraryWord {
                        symbols: word.symbols[k + 1..].to_vec(),
                    },
                })
            }
            None => return Err(ErgodicError::NoBranchInRegion { step: k, symbol: target }),
        };
    }
    verify_chain(t, word, &chain)?;
    Ok(chain)
}

fn verify_chain(
    t: &FamilyParameter,
    word: &ItineraryWord,
    chain: &[ProjPoint],
) -> Result<(), ErgodicError> {
    let ev = FamilyEval { t: t.value() };
    for (k, &s) in word.symbols.iter().enumerate() {
        let label = classify_region(&chain[k]).ok().and_then(RegionLabel::symbol);
        let img = ProjPoint::new(ev.eval(&chain[k].coords()))
            .map_err(|_| ErgodicError::RoundTripMismatch { step: k })?;
        if label != Some(s) || fs_distance(&img, &chain[k + 1]) > CHAIN_TOL {
            return Err(ErgodicError::RoundTripMismatch { step: k });
        }
    }
    Ok(())
}

/// Anchors in `U0` used in turn when a realization meets the boundary band.
pub fn default_anchors() -> [ProjPoint; 3] {
    let ch = AdaptedChart::new();
    [ch.from_real(0.0, 0.0), ch.from_real(0.05, 0.02), ch.from_real(-0.03, 0.04)]
}

/// A point whose itinerary begins with `word`, built backward from `anchor`
/// (falling back to the default anchors on boundary hits).
pub fn realize_word(
    t: &FamilyParameter,
    word: &ItineraryWord,
    anchor: &ProjPoint,
) -> Result<ProjPoint, ErgodicError> {
    realize_with_retry(t, word, anchor).map(|c| c[0])
}

pub(crate) fn realize_with_retry(
    t: &FamilyParameter,
    word: &ItineraryWord,
    anchor: &ProjPoint,
) -> Result<Vec<ProjPoint>, ErgodicError> {
    let fallbacks = default_anchors();
    let mut last = None;
    for a in std::iter::once(anchor).chain(fallbacks[1..].iter()) {
        match realize_chain(t, word, a) {
            Ok(c) => return Ok(c),
            Err(e @ ErgodicError::BoundaryAmbiguous { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests;
