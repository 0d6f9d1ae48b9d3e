//! The repelling measure `μ` and the entropy of the Markov coding.

use rand::Rng;
use rayon::prelude::*;

use super::{realize_with_retry, Direction, ErgodicError, ItineraryWord, OrbitChart, OrbitRecord};
use crate::chebfam::{build_family_map, FamilyParameter};
use crate::projgeom::fs_distance;
use crate::rng;

/// Orbits `z_0, …, z_{L-1}` obtained by realizing uniform random words of
/// length `burn_in + word_length` backward from the central anchor; the
/// `burn_in` points nearest the anchor are dropped.
pub fn sample_mu(
    t: &FamilyParameter,
    n_samples: usize,
    burn_in: usize,
    word_length: usize,
    seed: u64,
) -> Result<Vec<OrbitRecord>, ErgodicError> {
    if word_length == 0 {
        return Err(ErgodicError::TooShort { needed: 1, got: 0 });
    }
    let map = build_family_map(t);
    let anchor = super::default_anchors()[0];
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            let symbols: Vec<u8> = (0..burn_in + word_length).map(|_| r.gen_range(0..4u8)).collect();
            let word = ItineraryWord::new(symbols).expect("symbols below 4");
            let mut chain = realize_with_retry(t, &word, &anchor)?;
            chain.truncate(word_length);
            OrbitRecord::build(chain, t, &map, Direction::Backward, OrbitChart::Adapted, seed)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    pub depth: usize,
    pub realized: usize,
    pub total: usize,
    /// Smallest `(depth, ε)`-separation between realized cylinder points.
    pub epsilon: f64,
    pub failures: Vec<(ItineraryWord, String)>,
    pub bound: f64,
}

/// Realizes every word of length `depth` and returns `log(#realized)/depth`.
pub fn entropy_lower_bound(t: &FamilyParameter, depth: usize) -> Result<EntropyReport, ErgodicError> {
    if depth == 0 || depth > 10 {
        return Err(ErgodicError::ParameterOutOfRange(format!(
            "depth {depth} outside 1..=10"
        )));
    }
    let total = 4usize.pow(depth as u32);
    let anchor = super::default_anchors()[0];
    let results: Vec<Result<Vec<_>, (ItineraryWord, String)>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let w = ItineraryWord::from_index(i, depth);
            realize_with_retry(t, &w, &anchor).map_err(|e| (w, e.to_string()))
        })
        .collect();
    let mut chains = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(c) => chains.push(c),
            Err(f) => failures.push(f),
        }
    }
    let epsilon = (0..chains.len())
        .into_par_iter()
        .map(|a| {
            let mut best = f64::INFINITY;
            for b in a + 1..chains.len() {
                let sep = (0..depth)
                    .map(|k| fs_distance(&chains[a][k], &chains[b][k]))
                    .fold(0.0, f64::max);
                best = best.min(sep);
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    let realized = chains.len();
    let bound = if realized == 0 {
        0.0
    } else {
        (realized as f64).ln() / depth as f64
    };
    Ok(EntropyReport {
        depth,
        realized,
        total,
        epsilon,
        failures,
        bound,
    })
}
