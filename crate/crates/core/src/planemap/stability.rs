use super::{MapError, PlaneMap, MATCH_TOL};
use crate::projgeom::ProjPoint;

/// An exceptional curve whose orbit reaches an indeterminacy point.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub curve: usize,
    pub curve_name: String,
    pub step: usize,
    pub point: ProjPoint,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub depth: usize,
    pub stable_to_depth: usize,
    pub violations: Vec<Violation>,
    /// Per step `n`, the smallest distance from any exceptional image orbit to ℐ.
    pub min_distance: Vec<(usize, f64)>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,min_distance\n");
        for (n, d) in &self.min_distance {
            s.push_str(&format!("{n},{d:.17e}\n"));
        }
        s
    }
}

impl PlaneMap {
    /// Follows every exceptional image point for `depth` steps and records
    /// each approach to ℐ within [`MATCH_TOL`].
    pub fn check_stability(&self, depth: usize) -> Result<StabilityReport, MapError> {
        let mut violations = Vec::new();
        let mut min_distance = vec![f64::INFINITY; depth];
        for (ci, curve) in self.exceptional.iter().enumerate() {
            let mut q = curve.image;
            for step in 1..=depth {
                let (near, dist) = self
                    .nearest_indeterminacy(&q)
                    .unwrap_or((q, f64::INFINITY));
                min_distance[step - 1] = min_distance[step - 1].min(dist);
                if dist <= MATCH_TOL {
                    violations.push(Violation {
                        curve: ci,
                        curve_name: curve.name.clone(),
                        step,
                        point: near,
                        distance: dist,
                    });
                    break;
                }
                if step == depth {
                    break;
                }
                let v = self.eval_raw(&q.coords());
                if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(MapError::OrbitEscapedPrecision { step });
                }
                let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if scale < 1e-300 {
                    return Err(MapError::OrbitEscapedPrecision { step });
                }
                q = ProjPoint::new(v)?;
            }
        }
        let stable_to_depth = violations
            .iter()
            .map(|v| v.step - 1)
            .min()
            .unwrap_or(depth);
        Ok(StabilityReport {
            depth,
            stable_to_depth,
            violations,
            min_distance: min_distance
                .into_iter()
                .enumerate()
                .map(|(i, d)| (i + 1, d))
                .collect(),
        })
    }
}
