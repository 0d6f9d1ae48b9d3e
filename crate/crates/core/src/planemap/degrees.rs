use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{MapError, PlaneMap};
use crate::exactpoly::{
    specialize_to_curve, strip_common_factor, uni_gcd_reduce, HomPoly3, PolyError, Rational,
    UniPoly,
};

/// Exact algebraic degrees `d(f^n)` for `n = 1..=depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSequence {
    pub entries: Vec<(u32, u64)>,
    pub lambda1_estimate: f64,
}

impl DegreeSequence {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,degree\n");
        for (n, d) in &self.entries {
            s.push_str(&format!("{n},{d}\n"));
        }
        s
    }

    /// Checks `d(f^(m+n)) <= d(f^m) d(f^n)` on all available pairs.
    pub fn is_submultiplicative(&self) -> bool {
        let get = |n: u32| self.entries.iter().find(|e| e.0 == n).map(|e| e.1);
        self.entries.iter().all(|&(a, da)| {
            self.entries.iter().all(|&(b, db)| match get(a + b) {
                Some(dab) => dab <= da * db,
                None => true,
            })
        })
    }
}

impl PlaneMap {
    /// Exact degrees of the iterates via composition and gcd stripping.
    /// `max_degree` caps the unreduced degree of any single composition.
    pub fn degree_sequence(&self, depth: u32, max_degree: u64) -> Result<DegreeSequence, MapError> {
        let d = self.degree() as u64;
        let mut entries = vec![(1, d)];
        let mut iterate = self.components.clone();
        for n in 2..=depth {
            let prev = iterate[0].degree() as u64;
            if prev * d > max_degree {
                return Err(MapError::BudgetExceeded(format!(
                    "d(f^{n}) would need a degree-{} composition (cap {max_degree})",
                    prev * d
                )));
            }
            let composed = self
                .components
                .iter()
                .map(|c| c.compose(&iterate))
                .collect::<Result<Vec<_>, _>>()?;
            let (stripped, _) = strip_common_factor(&composed[0], &composed[1], &composed[2])?;
            iterate = stripped.map(|p| p.primitive());
            let deg = iterate
                .iter()
                .filter(|p| !p.is_zero())
                .map(HomPoly3::degree)
                .max()
                .unwrap_or(0) as u64;
            entries.push((n, deg));
        }
        let (n, dn) = *entries.last().expect("nonempty");
        Ok(DegreeSequence {
            entries,
            lambda1_estimate: (dn as f64).powf(1.0 / n as f64),
        })
    }

    /// Exact plane degree of the `n`-th image of a parametrized curve.
    pub fn image_curve_degree(
        &self,
        curve: &[UniPoly; 3],
        n: usize,
        max_degree: usize,
    ) -> Result<usize, MapError> {
        Ok(self.image_curve(curve, n, max_degree)?.1)
    }

    /// Reduced parametrization of the `n`-th image and its plane degree.
    pub fn image_curve(
        &self,
        curve: &[UniPoly; 3],
        n: usize,
        max_degree: usize,
    ) -> Result<([UniPoly; 3], usize), MapError> {
        let (mut c, _) = uni_gcd_reduce(curve)?;
        let d = self.degree() as usize;
        for step in 1..=n {
            let cur = c.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
            if cur * d > max_degree {
                return Err(MapError::BudgetExceeded(format!(
                    "image parametrization of degree {} exceeds cap {max_degree}",
                    cur * d
                )));
            }
            let img = specialize_to_curve(&self.components, &c)?;
            c = match uni_gcd_reduce(&img) {
                Ok((r, _)) => r,
                Err(PolyError::AllZero) => return Err(MapError::CurveHitsIndeterminacy { step }),
                Err(e) => return Err(e.into()),
            };
        }
        let deg = plane_degree(&c);
        Ok((c, deg))
    }
}

/// Number of parameter values sharing the image point of `s0`.
fn covering_degree(c: &[UniPoly; 3], s0: &Rational) -> usize {
    let v: Vec<Rational> = c.iter().map(|p| p.eval(s0)).collect();
    let root = UniPoly::new(vec![-s0.clone(), Rational::one()]);
    let minors: Vec<UniPoly> = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| &c[i].scale(&v[j]) - &c[j].scale(&v[i]))
        .filter(|m| !m.is_zero())
        .map(|m| m.div_exact(&root).expect("minor vanishes at s0"))
        .collect();
    let Some(first) = minors.first() else {
        return 0;
    };
    let g = minors[1..].iter().fold(first.clone(), |g, m| g.gcd(m));
    1 + g.degree().unwrap_or(0)
}

/// Degree of the image of a reduced rational parametrization as a plane curve.
pub(crate) fn plane_degree(c: &[UniPoly; 3]) -> usize {
    let param = c.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    if param == 0 {
        return 0;
    }
    let samples = [(7, 3), (-11, 5), (13, 17)];
    let k = samples
        .iter()
        .map(|&(a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
        .filter(|s0| c.iter().any(|p| !p.eval(s0).is_zero()))
        .map(|s0| covering_degree(c, &s0))
        .filter(|&k| k > 0)
        .min()
        .unwrap_or(1);
    debug_assert!(param % k == 0);
    param / k
}
