use thiserror::Error;

use crate::projgeom::{ProjPoint, C64};

/// Width of the band around `Q` and the lines `A_j` reported as ambiguous.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// Piece of the Markov partition of `U = {ρ < 0}` cut out by `A_1, A_2, A_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionLabel {
    U0,
    U1,
    U2,
    U3,
    BoundaryAmbiguous,
    OutsideU,
}

impl RegionLabel {
    /// Symbol `0..=3` for the four regions of `U`.
    pub fn symbol(self) -> Option<u8> {
        match self {
            RegionLabel::U0 => Some(0),
            RegionLabel::U1 => Some(1),
            RegionLabel::U2 => Some(2),
            RegionLabel::U3 => Some(3),
            _ => None,
        }
    }

    pub fn from_symbol(s: u8) -> Option<Self> {
        [RegionLabel::U0, RegionLabel::U1, RegionLabel::U2, RegionLabel::U3]
            .get(s as usize)
            .copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionLabel::U0 => "U0",
            RegionLabel::U1 => "U1",
            RegionLabel::U2 => "U2",
            RegionLabel::U3 => "U3",
            RegionLabel::BoundaryAmbiguous => "boundary",
            RegionLabel::OutsideU => "outside",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("point {0} is not real")]
    NonRealPoint(ProjPoint),
}

/// `ρ = x1² + x2² + x3² − 2(x1x2 + x2x3 + x3x1)` at the stored representative.
pub fn rho(p: &ProjPoint) -> C64 {
    let x = p.coords();
    x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - (x[0] * x[1] + x[1] * x[2] + x[2] * x[0]) * 2.0
}

/// `ρ(x, y, 1)`.
pub fn rho_aff(x: f64, y: f64) -> f64 {
    x * x + y * y + 1.0 - 2.0 * (x * y + x + y)
}

/// `(ℓ1, ℓ2, ℓ3)` at the affine point `(x, y, 1)`.
pub fn ell(x: f64, y: f64) -> [f64; 3] {
    [-x + y + 1.0, x - y + 1.0, x + y - 1.0]
}

/// Region of a real point, classified at its representative with `x3 = 1`.
pub fn classify_region(p: &ProjPoint) -> Result<RegionLabel, RegionError> {
    if !p.is_real(1e-12) {
        return Err(RegionError::NonRealPoint(*p));
    }
    let c = p.real_coords();
    if c[2].abs() < 1e-12 {
        return Ok(RegionLabel::OutsideU);
    }
    let (x, y) = (c[0] / c[2], c[1] / c[2]);
    let scale = 1f64.max(x.abs()).max(y.abs());
    let r = rho_aff(x, y);
    if r.abs() <= BOUNDARY_BAND * scale * scale {
        return Ok(RegionLabel::BoundaryAmbiguous);
    }
    if r > 0.0 {
        return Ok(RegionLabel::OutsideU);
    }
    let l = ell(x, y);
    if l.iter().any(|v| v.abs() <= BOUNDARY_BAND * scale) {
        return Ok(RegionLabel::BoundaryAmbiguous);
    }
    let neg: Vec<usize> = (0..3).filter(|&i| l[i] < 0.0).collect();
    Ok(match neg.as_slice() {
        [] => RegionLabel::U0,
        [i] => RegionLabel::from_symbol(*i as u8 + 1).expect("index below 3"),
        _ => RegionLabel::BoundaryAmbiguous,
    })
}
