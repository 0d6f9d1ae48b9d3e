//! Aberth–Ehrlich simultaneous root finding.

use num_complex::Complex64 as C64;

use super::Dyn1dError;

/// Horner evaluation of `p` and `p'` (coefficients lowest degree first).
pub fn eval_with_derivative(p: &[C64], z: C64) -> (C64, C64) {
    let mut v = C64::new(0.0, 0.0);
    let mut d = C64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// `|p(z)| / Σ |a_k| |z|^k`, the backward-error residual.
pub fn relative_residual(p: &[C64], z: C64) -> f64 {
    let r = z.norm();
    let mut scale = 0.0;
    let mut pw = 1.0;
    for c in p {
        scale += c.norm() * pw;
        pw *= r;
    }
    let (v, _) = eval_with_derivative(p, z);
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

fn trimmed(p: &[C64]) -> &[C64] {
    let mut n = p.len();
    while n > 0 && p[n - 1] == C64::new(0.0, 0.0) {
        n -= 1;
    }
    &p[..n]
}

/// Deterministic starting points on a circle whose radius is the geometric
/// mean of the root moduli.
pub fn circle_start(p: &[C64]) -> Vec<C64> {
    let p = trimmed(p);
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n].norm();
    let low = p.iter().position(|c| c.norm() > 0.0).unwrap_or(0);
    let radius = if low < n {
        (p[low].norm() / lead).powf(1.0 / (n - low) as f64)
    } else {
        1.0
    };
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            C64::from_polar(radius, th)
        })
        .collect()
}

/// All roots of `p`; `init` overrides the circle start when given.
pub fn aberth(
    p: &[C64],
    init: Option<Vec<C64>>,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<C64>, Dyn1dError> {
    let p = trimmed(p);
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut z = init.filter(|v| v.len() == n).unwrap_or_else(|| circle_start(p));
    let mut converged = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (v, d) = eval_with_derivative(p, z[k]);
            if v == C64::new(0.0, 0.0) {
                converged[k] = true;
                continue;
            }
            let ratio = v / d;
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                let bump = C64::new(1e-3, 1e-3) * (1.0 + z[k].norm());
                z[k] += bump;
                all = false;
                continue;
            }
            z[k] -= w;
            if w.norm() <= 1e-15 * (1.0 + z[k].norm()) {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    // a few Newton steps as polish
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = eval_with_derivative(p, *zk);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            if step.norm() > 1e-6 * (1.0 + zk.norm()) {
                break;
            }
            *zk -= step;
        }
    }
    let worst = z.iter().map(|&r| relative_residual(p, r)).fold(0.0, f64::max);
    if worst.is_nan() || worst > tol {
        return Err(Dyn1dError::RootFindingStalled { residual: worst });
    }
    Ok(z)
}
