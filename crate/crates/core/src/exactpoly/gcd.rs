//! Multivariate gcd via dehomogenization and the subresultant PRS.

use num_traits::{One, Zero};

use super::modular::coprime_certificate;
use super::{HomPoly3, PolyError, Rational, UniPoly};

/// Polynomial in `x1` with coefficients in `Q[x2]`, index = power of `x1`.
type Bi = Vec<UniPoly>;

fn trim(mut a: Bi) -> Bi {
    while a.last().is_some_and(UniPoly::is_zero) {
        a.pop();
    }
    a
}

fn dehomogenize(p: &HomPoly3) -> Bi {
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (e, c) in p.terms() {
        let (i, j) = (e[0] as usize, e[1] as usize);
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        if rows[i].len() <= j {
            rows[i].resize(j + 1, Rational::zero());
        }
        rows[i][j] = c.clone();
    }
    trim(rows.into_iter().map(UniPoly::new).collect())
}

fn rehomogenize(a: &Bi) -> HomPoly3 {
    let degree = a
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.degree().map(|d| i + d))
        .max()
        .unwrap_or(0) as u32;
    let mut terms = Vec::new();
    for (i, row) in a.iter().enumerate() {
        for (j, c) in row.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push(([i as u32, j as u32, degree - (i + j) as u32], c.clone()));
            }
        }
    }
    HomPoly3::from_terms(degree, terms).expect("homogeneous by construction")
}

fn content(a: &Bi) -> UniPoly {
    a.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn div_uni(a: &Bi, d: &UniPoly) -> Bi {
    a.iter()
        .map(|c| c.div_exact(d).expect("exact coefficient division"))
        .collect()
}

fn mul_uni(a: &Bi, d: &UniPoly) -> Bi {
    trim(a.iter().map(|c| c * d).collect())
}

/// `lc(b)^(deg a - deg b + 1) · a  mod  b`.
fn prem(a: &Bi, b: &Bi) -> Bi {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    let mut steps = a.len() as i64 - b.len() as i64 + 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r[r.len() - 1].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(bc * &lr);
        }
        r.pop();
        r = trim(r);
        steps -= 1;
    }
    if steps > 0 {
        r = mul_uni(&r, &lb.pow(steps as u32));
    }
    r
}

/// Gcd in `Q[x2][x1]`, up to a nonzero rational factor.
fn bi_gcd(a: &Bi, b: &Bi) -> Bi {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let (mut a, mut b) = if a.len() >= b.len() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let ca = content(&a);
    let cb = content(&b);
    let d = ca.gcd(&cb);
    a = div_uni(&a, &ca);
    b = div_uni(&b, &cb);
    let mut g = UniPoly::one();
    let mut h = UniPoly::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![d];
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = div_uni(&r, &divisor);
        g = a[a.len() - 1].clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h update is exact")
        };
    }
    let cb = content(&b);
    mul_uni(&div_uni(&b, &cb), &d)
}

/// Greatest common divisor of a list of homogeneous polynomials, normalized
/// with [`HomPoly3::primitive`].
pub fn poly_gcd(polys: &[HomPoly3]) -> Result<HomPoly3, PolyError> {
    let nonzero: Vec<&HomPoly3> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(PolyError::AllZero);
    }
    let mut mono = [0u32; 3];
    for (v, m) in mono.iter_mut().enumerate() {
        *m = nonzero.iter().map(|p| p.min_exponent(v)).min().unwrap_or(0);
    }
    let reduced: Vec<HomPoly3> = nonzero
        .iter()
        .map(|p| p.div_monomial(&mono).expect("monomial divides"))
        .collect();
    let monomial = HomPoly3::monomial(Rational::one(), mono);
    if reduced.len() == 1 {
        return Ok((&monomial * &reduced[0]).primitive());
    }
    if coprime_certificate(&reduced) {
        return Ok(monomial);
    }
    let mut g = dehomogenize(&reduced[0]);
    for p in &reduced[1..] {
        g = bi_gcd(&g, &dehomogenize(p));
        if g.len() == 1 && g[0].degree() == Some(0) {
            return Ok(monomial);
        }
    }
    Ok((&monomial * &rehomogenize(&g)).primitive())
}

/// Divides `p, q, r` by their exact gcd; returns the reduced triple and the gcd.
pub fn strip_common_factor(
    p: &HomPoly3,
    q: &HomPoly3,
    r: &HomPoly3,
) -> Result<([HomPoly3; 3], HomPoly3), PolyError> {
    let input = [p, q, r];
    let degs: Vec<u32> = input
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.degree())
        .collect();
    if degs.windows(2).any(|w| w[0] != w[1]) {
        return Err(PolyError::DegreeMismatch(
            "components have different degrees".into(),
        ));
    }
    let g = poly_gcd(&[p.clone(), q.clone(), r.clone()])?;
    let out = input.map(|x| x.div_exact(&g).expect("gcd divides every component"));
    Ok((out, g))
}

/// Determinant of the 3×3 matrix of partial derivatives.
pub fn jacobian_det(map: &[HomPoly3; 3]) -> Result<HomPoly3, PolyError> {
    let d = map[0].degree();
    if map.iter().any(|p| p.degree() != d) {
        return Err(PolyError::DegreeMismatch(
            "map components have different degrees".into(),
        ));
    }
    let m: Vec<Vec<HomPoly3>> = map
        .iter()
        .map(|f| (0..3).map(|v| f.partial(v)).collect())
        .collect();
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])
    };
    let t0 = &m[0][0] * &minor(1, 2, 1, 2);
    let t1 = &m[0][1] * &minor(1, 2, 0, 2);
    let t2 = &m[0][2] * &minor(1, 2, 0, 1);
    let det = &(&t0 - &t1) + &t2;
    if det.is_zero() {
        return Ok(HomPoly3::zero(3 * d.saturating_sub(1)));
    }
    Ok(det)
}
