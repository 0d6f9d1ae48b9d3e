use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Exps, HomPoly3, Rational};

/// Common denominator and integer numerators of a polynomial's coefficients.
pub(crate) fn integer_form(p: &HomPoly3) -> (BigInt, Vec<(Exps, BigInt)>) {
    let den = p
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let terms = p
        .terms()
        .map(|(e, c)| (*e, c.numer() * (&den / c.denom())))
        .collect();
    (den, terms)
}

#[inline]
fn slot(e: &Exps, d: usize) -> usize {
    e[0] as usize * (d + 1) + e[1] as usize
}

/// Product by dense triangular accumulation over cleared denominators.
pub(crate) fn mul(a: &HomPoly3, b: &HomPoly3) -> HomPoly3 {
    let degree = a.degree() + b.degree();
    if a.is_zero() || b.is_zero() {
        return HomPoly3::zero(degree);
    }
    let (da, ta) = integer_form(a);
    let (db, tb) = integer_form(b);
    let d = degree as usize;
    let mut acc = vec![BigInt::zero(); (d + 1) * (d + 1)];
    for (ea, ca) in &ta {
        for (eb, cb) in &tb {
            let e = [ea[0] + eb[0], ea[1] + eb[1], 0];
            acc[slot(&e, d)] += ca * cb;
        }
    }
    let den = da * db;
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=(d - i) {
            let c = std::mem::take(&mut acc[i * (d + 1) + j]);
            if !c.is_zero() {
                out.push((
                    [i as u32, j as u32, (d - i - j) as u32],
                    Rational::new(c, den.clone()),
                ));
            }
        }
    }
    HomPoly3::from_sorted_unchecked(degree, out)
}
