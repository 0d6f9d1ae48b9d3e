//! Arithmetic modulo the Mersenne prime 2^61 − 1, used for fast coprimality
//! certificates before falling back to exact subresultant gcds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{dense, HomPoly3};

pub(crate) const P: u64 = (1 << 61) - 1;

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut a: u64, mut n: u64) -> u64 {
    let mut r = 1;
    while n > 0 {
        if n & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        n >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn reduce(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(P))
        .to_u64()
        .expect("residue fits in u64")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of the monic gcd of univariate polynomials mod P (None if all zero).
fn gcd_degree(polys: Vec<Vec<u64>>) -> Option<usize> {
    let mut it = polys.into_iter();
    let mut g = it.next()?;
    trim(&mut g);
    for mut b in it {
        trim(&mut b);
        let mut a = std::mem::take(&mut g);
        while !b.is_empty() {
            let db = b.len() - 1;
            let inv = invmod(b[db]);
            while a.len() > db {
                let k = a.len() - 1 - db;
                let c = mulmod(a[a.len() - 1], inv);
                for (i, &bc) in b.iter().enumerate() {
                    a[k + i] = submod(a[k + i], mulmod(bc, c));
                }
                a.pop();
                trim(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
        }
        g = a;
    }
    g.len().checked_sub(1)
}

/// Degree of `gcd(a, b)` mod P when both leading coefficients survive the
/// reduction, which makes it an upper bound for the degree over Q.
pub(crate) fn uni_gcd_degree_bound(a: &[BigInt], b: &[BigInt]) -> Option<usize> {
    let ra: Vec<u64> = a.iter().map(reduce).collect();
    let rb: Vec<u64> = b.iter().map(reduce).collect();
    if ra.last().is_none_or(|&c| c == 0) || rb.last().is_none_or(|&c| c == 0) {
        return None;
    }
    gcd_degree(vec![ra, rb])
}

/// Specializes the dehomogenization at `x3 = 1` to a univariate polynomial in
/// `x_{main+1}`, setting the other variable to `c`. Returns the residues and
/// whether the leading coefficient in the main variable survived.
fn specialize(terms: &[([u32; 3], BigInt)], main: usize, c: u64) -> (Vec<u64>, bool) {
    let other = 1 - main;
    let top = terms.iter().map(|(e, _)| e[main]).max().unwrap_or(0) as usize;
    let mut out = vec![0u64; top + 1];
    for (e, v) in terms {
        let t = mulmod(reduce(v), powmod(c, e[other] as u64));
        out[e[main] as usize] = addmod(out[e[main] as usize], t);
    }
    let ok = out[top] != 0;
    (out, ok)
}

/// True only if the polynomials provably share no common factor involving
/// `x1` or `x2`. A `false` result is inconclusive.
pub(crate) fn coprime_certificate(polys: &[HomPoly3]) -> bool {
    let forms: Vec<Vec<([u32; 3], BigInt)>> =
        polys.iter().map(|p| dense::integer_form(p).1).collect();
    let points = [3u64, 1_000_003, 987_654_321_987, 17];
    'main: for main in 0..2 {
        for &c in &points {
            let mut any_ok = false;
            let mut specs = Vec::with_capacity(forms.len());
            for f in &forms {
                let (s, ok) = specialize(f, main, c);
                any_ok |= ok;
                specs.push(s);
            }
            if any_ok && gcd_degree(specs) == Some(0) {
                continue 'main;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::super::parse_poly;
    use super::*;

    fn p(s: &str) -> HomPoly3 {
        parse_poly(s, &["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn certifies_coprime_and_refuses_common_factor() {
        assert!(coprime_certificate(&[p("x1^2 + x2*x3"), p("x2^2 - x1*x3")]));
        let f = p("x1 + 2*x2 - x3");
        let a = &f * &p("x1 - x3");
        let b = &f * &p("x2 + 5*x3");
        assert!(!coprime_certificate(&[a, b]));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mulmod(invmod(12345), 12345), 1);
        assert_eq!(reduce(&BigInt::from(-1)), P - 1);
        assert_eq!(gcd_degree(vec![vec![P - 1, 0, 1], vec![P - 1, 1]]), Some(1));
    }
}
