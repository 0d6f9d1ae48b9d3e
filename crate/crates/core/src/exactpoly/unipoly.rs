use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{HomPoly3, PolyError, Rational};

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `s`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.to_c64()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|c| Complex64::new(super::to_f64(c), 0.0))
            .collect()
    }

    /// `self(inner(s))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.coeffs[dd].recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= dc * &c;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(|v| v.is_zero()) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = to_primitive_ints(self);
        let mut b = to_primitive_ints(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        if b.is_empty() {
            return Self::new(a.into_iter().map(Rational::from_integer).collect()).monic();
        }
        match super::modular::uni_gcd_degree_bound(&a, &b) {
            Some(0) => return Self::one(),
            Some(k) if k + 1 == b.len() && int_prem(&a, &b).is_empty() => {
                return Self::new(b.into_iter().map(Rational::from_integer).collect()).monic();
            }
            _ => {}
        }
        while !b.is_empty() {
            let r = int_prem(&a, &b);
            a = b;
            b = int_primitive(r);
        }
        Self::new(a.into_iter().map(Rational::from_integer).collect()).monic()
    }
}

fn to_primitive_ints(p: &UniPoly) -> Vec<BigInt> {
    let den = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    int_primitive(
        p.coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect(),
    )
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return Vec::new();
    }
    let g = if v.last().is_some_and(|c| c.is_negative()) {
        -g
    } else {
        g
    };
    v.iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of integer polynomials (low degree first).
fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r[r.len() - 1].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= bc * &lr;
        }
        r.pop();
        while r.last().is_some_and(|v| v.is_zero()) {
            r.pop();
        }
    }
    r
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: Self) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: Self) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: Self) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{a}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{a}*z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Substitutes a parametrized curve into each component of a map.
pub fn specialize_to_curve(
    map: &[HomPoly3; 3],
    curve: &[UniPoly; 3],
) -> Result<[UniPoly; 3], PolyError> {
    let d = map[0].degree();
    if map.iter().any(|p| p.degree() != d) {
        return Err(PolyError::DegreeMismatch(
            "map components have different degrees".into(),
        ));
    }
    if curve.iter().all(UniPoly::is_zero) {
        return Err(PolyError::AllZero);
    }
    let mut powers: [Vec<UniPoly>; 3] = Default::default();
    for v in 0..3 {
        let mut list = vec![UniPoly::one()];
        for k in 1..=d as usize {
            let next = &list[k - 1] * &curve[v];
            list.push(next);
        }
        powers[v] = list;
    }
    let mut out: [UniPoly; 3] = Default::default();
    for (slot, comp) in out.iter_mut().zip(map.iter()) {
        let mut acc = UniPoly::zero();
        for (e, c) in comp.terms() {
            let t = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize];
            acc = &acc + &t.scale(c);
        }
        *slot = acc;
    }
    Ok(out)
}

/// Removes the common univariate factor; returns the reduced triple and its
/// plane degree (the maximal component degree).
pub fn uni_gcd_reduce(curve: &[UniPoly; 3]) -> Result<([UniPoly; 3], usize), PolyError> {
    if curve.iter().all(UniPoly::is_zero) {
        return Err(PolyError::AllZero);
    }
    let g = curve[0].gcd(&curve[1]).gcd(&curve[2]);
    let out = [
        curve[0].div_exact(&g).expect("gcd divides"),
        curve[1].div_exact(&g).expect("gcd divides"),
        curve[2].div_exact(&g).expect("gcd divides"),
    ];
    let deg = out.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    Ok((out, deg))
}

#[cfg(test)]
mod tests {
    use super::super::{parse_poly, parse_unipoly};
    use super::*;

    fn u(s: &str) -> UniPoly {
        parse_unipoly(s, "z").unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let a = u("z^3 - 1");
        let b = u("z^2 - 1");
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(a.gcd(&b), u("z - 1"));
        assert_eq!(u("2*z+2").gcd(&UniPoly::zero()), u("z+1"));
        assert_eq!(u("z^2+1").gcd(&u("z-3")), UniPoly::one());
    }

    #[test]
    fn reduce_examples() {
        let (r, d) = uni_gcd_reduce(&[u("z^2-1"), u("z-1"), u("z-1")]).unwrap();
        assert_eq!(r, [u("z+1"), UniPoly::one(), UniPoly::one()]);
        assert_eq!(d, 1);
        let q = [u("z^2"), UniPoly::one(), u("(z+1)^2")];
        let (r, d) = uni_gcd_reduce(&q).unwrap();
        assert_eq!(r, q);
        assert_eq!(d, 2);
        assert_eq!(
            uni_gcd_reduce(&Default::default()),
            Err(PolyError::AllZero)
        );
    }

    #[test]
    fn specialize_examples() {
        let v = ["x1", "x2", "x3"];
        let g = [
            parse_poly("x1^2", &v).unwrap(),
            parse_poly("x2^2", &v).unwrap(),
            parse_poly("x3^2", &v).unwrap(),
        ];
        let l0 = [u("z"), UniPoly::one(), u("-z-1")];
        let img = specialize_to_curve(&g, &l0).unwrap();
        assert_eq!(img, [u("z^2"), UniPoly::one(), u("(z+1)^2")]);

        let id = [
            parse_poly("x1", &v).unwrap(),
            parse_poly("x2", &v).unwrap(),
            parse_poly("x3", &v).unwrap(),
        ];
        assert_eq!(specialize_to_curve(&id, &l0).unwrap(), l0);

        let h = [
            parse_poly("x1*(-x1+x2+x3)", &v).unwrap(),
            parse_poly("x2*(x1-x2+x3)", &v).unwrap(),
            parse_poly("x3*(x1+x2-x3)", &v).unwrap(),
        ];
        let diag = [u("z"), u("z"), UniPoly::one()];
        let img = specialize_to_curve(&h, &diag).unwrap();
        let (red, _) = uni_gcd_reduce(&img).unwrap();
        let (diag_red, _) = uni_gcd_reduce(&diag).unwrap();
        assert_eq!(red[0], red[1]);
        // the image is the diagonal [s : s : 1] reparametrized
        assert_eq!(red[0].degree(), Some(1));
        assert_eq!(diag_red[0], diag_red[1]);
    }

    #[test]
    fn compose_and_derivative() {
        let p = u("z^2 + 1");
        assert_eq!(p.compose(&u("z - 1")), u("z^2 - 2*z + 2"));
        assert_eq!(u("z^3 - 2*z").derivative(), u("3*z^2 - 2"));
        assert_eq!(u("3*z^2 - 1/2*z").to_string(), "3*z^2 - 1/2*z");
    }
}
