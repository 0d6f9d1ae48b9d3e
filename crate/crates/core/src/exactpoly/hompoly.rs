use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{dense, PolyError, Rational};

/// Exponent triple `(i, j, k)` of the monomial `x1^i x2^j x3^k`.
pub type Exps = [u32; 3];

/// Homogeneous polynomial in `x1, x2, x3` with exact rational coefficients.
///
/// Terms are kept in lexicographic exponent order and never store zeros; the
/// zero polynomial still carries a degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomPoly3 {
    degree: u32,
    terms: BTreeMap<Exps, Rational>,
}

impl HomPoly3 {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(c: Rational, e: Exps) -> Self {
        let mut p = Self::zero(e.iter().sum());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The coordinate `x_{i+1}` for `i` in `0..3`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(Rational::one(), e)
    }

    /// Collects terms, summing repeated exponents and dropping zeros.
    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exps, Rational)>,
    {
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            let s: u32 = e.iter().sum();
            if s != degree {
                return Err(PolyError::Inhomogeneous {
                    low: s.min(degree),
                    high: s.max(degree),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn from_sorted_unchecked(degree: u32, terms: Vec<(Exps, Rational)>) -> Self {
        Self {
            degree,
            terms: terms.into_iter().collect(),
        }
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exps) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(&Exps, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch(format!(
                "cannot add degree {} and degree {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Derivative with respect to `x_{var+1}`.
    pub fn partial(&self, var: usize) -> Self {
        let degree = self.degree.saturating_sub(1);
        let mut out = Self::zero(degree);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut f = *e;
                f[var] -= 1;
                out.terms.insert(f, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational; 3]) -> Rational {
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..3 {
                if e[v] > 0 {
                    t *= num_traits::pow(x[v].clone(), e[v] as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Coefficients rounded to `f64`, in term order.
    pub fn to_f64_terms(&self) -> Vec<(Exps, f64)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, super::to_f64(c)))
            .collect()
    }

    /// Smallest exponent of `x_{var+1}` over all terms (0 for the zero polynomial).
    pub fn min_exponent(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    /// Divides by the monomial `x^e`; every term must be divisible.
    pub fn div_monomial(&self, e: &Exps) -> Option<Self> {
        let s: u32 = e.iter().sum();
        if s > self.degree {
            return if self.is_zero() {
                Some(Self::zero(0))
            } else {
                None
            };
        }
        let mut out = Self::zero(self.degree - s);
        for (f, c) in &self.terms {
            if (0..3).any(|v| f[v] < e[v]) {
                return None;
            }
            out.terms
                .insert([f[0] - e[0], f[1] - e[1], f[2] - e[2]], c.clone());
        }
        Some(out)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.degree.saturating_sub(d.degree)));
        }
        if d.degree > self.degree {
            return None;
        }
        let (de, dc) = d.leading().map(|(e, c)| (*e, c.clone()))?;
        let inv = dc.recip();
        let mut r = self.clone();
        let mut q = Self::zero(self.degree - d.degree);
        while let Some((re, rc)) = r.leading().map(|(e, c)| (*e, c.clone())) {
            if (0..3).any(|v| re[v] < de[v]) {
                return None;
            }
            let qe = [re[0] - de[0], re[1] - de[1], re[2] - de[2]];
            let qc = rc * &inv;
            for (e, c) in &d.terms {
                r.add_term([e[0] + qe[0], e[1] + qe[1], e[2] + qe[2]], -(c * &qc));
            }
            q.terms.insert(qe, qc);
        }
        Some(q)
    }

    /// Scales to coprime integer coefficients with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = Rational::new(den, num);
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Outer composition `self(inner[0], inner[1], inner[2])`.
    pub fn compose(&self, inner: &[HomPoly3; 3]) -> Result<Self, PolyError> {
        compose(self, inner)
    }
}

/// Substitutes the three inner polynomials (of a common degree) into `outer`.
pub fn compose(outer: &HomPoly3, inner: &[HomPoly3; 3]) -> Result<HomPoly3, PolyError> {
    let e = inner[0].degree;
    if inner.iter().any(|p| p.degree != e) {
        return Err(PolyError::DegreeMismatch(format!(
            "inner degrees {}, {}, {} differ",
            inner[0].degree, inner[1].degree, inner[2].degree
        )));
    }
    let target = outer.degree * e;
    let mut powers: [Vec<HomPoly3>; 3] = Default::default();
    for v in 0..3 {
        let top = outer.terms.keys().map(|x| x[v]).max().unwrap_or(0);
        let mut list = vec![HomPoly3::one()];
        for k in 1..=top as usize {
            let next = &list[k - 1] * &inner[v];
            list.push(next);
        }
        powers[v] = list;
    }
    let mut pairs: HashMap<(u32, u32), HomPoly3> = HashMap::new();
    let mut acc = HomPoly3::zero(target);
    for (x, c) in &outer.terms {
        let ab = pairs
            .entry((x[0], x[1]))
            .or_insert_with(|| &powers[0][x[0] as usize] * &powers[1][x[1] as usize]);
        let term = &*ab * &powers[2][x[2] as usize];
        for (te, tc) in term.terms {
            acc.add_term(te, tc * c);
        }
    }
    Ok(acc)
}

impl Add for &HomPoly3 {
    type Output = HomPoly3;
    /// Panics on a degree mismatch between nonzero operands.
    fn add(self, rhs: Self) -> HomPoly3 {
        self.try_add(rhs).expect("degree mismatch in addition")
    }
}

impl Sub for &HomPoly3 {
    type Output = HomPoly3;
    fn sub(self, rhs: Self) -> HomPoly3 {
        self + &(-rhs)
    }
}

impl Neg for &HomPoly3 {
    type Output = HomPoly3;
    fn neg(self) -> HomPoly3 {
        HomPoly3 {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &HomPoly3 {
    type Output = HomPoly3;
    fn mul(self, rhs: Self) -> HomPoly3 {
        dense::mul(self, rhs)
    }
}

impl fmt::Display for HomPoly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !a.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(a.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", v + 1)),
                    _ => factors.push(format!("x{}^{}", v + 1, k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, parse_poly, rat};
    use super::*;

    fn p(s: &str) -> HomPoly3 {
        parse_poly(s, &["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn compose_examples() {
        let h = [p("x1*(-x1+x2+x3)"), p("x2*(x1-x2+x3)"), p("x3*(x1+x2-x3)")];
        let c = compose(&p("x1^2"), &h).unwrap();
        assert_eq!(c, p("x1^2*(-x1+x2+x3)^2"));
        assert_eq!(c.degree(), 4);
        let id = [p("x1"), p("x2"), p("x3")];
        assert_eq!(compose(&p("x1"), &id).unwrap(), p("x1"));
        let g = [p("x1^2"), p("x2^2"), p("x3^2")];
        assert_eq!(compose(&p("x1*x2"), &g).unwrap(), p("x1^2*x2^2"));
        let bad = [p("x1"), p("x2^2"), p("x3")];
        assert!(matches!(
            compose(&p("x1"), &bad),
            Err(PolyError::DegreeMismatch(_))
        ));
    }

    #[test]
    fn exact_division_and_primitive() {
        let a = p("x1^2 - x2^2");
        let b = p("x1 + x2");
        assert_eq!(a.div_exact(&b).unwrap(), p("x1 - x2"));
        assert!(p("x1^2 + x2^2").div_exact(&b).is_none());
        assert_eq!(p("-3/2*x1 + 9/4*x3").primitive(), p("2*x1 - 3*x3"));
        assert_eq!(p("x1*x3^2").min_exponent(2), 2);
    }

    #[test]
    fn partials_and_eval() {
        let q = p("x1^2*x2 + 3*x3^3");
        assert_eq!(q.partial(0), p("2*x1*x2"));
        assert_eq!(q.partial(2), p("9*x3^2"));
        assert_eq!(q.eval(&[int(1), int(2), rat(1, 3)]), rat(19, 9));
    }

    #[test]
    fn display_round_trips() {
        let q = p("-x1^2*x2 + 3/2*x3^3 - x1*x2*x3");
        let back = p(&q.to_string());
        assert_eq!(q, back);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let q = p("x1 - 2*x2 + x3");
        let mut r = HomPoly3::one();
        for _ in 0..5 {
            r = &r * &q;
        }
        assert_eq!(q.pow(5), r);
    }
}
