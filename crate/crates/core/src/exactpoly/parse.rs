//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := rational | var | '(' expr ')' | '-' factor
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{HomPoly3, PolyError, Rational, UniPoly};

type Sparse = BTreeMap<Vec<u32>, Rational>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
}

fn add_into(acc: &mut Sparse, e: Vec<u32>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let v = acc.entry(e.clone()).or_insert_with(Rational::zero);
    *v += c;
    if v.is_zero() {
        acc.remove(&e);
    }
}

fn mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_into(&mut out, e, ca * cb);
        }
    }
    out
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn constant(&self, c: Rational) -> Sparse {
        let mut m = Sparse::new();
        add_into(&mut m, vec![0; self.vars.len()], c);
        m
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an unsigned integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            for (e, c) in rhs {
                add_into(&mut acc, e, if op == b'+' { c } else { -c });
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse, PolyError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.uint()?;
            let n: u32 = match n.try_into() {
                Ok(v) if v <= 4096 => v,
                _ => return self.err("exponent too large"),
            };
            let mut out = self.constant(Rational::one());
            for _ in 0..n {
                out = mul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Sparse, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                let f = self.factor()?;
                Ok(f.into_iter().map(|(e, c)| (e, -c)).collect())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                let mut q = Rational::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.uint()?;
                    if d.is_zero() {
                        return self.err("zero denominator");
                    }
                    q /= Rational::from_integer(d);
                }
                Ok(self.constant(q))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let Some(idx) = self.vars.iter().position(|v| *v == name) else {
                    return Err(PolyError::UnknownVariable(name.to_string()));
                };
                let mut e = vec![0; self.vars.len()];
                e[idx] = 1;
                let mut m = Sparse::new();
                m.insert(e, Rational::one());
                Ok(m)
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_sparse(text: &str, vars: &[&str]) -> Result<Sparse, PolyError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a homogeneous polynomial in the three named variables.
pub fn parse_poly(text: &str, variables: &[&str]) -> Result<HomPoly3, PolyError> {
    if variables.len() != 3 {
        return Err(PolyError::Syntax {
            pos: 0,
            msg: "exactly three variables are required".into(),
        });
    }
    let sparse = parse_sparse(text, variables)?;
    let degrees: Vec<u32> = sparse.keys().map(|e| e.iter().sum()).collect();
    let low = degrees.iter().copied().min().unwrap_or(0);
    let high = degrees.iter().copied().max().unwrap_or(0);
    if low != high {
        return Err(PolyError::Inhomogeneous { low, high });
    }
    HomPoly3::from_terms(high, sparse.into_iter().map(|(e, c)| ([e[0], e[1], e[2]], c)))
}

/// Parses a univariate polynomial in `var`.
pub fn parse_unipoly(text: &str, var: &str) -> Result<UniPoly, PolyError> {
    let sparse = parse_sparse(text, &[var])?;
    let top = sparse.keys().map(|e| e[0] as usize).max().unwrap_or(0);
    let mut c = vec![Rational::zero(); top + 1];
    for (e, v) in sparse {
        c[e[0] as usize] = v;
    }
    Ok(UniPoly::new(c))
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    const V: [&str; 3] = ["x1", "x2", "x3"];

    #[test]
    fn expands_h_component() {
        let p = parse_poly("x1*(-x1+x2+x3)", &V).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coeff(&[2, 0, 0]), int(-1));
        assert_eq!(p.coeff(&[1, 1, 0]), int(1));
        assert_eq!(p.coeff(&[1, 0, 1]), int(1));
    }

    #[test]
    fn monomial_and_rationals() {
        let p = parse_poly("x1^2", &V).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&[2, 0, 0]), int(1));
        let q = parse_poly("1/2*x1 - 3/4 * x2", &V).unwrap();
        assert_eq!(q.coeff(&[1, 0, 0]), rat(1, 2));
        assert_eq!(q.coeff(&[0, 1, 0]), rat(-3, 4));
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_poly("x1 + x2^2", &V),
            Err(PolyError::Inhomogeneous { low: 1, high: 2 })
        );
        assert_eq!(
            parse_poly("x1 + y", &V),
            Err(PolyError::UnknownVariable("y".into()))
        );
        assert!(matches!(
            parse_poly("x1 +", &V),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("(x1", &V),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("x1 x2", &V),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(
            parse_poly("1/0*x1", &V),
            Err(PolyError::Syntax { .. })
        ));
    }

    #[test]
    fn cancellation_keeps_degree_tag() {
        let p = parse_poly("x1*x2 - x2*x1", &V).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn unipoly() {
        let p = parse_unipoly("-z*(5*z^3-12*z^2+6*z-4)", "z").unwrap();
        assert_eq!(p, UniPoly::from_ints(&[0, 4, -6, 12, -5]));
    }
}
