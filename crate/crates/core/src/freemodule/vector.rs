use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::ring::{Polynomial, Ring, RingError, RingValue};

/// A finitely supported element `Σ α_n e_n` of the free module on ℕ.
///
/// Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    ring: Ring,
    support: BTreeMap<usize, RingValue>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VecOp {
    Add,
    Scale,
}

pub enum VecOperand<'a> {
    Vector(&'a Vector),
    Scalar(&'a RingValue),
}

pub fn vec_arith(op: VecOp, a: &Vector, b: VecOperand<'_>) -> Result<Vector, RingError> {
    match (op, b) {
        (VecOp::Add, VecOperand::Vector(v)) => a.checked_add(v),
        (VecOp::Scale, VecOperand::Scalar(c)) => a.checked_scale(c),
        (op, _) => Err(RingError::Parse(format!(
            "operand kind does not fit {op:?}"
        ))),
    }
}

/// The basis vector `e_n`.
pub fn basis(ring: Ring, n: usize) -> Vector {
    Vector::basis(ring, n)
}

impl Vector {
    pub fn zero(ring: Ring) -> Vector {
        Vector {
            ring,
            support: BTreeMap::new(),
        }
    }

    pub fn basis(ring: Ring, n: usize) -> Vector {
        Vector::term(ring.one(), n)
    }

    /// `c · e_n`
    pub fn term(c: RingValue, n: usize) -> Vector {
        let mut v = Vector::zero(c.ring());
        v.add_term(n, c);
        v
    }

    /// Sums the given terms; repeated indices accumulate.
    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (usize, RingValue)>) -> Vector {
        let mut v = Vector::zero(ring);
        for (n, c) in terms {
            assert_eq!(c.ring(), ring, "coefficient ring mismatch");
            v.add_term(n, c);
        }
        v
    }

    pub fn from_ints(ring: Ring, terms: &[(usize, i64)]) -> Vector {
        Vector::from_terms(ring, terms.iter().map(|&(n, c)| (n, ring.from_int(c))))
    }

    /// In-place `self += c · e_n`, pruning a coefficient that cancels.
    pub fn add_term(&mut self, n: usize, c: RingValue) {
        if c.is_zero() {
            return;
        }
        match self.support.get_mut(&n) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.support.remove(&n);
                } else {
                    *old = s;
                }
            }
            None => {
                self.support.insert(n, c);
            }
        }
    }

    /// In-place `self += c · other`.
    pub fn add_scaled(&mut self, c: &RingValue, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (&n, a) in &other.support {
            self.add_term(n, c * a);
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// The largest index with a nonzero coefficient; `None` for the zero
    /// vector, where the degree is undefined.
    pub fn degree(&self) -> Option<usize> {
        self.support.keys().next_back().copied()
    }

    pub fn coeff(&self, n: usize) -> RingValue {
        self.support
            .get(&n)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn support(&self) -> &BTreeMap<usize, RingValue> {
        &self.support
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &RingValue)> {
        self.support.iter().map(|(&n, c)| (n, c))
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector, RingError> {
        if self.ring != other.ring {
            return Err(RingError::Mismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        let mut out = self.clone();
        for (&n, c) in &other.support {
            out.add_term(n, c.clone());
        }
        Ok(out)
    }

    pub fn checked_scale(&self, c: &RingValue) -> Result<Vector, RingError> {
        if self.ring != c.ring() {
            return Err(RingError::Mismatch {
                left: self.ring,
                right: c.ring(),
            });
        }
        Ok(self.scale(c))
    }

    pub fn scale(&self, c: &RingValue) -> Vector {
        let mut out = Vector::zero(self.ring);
        out.add_scaled(c, self);
        out
    }

    /// `U`: `e_n ↦ e_{n+1}`.
    pub fn raise(&self) -> Vector {
        self.raise_by(1)
    }

    /// `U^k`
    pub fn raise_by(&self, k: usize) -> Vector {
        Vector {
            ring: self.ring,
            support: self
                .support
                .iter()
                .map(|(&n, c)| (n + k, c.clone()))
                .collect(),
        }
    }

    /// `D`: `e_0 ↦ 0`, `e_{n+1} ↦ e_n`.
    pub fn lower(&self) -> Vector {
        self.lower_by(1)
    }

    /// `D^k`
    pub fn lower_by(&self, k: usize) -> Vector {
        Vector {
            ring: self.ring,
            support: self
                .support
                .range(k..)
                .map(|(&n, c)| (n - k, c.clone()))
                .collect(),
        }
    }

    /// The coordinate isomorphism `e_n ↦ x^n`.
    pub fn to_poly(&self) -> Polynomial {
        let Some(d) = self.degree() else {
            return Polynomial::zero(self.ring);
        };
        Polynomial::from_coeffs(self.ring, (0..=d).map(|n| self.coeff(n)).collect())
    }

    pub fn from_poly(p: &Polynomial) -> Vector {
        Vector::from_terms(p.ring(), p.terms().map(|(k, c)| (k, c.clone())))
    }

    /// Parses `"3*e0 + 1/2*e5"`; `"0"` is the zero vector.
    pub fn parse(ring: Ring, text: &str) -> Result<Vector, RingError> {
        let err = || RingError::Parse(format!("invalid vector `{text}`"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Vector::zero(ring));
        }
        if compact.is_empty() {
            return Err(err());
        }
        let mut v = Vector::zero(ring);
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut negative = false;
            if let Some(r) = rest.strip_prefix('-') {
                negative = true;
                rest = r;
            } else if let Some(r) = rest.strip_prefix('+') {
                if first {
                    return Err(err());
                }
                rest = r;
            } else if !first {
                return Err(err());
            }
            first = false;
            let end = rest[1..].find(['+', '-']).map_or(rest.len(), |i| i + 1);
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let (coeff, idx) = match term.split_once('*') {
                Some((c, e)) => (ring.parse_value(c)?, e),
                None => (ring.one(), term),
            };
            let n: usize = idx
                .strip_prefix('e')
                .and_then(|d| d.parse().ok())
                .ok_or_else(err)?;
            v.add_term(n, if negative { -coeff } else { coeff });
        }
        Ok(v)
    }

    /// `{"coeffs": {"0": "3", "5": "1/2"}}`
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: serde_json::Map<String, serde_json::Value> = self
            .support
            .iter()
            .map(|(n, c)| (n.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::json!({ "coeffs": coeffs })
    }

    pub fn from_json(ring: Ring, value: &serde_json::Value) -> Result<Vector, RingError> {
        let bad = || RingError::Parse(format!("invalid vector JSON {value}"));
        let map = value
            .get("coeffs")
            .and_then(|c| c.as_object())
            .ok_or_else(bad)?;
        let mut v = Vector::zero(ring);
        for (k, c) in map {
            let n: usize = k.parse().map_err(|_| bad())?;
            let c = c.as_str().ok_or_else(bad)?;
            v.add_term(n, ring.parse_value(c)?);
        }
        Ok(v)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (n, c)) in self.iter().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "e{n}")?;
            } else {
                write!(f, "{mag}*e{n}")?;
            }
        }
        Ok(())
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        self + &-rhs
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector {
            ring: self.ring,
            support: self.support.iter().map(|(&n, c)| (n, -c)).collect(),
        }
    }
}

/// `μ(e_m ⊗ e_n) = e_{m+n}`, extended bilinearly (a Cauchy convolution).
pub fn mu(a: &Vector, b: &Vector) -> Vector {
    let mut out = Vector::zero(a.ring());
    for (m, x) in a.iter() {
        for (n, y) in b.iter() {
            out.add_term(m + n, x * y);
        }
    }
    out
}

/// `μ′(e_m ⊗ e_n) = e_{mn}`, extended bilinearly.
pub fn mu_prime(a: &Vector, b: &Vector) -> Vector {
    let mut out = Vector::zero(a.ring());
    for (m, x) in a.iter() {
        for (n, y) in b.iter() {
            out.add_term(m * n, x * y);
        }
    }
    out
}

/// `P(U)(v) = Σ_k ⟨P|x^k⟩ U^k(v)`.
pub fn apply_poly(p: &Polynomial, v: &Vector) -> Vector {
    let mut out = Vector::zero(v.ring());
    for (k, c) in p.terms() {
        out.add_scaled(c, &v.raise_by(k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Ring = Ring::Rationals;

    fn v(text: &str) -> Vector {
        Vector::parse(Q, text).unwrap()
    }

    #[test]
    fn basis_and_arith() {
        assert_eq!(basis(Q, 0), v("e0"));
        assert_eq!(&basis(Q, 5) + &basis(Q, 5), v("2*e5"));
        assert_ne!(basis(Q, 3), basis(Q, 4));
        let cancel = vec_arith(VecOp::Add, &v("e1"), VecOperand::Vector(&v("-e1"))).unwrap();
        assert!(cancel.is_zero() && cancel.support().is_empty());
        let two = Q.from_int(2);
        assert_eq!(
            vec_arith(VecOp::Scale, &v("e0 + e3"), VecOperand::Scalar(&two)).unwrap(),
            v("2*e0 + 2*e3")
        );
        let sum = &v("3*e0") + &v("1/2*e5");
        assert_eq!(sum.coeff(0), Q.from_int(3));
        assert_eq!(sum.coeff(5), Q.parse_value("1/2").unwrap());
        assert_eq!(sum.support().len(), 2);
    }

    #[test]
    fn ring_mismatch() {
        let z = Vector::basis(Ring::Integers, 0);
        assert!(vec_arith(VecOp::Add, &v("e0"), VecOperand::Vector(&z)).is_err());
        assert!(v("e0").checked_scale(&Ring::Mod(3).one()).is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(v("e7").degree(), Some(7));
        assert_eq!(v("2*e0 + e3").degree(), Some(3));
        assert_eq!(Vector::zero(Q).degree(), None);
    }

    #[test]
    fn ladder_examples() {
        assert_eq!(v("e5").raise(), v("e6"));
        assert!(Vector::zero(Q).raise().is_zero());
        assert_eq!(v("e0 + 2*e2").raise(), v("e1 + 2*e3"));
        assert!(v("e0").lower().is_zero());
        assert_eq!(v("e3 + 2*e0").lower(), v("e2"));
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&v("e2"), &v("e3")), v("e5"));
        assert_eq!(mu(&v("e1 + e2"), &v("e1")), v("e2 + e3"));
        assert_eq!(mu_prime(&v("e2"), &v("e3")), v("e6"));
        assert_eq!(mu_prime(&v("e1 + e2"), &v("e0")), v("2*e0"));
        assert_ne!(mu_prime(&v("e1 + e2"), &v("e0")), v("e0"));
    }

    #[test]
    fn poly_application() {
        let p = Polynomial::parse(Q, "x^2 + 1").unwrap();
        assert_eq!(apply_poly(&p, &v("e0")), v("e0 + e2"));
        assert!(apply_poly(&Polynomial::zero(Q), &v("e4 - e1")).is_zero());
        assert_eq!(apply_poly(&Polynomial::x(Q), &v("e3 + e4")), v("e4 + e5"));
    }

    #[test]
    fn poly_coordinates() {
        assert_eq!(
            v("2*e0 + e3").to_poly(),
            Polynomial::parse(Q, "2 + x^3").unwrap()
        );
        let w = v("-1/3*e1 + e4");
        assert_eq!(Vector::from_poly(&w.to_poly()), w);
    }

    #[test]
    fn text_and_json() {
        let w = v("3*e0 + 1/2*e5");
        assert_eq!(w.to_string(), "3*e0 + 1/2*e5");
        assert_eq!(w.to_json().to_string(), r#"{"coeffs":{"0":"3","5":"1/2"}}"#);
        assert_eq!(Vector::from_json(Q, &w.to_json()).unwrap(), w);
        assert_eq!(v("-e2 - 2*e1").to_string(), "-2*e1 - e2");
        assert!(Vector::parse(Q, "e").is_err());
        assert!(Vector::parse(Q, "3*f2").is_err());
        assert!(Vector::parse(Q, "e1 e2").is_err());
    }
}
