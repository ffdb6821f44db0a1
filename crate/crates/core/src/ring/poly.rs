use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{parse_rational, Ring, RingError, RingValue};

/// A univariate polynomial over a [`Ring`], coefficients lowest degree first.
///
/// Trailing zeros are trimmed on construction, so the zero polynomial has
/// no coefficients and equal polynomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    coeffs: Vec<RingValue>,
}

/// Which polynomial operation [`poly_arith`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Scale,
}

/// Right-hand operand of [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOperand<'a> {
    Poly(&'a Polynomial),
    Scalar(&'a RingValue),
}

/// Exact polynomial arithmetic with ring checking.
///
/// `Add` and `Mul` accept a scalar operand by promoting it to a constant
/// polynomial; `Scale` accepts either form.
pub fn poly_arith(op: PolyOp, a: &Polynomial, b: PolyOperand<'_>) -> Result<Polynomial, RingError> {
    let promoted;
    let rhs = match b {
        PolyOperand::Poly(p) => p,
        PolyOperand::Scalar(c) => {
            if op == PolyOp::Scale {
                return a.checked_scale(c);
            }
            promoted = Polynomial::constant(c.clone());
            &promoted
        }
    };
    match op {
        PolyOp::Add => a.checked_add(rhs),
        PolyOp::Mul | PolyOp::Scale => a.checked_mul(rhs),
    }
}

impl Polynomial {
    pub fn zero(ring: Ring) -> Polynomial {
        Polynomial {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: Ring) -> Polynomial {
        Polynomial::constant(ring.one())
    }

    pub fn constant(c: RingValue) -> Polynomial {
        Polynomial::monomial(c, 0)
    }

    /// The polynomial `x`.
    pub fn x(ring: Ring) -> Polynomial {
        Polynomial::monomial(ring.one(), 1)
    }

    /// `c * x^k`
    pub fn monomial(c: RingValue, k: usize) -> Polynomial {
        let ring = c.ring();
        if c.is_zero() {
            return Polynomial::zero(ring);
        }
        let mut coeffs = vec![ring.zero(); k];
        coeffs.push(c);
        Polynomial { ring, coeffs }
    }

    /// Builds from coefficients `c_0, c_1, ...`, trimming trailing zeros.
    ///
    /// Panics if the coefficients do not all belong to `ring`.
    pub fn from_coeffs(ring: Ring, coeffs: Vec<RingValue>) -> Polynomial {
        Polynomial::try_from_coeffs(ring, coeffs).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_from_coeffs(ring: Ring, coeffs: Vec<RingValue>) -> Result<Polynomial, RingError> {
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(RingError::Mismatch {
                left: ring,
                right: bad.ring(),
            });
        }
        let mut p = Polynomial { ring, coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_ints(ring: Ring, coeffs: &[i64]) -> Polynomial {
        Polynomial::from_coeffs(ring, coeffs.iter().map(|&c| ring.from_int(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(RingValue::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> RingValue {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeffs(&self) -> &[RingValue] {
        &self.coeffs
    }

    /// Iterates the nonzero terms as `(k, c_k)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &RingValue)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::Mismatch {
                left: self.ring,
                right: other.ring,
            })
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_ring(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Ok(Polynomial::from_coeffs(self.ring, coeffs))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.ring));
        }
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(Polynomial::from_coeffs(self.ring, coeffs))
    }

    pub fn checked_scale(&self, c: &RingValue) -> Result<Polynomial, RingError> {
        if c.ring() != self.ring {
            return Err(RingError::Mismatch {
                left: self.ring,
                right: c.ring(),
            });
        }
        Ok(self.scale(c))
    }

    pub fn scale(&self, c: &RingValue) -> Polynomial {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Polynomial::from_coeffs(self.ring, coeffs)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ring.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial {
            ring: self.ring,
            coeffs,
        }
    }

    pub fn eval(&self, at: &RingValue) -> RingValue {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ring.zero(), |acc, c| &(&acc * at) + c)
    }

    /// Parses `"c0 + c1*x + ... + cd*x^d"` in the variable `x`.
    pub fn parse(ring: Ring, text: &str) -> Result<Polynomial, RingError> {
        Polynomial::parse_in(ring, text, 'x')
    }

    /// Like [`Polynomial::parse`] with a chosen variable letter. Terms may
    /// repeat and appear in any order; a rational factor may follow the
    /// power as in `x^3/6`.
    pub fn parse_in(ring: Ring, text: &str, var: char) -> Result<Polynomial, RingError> {
        let err = |msg: &str| RingError::Parse(format!("{msg} in polynomial `{text}`"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut sign_pending = false;
        for ch in compact.chars() {
            if ch == '+' || ch == '-' {
                if sign_pending {
                    return Err(err("repeated sign"));
                }
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
                sign_pending = true;
            } else {
                current.push(ch);
                sign_pending = false;
            }
        }
        if current.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((negative, current));

        let mut total = Polynomial::zero(ring);
        for (neg, term) in terms {
            let mut coeff = ring.one();
            let mut power = 0usize;
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix(var) {
                    // x, x^k, x/q, x^k/q
                    let (pow_part, div_part) = match rest.split_once('/') {
                        Some((p, d)) => (p, Some(d)),
                        None => (rest, None),
                    };
                    let k = if pow_part.is_empty() {
                        1
                    } else {
                        pow_part
                            .strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| err("bad exponent"))?
                    };
                    power += k;
                    if let Some(d) = div_part {
                        let q = parse_rational(d)?;
                        coeff = coeff.checked_mul(&ring.from_rational(&q.recip())?)?;
                    }
                } else {
                    let q = parse_rational(factor)?;
                    coeff = coeff.checked_mul(&ring.from_rational(&q)?)?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            total = &total + &Polynomial::monomial(coeff, power);
        }
        Ok(total)
    }

    /// Formats with an arbitrary variable name.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.terms() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let monomial = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&monomial);
            } else {
                out.push_str(&format!("{mag}*{monomial}"));
            }
        }
        out
    }

    /// Coefficient strings lowest degree first, `[]` for zero.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }

    pub fn from_json(ring: Ring, value: &serde_json::Value) -> Result<Polynomial, RingError> {
        let items = value
            .as_array()
            .ok_or_else(|| RingError::Parse("polynomial JSON must be an array".into()))?;
        let coeffs = items
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => ring.parse_value(s),
                serde_json::Value::Number(n) => ring.parse_value(&n.to_string()),
                _ => Err(RingError::Parse(format!("bad coefficient {v}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::from_coeffs(ring, coeffs))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_poly_binop!(Add, add, checked_add);
forward_poly_binop!(Sub, sub, checked_sub);
forward_poly_binop!(Mul, mul, checked_mul);
