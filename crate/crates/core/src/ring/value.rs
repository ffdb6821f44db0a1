use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RingError;

/// Which coefficient ring a value lives in.
///
/// `Mod(m)` is the ring of integers modulo `m` for any `m >= 2`; it is not
/// required to be a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    Mod(u64),
}

impl Ring {
    pub fn modular(modulus: u64) -> Result<Ring, RingError> {
        if modulus < 2 {
            return Err(RingError::InvalidModulus(modulus));
        }
        Ok(Ring::Mod(modulus))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Ring::Mod(m) => Some(m),
            _ => None,
        }
    }

    /// True iff ℚ embeds in the ring, which gates integration and the
    /// Sheffer constructions.
    pub fn contains_rationals(self) -> bool {
        matches!(self, Ring::Rationals)
    }

    pub fn require_rationals(self, what: &str) -> Result<(), RingError> {
        if self.contains_rationals() {
            Ok(())
        } else {
            Err(RingError::NeedsRationals {
                ring: self,
                what: what.to_string(),
            })
        }
    }

    pub fn zero(self) -> RingValue {
        self.from_int(0)
    }

    pub fn one(self) -> RingValue {
        self.from_int(1)
    }

    pub fn from_int(self, n: i64) -> RingValue {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under the unique ring map ℤ → R.
    pub fn from_bigint(self, n: &BigInt) -> RingValue {
        match self {
            Ring::Integers => RingValue::Int(n.clone()),
            Ring::Rationals => RingValue::Rat(BigRational::from_integer(n.clone())),
            Ring::Mod(m) => {
                let r = n.mod_floor(&BigInt::from(m));
                RingValue::Mod {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: m,
                }
            }
        }
    }

    /// Embeds an exact rational. Outside ℚ only integral values are accepted.
    pub fn from_rational(self, q: &BigRational) -> Result<RingValue, RingError> {
        match self {
            Ring::Rationals => Ok(RingValue::Rat(q.clone())),
            _ if q.is_integer() => Ok(self.from_bigint(q.numer())),
            _ => Err(RingError::NotIntegral {
                ring: self,
                literal: q.to_string(),
            }),
        }
    }

    /// Parses "p", "-p" or "p/q".
    pub fn parse_value(self, text: &str) -> Result<RingValue, RingError> {
        let q = parse_rational(text)?;
        self.from_rational(&q)
    }

    /// `1/n` for a positive integer `n`; only available over ℚ.
    pub fn reciprocal(self, n: u64) -> Result<RingValue, RingError> {
        self.require_rationals("division by an integer")?;
        if n == 0 {
            return Err(RingError::DivisionByZero);
        }
        Ok(RingValue::Rat(BigRational::new(
            BigInt::one(),
            BigInt::from(n),
        )))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::Mod(m) => write!(f, "Zmod:{m}"),
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Ring, RingError> {
        match s.trim() {
            "Q" | "q" | "QQ" => Ok(Ring::Rationals),
            "Z" | "z" | "ZZ" => Ok(Ring::Integers),
            other => {
                let m = other
                    .strip_prefix("Zmod:")
                    .or_else(|| other.strip_prefix("zmod:"))
                    .ok_or_else(|| RingError::Parse(format!("unknown ring `{other}`")))?;
                let m: u64 = m
                    .parse()
                    .map_err(|_| RingError::Parse(format!("bad modulus `{m}`")))?;
                Ring::modular(m)
            }
        }
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, RingError> {
    let t = text.trim();
    let bad = || RingError::Parse(format!("invalid rational literal `{t}`"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let valid_int = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix('-').unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) if valid_int(d, false) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// An exact element of one of the supported coefficient rings.
///
/// Representations are canonical: rationals are reduced with a positive
/// denominator and residues lie in `[0, m)`, so derived equality is value
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingValue {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl RingValue {
    pub fn ring(&self) -> Ring {
        match self {
            RingValue::Int(_) => Ring::Integers,
            RingValue::Rat(_) => Ring::Rationals,
            RingValue::Mod { modulus, .. } => Ring::Mod(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Int(n) => n.is_zero(),
            RingValue::Rat(q) => q.is_zero(),
            RingValue::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingValue::Int(n) => n.is_one(),
            RingValue::Rat(q) => q.is_one(),
            RingValue::Mod { value, .. } => *value == 1,
        }
    }

    /// Sign used only for pretty printing; residues are never negative.
    pub(crate) fn is_negative(&self) -> bool {
        match self {
            RingValue::Int(n) => n.is_negative(),
            RingValue::Rat(q) => q.is_negative(),
            RingValue::Mod { .. } => false,
        }
    }

    fn mismatch(&self, other: &RingValue) -> RingError {
        RingError::Mismatch {
            left: self.ring(),
            right: other.ring(),
        }
    }

    pub fn checked_add(&self, other: &RingValue) -> Result<RingValue, RingError> {
        match (self, other) {
            (RingValue::Int(a), RingValue::Int(b)) => Ok(RingValue::Int(a + b)),
            (RingValue::Rat(a), RingValue::Rat(b)) => Ok(RingValue::Rat(a + b)),
            (
                RingValue::Mod {
                    value: a,
                    modulus: m,
                },
                RingValue::Mod {
                    value: b,
                    modulus: n,
                },
            ) if m == n => {
                let s = (*a as u128 + *b as u128) % *m as u128;
                Ok(RingValue::Mod {
                    value: s as u64,
                    modulus: *m,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &RingValue) -> Result<RingValue, RingError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &RingValue) -> Result<RingValue, RingError> {
        match (self, other) {
            (RingValue::Int(a), RingValue::Int(b)) => Ok(RingValue::Int(a * b)),
            (RingValue::Rat(a), RingValue::Rat(b)) => Ok(RingValue::Rat(a * b)),
            (
                RingValue::Mod {
                    value: a,
                    modulus: m,
                },
                RingValue::Mod {
                    value: b,
                    modulus: n,
                },
            ) if m == n => {
                let p = (*a as u128 * *b as u128) % *m as u128;
                Ok(RingValue::Mod {
                    value: p as u64,
                    modulus: *m,
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    /// Multiplicative inverse, when it exists in the value's ring.
    pub fn inverse(&self) -> Result<RingValue, RingError> {
        match self {
            _ if self.is_zero() => Err(RingError::DivisionByZero),
            RingValue::Rat(q) => Ok(RingValue::Rat(q.recip())),
            RingValue::Int(n) if n.is_one() || (-n).is_one() => Ok(self.clone()),
            RingValue::Mod { value, modulus } => {
                let e = BigInt::from(*value).extended_gcd(&BigInt::from(*modulus));
                if !e.gcd.is_one() {
                    return Err(RingError::NotInvertible(self.to_string()));
                }
                Ok(Ring::Mod(*modulus).from_bigint(&e.x))
            }
            _ => Err(RingError::NotInvertible(self.to_string())),
        }
    }

    pub fn checked_div(&self, other: &RingValue) -> Result<RingValue, RingError> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RingValue::Rat(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Int(n) => write!(f, "{n}"),
            RingValue::Rat(q) if q.is_integer() => write!(f, "{}", q.numer()),
            RingValue::Rat(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            RingValue::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Neg for &RingValue {
    type Output = RingValue;

    fn neg(self) -> RingValue {
        match self {
            RingValue::Int(n) => RingValue::Int(-n),
            RingValue::Rat(q) => RingValue::Rat(-q),
            RingValue::Mod { value, modulus } => RingValue::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for RingValue {
    type Output = RingValue;

    fn neg(self) -> RingValue {
        -&self
    }
}

// The operator impls panic on mixed rings; the `checked_*` methods report it.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RingValue> for &RingValue {
            type Output = RingValue;

            fn $method(self, rhs: &RingValue) -> RingValue {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<RingValue> for RingValue {
            type Output = RingValue;

            fn $method(self, rhs: RingValue) -> RingValue {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
