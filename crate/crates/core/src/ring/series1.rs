use std::fmt;

use super::{Polynomial, Ring, RingError, RingValue};

/// A truncated power series `c_0 + c_1 y + ... + c_N y^N` in one commuting
/// variable. Binary operations truncate to the smaller order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries1 {
    ring: Ring,
    coeffs: Vec<RingValue>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Compose,
    Exp,
}

/// Dispatches one of the series operations; `b` is ignored by `Exp` and
/// required by the others.
pub fn ps_arith(
    op: SeriesOp,
    a: &PowerSeries1,
    b: Option<&PowerSeries1>,
) -> Result<PowerSeries1, RingError> {
    let need_b = || b.ok_or_else(|| RingError::Parse(format!("{op:?} needs two operands")));
    match op {
        SeriesOp::Add => a.checked_add(need_b()?),
        SeriesOp::Mul => a.checked_mul(need_b()?),
        SeriesOp::Compose => a.compose(need_b()?),
        SeriesOp::Exp => a.exp(),
    }
}

impl PowerSeries1 {
    /// Pads or truncates `coeffs` to exactly `order + 1` entries.
    pub fn new(
        ring: Ring,
        order: usize,
        coeffs: Vec<RingValue>,
    ) -> Result<PowerSeries1, RingError> {
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(RingError::Mismatch {
                left: ring,
                right: bad.ring(),
            });
        }
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, ring.zero());
        Ok(PowerSeries1 { ring, coeffs })
    }

    pub fn from_ints(ring: Ring, order: usize, coeffs: &[i64]) -> PowerSeries1 {
        let cs = coeffs.iter().map(|&c| ring.from_int(c)).collect();
        PowerSeries1::new(ring, order, cs).expect("coefficients built in ring")
    }

    pub fn from_poly(p: &Polynomial, order: usize) -> PowerSeries1 {
        PowerSeries1::new(p.ring(), order, p.coeffs().to_vec()).expect("same ring")
    }

    pub fn zero(ring: Ring, order: usize) -> PowerSeries1 {
        PowerSeries1 {
            ring,
            coeffs: vec![ring.zero(); order + 1],
        }
    }

    pub fn one(ring: Ring, order: usize) -> PowerSeries1 {
        PowerSeries1::from_ints(ring, order, &[1])
    }

    /// The series `y`.
    pub fn var(ring: Ring, order: usize) -> PowerSeries1 {
        PowerSeries1::from_ints(ring, order, &[0, 1])
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> RingValue {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeffs(&self) -> &[RingValue] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> PowerSeries1 {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        PowerSeries1::new(self.ring, order.min(self.order()), coeffs).expect("same ring")
    }

    pub fn to_poly(&self) -> Polynomial {
        Polynomial::from_coeffs(self.ring, self.coeffs.clone())
    }

    fn check_ring(&self, other: &PowerSeries1) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::Mismatch {
                left: self.ring,
                right: other.ring,
            })
        }
    }

    pub fn checked_add(&self, other: &PowerSeries1) -> Result<PowerSeries1, RingError> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| &self.coeffs[k] + &other.coeffs[k])
            .collect();
        Ok(PowerSeries1 {
            ring: self.ring,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &PowerSeries1) -> Result<PowerSeries1, RingError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> PowerSeries1 {
        PowerSeries1 {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &RingValue) -> PowerSeries1 {
        PowerSeries1 {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn checked_mul(&self, other: &PowerSeries1) -> Result<PowerSeries1, RingError> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        let mut coeffs = vec![self.ring.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(PowerSeries1 {
            ring: self.ring,
            coeffs,
        })
    }

    pub fn pow(&self, k: usize) -> PowerSeries1 {
        (0..k).fold(PowerSeries1::one(self.ring, self.order()), |acc, _| {
            acc.checked_mul(self).expect("same ring")
        })
    }

    /// `self(inner(y))`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &PowerSeries1) -> Result<PowerSeries1, RingError> {
        self.check_ring(inner)?;
        if !inner.coeff(0).is_zero() {
            return Err(RingError::NonzeroConstantTerm(
                "inner series of a composition",
            ));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        // Horner: (((c_n) b + c_{n-1}) b + ...) + c_0
        let mut acc = PowerSeries1::zero(self.ring, n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            acc = acc.checked_mul(&inner)?;
            acc.coeffs[0] = &acc.coeffs[0] + c;
        }
        Ok(acc)
    }

    /// `exp(self)`; requires `self(0) = 0` and a ring containing ℚ.
    ///
    /// Uses `n e_n = Σ_{k=1..n} k a_k e_{n-k}`, which follows from `E' = a' E`.
    pub fn exp(&self) -> Result<PowerSeries1, RingError> {
        self.ring.require_rationals("exp of a power series")?;
        if !self.coeff(0).is_zero() {
            return Err(RingError::NonzeroConstantTerm("argument of exp"));
        }
        let n = self.order();
        let mut e = vec![self.ring.one()];
        for m in 1..=n {
            let mut s = self.ring.zero();
            for k in 1..=m {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s = &s + &(&(&self.ring.from_int(k as i64) * a) * &e[m - k]);
                }
            }
            e.push(&s * &self.ring.reciprocal(m as u64)?);
        }
        Ok(PowerSeries1 {
            ring: self.ring,
            coeffs: e,
        })
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<PowerSeries1, RingError> {
        let c0_inv = self.coeff(0).inverse()?;
        let n = self.order();
        let mut inv: Vec<RingValue> = vec![c0_inv.clone()];
        for m in 1..=n {
            let mut s = self.ring.zero();
            for k in 1..=m {
                s = &s + &(&self.coeffs[k] * &inv[m - k]);
            }
            inv.push(-&(&s * &c0_inv));
        }
        Ok(PowerSeries1 {
            ring: self.ring,
            coeffs: inv,
        })
    }

    pub fn checked_div(&self, other: &PowerSeries1) -> Result<PowerSeries1, RingError> {
        self.checked_mul(&other.inverse()?)
    }

    /// Parses a polynomial in `y` and truncates/pads it to `order`.
    pub fn parse(ring: Ring, text: &str, order: usize) -> Result<PowerSeries1, RingError> {
        let p = Polynomial::parse_in(ring, text, 'y')?;
        Ok(PowerSeries1::from_poly(&p, order))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }
}

impl fmt::Display for PowerSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + O(y^{})",
            self.to_poly().display_in("y"),
            self.order() + 1
        )
    }
}
