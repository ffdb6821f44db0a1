use std::fmt;
use std::sync::{Arc, Mutex};

use crate::freemodule::{apply_poly, op_combine, Combine, Operator, Vector};
use crate::ring::{Polynomial, Ring, RingError, RingValue};

type CoeffFn = dyn Fn(usize, &[Polynomial]) -> Polynomial + Send + Sync;

/// A series `Σ_n P_n(x) y^n` whose coefficients are polynomials in `x`.
///
/// Coefficients come from a deterministic oracle that may read every
/// earlier coefficient; they are computed in order on demand and cached.
/// An optional bound `B` declares all coefficients past `B` to be zero.
#[derive(Clone)]
pub struct NormalSeries {
    inner: Arc<SeriesInner>,
}

struct SeriesInner {
    ring: Ring,
    bound: Option<usize>,
    oracle: Box<CoeffFn>,
    cache: Mutex<Vec<Polynomial>>,
}

impl NormalSeries {
    /// A series whose coefficient `n` is computed from `n` and the already
    /// known coefficients `0..n`.
    pub fn recursive<F>(ring: Ring, bound: Option<usize>, oracle: F) -> NormalSeries
    where
        F: Fn(usize, &[Polynomial]) -> Polynomial + Send + Sync + 'static,
    {
        NormalSeries {
            inner: Arc::new(SeriesInner {
                ring,
                bound,
                oracle: Box::new(oracle),
                cache: Mutex::new(Vec::new()),
            }),
        }
    }

    pub fn from_fn<F>(ring: Ring, oracle: F) -> NormalSeries
    where
        F: Fn(usize) -> Polynomial + Send + Sync + 'static,
    {
        NormalSeries::recursive(ring, None, move |n, _| oracle(n))
    }

    /// Finitely many coefficients; everything past them is zero.
    pub fn from_coeffs(ring: Ring, coeffs: Vec<Polynomial>) -> NormalSeries {
        let bound = coeffs.len().saturating_sub(1);
        NormalSeries::recursive(ring, Some(bound), move |n, _| {
            coeffs
                .get(n)
                .cloned()
                .unwrap_or_else(|| Polynomial::zero(ring))
        })
    }

    pub fn zero(ring: Ring) -> NormalSeries {
        NormalSeries::from_coeffs(ring, Vec::new())
    }

    pub fn one(ring: Ring) -> NormalSeries {
        NormalSeries::from_coeffs(ring, vec![Polynomial::one(ring)])
    }

    /// `P(x) y^n`
    pub fn monomial(p: Polynomial, n: usize) -> NormalSeries {
        let ring = p.ring();
        let mut coeffs = vec![Polynomial::zero(ring); n];
        coeffs.push(p);
        NormalSeries::from_coeffs(ring, coeffs)
    }

    /// The series `x`.
    pub fn x(ring: Ring) -> NormalSeries {
        NormalSeries::monomial(Polynomial::x(ring), 0)
    }

    /// The series `y`.
    pub fn y(ring: Ring) -> NormalSeries {
        NormalSeries::monomial(Polynomial::one(ring), 1)
    }

    /// `Σ_n x^n y^n`
    pub fn diagonal(ring: Ring) -> NormalSeries {
        NormalSeries::from_fn(ring, move |n| Polynomial::monomial(ring.one(), n))
    }

    pub fn ring(&self) -> Ring {
        self.inner.ring
    }

    pub fn bound(&self) -> Option<usize> {
        self.inner.bound
    }

    /// The exact coefficient `P_n(x)`.
    pub fn coeff(&self, n: usize) -> Polynomial {
        if self.inner.bound.is_some_and(|b| n > b) {
            return Polynomial::zero(self.inner.ring);
        }
        let mut cache = self.inner.cache.lock().expect("series cache poisoned");
        while cache.len() <= n {
            let next = (self.inner.oracle)(cache.len(), &cache);
            debug_assert_eq!(next.ring(), self.inner.ring);
            cache.push(next);
        }
        cache[n].clone()
    }

    /// `P_0, ..., P_order`
    pub fn coeffs_to(&self, order: usize) -> Vec<Polynomial> {
        (0..=order).map(|n| self.coeff(n)).collect()
    }

    fn lazy_binary(
        &self,
        other: &NormalSeries,
        f: fn(&Polynomial, &Polynomial) -> Polynomial,
    ) -> Result<NormalSeries, RingError> {
        if self.ring() != other.ring() {
            return Err(RingError::Mismatch {
                left: self.ring(),
                right: other.ring(),
            });
        }
        let bound = self.bound().zip(other.bound()).map(|(a, b)| a.max(b));
        let (s, t) = (self.clone(), other.clone());
        Ok(NormalSeries::recursive(self.ring(), bound, move |n, _| {
            f(&s.coeff(n), &t.coeff(n))
        }))
    }

    pub fn checked_add(&self, other: &NormalSeries) -> Result<NormalSeries, RingError> {
        self.lazy_binary(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &NormalSeries) -> Result<NormalSeries, RingError> {
        self.lazy_binary(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &RingValue) -> NormalSeries {
        let (s, c) = (self.clone(), c.clone());
        NormalSeries::recursive(self.ring(), self.bound(), move |n, _| s.coeff(n).scale(&c))
    }

    /// The `R[x]`-module action `Q(x)·Σ P_n y^n = Σ (Q P_n) y^n`.
    pub fn mul_poly(&self, q: &Polynomial) -> NormalSeries {
        let (s, q) = (self.clone(), q.clone());
        NormalSeries::recursive(self.ring(), self.bound(), move |n, _| &q * &s.coeff(n))
    }

    /// `(Σ P_n(U)∘D^n)(v) = Σ_{n=0}^{d(v)} P_n(U)(D^n v)`.
    pub fn apply(&self, v: &Vector) -> Vector {
        apply_series(self, v)
    }

    /// The operator `Σ_n P_n(U)∘D^n` this series represents.
    pub fn to_operator(&self) -> Operator {
        let s = self.clone();
        let ring = self.ring();
        Operator::from_fn(ring, move |m| apply_series(&s, &Vector::basis(ring, m)))
    }

    /// `{"order": N, "coeffs": [[...], ...]}`
    pub fn to_json(&self, order: usize) -> serde_json::Value {
        let coeffs: Vec<_> = self
            .coeffs_to(order)
            .iter()
            .map(Polynomial::to_json)
            .collect();
        serde_json::json!({ "order": order, "coeffs": coeffs })
    }

    /// Reads the JSON form; the series is bounded by the stored order.
    pub fn from_json(ring: Ring, value: &serde_json::Value) -> Result<NormalSeries, RingError> {
        let bad = |m: &str| RingError::Parse(format!("series JSON: {m}"));
        let coeffs = value
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| bad("missing `coeffs` array"))?;
        let polys = coeffs
            .iter()
            .map(|p| Polynomial::from_json(ring, p))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(order) = value.get("order") {
            let order = order
                .as_u64()
                .ok_or_else(|| bad("`order` must be a natural"))?;
            if order as usize + 1 != polys.len() {
                return Err(bad("`order` disagrees with the number of coefficients"));
            }
        }
        Ok(NormalSeries::from_coeffs(ring, polys))
    }

    /// Text like `1 - x*y` for the first `order + 1` coefficients.
    pub fn display_to(&self, order: usize) -> String {
        let mut out = String::new();
        for (n, p) in self.coeffs_to(order).iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let single = p.terms().count() == 1;
            let negative = single && p.terms().all(|(_, c)| c.is_negative());
            let mag = if negative { -p } else { p.clone() };
            let y = match n {
                0 => String::new(),
                1 => "y".to_string(),
                _ => format!("y^{n}"),
            };
            let term = if n == 0 {
                mag.to_string()
            } else if mag == Polynomial::one(self.ring()) {
                y
            } else if single {
                format!("{mag}*{y}")
            } else {
                format!("({mag})*{y}")
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for NormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalSeries")
            .field("ring", &self.inner.ring)
            .field("bound", &self.inner.bound)
            .field("prefix", &self.display_to(4))
            .finish()
    }
}

/// Observes coefficient `n` exactly.
pub fn series_coeff(s: &NormalSeries, n: usize) -> Polynomial {
    s.coeff(n)
}

/// Evaluates the represented operator on `v` using coefficients
/// `0..=d(v)` only.
pub fn apply_series(s: &NormalSeries, v: &Vector) -> Vector {
    let mut out = Vector::zero(s.ring());
    let Some(d) = v.degree() else {
        return out;
    };
    for n in 0..=d {
        let p = s.coeff(n);
        if p.is_zero() {
            continue;
        }
        let lowered = v.lower_by(n);
        out = &out + &apply_poly(&p, &lowered);
    }
    out
}

/// The normal form `s(φ)`: the unique series with `φ = Σ P_n(U)∘D^n`.
///
/// `P_0` is read off `φ(e_0)` and
/// `P_{n+1}(U)(e_0) = φ(e_{n+1}) − Σ_{k=0}^{n} P_k(U)(e_{n+1−k})`.
pub fn normalize(phi: &Operator) -> NormalSeries {
    let phi = phi.clone();
    let ring = phi.ring();
    NormalSeries::recursive(ring, None, move |n, earlier| {
        let mut rest = phi.image(n).to_poly();
        for (k, pk) in earlier.iter().enumerate() {
            if !pk.is_zero() {
                rest = &rest - &pk.shift(n - k);
            }
        }
        rest
    })
}

/// `S * T = s(π(S) ∘ π(T))`.
pub fn star(s: &NormalSeries, t: &NormalSeries) -> Result<NormalSeries, RingError> {
    let composite = op_combine(Combine::Compose(&s.to_operator(), &t.to_operator()))?;
    Ok(normalize(&composite))
}

/// `S # T`: coefficient `n` is `Σ_k ⟨P_n | x^k⟩ Q_k(x)`.
pub fn umbral(s: &NormalSeries, t: &NormalSeries) -> Result<NormalSeries, RingError> {
    if s.ring() != t.ring() {
        return Err(RingError::Mismatch {
            left: s.ring(),
            right: t.ring(),
        });
    }
    let (s2, t2) = (s.clone(), t.clone());
    let ring = s.ring();
    Ok(NormalSeries::recursive(ring, s.bound(), move |n, _| {
        let mut acc = Polynomial::zero(ring);
        for (k, c) in s2.coeff(n).terms() {
            acc = &acc + &t2.coeff(k).scale(c);
        }
        acc
    }))
}

/// Index of the first coefficient in `0..=order` where the two differ.
pub fn first_difference(s: &NormalSeries, t: &NormalSeries, order: usize) -> Option<usize> {
    (0..=order).find(|&n| s.coeff(n) != t.coeff(n))
}

/// Exact agreement of coefficients `0..=order`.
pub fn eq_up_to(s: &NormalSeries, t: &NormalSeries, order: usize) -> bool {
    first_difference(s, t, order).is_none()
}
