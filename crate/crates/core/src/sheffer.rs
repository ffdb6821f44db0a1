//! Sheffer sequences: polynomial sequences `p_n` with `deg p_n = n` and
//!
//! ```text
//! Σ_n p_n(x) y^n / n! = μ(y) exp(x σ(y)),   μ(0) ≠ 0, σ(0) = 0, σ'(0) ≠ 0.
//! ```
//!
//! The Sheffer series of a sequence is `Σ p_n(x) y^n`, with the `p_n`
//! stored as they are. Under this convention the umbral product of two
//! Sheffer series is again one, and the series of `(μ, σ) = (1, y)` is the
//! two-sided identity `Σ x^n y^n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::freemodule::Operator;
use crate::normalform::{umbral, NormalSeries};
use crate::ring::{Polynomial, PowerSeries1, Ring, RingError, RingValue};

/// The check that failed when a series is not recognized as Sheffer.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ShefferRejection {
    #[error("coefficient {n} has degree {degree:?}, expected {n}")]
    Degree { n: usize, degree: Option<usize> },
    #[error("mu(0) is zero")]
    MuConstant,
    #[error("sigma(0) is nonzero")]
    SigmaConstant,
    #[error("sigma'(0) is zero")]
    SigmaLinear,
    #[error("generating identity fails at coefficient {n}")]
    GeneratingIdentity { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ShefferError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("not a Sheffer series: {0}")]
    Rejected(#[from] ShefferRejection),
}

/// An admissible pair `(μ, σ)`, truncated to a common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShefferPair {
    mu: PowerSeries1,
    sigma: PowerSeries1,
}

impl ShefferPair {
    pub fn new(mu: PowerSeries1, sigma: PowerSeries1) -> Result<ShefferPair, ShefferError> {
        if mu.ring() != sigma.ring() {
            return Err(RingError::Mismatch {
                left: mu.ring(),
                right: sigma.ring(),
            }
            .into());
        }
        mu.ring().require_rationals("a Sheffer pair")?;
        let order = mu.order().min(sigma.order());
        let (mu, sigma) = (mu.truncate(order), sigma.truncate(order));
        if mu.coeff(0).is_zero() {
            return Err(ShefferRejection::MuConstant.into());
        }
        if !sigma.coeff(0).is_zero() {
            return Err(ShefferRejection::SigmaConstant.into());
        }
        if sigma.coeff(1).is_zero() {
            return Err(ShefferRejection::SigmaLinear.into());
        }
        Ok(ShefferPair { mu, sigma })
    }

    pub fn mu(&self) -> &PowerSeries1 {
        &self.mu
    }

    pub fn sigma(&self) -> &PowerSeries1 {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        self.mu.order()
    }

    pub fn ring(&self) -> Ring {
        self.mu.ring()
    }

    /// `{"mu": [...], "sigma": [...], "order": N}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mu": self.mu.to_json(),
            "sigma": self.sigma.to_json(),
            "order": self.order(),
        })
    }

    pub fn from_json(ring: Ring, value: &serde_json::Value) -> Result<ShefferPair, ShefferError> {
        let bad = || RingError::Parse(format!("invalid Sheffer pair JSON {value}"));
        let order = value
            .get("order")
            .and_then(|o| o.as_u64())
            .ok_or_else(bad)? as usize;
        let read = |key: &str| -> Result<PowerSeries1, RingError> {
            let coeffs = value
                .get(key)
                .and_then(|a| a.as_array())
                .ok_or_else(bad)?
                .iter()
                .map(|c| c.as_str().ok_or_else(bad).and_then(|c| ring.parse_value(c)))
                .collect::<Result<Vec<_>, _>>()?;
            PowerSeries1::new(ring, order, coeffs)
        };
        ShefferPair::new(read("mu")?, read("sigma")?)
    }
}

/// `p_0, ..., p_N` with `deg p_n = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShefferSequence {
    ring: Ring,
    polys: Vec<Polynomial>,
}

impl ShefferSequence {
    pub fn new(ring: Ring, polys: Vec<Polynomial>) -> Result<ShefferSequence, ShefferError> {
        for (n, p) in polys.iter().enumerate() {
            if p.ring() != ring {
                return Err(RingError::Mismatch {
                    left: ring,
                    right: p.ring(),
                }
                .into());
            }
            if p.degree() != Some(n) {
                return Err(ShefferRejection::Degree {
                    n,
                    degree: p.degree(),
                }
                .into());
            }
        }
        Ok(ShefferSequence { ring, polys })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn get(&self, n: usize) -> &Polynomial {
        &self.polys[n]
    }

    /// Index of the last polynomial.
    pub fn order(&self) -> usize {
        self.polys.len().saturating_sub(1)
    }

    /// Array of polynomial coefficient arrays.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.polys.iter().map(Polynomial::to_json).collect())
    }

    pub fn from_json(
        ring: Ring,
        value: &serde_json::Value,
    ) -> Result<ShefferSequence, ShefferError> {
        let items = value
            .as_array()
            .ok_or_else(|| RingError::Parse(format!("invalid Sheffer sequence JSON {value}")))?;
        let polys = items
            .iter()
            .map(|p| Polynomial::from_json(ring, p))
            .collect::<Result<_, _>>()?;
        ShefferSequence::new(ring, polys)
    }
}

fn factorial(ring: Ring, n: usize) -> RingValue {
    ring.from_bigint(&(1..=n as u64).map(BigInt::from).product())
}

/// `p_n(x) = n! [y^n] μ(y) exp(x σ(y)) = n! Σ_k x^k [y^n](μ σ^k) / k!` for
/// `n ≤ N`. The pair must have order at least `N`.
pub fn sheffer_sequence(pair: &ShefferPair, order: usize) -> Result<ShefferSequence, ShefferError> {
    let ring = pair.ring();
    if pair.order() < order {
        return Err(RingError::Parse(format!(
            "pair known to order {}, sequence requested to order {order}",
            pair.order()
        ))
        .into());
    }
    let mu = pair.mu.truncate(order);
    let sigma = pair.sigma.truncate(order);
    // rows[k] = μ σ^k / k!
    let mut rows = Vec::with_capacity(order + 1);
    let mut row = mu;
    for k in 0..=order {
        if k > 0 {
            row = row.checked_mul(&sigma)?.scale(&ring.reciprocal(k as u64)?);
        }
        rows.push(row.clone());
    }
    let polys = (0..=order)
        .map(|n| {
            let coeffs = rows.iter().map(|r| r.coeff(n)).collect();
            Polynomial::from_coeffs(ring, coeffs).scale(&factorial(ring, n))
        })
        .collect();
    ShefferSequence::new(ring, polys)
}

/// `L_n(x) = Σ_{k=0..n} C(n, k) (-1)^k x^k / k!`
pub fn laguerre(ring: Ring, n: usize) -> Result<Polynomial, RingError> {
    ring.require_rationals("Laguerre polynomials")?;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = BigRational::from_integer(1.into());
    for k in 0..=n {
        coeffs.push(ring.from_rational(&c)?);
        // C(n, k+1)/(k+1)! = C(n, k)/k! * (n-k)/(k+1)^2
        let k1 = BigInt::from(k as u64 + 1);
        c = -c * BigRational::new(BigInt::from((n - k) as u64), &k1 * &k1);
    }
    Ok(Polynomial::from_coeffs(ring, coeffs))
}

/// The Sheffer sequence `n! L_n`, attached to `μ = 1/(1-y)`, `σ = -y/(1-y)`.
pub fn laguerre_sequence(ring: Ring, order: usize) -> Result<ShefferSequence, ShefferError> {
    let polys = (0..=order)
        .map(|n| Ok(laguerre(ring, n)?.scale(&factorial(ring, n))))
        .collect::<Result<_, RingError>>()?;
    ShefferSequence::new(ring, polys)
}

/// `Σ p_n(x) y^n`, bounded by the length of the sequence.
pub fn sheffer_series(seq: &ShefferSequence) -> Result<NormalSeries, RingError> {
    seq.ring.require_rationals("a Sheffer series")?;
    Ok(NormalSeries::from_coeffs(seq.ring, seq.polys.clone()))
}

pub fn sheffer_operator(seq: &ShefferSequence) -> Result<Operator, RingError> {
    Ok(sheffer_series(seq)?.to_operator())
}

/// Recognizes `S = Σ p_n y^n` as a Sheffer series up to order `N` and
/// recovers its pair: `μ = Σ p_n(0) y^n/n!` and `μσ = Σ ⟨p_n|x⟩ y^n/n!`.
/// The recovered pair must regenerate every `p_n`, `n ≤ N`.
pub fn is_sheffer(s: &NormalSeries, order: usize) -> Result<ShefferPair, ShefferError> {
    let ring = s.ring();
    ring.require_rationals("Sheffer recognition")?;
    let polys = s.coeffs_to(order);
    for (n, p) in polys.iter().enumerate() {
        if p.degree() != Some(n) {
            return Err(ShefferRejection::Degree {
                n,
                degree: p.degree(),
            }
            .into());
        }
    }
    let inv_fact = |n: usize| factorial(ring, n).inverse();
    let mu = (0..=order)
        .map(|n| Ok(&polys[n].coeff(0) * &inv_fact(n)?))
        .collect::<Result<_, RingError>>()?;
    let mu_sigma = (0..=order)
        .map(|n| Ok(&polys[n].coeff(1) * &inv_fact(n)?))
        .collect::<Result<_, RingError>>()?;
    let mu = PowerSeries1::new(ring, order, mu)?;
    if mu.coeff(0).is_zero() {
        return Err(ShefferRejection::MuConstant.into());
    }
    let sigma = PowerSeries1::new(ring, order, mu_sigma)?.checked_div(&mu)?;
    let pair = ShefferPair::new(mu, sigma)?;
    let regenerated = sheffer_sequence(&pair, order)?;
    if let Some(n) = (0..=order).find(|&n| regenerated.get(n) != &polys[n]) {
        return Err(ShefferRejection::GeneratingIdentity { n }.into());
    }
    Ok(pair)
}

/// Outcome of [`umbral_group_check`].
#[derive(Clone, Debug)]
pub struct UmbralReport {
    pub product: NormalSeries,
    pub order: usize,
    pub verdict: Result<ShefferPair, ShefferRejection>,
}

impl UmbralReport {
    pub fn closed(&self) -> bool {
        self.verdict.is_ok()
    }
}

/// Forms `sheffer_series(A) # sheffer_series(B)` and tries to recognize it as
/// a Sheffer series up to order `N`.
pub fn umbral_group_check(
    a: &ShefferSequence,
    b: &ShefferSequence,
    order: usize,
) -> Result<UmbralReport, RingError> {
    let product = umbral(&sheffer_series(a)?, &sheffer_series(b)?)?;
    let verdict = match is_sheffer(&product, order) {
        Ok(pair) => Ok(pair),
        Err(ShefferError::Rejected(r)) => Err(r),
        Err(ShefferError::Ring(e)) => return Err(e),
    };
    Ok(UmbralReport {
        product,
        order,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemodule::Vector;
    use crate::normalform::eq_up_to;

    const Q: Ring = Ring::Rationals;

    fn ps(text: &str, order: usize) -> PowerSeries1 {
        PowerSeries1::parse(Q, text, order).unwrap()
    }

    fn poly(text: &str) -> Polynomial {
        Polynomial::parse(Q, text).unwrap()
    }

    fn geometric(order: usize) -> PowerSeries1 {
        PowerSeries1::one(Q, order)
            .checked_sub(&PowerSeries1::var(Q, order))
            .unwrap()
            .inverse()
            .unwrap()
    }

    fn laguerre_pair(order: usize) -> ShefferPair {
        let g = geometric(order);
        let sigma = PowerSeries1::var(Q, order).neg().checked_mul(&g).unwrap();
        ShefferPair::new(g, sigma).unwrap()
    }

    #[test]
    fn pair_invariants() {
        assert!(ShefferPair::new(ps("1", 4), ps("y", 4)).is_ok());
        assert_eq!(
            ShefferPair::new(ps("y", 4), ps("y", 4)),
            Err(ShefferError::Rejected(ShefferRejection::MuConstant))
        );
        assert_eq!(
            ShefferPair::new(ps("1", 4), ps("1 + y", 4)),
            Err(ShefferError::Rejected(ShefferRejection::SigmaConstant))
        );
        assert_eq!(
            ShefferPair::new(ps("1", 4), ps("y^2", 4)),
            Err(ShefferError::Rejected(ShefferRejection::SigmaLinear))
        );
        let z = Ring::Integers;
        let one = PowerSeries1::one(z, 3);
        assert!(matches!(
            ShefferPair::new(one, PowerSeries1::var(z, 3)),
            Err(ShefferError::Ring(RingError::NeedsRationals { .. }))
        ));
    }

    #[test]
    fn exponential_pair_gives_monomials() {
        let seq = sheffer_sequence(&ShefferPair::new(ps("1", 6), ps("y", 6)).unwrap(), 6).unwrap();
        for n in 0..=6 {
            assert_eq!(seq.get(n), &Polynomial::monomial(Q.one(), n));
        }
        let s = sheffer_series(&seq).unwrap();
        assert!(eq_up_to(&s, &NormalSeries::diagonal(Q), 6));
    }

    #[test]
    fn geometric_mu_gives_falling_factorial_sums() {
        // Σ_k n!/k! x^k, expanded by hand
        let seq =
            sheffer_sequence(&ShefferPair::new(geometric(4), ps("y", 4)).unwrap(), 4).unwrap();
        assert_eq!(seq.get(2), &poly("2 + 2*x + x^2"));
        assert_eq!(seq.get(3), &poly("6 + 6*x + 3*x^2 + x^3"));
        assert_eq!(seq.get(4), &poly("24 + 24*x + 12*x^2 + 4*x^3 + x^4"));
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(Q, 0).unwrap(), poly("1"));
        assert_eq!(laguerre(Q, 1).unwrap(), poly("1 - x"));
        assert_eq!(laguerre(Q, 2).unwrap(), poly("1 - 2*x + x^2/2"));
        assert_eq!(laguerre(Q, 3).unwrap(), poly("1 - 3*x + 3/2*x^2 - 1/6*x^3"));
        assert!(laguerre(Ring::Integers, 2).is_err());
    }

    #[test]
    fn laguerre_sequence_comes_from_its_pair() {
        assert_eq!(
            sheffer_sequence(&laguerre_pair(8), 8).unwrap(),
            laguerre_sequence(Q, 8).unwrap()
        );
    }

    #[test]
    fn laguerre_series_is_recognized() {
        let seq = laguerre_sequence(Q, 8).unwrap();
        let s = sheffer_series(&seq).unwrap();
        assert_eq!(s.coeff(1), poly("1 - x"));
        assert_eq!(s.apply(&Vector::basis(Q, 0)), Vector::basis(Q, 0));
        let pair = is_sheffer(&s, 8).unwrap();
        assert_eq!(pair, laguerre_pair(8));
        assert_eq!(sheffer_sequence(&pair, 8).unwrap(), seq);
    }

    #[test]
    fn plain_laguerre_is_not_sheffer() {
        let s = NormalSeries::from_coeffs(Q, (0..=4).map(|n| laguerre(Q, n).unwrap()).collect());
        assert!(matches!(
            is_sheffer(&s, 4),
            Err(ShefferError::Rejected(
                ShefferRejection::GeneratingIdentity { n: 2 }
            ))
        ));
    }

    #[test]
    fn degree_rejection() {
        let s = NormalSeries::from_coeffs(Q, vec![poly("1"), poly("3"), poly("x^2")]);
        assert_eq!(
            is_sheffer(&s, 2),
            Err(ShefferError::Rejected(ShefferRejection::Degree {
                n: 1,
                degree: Some(0)
            }))
        );
        assert!(ShefferSequence::new(Q, vec![poly("1"), poly("3")]).is_err());
    }

    #[test]
    fn umbral_group() {
        let id = sheffer_sequence(&ShefferPair::new(ps("1", 8), ps("y", 8)).unwrap(), 8).unwrap();
        let lag = laguerre_sequence(Q, 8).unwrap();
        let report = umbral_group_check(&lag, &lag, 8).unwrap();
        assert!(report.closed());
        for (a, b) in [(&id, &lag), (&lag, &id)] {
            let r = umbral_group_check(a, b, 8).unwrap();
            assert!(eq_up_to(&r.product, &sheffer_series(&lag).unwrap(), 8));
            assert_eq!(r.verdict, Ok(laguerre_pair(8)));
        }
    }

    #[test]
    fn json_round_trips() {
        let pair = laguerre_pair(3);
        assert_eq!(ShefferPair::from_json(Q, &pair.to_json()).unwrap(), pair);
        assert_eq!(
            ShefferPair::new(ps("1", 2), ps("y", 2))
                .unwrap()
                .to_json()
                .to_string(),
            r#"{"mu":["1","0","0"],"order":2,"sigma":["0","1","0"]}"#
        );
        let seq = laguerre_sequence(Q, 3).unwrap();
        assert_eq!(ShefferSequence::from_json(Q, &seq.to_json()).unwrap(), seq);
    }
}
