#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use opcalc::freemodule::{Operator, Vector};
use opcalc::normalform::NormalSeries;
use opcalc::ring::{Polynomial, Ring, RingValue};
use proptest::prelude::*;
use rand::Rng;

pub const Q: Ring = Ring::Rationals;
pub const Z7: Ring = Ring::Mod(7);

pub fn rings() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::Rationals),
        Just(Ring::Integers),
        Just(Ring::Mod(7)),
        Just(Ring::Mod(12))
    ]
}

/// Small values; non-integral only over ℚ.
pub fn value(ring: Ring) -> BoxedStrategy<RingValue> {
    if ring.contains_rationals() {
        (-6i64..=6, 1i64..=4)
            .prop_map(move |(n, d)| {
                ring.from_rational(&BigRational::new(n.into(), d.into()))
                    .unwrap()
            })
            .boxed()
    } else {
        (-20i64..=20).prop_map(move |n| ring.from_int(n)).boxed()
    }
}

pub fn poly(ring: Ring, max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(value(ring), 0..=max_deg + 1)
        .prop_map(move |cs| Polynomial::from_coeffs(ring, cs))
}

pub fn vector(ring: Ring, max_index: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec((0..=max_index, value(ring)), 0..5)
        .prop_map(move |ts| Vector::from_terms(ring, ts))
}

pub fn ring_with<T: std::fmt::Debug, S: Strategy<Value = T>>(
    f: impl Fn(Ring) -> S + 'static,
) -> impl Strategy<Value = (Ring, T)> {
    rings().prop_flat_map(move |r| (Just(r), f(r)))
}

/// Exact oracle: the naive dense coefficient of `x^k` in `p q`.
pub fn convolution(p: &Polynomial, q: &Polynomial, k: usize) -> RingValue {
    let mut acc = p.ring().zero();
    for i in 0..=k {
        acc = &acc + &(&p.coeff(i) * &q.coeff(k - i));
    }
    acc
}

pub fn rand_value<R: Rng>(rng: &mut R, ring: Ring) -> RingValue {
    if ring.contains_rationals() {
        let n: i64 = rng.gen_range(-5..=5);
        let d: i64 = rng.gen_range(1..=4);
        ring.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
            .unwrap()
    } else {
        ring.from_int(rng.gen_range(-20..=20))
    }
}

pub fn rand_vector<R: Rng>(rng: &mut R, ring: Ring, max_index: usize, terms: usize) -> Vector {
    let n = rng.gen_range(0..=terms);
    Vector::from_terms(
        ring,
        (0..n)
            .map(|_| (rng.gen_range(0..=max_index), rand_value(rng, ring)))
            .collect::<Vec<_>>(),
    )
}

/// An operator whose basis images on `0..=max_index` are sparse random
/// vectors supported on `0..=max_index`; higher basis vectors map to 0.
pub fn rand_operator<R: Rng>(rng: &mut R, ring: Ring, max_index: usize) -> Operator {
    let mut images = HashMap::new();
    for n in 0..=max_index {
        if rng.gen_bool(0.7) {
            images.insert(n, rand_vector(rng, ring, max_index, 3));
        }
    }
    Operator::from_images(ring, images)
}

pub fn rand_poly<R: Rng>(rng: &mut R, ring: Ring, max_deg: usize) -> Polynomial {
    let deg = rng.gen_range(0..=max_deg);
    let cs = (0..=deg)
        .map(|_| {
            if rng.gen_bool(0.5) {
                rand_value(rng, ring)
            } else {
                ring.zero()
            }
        })
        .collect();
    Polynomial::from_coeffs(ring, cs)
}

pub fn rand_series<R: Rng>(rng: &mut R, ring: Ring, order: usize, max_deg: usize) -> NormalSeries {
    NormalSeries::from_coeffs(
        ring,
        (0..=order).map(|_| rand_poly(rng, ring, max_deg)).collect(),
    )
}
