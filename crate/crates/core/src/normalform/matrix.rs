use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::series::{apply_series, normalize, NormalSeries};
use crate::freemodule::{Operator, Vector};
use crate::ring::{Ring, RingError};

type BlockFn = dyn Fn(usize, usize) -> Vec<Vector> + Send + Sync;
type BlockCache = Mutex<HashMap<(usize, usize), Vec<Vector>>>;

/// A linear endomorphism of `V^k`, given on the basis vector `e_n` placed in
/// input slot `i` as the `k` output components.
#[derive(Clone)]
pub struct BlockOperator {
    k: usize,
    ring: Ring,
    oracle: Arc<BlockFn>,
    cache: Arc<BlockCache>,
}

impl BlockOperator {
    pub fn new<F>(ring: Ring, k: usize, oracle: F) -> BlockOperator
    where
        F: Fn(usize, usize) -> Vec<Vector> + Send + Sync + 'static,
    {
        BlockOperator {
            k,
            ring,
            oracle: Arc::new(oracle),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn identity(ring: Ring, k: usize) -> BlockOperator {
        BlockOperator::new(ring, k, move |i, n| {
            (0..k)
                .map(|j| {
                    if i == j {
                        Vector::basis(ring, n)
                    } else {
                        Vector::zero(ring)
                    }
                })
                .collect()
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Output components for `e_n` in slot `i`.
    pub fn image(&self, slot: usize, n: usize) -> Vec<Vector> {
        if let Some(v) = self.cache.lock().expect("cache poisoned").get(&(slot, n)) {
            return v.clone();
        }
        let out = (self.oracle)(slot, n);
        assert_eq!(
            out.len(),
            self.k,
            "block operator must return {} components",
            self.k
        );
        self.cache
            .lock()
            .expect("cache poisoned")
            .entry((slot, n))
            .or_insert(out)
            .clone()
    }

    pub fn apply(&self, input: &[Vector]) -> Result<Vec<Vector>, RingError> {
        check_len(input.len(), self.k)?;
        let mut out = vec![Vector::zero(self.ring); self.k];
        for (i, v) in input.iter().enumerate() {
            for (n, c) in v.iter() {
                for (j, w) in self.image(i, n).iter().enumerate() {
                    out[j].add_scaled(c, w);
                }
            }
        }
        Ok(out)
    }

    /// The scalar map `e_n ↦ j-th component of the image of e_n in slot i`.
    pub fn component(&self, i: usize, j: usize) -> Operator {
        let this = self.clone();
        Operator::from_fn(self.ring, move |n| this.image(i, n)[j].clone())
    }
}

fn check_len(got: usize, k: usize) -> Result<(), RingError> {
    if got == k {
        Ok(())
    } else {
        Err(RingError::Parse(format!(
            "expected {k} components, got {got}"
        )))
    }
}

/// A `k × k` matrix of normal series; entry `(i, j)` maps input slot `i` to
/// output slot `j`. Stored row-major.
#[derive(Clone, Debug)]
pub struct SeriesMatrix {
    k: usize,
    entries: Vec<NormalSeries>,
}

impl SeriesMatrix {
    pub fn new(k: usize, entries: Vec<NormalSeries>) -> Result<SeriesMatrix, RingError> {
        check_len(entries.len(), k * k)?;
        if let Some(first) = entries.first() {
            if let Some(bad) = entries.iter().find(|e| e.ring() != first.ring()) {
                return Err(RingError::Mismatch {
                    left: first.ring(),
                    right: bad.ring(),
                });
            }
        }
        Ok(SeriesMatrix { k, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> &NormalSeries {
        &self.entries[i * self.k + j]
    }

    /// `out_j = Σ_i π(entry(i, j))(in_i)`
    pub fn apply(&self, input: &[Vector]) -> Result<Vec<Vector>, RingError> {
        check_len(input.len(), self.k)?;
        let ring = self
            .entries
            .first()
            .map_or(Ring::Rationals, NormalSeries::ring);
        let mut out = vec![Vector::zero(ring); self.k];
        for (i, v) in input.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = slot.checked_add(&apply_series(self.entry(i, j), v))?;
            }
        }
        Ok(out)
    }

    /// Row-major array of series JSON objects.
    pub fn to_json(&self, order: usize) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "entries": self.entries.iter().map(|e| e.to_json(order)).collect::<Vec<_>>(),
        })
    }
}

/// Normalizes every component map of a block operator.
pub fn matrix_normalize(phi: &BlockOperator) -> SeriesMatrix {
    let k = phi.k();
    let entries = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| normalize(&phi.component(i, j)))
        .collect();
    SeriesMatrix { k, entries }
}
