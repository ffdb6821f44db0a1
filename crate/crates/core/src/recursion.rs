//! Linear primitive recursion on tensor powers of `V`.
//!
//! A [`MultiMap`] of arity `k` is a linear map `V^{⊗k} → V`, fixed by its
//! values on basis tensors `e_{n_1} ⊗ ... ⊗ e_{n_k}`. The constructors here
//! are the clone operations: projections, lifts of set maps, superposition
//! and the recursion combinator [`primrec`]. Tuples always list the
//! recursion variable first.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::freemodule::{Operator, Vector};
use crate::ring::{Ring, RingError, RingValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecursionError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("projection index {index} out of range 1..={arity}")]
    Projection { index: usize, arity: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A finitely supported element of `V^{⊗k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    ring: Ring,
    arity: usize,
    support: BTreeMap<Vec<usize>, RingValue>,
}

impl Tensor {
    pub fn zero(ring: Ring, arity: usize) -> Tensor {
        Tensor {
            ring,
            arity,
            support: BTreeMap::new(),
        }
    }

    /// `e_{n_1} ⊗ ... ⊗ e_{n_k}`
    pub fn basis(ring: Ring, index: &[usize]) -> Tensor {
        let mut t = Tensor::zero(ring, index.len());
        t.add_term(index.to_vec(), ring.one());
        t
    }

    /// An arity-0 tensor is a bare scalar.
    pub fn scalar(c: RingValue) -> Tensor {
        let mut t = Tensor::zero(c.ring(), 0);
        t.add_term(Vec::new(), c);
        t
    }

    /// `v_1 ⊗ ... ⊗ v_k`, expanded over the supports.
    pub fn product(ring: Ring, factors: &[Vector]) -> Tensor {
        let mut terms: Vec<(Vec<usize>, RingValue)> = vec![(Vec::new(), ring.one())];
        for v in factors {
            terms = terms
                .iter()
                .flat_map(|(idx, c)| {
                    v.iter().map(move |(n, a)| {
                        let mut idx = idx.clone();
                        idx.push(n);
                        (idx, c * a)
                    })
                })
                .collect();
        }
        let mut t = Tensor::zero(ring, factors.len());
        for (idx, c) in terms {
            t.add_term(idx, c);
        }
        t
    }

    pub fn add_term(&mut self, index: Vec<usize>, c: RingValue) {
        assert_eq!(index.len(), self.arity, "tensor index has wrong arity");
        if c.is_zero() {
            return;
        }
        let sum = match self.support.get(&index) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.support.remove(&index);
        } else {
            self.support.insert(index, sum);
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &RingValue)> {
        self.support.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn checked_add(&self, other: &Tensor) -> Result<Tensor, RecursionError> {
        if self.arity != other.arity {
            return Err(RecursionError::Arity {
                expected: self.arity,
                got: other.arity,
            });
        }
        if self.ring != other.ring {
            return Err(RingError::Mismatch {
                left: self.ring,
                right: other.ring,
            }
            .into());
        }
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.add_term(idx.to_vec(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RingValue) -> Tensor {
        let mut out = Tensor::zero(self.ring, self.arity);
        for (idx, a) in self.iter() {
            out.add_term(idx.to_vec(), a * c);
        }
        out
    }

    /// `{"arity": k, "coeffs": [{"index": [...], "value": "r"}]}`
    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<_> = self
            .iter()
            .map(|(idx, c)| serde_json::json!({ "index": idx, "value": c.to_string() }))
            .collect();
        serde_json::json!({ "arity": self.arity, "coeffs": coeffs })
    }

    pub fn from_json(ring: Ring, value: &serde_json::Value) -> Result<Tensor, RecursionError> {
        let bad = || RecursionError::Ring(RingError::Parse(format!("invalid tensor JSON {value}")));
        let arity = value
            .get("arity")
            .and_then(|a| a.as_u64())
            .ok_or_else(bad)? as usize;
        let mut t = Tensor::zero(ring, arity);
        for entry in value
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(bad)?
        {
            let idx: Vec<usize> = entry
                .get("index")
                .and_then(|i| i.as_array())
                .ok_or_else(bad)?
                .iter()
                .map(|n| n.as_u64().map(|n| n as usize).ok_or_else(bad))
                .collect::<Result<_, _>>()?;
            if idx.len() != arity {
                return Err(RecursionError::Arity {
                    expected: arity,
                    got: idx.len(),
                });
            }
            let c = entry
                .get("value")
                .and_then(|v| v.as_str())
                .ok_or_else(bad)?;
            t.add_term(idx, ring.parse_value(c)?);
        }
        Ok(t)
    }
}

type TupleFn = dyn Fn(&[usize]) -> Vector + Send + Sync;

/// A linear map `V^{⊗k} → V` given on basis tensors, memoized per tuple.
#[derive(Clone)]
pub struct MultiMap {
    inner: Arc<MultiMapInner>,
}

struct MultiMapInner {
    ring: Ring,
    arity: usize,
    oracle: Box<TupleFn>,
    cache: Mutex<HashMap<Vec<usize>, Vector>>,
}

impl MultiMap {
    /// `f̂` for a set map `f: ℕ^k → V`.
    pub fn from_fn<F>(ring: Ring, arity: usize, f: F) -> MultiMap
    where
        F: Fn(&[usize]) -> Vector + Send + Sync + 'static,
    {
        MultiMap {
            inner: Arc::new(MultiMapInner {
                ring,
                arity,
                oracle: Box::new(f),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn zero(ring: Ring, arity: usize) -> MultiMap {
        MultiMap::from_fn(ring, arity, move |_| Vector::zero(ring))
    }

    /// Arity-1 view of an operator.
    pub fn from_operator(op: &Operator) -> MultiMap {
        let op = op.clone();
        MultiMap::from_fn(op.ring(), 1, move |idx| op.image(idx[0]))
    }

    pub fn ring(&self) -> Ring {
        self.inner.ring
    }

    pub fn arity(&self) -> usize {
        self.inner.arity
    }

    /// Value on a basis tensor.
    pub fn image(&self, index: &[usize]) -> Vector {
        assert_eq!(index.len(), self.arity(), "basis tuple has wrong arity");
        if let Some(v) = self.inner.cache.lock().expect("cache poisoned").get(index) {
            return v.clone();
        }
        let v = (self.inner.oracle)(index);
        self.inner
            .cache
            .lock()
            .expect("cache poisoned")
            .entry(index.to_vec())
            .or_insert(v)
            .clone()
    }

    /// Multilinear evaluation on `v_1 ⊗ ... ⊗ v_k` without building the
    /// product tensor.
    pub fn apply_vectors(&self, factors: &[Vector]) -> Result<Vector, RecursionError> {
        if factors.len() != self.arity() {
            return Err(RecursionError::Arity {
                expected: self.arity(),
                got: factors.len(),
            });
        }
        let mut out = Vector::zero(self.ring());
        let mut index = Vec::with_capacity(factors.len());
        self.expand(factors, &mut index, &self.ring().one(), &mut out);
        Ok(out)
    }

    fn expand(
        &self,
        factors: &[Vector],
        index: &mut Vec<usize>,
        coeff: &RingValue,
        out: &mut Vector,
    ) {
        let Some((first, rest)) = factors.split_first() else {
            out.add_scaled(coeff, &self.image(index));
            return;
        };
        for (n, c) in first.iter() {
            index.push(n);
            self.expand(rest, index, &(coeff * c), out);
            index.pop();
        }
    }

    /// Arity-1 maps as operators on `V`.
    pub fn to_operator(&self) -> Result<Operator, RecursionError> {
        if self.arity() != 1 {
            return Err(RecursionError::Arity {
                expected: 1,
                got: self.arity(),
            });
        }
        let this = self.clone();
        Ok(Operator::from_fn(self.ring(), move |n| this.image(&[n])))
    }
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiMap")
            .field("ring", &self.inner.ring)
            .field("arity", &self.inner.arity)
            .finish_non_exhaustive()
    }
}

/// Linear extension: `Σ_t c_t · M(t)` over the support of `t`.
pub fn tensor_apply(m: &MultiMap, t: &Tensor) -> Result<Vector, RecursionError> {
    if t.arity() != m.arity() {
        return Err(RecursionError::Arity {
            expected: m.arity(),
            got: t.arity(),
        });
    }
    if t.ring() != m.ring() {
        return Err(RingError::Mismatch {
            left: m.ring(),
            right: t.ring(),
        }
        .into());
    }
    let mut out = Vector::zero(m.ring());
    for (idx, c) in t.iter() {
        out.add_scaled(c, &m.image(idx));
    }
    Ok(out)
}

/// `R̂(g, h)`: the unique linear map of arity `k + 1` with
///
/// ```text
/// φ(e_0     ⊗ e_{n_1} ⊗ ... ⊗ e_{n_k}) = ĝ(e_{n_1} ⊗ ... ⊗ e_{n_k})
/// φ(e_{n+1} ⊗ e_{n_1} ⊗ ... ⊗ e_{n_k}) = ĥ(e_{n_1} ⊗ ... ⊗ e_{n_k} ⊗ e_n ⊗ φ(e_n ⊗ ...))
/// ```
///
/// The last argument of `ĥ` is a general vector, handled by linearity. The
/// recursion runs iteratively and every intermediate value is cached.
pub fn primrec(g: &MultiMap, h: &MultiMap) -> Result<MultiMap, RecursionError> {
    let k = g.arity();
    if h.arity() != k + 2 {
        return Err(RecursionError::Arity {
            expected: k + 2,
            got: h.arity(),
        });
    }
    if g.ring() != h.ring() {
        return Err(RingError::Mismatch {
            left: g.ring(),
            right: h.ring(),
        }
        .into());
    }
    let ring = g.ring();
    let (g, h) = (g.clone(), h.clone());
    // rest-tuple ↦ values φ(e_0 ⊗ rest), φ(e_1 ⊗ rest), ...
    let memo: Mutex<HashMap<Vec<usize>, Vec<Vector>>> = Mutex::new(HashMap::new());
    Ok(MultiMap::from_fn(ring, k + 1, move |idx| {
        let (n, rest) = (idx[0], &idx[1..]);
        let mut known = memo
            .lock()
            .expect("memo poisoned")
            .get(rest)
            .cloned()
            .unwrap_or_default();
        if known.is_empty() {
            known.push(g.image(rest));
        }
        let mut tuple: Vec<usize> = rest.to_vec();
        tuple.push(0);
        tuple.push(0);
        while known.len() <= n {
            let step = known.len() - 1;
            let prev = known.last().expect("nonempty");
            let mut next = Vector::zero(ring);
            tuple[k] = step;
            for (p, c) in prev.iter() {
                tuple[k + 1] = p;
                next.add_scaled(c, &h.image(&tuple));
            }
            known.push(next);
        }
        let value = known[n].clone();
        let mut memo = memo.lock().expect("memo poisoned");
        let slot = memo.entry(rest.to_vec()).or_default();
        if slot.len() < known.len() {
            *slot = known;
        }
        value
    }))
}

/// `μ(f, g_1, ..., g_m)`: a basis tuple goes to `f̂(g_1(t) ⊗ ... ⊗ g_m(t))`.
pub fn superpose(f: &MultiMap, gs: &[MultiMap]) -> Result<MultiMap, RecursionError> {
    if gs.len() != f.arity() {
        return Err(RecursionError::Arity {
            expected: f.arity(),
            got: gs.len(),
        });
    }
    let Some(first) = gs.first() else {
        return Err(RecursionError::Arity {
            expected: 1,
            got: 0,
        });
    };
    let n = first.arity();
    for g in gs {
        if g.arity() != n {
            return Err(RecursionError::Arity {
                expected: n,
                got: g.arity(),
            });
        }
        if g.ring() != f.ring() {
            return Err(RingError::Mismatch {
                left: f.ring(),
                right: g.ring(),
            }
            .into());
        }
    }
    let (f, gs) = (f.clone(), gs.to_vec());
    Ok(MultiMap::from_fn(f.ring(), n, move |idx| {
        let parts: Vec<Vector> = gs.iter().map(|g| g.image(idx)).collect();
        f.apply_vectors(&parts).expect("arity checked")
    }))
}

/// `π_i^{(n)}(e_{j_1} ⊗ ... ⊗ e_{j_n}) = e_{j_i}`, with `i` counted from 1.
pub fn projection(ring: Ring, i: usize, n: usize) -> Result<MultiMap, RecursionError> {
    if i == 0 || i > n {
        return Err(RecursionError::Projection { index: i, arity: n });
    }
    Ok(MultiMap::from_fn(ring, n, move |idx| {
        Vector::basis(ring, idx[i - 1])
    }))
}

/// `f̃(e_{i_1} ⊗ ... ⊗ e_{i_k}) = e_{f(i_1, ..., i_k)}`
pub fn lift_setmap<F>(ring: Ring, arity: usize, f: F) -> MultiMap
where
    F: Fn(&[usize]) -> usize + Send + Sync + 'static,
{
    MultiMap::from_fn(ring, arity, move |idx| Vector::basis(ring, f(idx)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Ring = Ring::Rationals;

    fn e(n: usize) -> Vector {
        Vector::basis(Q, n)
    }

    #[test]
    fn tensor_apply_examples() {
        let succ = lift_setmap(Q, 1, |i| i[0] + 1);
        assert_eq!(tensor_apply(&succ, &Tensor::basis(Q, &[4])).unwrap(), e(5));
        assert!(tensor_apply(&succ, &Tensor::zero(Q, 1)).unwrap().is_zero());
        let p1 = projection(Q, 1, 2).unwrap();
        assert_eq!(tensor_apply(&p1, &Tensor::basis(Q, &[3, 7])).unwrap(), e(3));
        assert!(matches!(
            tensor_apply(&p1, &Tensor::basis(Q, &[3])),
            Err(RecursionError::Arity {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn projections() {
        let p = projection(Q, 2, 3).unwrap();
        assert_eq!(p.image(&[1, 5, 9]), e(5));
        let id = projection(Q, 1, 1).unwrap();
        for n in 0..6 {
            assert_eq!(id.image(&[n]), e(n));
        }
        assert_eq!(projection(Q, 1, 2).unwrap().image(&[0, 0]), e(0));
        assert!(projection(Q, 0, 2).is_err());
        assert!(projection(Q, 3, 2).is_err());
    }

    #[test]
    fn primrec_zero() {
        let phi = primrec(&MultiMap::zero(Q, 1), &MultiMap::zero(Q, 3)).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert!(phi.image(&[a, b]).is_zero());
            }
        }
    }

    #[test]
    fn primrec_with_zero_base_and_no_parameters_vanishes() {
        // ĥ is linear in its last slot, so φ(e_{n+1}) = ĥ(e_n ⊗ 0) = 0.
        let h = projection(Q, 1, 2).unwrap();
        let phi = primrec(&MultiMap::zero(Q, 0), &h).unwrap();
        for n in 0..10 {
            assert!(phi.image(&[n]).is_zero());
        }
    }

    #[test]
    fn primrec_addition() {
        let g = MultiMap::from_fn(Q, 1, |m| Vector::basis(Q, m[0]));
        let h = MultiMap::from_fn(Q, 3, |t| Vector::basis(Q, t[2] + 1));
        let add = primrec(&g, &h).unwrap();
        assert_eq!(add.image(&[3, 4]), e(7));
        assert_eq!(add.image(&[0, 2]), e(2));
        assert!(primrec(&g, &MultiMap::zero(Q, 2)).is_err());
    }

    #[test]
    fn primrec_handles_non_basis_recursion_values() {
        // φ(e_0) = e_0 + e_1, φ(e_{n+1}) = ĥ(e_n ⊗ φ(e_n)) with h(n, p) = 2 e_{p+1}
        let g = MultiMap::from_fn(Q, 0, |_| Vector::from_ints(Q, &[(0, 1), (1, 1)]));
        let h = MultiMap::from_fn(Q, 2, |t| Vector::term(Q.from_int(2), t[1] + 1));
        let phi = primrec(&g, &h).unwrap();
        assert_eq!(phi.image(&[3]), Vector::from_ints(Q, &[(3, 8), (4, 8)]));
    }

    #[test]
    fn lowering_from_recursion_and_a_sign_gate() {
        // φ(e_n ⊗ e_m) is 0 for m = 0, e_0 for n = 0, e_{n-1} otherwise
        let g = MultiMap::from_fn(Q, 1, |m| if m[0] == 0 { Vector::zero(Q) } else { e(0) });
        let h = projection(Q, 2, 3).unwrap();
        let phi = primrec(&g, &h).unwrap();
        let sg = lift_setmap(Q, 1, |i| usize::from(i[0] != 0));
        let d = superpose(&phi, &[projection(Q, 1, 1).unwrap(), sg])
            .unwrap()
            .to_operator()
            .unwrap();
        let lower = Operator::lower(Q);
        for n in 0..20 {
            assert_eq!(d.image(n), lower.image(n));
        }
    }

    #[test]
    fn index_multiplication_by_recursion() {
        let g = MultiMap::from_fn(Q, 1, |_| e(0));
        let h = MultiMap::from_fn(Q, 3, |t| Vector::basis(Q, t[2] + t[0]));
        let mul = primrec(&g, &h).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(mul.image(&[a, b]), e(a * b));
            }
        }
    }

    #[test]
    fn superposition_examples() {
        let p1 = projection(Q, 1, 2).unwrap();
        let g1 = lift_setmap(Q, 1, |i| i[0] * 3);
        let g2 = lift_setmap(Q, 1, |i| i[0] + 2);
        let s = superpose(&p1, &[g1.clone(), g2]).unwrap();
        for n in 0..6 {
            assert_eq!(s.image(&[n]), g1.image(&[n]));
        }
        let plus = lift_setmap(Q, 2, |i| i[0] + i[1]);
        let id = projection(Q, 1, 1).unwrap();
        let double = superpose(&plus, &[id.clone(), id]).unwrap();
        for n in 0..=6 {
            assert_eq!(double.image(&[n]), e(2 * n));
        }
        assert!(superpose(&plus, &[g1]).is_err());
    }

    #[test]
    fn superposition_expands_non_basis_outputs() {
        let plus = lift_setmap(Q, 2, |i| i[0] + i[1]);
        let g = MultiMap::from_fn(Q, 1, |i| Vector::from_ints(Q, &[(i[0], 1), (0, 2)]));
        let s = superpose(&plus, &[g.clone(), g]).unwrap();
        // (e_n + 2e_0) ⊗ (e_n + 2e_0) under index addition
        assert_eq!(
            s.image(&[3]),
            Vector::from_ints(Q, &[(6, 1), (3, 4), (0, 4)])
        );
    }

    #[test]
    fn tensor_json_round_trip() {
        let t = Tensor::product(Q, &[Vector::from_ints(Q, &[(1, 2), (3, 1)]), e(4)]);
        assert_eq!(Tensor::from_json(Q, &t.to_json()).unwrap(), t);
        assert_eq!(
            Tensor::basis(Q, &[1, 2]).to_json().to_string(),
            r#"{"arity":2,"coeffs":[{"index":[1,2],"value":"1"}]}"#
        );
        assert_eq!(Tensor::scalar(Q.from_int(3)).arity(), 0);
    }
}
