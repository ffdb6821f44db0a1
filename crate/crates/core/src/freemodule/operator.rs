use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::Vector;
use crate::ring::{Ring, RingError, RingValue};

type ImageFn = dyn Fn(usize) -> Vector + Send + Sync;

/// A linear endomorphism of the free module, given by its basis images.
///
/// The oracle is evaluated lazily and each image is memoized. Cloning is
/// cheap and clones share the cache.
#[derive(Clone)]
pub struct Operator {
    inner: Arc<OperatorInner>,
}

struct OperatorInner {
    ring: Ring,
    name: Option<String>,
    oracle: Box<ImageFn>,
    cache: Mutex<HashMap<usize, Vector>>,
}

/// The operators with fixed names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedOperator {
    /// `U`, raising
    Raise,
    /// `D`, lowering
    Lower,
    Identity,
    /// `∂e_{n+1} = (n+1)e_n`
    Derivative,
    /// `∫e_n = e_{n+1}/(n+1)`, only over rings containing ℚ
    Integral,
}

impl Operator {
    pub fn from_fn<F>(ring: Ring, oracle: F) -> Operator
    where
        F: Fn(usize) -> Vector + Send + Sync + 'static,
    {
        Operator {
            inner: Arc::new(OperatorInner {
                ring,
                name: None,
                oracle: Box::new(oracle),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn named_fn<F>(ring: Ring, name: impl Into<String>, oracle: F) -> Operator
    where
        F: Fn(usize) -> Vector + Send + Sync + 'static,
    {
        Operator {
            inner: Arc::new(OperatorInner {
                ring,
                name: Some(name.into()),
                oracle: Box::new(oracle),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn named(which: NamedOperator, ring: Ring) -> Result<Operator, RingError> {
        Ok(match which {
            NamedOperator::Raise => {
                Operator::named_fn(ring, "U", move |n| Vector::basis(ring, n + 1))
            }
            NamedOperator::Lower => Operator::named_fn(ring, "D", move |n| match n {
                0 => Vector::zero(ring),
                _ => Vector::basis(ring, n - 1),
            }),
            NamedOperator::Identity => Operator::identity(ring),
            NamedOperator::Derivative => Operator::named_fn(ring, "partial", move |n| match n {
                0 => Vector::zero(ring),
                _ => Vector::term(ring.from_int(n as i64), n - 1),
            }),
            NamedOperator::Integral => {
                ring.require_rationals("the integration operator")?;
                Operator::named_fn(ring, "integ", move |n| {
                    let c = ring.reciprocal(n as u64 + 1).expect("ring contains Q");
                    Vector::term(c, n + 1)
                })
            }
        })
    }

    pub fn identity(ring: Ring) -> Operator {
        Operator::named_fn(ring, "I", move |n| Vector::basis(ring, n))
    }

    pub fn zero(ring: Ring) -> Operator {
        Operator::named_fn(ring, "0", move |_| Vector::zero(ring))
    }

    pub fn raise(ring: Ring) -> Operator {
        Operator::named(NamedOperator::Raise, ring).expect("U exists over every ring")
    }

    pub fn lower(ring: Ring) -> Operator {
        Operator::named(NamedOperator::Lower, ring).expect("D exists over every ring")
    }

    pub fn derivative(ring: Ring) -> Operator {
        Operator::named(NamedOperator::Derivative, ring).expect("∂ exists over every ring")
    }

    pub fn integral(ring: Ring) -> Result<Operator, RingError> {
        Operator::named(NamedOperator::Integral, ring)
    }

    /// An operator with finitely many nonzero basis images; others map to 0.
    pub fn from_images(ring: Ring, images: HashMap<usize, Vector>) -> Operator {
        Operator::from_fn(ring, move |n| {
            images
                .get(&n)
                .cloned()
                .unwrap_or_else(|| Vector::zero(ring))
        })
    }

    pub fn ring(&self) -> Ring {
        self.inner.ring
    }

    pub fn name(&self) -> Option<&str> {
        self.inner.name.as_deref()
    }

    /// `φ(e_n)`, memoized.
    pub fn image(&self, n: usize) -> Vector {
        if let Some(v) = self.inner.cache.lock().expect("cache poisoned").get(&n) {
            return v.clone();
        }
        // Computed outside the lock so oracles may consult other operators
        // freely; a racing insert stores the same value.
        let v = (self.inner.oracle)(n);
        debug_assert_eq!(v.ring(), self.inner.ring);
        self.inner
            .cache
            .lock()
            .expect("cache poisoned")
            .entry(n)
            .or_insert(v)
            .clone()
    }

    /// The linear extension applied to `v`.
    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.ring());
        for (n, c) in v.iter() {
            out.add_scaled(c, &self.image(n));
        }
        out
    }

    pub fn with_name(&self, name: impl Into<String>) -> Operator {
        let this = self.clone();
        Operator::named_fn(self.ring(), name, move |n| this.image(n))
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("ring", &self.inner.ring)
            .field("name", &self.inner.name)
            .finish_non_exhaustive()
    }
}

/// How [`op_combine`] builds a new operator.
pub enum Combine<'a> {
    Add(&'a Operator, &'a Operator),
    Sub(&'a Operator, &'a Operator),
    Scale(&'a RingValue, &'a Operator),
    /// `f ∘ g`: apply `g` first.
    Compose(&'a Operator, &'a Operator),
    Power(&'a Operator, u32),
    /// `[f, g] = f∘g − g∘f`
    Commutator(&'a Operator, &'a Operator),
}

fn same_ring(a: &Operator, b: &Operator) -> Result<Ring, RingError> {
    if a.ring() == b.ring() {
        Ok(a.ring())
    } else {
        Err(RingError::Mismatch {
            left: a.ring(),
            right: b.ring(),
        })
    }
}

/// Closes operators under the algebra structure. Every result is a fresh
/// memoized oracle evaluated pointwise on basis images.
pub fn op_combine(kind: Combine<'_>) -> Result<Operator, RingError> {
    Ok(match kind {
        Combine::Add(f, g) => {
            same_ring(f, g)?;
            let (f, g) = (f.clone(), g.clone());
            Operator::from_fn(f.ring(), move |n| &f.image(n) + &g.image(n))
        }
        Combine::Sub(f, g) => {
            same_ring(f, g)?;
            let (f, g) = (f.clone(), g.clone());
            Operator::from_fn(f.ring(), move |n| &f.image(n) - &g.image(n))
        }
        Combine::Scale(c, f) => {
            if c.ring() != f.ring() {
                return Err(RingError::Mismatch {
                    left: f.ring(),
                    right: c.ring(),
                });
            }
            let (c, f) = (c.clone(), f.clone());
            Operator::from_fn(f.ring(), move |n| f.image(n).scale(&c))
        }
        Combine::Compose(f, g) => {
            same_ring(f, g)?;
            let (f, g) = (f.clone(), g.clone());
            Operator::from_fn(f.ring(), move |n| f.apply(&g.image(n)))
        }
        Combine::Power(f, k) => {
            let mut acc = Operator::identity(f.ring());
            for _ in 0..k {
                acc = op_combine(Combine::Compose(f, &acc))?;
            }
            acc
        }
        Combine::Commutator(f, g) => {
            let fg = op_combine(Combine::Compose(f, g))?;
            let gf = op_combine(Combine::Compose(g, f))?;
            op_combine(Combine::Sub(&fg, &gf))?
        }
    })
}

/// The unique linear map with `φ(e_0) = w` and `φ∘U = S∘φ`, i.e.
/// `φ(e_n) = S^n(w)`. Iterates of `S` are memoized.
pub fn induction_morphism(w: &Vector, step: &Operator) -> Operator {
    let ring = w.ring();
    let iterates = Arc::new(Mutex::new(vec![w.clone()]));
    let step = step.clone();
    Operator::from_fn(ring, move |n| {
        let mut known = iterates.lock().expect("iterates poisoned");
        while known.len() <= n {
            let next = step.apply(known.last().expect("nonempty"));
            known.push(next);
        }
        known[n].clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Ring = Ring::Rationals;

    fn e(n: usize) -> Vector {
        Vector::basis(Q, n)
    }

    #[test]
    fn derivative_and_integral() {
        let d = Operator::derivative(Q);
        assert_eq!(d.image(3), Vector::from_ints(Q, &[(2, 3)]));
        assert!(d.image(0).is_zero());
        let i = Operator::integral(Q).unwrap();
        assert_eq!(i.image(1), Vector::term(Q.parse_value("1/2").unwrap(), 2));
        assert!(matches!(
            Operator::integral(Ring::Integers),
            Err(RingError::NeedsRationals { .. })
        ));
        // ∂ exists over Z/m too
        assert_eq!(
            Operator::derivative(Ring::Mod(3)).image(3),
            Vector::zero(Ring::Mod(3))
        );
    }

    #[test]
    fn combine_examples() {
        let (u, d) = (Operator::raise(Q), Operator::lower(Q));
        let cube = op_combine(Combine::Power(&u, 3)).unwrap();
        assert_eq!(cube.image(0), e(3));
        let du = op_combine(Combine::Compose(&d, &u)).unwrap();
        let com = op_combine(Combine::Commutator(&d, &u)).unwrap();
        let ud = op_combine(Combine::Compose(&u, &d)).unwrap();
        let id_minus_ud = op_combine(Combine::Sub(&Operator::identity(Q), &ud)).unwrap();
        for n in 0..=10 {
            assert_eq!(du.image(n), e(n));
            assert_eq!(com.image(n), id_minus_ud.image(n));
        }
        assert_eq!(com.image(0), e(0));
        assert!(com.image(4).is_zero());
    }

    #[test]
    fn combine_rejects_mixed_rings() {
        let a = Operator::raise(Q);
        let b = Operator::raise(Ring::Integers);
        assert!(op_combine(Combine::Add(&a, &b)).is_err());
        assert!(op_combine(Combine::Scale(&Ring::Integers.one(), &a)).is_err());
    }

    #[test]
    fn induction_examples() {
        let u = Operator::raise(Q);
        let id_like = induction_morphism(&e(0), &u);
        let shift3 = induction_morphism(&e(3), &u);
        let two_u = op_combine(Combine::Scale(&Q.from_int(2), &u)).unwrap();
        let doubling = induction_morphism(&e(0), &two_u);
        for n in 0..=5 {
            assert_eq!(id_like.image(n), e(n));
            assert_eq!(shift3.image(n), e(n + 3));
            assert_eq!(doubling.image(n), Vector::term(Q.from_int(1 << n), n));
        }
    }

    #[test]
    fn images_are_memoized_and_shared() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let calls = Arc::new(AtomicUsize::new(0));
        let c = calls.clone();
        let op = Operator::from_fn(Q, move |n| {
            c.fetch_add(1, Ordering::SeqCst);
            Vector::basis(Q, n)
        });
        let clone = op.clone();
        op.image(4);
        clone.image(4);
        assert_eq!(calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn concurrent_evaluation_agrees() {
        let sq = op_combine(Combine::Power(&Operator::derivative(Q), 2)).unwrap();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let op = sq.clone();
                std::thread::spawn(move || (0..30).map(|n| op.image(n)).collect::<Vec<_>>())
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|w| w[0] == w[1]));
    }
}
