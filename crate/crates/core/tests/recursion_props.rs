mod common;

use common::*;
use opcalc::freemodule::{mu_prime, Vector};
use opcalc::recursion::{
    lift_setmap, primrec, projection, superpose, tensor_apply, MultiMap, Tensor,
};
use opcalc::ring::Ring;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A map whose values on tuples are random sparse vectors, fixed by the seed.
fn random_map(r: Ring, arity: usize, seed: u64) -> MultiMap {
    MultiMap::from_fn(r, arity, move |idx| {
        let mut h = seed;
        for &i in idx {
            h = h
                .wrapping_mul(6364136223846793005)
                .wrapping_add(i as u64 + 1);
        }
        rand_vector(&mut ChaCha8Rng::seed_from_u64(h), r, 4, 2)
    })
}

fn random_tensor(r: Ring, arity: usize, seed: u64) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tensor::zero(r, arity);
    for _ in 0..rng.gen_range(0..4) {
        let idx = (0..arity).map(|_| rng.gen_range(0..5)).collect();
        t.add_term(idx, rand_value(&mut rng, r));
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn recursion_satisfies_its_equations(r in rings(), seeds in any::<[u64; 2]>()) {
        let g = random_map(r, 1, seeds[0]);
        let h = random_map(r, 3, seeds[1]);
        let phi = primrec(&g, &h).unwrap();
        for m in 0..=4 {
            prop_assert_eq!(phi.image(&[0, m]), g.image(&[m]));
            for n in 0..=5 {
                let rhs = h.apply_vectors(&[Vector::basis(r, m), Vector::basis(r, n), phi.image(&[n, m])]).unwrap();
                prop_assert_eq!(phi.image(&[n + 1, m]), rhs);
            }
        }
    }

    #[test]
    fn projections_are_units_of_superposition(r in rings(), seed in any::<u64>(), idx in prop::collection::vec(0usize..6, 3)) {
        let f = random_map(r, 3, seed);
        let ps: Vec<_> = (1..=3).map(|i| projection(r, i, 3).unwrap()).collect();
        prop_assert_eq!(superpose(&f, &ps).unwrap().image(&idx), f.image(&idx));
    }

    #[test]
    fn superposition_is_associative(r in rings(), seeds in any::<[u64; 3]>(), n in 0usize..6) {
        let f = random_map(r, 1, seeds[0]);
        let g = random_map(r, 1, seeds[1]);
        let h = random_map(r, 1, seeds[2]);
        let left = superpose(&superpose(&f, std::slice::from_ref(&g)).unwrap(), std::slice::from_ref(&h)).unwrap();
        let right = superpose(&f, &[superpose(&g, &[h]).unwrap()]).unwrap();
        prop_assert_eq!(left.image(&[n]), right.image(&[n]));
    }

    #[test]
    fn tensor_application_is_linear(r in rings(), seeds in any::<[u64; 3]>(), a in -5i64..5) {
        let m = random_map(r, 2, seeds[0]);
        let (t, u) = (random_tensor(r, 2, seeds[1]), random_tensor(r, 2, seeds[2]));
        let a = r.from_int(a);
        let lhs = tensor_apply(&m, &t.checked_add(&u.scale(&a)).unwrap()).unwrap();
        let rhs = tensor_apply(&m, &t).unwrap().checked_add(&tensor_apply(&m, &u).unwrap().scale(&a)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_tensors_match_multilinear_evaluation((r, (v, w)) in ring_with(|r| (vector(r, 5), vector(r, 5))), seed in any::<u64>()) {
        let m = random_map(r, 2, seed);
        prop_assert_eq!(tensor_apply(&m, &Tensor::product(r, &[v.clone(), w.clone()])).unwrap(), m.apply_vectors(&[v, w]).unwrap());
    }
}

#[test]
fn index_multiplication_by_recursion() {
    // h(m, n, p) = μ(e_m, e_p)
    let g = MultiMap::from_fn(Q, 1, |_| Vector::basis(Q, 0));
    let h = MultiMap::from_fn(Q, 3, |t| Vector::basis(Q, t[0] + t[2]));
    let phi = primrec(&g, &h).unwrap();
    let times = lift_setmap(Q, 2, |t| t[0] * t[1]);
    for a in 0..=10 {
        for b in 0..=10 {
            assert_eq!(phi.image(&[a, b]), times.image(&[a, b]));
            assert_eq!(
                phi.image(&[a, b]),
                mu_prime(&Vector::basis(Q, a), &Vector::basis(Q, b))
            );
        }
    }
}
