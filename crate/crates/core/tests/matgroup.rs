use std::collections::HashSet;

use icc_core::linalg::divisors;
use icc_core::matgroup::{
    finite_orbit_sublattice, group_is_finite, matrix_order, orbit_bfs, single_finite_orbit_space, FinitenessCert,
    MatrixOrder, Orbit,
};
use icc_core::{BigInt, IntMatGroup, IntMatrix};
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64_rows(&refs)
}

fn random_unimodular(rng: &mut ChaCha8Rng, r: usize, bound: i64) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..r).map(|_| rng.random_range(-bound..=bound)).collect())
            .collect();
        let a = from_rows(&rows);
        if a.is_unimodular() {
            return a;
        }
    }
}

/// A signed permutation matrix conjugated by a random unimodular matrix.
fn random_finite_order(rng: &mut ChaCha8Rng, r: usize) -> IntMatrix {
    let mut images: Vec<usize> = (0..r).collect();
    for i in (1..r).rev() {
        images.swap(i, rng.random_range(0..=i));
    }
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let sign = if rng.random_bool(0.5) { -1 } else { 1 };
            (0..r).map(|j| if images[j] == i { sign } else { 0 }).collect()
        })
        .collect();
    let a = from_rows(&rows);
    let p = random_unimodular(rng, r, 1);
    &(&p.unimodular_inverse().unwrap() * &a) * &p
}

/// Generators mixing finite-order and arbitrary unimodular matrices.
fn random_generators(seed: u64) -> (usize, Vec<IntMatrix>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.random_range(1..=3);
    let n = rng.random_range(1..=2);
    let gens = (0..n)
        .map(|_| {
            if rng.random_bool(0.6) {
                random_finite_order(&mut rng, r)
            } else {
                random_unimodular(&mut rng, r, 2)
            }
        })
        .collect();
    (r, gens)
}

fn closure_size(gens: &[IntMatrix], cap: usize) -> Option<usize> {
    let id = IntMatrix::identity(gens[0].rows());
    let mut seen = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                stack.push(y);
            }
        }
    }
    Some(seen.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_order_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.random_range(1..=4);
        let m = if rng.random_bool(0.5) {
            random_finite_order(&mut rng, r)
        } else {
            random_unimodular(&mut rng, r, 2)
        };
        match matrix_order(&m).unwrap() {
            MatrixOrder::Finite(n) => {
                prop_assert!(m.pow(n).is_identity());
                for d in divisors(n) {
                    if d < n {
                        prop_assert!(!m.pow(d).is_identity());
                    }
                }
            }
            MatrixOrder::Infinite => {
                // every finite element order in GL(4, Z) divides 2520
                prop_assert!(!m.pow(2520).is_identity());
            }
        }
    }

    #[test]
    fn finiteness_agrees_with_closure(seed in any::<u64>()) {
        let (r, gens) = random_generators(seed);
        let g = IntMatGroup::from_matrices(r, gens.clone()).unwrap();
        match group_is_finite(&g) {
            FinitenessCert::Finite { order } => {
                prop_assert_eq!(closure_size(&gens, 4 * order), Some(order));
            }
            FinitenessCert::Infinite { witness_word, witness_matrix } => {
                prop_assert_eq!(g.evaluate(&witness_word), witness_matrix.clone());
                prop_assert_eq!(matrix_order(&witness_matrix).unwrap(), MatrixOrder::Infinite);
            }
        }
    }

    #[test]
    fn single_generator_agreement(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.random_range(1..=4);
        let m = if rng.random_bool(0.5) {
            random_finite_order(&mut rng, r)
        } else {
            random_unimodular(&mut rng, r, 2)
        };
        let g = IntMatGroup::from_matrices(r, vec![m.clone()]).unwrap();
        prop_assert_eq!(finite_orbit_sublattice(&g).unwrap().lattice, single_finite_orbit_space(&m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_orbit_sublattice_is_exact(seed in any::<u64>()) {
        let (r, gens) = random_generators(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let g = IntMatGroup::from_matrices(r, gens.clone()).unwrap();
        let cert = finite_orbit_sublattice(&g).unwrap();
        let f = &cert.lattice;
        for a in &gens {
            prop_assert_eq!(&f.image(a), f);
        }
        if f.rank() > 0 {
            let order = cert.induced_order();
            for _ in 0..20 {
                let coords: Vec<BigInt> = (0..f.rank()).map(|_| BigInt::from(rng.random_range(-3..=3))).collect();
                let v = f.combine(&coords);
                prop_assert!(orbit_bfs(&g, &v, order + 1).is_finite());
            }
        }
        if f.rank() < r {
            let mut tested = 0;
            while tested < 20 {
                let raw: Vec<i64> = (0..r).map(|_| rng.random_range(-3..=3)).collect();
                let v: Vec<BigInt> = raw.iter().map(|&x| BigInt::from(x)).collect();
                if raw.iter().fold(0i64, |a, &b| a.gcd(&b)) != 1 || f.contains(&v) {
                    continue;
                }
                prop_assert!(matches!(orbit_bfs(&g, &v, 10_000), Orbit::ExceededCap));
                tested += 1;
            }
        }
    }

    #[test]
    fn augmenting_generators_keeps_the_lattice(seed in any::<u64>()) {
        let (r, gens) = random_generators(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa11);
        let g = IntMatGroup::from_matrices(r, gens.clone()).unwrap();
        let f = finite_orbit_sublattice(&g).unwrap().lattice;
        let mut more = gens.clone();
        for _ in 0..2 {
            let i = rng.random_range(0..gens.len());
            let j = rng.random_range(0..gens.len());
            more.push(&gens[i] * &gens[j]);
        }
        let g2 = IntMatGroup::from_matrices(r, more).unwrap();
        prop_assert_eq!(finite_orbit_sublattice(&g2).unwrap().lattice, f);
    }
}
