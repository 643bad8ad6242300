//! Randomized invariants of the analyzer over small extensions with a
//! torsion-free kernel.

use icc_core::analyzer::{analyze, verify_witness, ExtensionSpec, SearchCaps, Verdict, WitnessElement};
use icc_core::dsl::parse_extension;
use icc_core::oracle::crosscheck;
use icc_core::IntMatrix;
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
    let p = random_unimodular(rng, r, 1);
    &(&p.unimodular_inverse().unwrap() * &from_rows(&rows)) * &p
}

fn random_action_matrix(rng: &mut ChaCha8Rng, r: usize) -> IntMatrix {
    match rng.random_range(0..3) {
        0 => random_finite_order(rng, r),
        1 => random_unimodular(rng, r, 1),
        _ => random_unimodular(rng, r, 2),
    }
}

fn random_involution(rng: &mut ChaCha8Rng, r: usize) -> IntMatrix {
    loop {
        let m = random_finite_order(rng, r);
        if (&m * &m).is_identity() {
            return m;
        }
    }
}

fn matrix_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

const FREE_MAPS: [&str; 6] = [
    "(a -> a, b -> b)",
    "(a -> b, b -> a)",
    "(a -> a b, b -> b)",
    "(a -> b a b^-1, b -> b)",
    "(a -> a^-1, b -> b^-1)",
    "(a -> b, b -> a^-1)",
];

/// A random extension with a torsion-free kernel.
fn random_spec(seed: u64) -> ExtensionSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.random_range(1..=3);
    let kernel = if r == 1 { "Z".to_string() } else { format!("Z^{r}") };
    let text = match rng.random_range(0..5) {
        0 => {
            let m = random_action_matrix(&mut rng, r);
            format!("kernel: {kernel}\nquotient: Z\naction t -> {}\n", matrix_text(&m))
        }
        1 => {
            let m = random_action_matrix(&mut rng, r);
            let other = match rng.random_range(0..3) {
                0 => m.unimodular_inverse().unwrap(),
                k => m.pow(k),
            };
            format!(
                "kernel: {kernel}\nquotient: Z^2\naction s -> {}\naction t -> {}\n",
                matrix_text(&m),
                matrix_text(&other)
            )
        }
        2 => {
            let a = random_action_matrix(&mut rng, r);
            let b = random_finite_order(&mut rng, r);
            format!(
                "kernel: {kernel}\nquotient: free(x,y)\naction x -> {}\naction y -> {}\n",
                matrix_text(&a),
                matrix_text(&b)
            )
        }
        3 => {
            let m = random_involution(&mut rng, r);
            format!(
                "kernel: {kernel}\nquotient: finite perm((1 2))\naction q -> {}\n",
                matrix_text(&m)
            )
        }
        _ => {
            let f = FREE_MAPS[rng.random_range(0..FREE_MAPS.len())];
            let g = FREE_MAPS[rng.random_range(0..FREE_MAPS.len())];
            if rng.random_bool(0.5) {
                format!("kernel: free(a,b)\nquotient: Z\naction t -> {f}\n")
            } else {
                format!("kernel: free(a,b)\nquotient: free(x,y)\naction x -> {f}\naction y -> {g}\n")
            }
        }
    };
    parse_extension(&text).unwrap_or_else(|d| panic!("{d}\n{text}"))
}

fn class_sizes(v: &Verdict) -> Vec<usize> {
    v.witnesses()
        .iter()
        .filter_map(|w| match w {
            WitnessElement::KernelVector { orbit, .. } => Some(orbit.len()),
            _ => None,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analysis_is_total_and_witnesses_verify(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let report = analyze(&spec, SearchCaps::default()).unwrap();
        match &report.verdict {
            Verdict::NotIcc { witnesses } => {
                prop_assert!(!witnesses.is_empty());
                for w in witnesses {
                    prop_assert!(verify_witness(&spec, w), "{:?}", w);
                }
            }
            Verdict::Unknown { obstruction } => prop_assert!(!obstruction.is_empty()),
            Verdict::Icc => {}
        }
        prop_assert_eq!(analyze(&spec, SearchCaps::default()).unwrap(), report);
    }

    #[test]
    fn verdict_survives_a_change_of_kernel_basis(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let r = match spec.kernel() {
            icc_core::analyzer::KernelDesc::Abelian { rank, .. } => *rank,
            _ => return Ok(()),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xba515);
        let p = random_unimodular(&mut rng, r, 2);
        let moved = spec.change_kernel_basis(&p).unwrap();
        let a = analyze(&spec, SearchCaps::default()).unwrap();
        let b = analyze(&moved, SearchCaps::default()).unwrap();
        prop_assert_eq!(a.verdict.tag(), b.verdict.tag());
        prop_assert_eq!(a.theorem_path, b.theorem_path);
        prop_assert_eq!(class_sizes(&a.verdict), class_sizes(&b.verdict));
    }

    #[test]
    fn raising_caps_never_flips_a_decision(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let small = SearchCaps { out_order_cap: 2, relation_bound: 1, orbit_cap: 4 };
        let low = analyze(&spec, small).unwrap();
        let high = analyze(&spec, SearchCaps::default()).unwrap();
        if !matches!(low.verdict, Verdict::Unknown { .. }) {
            prop_assert_eq!(low.verdict.tag(), high.verdict.tag());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn verdicts_agree_with_conjugacy_balls(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let report = analyze(&spec, SearchCaps::default()).unwrap();
        let check = crosscheck(&spec, &report, 6, 6, 4000).unwrap();
        prop_assert!(check.consistent, "{:?}", report.verdict);
    }
}
