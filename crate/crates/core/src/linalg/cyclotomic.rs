//! Cyclotomic polynomials and cyclotomic factor detection.
//!
//! `Phi_n` is produced on demand by dividing `x^n - 1` by `Phi_d` for every
//! proper divisor `d` of `n`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{divisors, LinalgError, Poly};
use crate::Scalar;

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn cyclotomic_cached<T: Scalar>(n: u64, cache: &mut HashMap<u64, Poly<T>>) -> Poly<T> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let mut p = Poly::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_cached(d, cache);
        let (q, r) = p.div_rem_monic(&phi_d).expect("cyclotomic polynomials are monic");
        debug_assert!(r.is_zero());
        p = q;
    }
    cache.insert(n, p.clone());
    p
}

/// The `n`-th cyclotomic polynomial. Panics if `n == 0`.
pub fn cyclotomic_poly<T: Scalar>(n: u64) -> Poly<T> {
    assert!(n > 0, "cyclotomic index must be positive");
    cyclotomic_cached(n, &mut HashMap::new())
}

/// Which cyclotomic polynomials divide a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactors {
    /// Indices `n` with `Phi_n` dividing the polynomial.
    pub orders: BTreeSet<u64>,
    /// Multiplicity of each `Phi_n`.
    pub multiplicities: BTreeMap<u64, usize>,
    /// True when the polynomial is a product of cyclotomic polynomials.
    pub all_cyclotomic: bool,
}

/// Finds every `n` with `Phi_n | p`, searching all `n` with `totient(n) <= bound`.
///
/// Factors of degree at most `max(bound, deg p)` are considered, so passing
/// the matrix size as `bound` is always enough for a characteristic polynomial.
pub fn cyclotomic_orders<T: Scalar>(p: &Poly<T>, bound: usize) -> Result<CyclotomicFactors, LinalgError> {
    if !p.is_monic() {
        return Err(LinalgError::NotMonic);
    }
    let bound = bound.max(p.degree().unwrap_or(0)) as u64;
    // totient(n) >= sqrt(n / 2), so n <= 2 * bound^2 covers every candidate.
    let max_n = 2 * bound * bound + 2;
    let mut cache = HashMap::new();
    let mut rem = p.clone();
    let mut multiplicities = BTreeMap::new();
    for n in 1..=max_n {
        if rem.degree() == Some(0) {
            break;
        }
        let phi = totient(n);
        if phi > bound || Some(phi as usize) > rem.degree() {
            continue;
        }
        let cyc = cyclotomic_cached::<T>(n, &mut cache);
        loop {
            let (q, r) = rem.div_rem_monic(&cyc)?;
            if !r.is_zero() {
                break;
            }
            rem = q;
            *multiplicities.entry(n).or_insert(0) += 1;
        }
    }
    Ok(CyclotomicFactors {
        orders: multiplicities.keys().copied().collect(),
        all_cyclotomic: rem.degree() == Some(0),
        multiplicities,
    })
}
