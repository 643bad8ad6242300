//! Exact integer linear algebra.
//!
//! Everything here works over a [`Scalar`](crate::Scalar) integer type; no
//! floating point is involved anywhere. Matrices act on column vectors, while
//! lattices store their bases as rows.

mod cyclotomic;
mod hnf;
mod lattice;
mod matrix;
mod poly;

pub use cyclotomic::{cyclotomic_orders, cyclotomic_poly, totient, CyclotomicFactors};
pub use hnf::{hnf, Hnf};
pub use lattice::{kernel_lattice, lattice_intersect, Lattice};
pub use matrix::Matrix;
pub use poly::{charpoly, Poly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-unimodular matrix, det={det}")]
    NotUnimodular { det: String },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("ambient rank mismatch: {left} vs {right}")]
    AmbientRank { left: usize, right: usize },
}

/// Least common multiple of a collection of positive integers (1 when empty).
pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    use num_integer::Integer;
    it.into_iter().fold(1u64, |acc, n| acc.lcm(&n))
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
    }

    #[test]
    fn lcm_of_empty_is_one() {
        assert_eq!(lcm_all([]), 1);
        assert_eq!(lcm_all([4, 6]), 12);
    }
}
