use std::fmt;

use super::{hnf, LinalgError, Matrix};
use crate::Scalar;

/// A sublattice of `Z^r`, stored as the nonzero rows of its row Hermite
/// normal form. Equality is equality of these canonical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice<T> {
    ambient: usize,
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Lattice<T> {
    /// The lattice spanned by `generators` (which need not be independent).
    pub fn from_generators(ambient: usize, generators: &[Vec<T>]) -> Result<Self, LinalgError> {
        if let Some(bad) = generators.iter().find(|g| g.len() != ambient) {
            return Err(LinalgError::Dimension(format!(
                "generator of length {} in Z^{ambient}",
                bad.len()
            )));
        }
        let m = if generators.is_empty() {
            Matrix::zeros(0, ambient)
        } else {
            Matrix::from_rows(generators.to_vec())?
        };
        Ok(Self::from_matrix_rows(&m))
    }

    /// The lattice spanned by the rows of `m`.
    pub fn from_matrix_rows(m: &Matrix<T>) -> Self {
        let res = hnf(m);
        let rows: Vec<Vec<T>> = (0..res.rank).map(|i| res.h.row(i).to_vec()).collect();
        let basis = if rows.is_empty() {
            Matrix::zeros(0, m.cols())
        } else {
            Matrix::from_rows(rows).expect("hnf rows are rectangular")
        };
        Self {
            ambient: m.cols(),
            basis,
            pivots: res.pivots,
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_matrix_rows(&Matrix::identity(ambient))
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_matrix_rows(&Matrix::zeros(0, ambient))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.to_rows()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in
    /// the lattice.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if v.len() != self.ambient {
            return None;
        }
        let mut residual = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (i, &p) in self.pivots.iter().enumerate() {
            let row = self.basis.row(i);
            let (q, rem) = residual[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (r, b) in residual.iter_mut().zip(row) {
                    *r = r.clone() - q.clone() * b.clone();
                }
            }
            coords.push(q);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[T]) -> Vec<T> {
        assert_eq!(coords.len(), self.rank());
        let mut out = vec![T::zero(); self.ambient];
        for (c, row) in coords.iter().zip(self.basis.row_iter()) {
            for (o, b) in out.iter_mut().zip(row) {
                *o = o.clone() + c.clone() * b.clone();
            }
        }
        out
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.basis.row_iter().all(|r| other.contains(r))
    }

    /// The image `{ m·v : v in self }` under a square matrix acting on columns.
    pub fn image(&self, m: &Matrix<T>) -> Self {
        let rows: Vec<Vec<T>> = self.basis.row_iter().map(|r| m.apply(r)).collect();
        Self::from_generators(self.ambient, &rows).expect("image rows have ambient length")
    }

    pub fn is_invariant_under(&self, m: &Matrix<T>) -> bool {
        self.basis.row_iter().all(|r| self.contains(&m.apply(r)))
    }

    /// The pure closure: every integer vector in the rational span.
    pub fn saturation(&self) -> Self {
        // Annihilator of the span, then its annihilator.
        let perp = kernel_lattice(&self.basis);
        kernel_lattice(perp.basis())
    }

    pub fn is_pure(&self) -> bool {
        self.saturation() == *self
    }

    /// The matrix of the restriction of `m` to this lattice, acting on
    /// coordinate columns. Returns `None` if the lattice is not invariant.
    pub fn restrict(&self, m: &Matrix<T>) -> Option<Matrix<T>> {
        let k = self.rank();
        let mut out = Matrix::zeros(k, k);
        for (i, row) in self.basis.row_iter().enumerate() {
            let coords = self.coordinates(&m.apply(row))?;
            for (j, c) in coords.into_iter().enumerate() {
                out.set(j, i, c);
            }
        }
        Some(out)
    }

    /// Maps a lattice given in coordinates of `self` back to ambient space.
    pub fn lift_coordinate_lattice(&self, inner: &Self) -> Self {
        assert_eq!(inner.ambient_rank(), self.rank());
        let rows: Vec<Vec<T>> = inner.basis.row_iter().map(|c| self.combine(c)).collect();
        Self::from_generators(self.ambient, &rows).expect("lifted rows have ambient length")
    }
}

use num_traits::Zero;

impl<T: Scalar> fmt::Display for Lattice<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for i in 0..self.basis.rows() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for j in 0..self.basis.cols() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.basis.get(i, j))?;
            }
            write!(f, ")")?;
        }
        write!(f, "}} in Z^{}", self.ambient)
    }
}

/// The integer kernel `{ v in Z^r : a·v = 0 }` where `r` is the column count.
/// The result is always a pure sublattice.
pub fn kernel_lattice<T: Scalar>(a: &Matrix<T>) -> Lattice<T> {
    let r = a.cols();
    let res = hnf(&a.transpose());
    let rows: Vec<Vec<T>> = (res.rank..r).map(|i| res.u.row(i).to_vec()).collect();
    Lattice::from_generators(r, &rows).expect("transform rows have length r")
}

/// Intersection of two sublattices of the same ambient space.
pub fn lattice_intersect<T: Scalar>(l1: &Lattice<T>, l2: &Lattice<T>) -> Result<Lattice<T>, LinalgError> {
    if l1.ambient != l2.ambient {
        return Err(LinalgError::AmbientRank {
            left: l1.ambient,
            right: l2.ambient,
        });
    }
    let k1 = l1.rank();
    if k1 == 0 || l2.rank() == 0 {
        return Ok(Lattice::zero(l1.ambient));
    }
    // (a, b) with a·B1 + b·B2 = 0 gives a·B1 in both lattices, and every
    // common vector arises this way.
    let stacked = l1.basis.stack(&l2.basis)?;
    let relations = kernel_lattice(&stacked.transpose());
    let rows: Vec<Vec<T>> = relations.basis.row_iter().map(|c| l1.combine(&c[..k1])).collect();
    Lattice::from_generators(l1.ambient, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type L = Lattice<BigInt>;
    type M = Matrix<BigInt>;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert_eq!(kernel_lattice(&M::identity(3)).rank(), 0);
        assert_eq!(kernel_lattice(&M::zeros(2, 2)), L::full(2));
    }

    #[test]
    fn kernel_of_difference_row() {
        let k = kernel_lattice(&M::from_i64_rows(&[&[1, -1]]));
        assert_eq!(k, L::from_generators(2, &[v(&[1, 1])]).unwrap());
    }

    #[test]
    fn kernel_is_pure() {
        // 2x - 2y = 0 has kernel spanned by (1,1), not (2,2).
        let k = kernel_lattice(&M::from_i64_rows(&[&[2, -2]]));
        assert!(k.contains(&v(&[1, 1])));
        assert!(k.is_pure());
    }

    #[test]
    fn intersections() {
        let full = L::full(2);
        let l = L::from_generators(2, &[v(&[2, 2])]).unwrap();
        assert_eq!(lattice_intersect(&l, &full).unwrap(), l);
        let x = L::from_generators(2, &[v(&[1, 0])]).unwrap();
        let y = L::from_generators(2, &[v(&[0, 1])]).unwrap();
        assert_eq!(lattice_intersect(&x, &y).unwrap().rank(), 0);
        let a = L::from_generators(2, &[v(&[2, 0]), v(&[0, 1])]).unwrap();
        let b = L::from_generators(2, &[v(&[1, 1])]).unwrap();
        assert_eq!(lattice_intersect(&a, &b).unwrap(), l);
        assert!(lattice_intersect(&L::full(2), &L::full(3)).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let l = L::from_generators(3, &[v(&[2, 1, 0]), v(&[0, 3, 1])]).unwrap();
        let w = v(&[4, -1, -1]);
        let c = l.coordinates(&w).unwrap();
        assert_eq!(l.combine(&c), w);
        assert!(l.coordinates(&v(&[1, 0, 0])).is_none());
    }

    #[test]
    fn restriction_and_lift() {
        let swap = M::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
        let plane = L::from_generators(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let r = plane.restrict(&swap).unwrap();
        assert_eq!(r, M::from_i64_rows(&[&[0, 1], &[1, 0]]));
        let diag = L::from_generators(2, &[v(&[1, 1])]).unwrap();
        assert_eq!(
            plane.lift_coordinate_lattice(&diag),
            L::from_generators(3, &[v(&[1, 1, 0])]).unwrap()
        );
        let line = L::from_generators(3, &[v(&[1, 0, 0])]).unwrap();
        assert!(line.restrict(&swap).is_none());
    }
}
