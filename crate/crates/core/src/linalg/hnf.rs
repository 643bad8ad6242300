use super::Matrix;
use crate::Scalar;

/// Row Hermite normal form `h = u · a` of a matrix `a`.
///
/// `h` is in row echelon form with its nonzero rows on top, every pivot is
/// positive and every entry above a pivot lies in `[0, pivot)`. These
/// conditions make `h` unique for the row lattice of `a`. `u` is unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// Number of nonzero rows of `h`.
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

/// Replaces rows `(p, q)` of `m` by `(x·p + y·q, z·p + w·q)`.
fn combine_rows<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, x: &T, y: &T, z: &T, w: &T) {
    for j in 0..m.cols() {
        let a = m.get(p, j).clone();
        let b = m.get(q, j).clone();
        m.set(p, j, x.clone() * a.clone() + y.clone() * b.clone());
        m.set(q, j, z.clone() * a + w.clone() * b);
    }
}

/// `row[dst] -= factor · row[src]`
fn sub_row_multiple<T: Scalar>(m: &mut Matrix<T>, dst: usize, src: usize, factor: &T) {
    for j in 0..m.cols() {
        let v = m.get(dst, j).clone() - factor.clone() * m.get(src, j).clone();
        m.set(dst, j, v);
    }
}

fn negate_row<T: Scalar>(m: &mut Matrix<T>, i: usize) {
    for j in 0..m.cols() {
        let v = -m.get(i, j).clone();
        m.set(i, j, v);
    }
}

/// Computes the row Hermite normal form together with its transform.
pub fn hnf<T: Scalar>(a: &Matrix<T>) -> Hnf<T> {
    let m = a.rows();
    let n = a.cols();
    let mut h = a.clone();
    let mut u = Matrix::identity(m);
    let mut r = 0;
    let mut pivots = Vec::new();

    for j in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if h.get(i, j).is_zero() {
                continue;
            }
            if h.get(r, j).is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let a = h.get(r, j).clone();
            let b = h.get(i, j).clone();
            let eg = a.extended_gcd(&b);
            let z = -(b / eg.gcd.clone());
            let w = a / eg.gcd.clone();
            combine_rows(&mut h, r, i, &eg.x, &eg.y, &z, &w);
            combine_rows(&mut u, r, i, &eg.x, &eg.y, &z, &w);
        }
        if h.get(r, j).is_zero() {
            continue;
        }
        if h.get(r, j).is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        let p = h.get(r, j).clone();
        for i in 0..r {
            let q = h.get(i, j).div_floor(&p);
            if !q.is_zero() {
                sub_row_multiple(&mut h, i, r, &q);
                sub_row_multiple(&mut u, i, r, &q);
            }
        }
        pivots.push(j);
        r += 1;
    }

    Hnf { h, u, rank: r, pivots }
}
