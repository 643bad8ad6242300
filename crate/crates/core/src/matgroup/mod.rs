//! Finitely generated subgroups of `GL(r, Z)`.
//!
//! Finiteness is decided by reduction modulo 3: the kernel of
//! `GL(r, Z) -> GL(r, Z/3)` is torsion-free, so a subgroup is finite exactly
//! when the reduction is injective on it, which a Schreier-generator check over
//! the (finite) image detects. The same fact powers [`finite_orbit_sublattice`],
//! which computes the vectors of `Z^r` whose orbit is finite.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::catalog::Word;
use crate::linalg::{
    charpoly, cyclotomic_orders, divisors, kernel_lattice, lattice_intersect, lcm_all, Lattice, LinalgError, Matrix,
};
use crate::Scalar;

/// Default cap for [`orbit_bfs`].
pub const DEFAULT_ORBIT_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatGroupError {
    #[error("a matrix group needs at least one generator")]
    NoGenerators,
    #[error("generator {index} is {rows}x{cols}, expected {rank}x{rank}")]
    Shape {
        index: usize,
        rows: usize,
        cols: usize,
        rank: usize,
    },
    #[error("generator {index}: {source}")]
    Generator { index: usize, source: LinalgError },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Generators of a subgroup of `GL(r, Z)`, with their inverses precomputed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatGroupGens<T> {
    rank: usize,
    generators: Vec<Matrix<T>>,
    inverses: Vec<Matrix<T>>,
    labels: Vec<String>,
}

impl<T: Scalar> MatGroupGens<T> {
    pub fn new(rank: usize, generators: Vec<Matrix<T>>, labels: Vec<String>) -> Result<Self, MatGroupError> {
        if generators.is_empty() {
            return Err(MatGroupError::NoGenerators);
        }
        let mut inverses = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != rank || g.cols() != rank {
                return Err(MatGroupError::Shape {
                    index,
                    rows: g.rows(),
                    cols: g.cols(),
                    rank,
                });
            }
            let inv = g
                .unimodular_inverse()
                .map_err(|source| MatGroupError::Generator { index, source })?;
            inverses.push(inv);
        }
        let mut labels = labels;
        labels.resize_with(generators.len(), String::new);
        for (i, l) in labels.iter_mut().enumerate() {
            if l.is_empty() {
                *l = format!("g{}", i + 1);
            }
        }
        Ok(Self {
            rank,
            generators,
            inverses,
            labels,
        })
    }

    /// Generators labelled `g1, g2, ...`.
    pub fn from_matrices(rank: usize, generators: Vec<Matrix<T>>) -> Result<Self, MatGroupError> {
        Self::new(rank, generators, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Matrix<T>] {
        &self.generators
    }

    pub fn inverses(&self) -> &[Matrix<T>] {
        &self.inverses
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Evaluates a word in the generators; the word `g1 g2` maps to `G1·G2`.
    pub fn evaluate(&self, w: &Word) -> Matrix<T> {
        w.letters().iter().fold(Matrix::identity(self.rank), |acc, l| {
            let m = if l.is_inverse() {
                &self.inverses[l.gen()]
            } else {
                &self.generators[l.gen()]
            };
            &acc * m
        })
    }

    /// Generators followed by inverses, the order used by every search here.
    fn symmetric_generators(&self) -> impl Iterator<Item = &Matrix<T>> {
        self.generators.iter().chain(self.inverses.iter())
    }
}

/// Order of a single matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixOrder {
    Finite(u64),
    Infinite,
}

/// Order of a unimodular matrix, decided from the cyclotomic part of its
/// characteristic polynomial.
pub fn matrix_order<T: Scalar>(m: &Matrix<T>) -> Result<MatrixOrder, MatGroupError> {
    m.check_unimodular()?;
    let factors = cyclotomic_orders(&charpoly(m)?, m.rows())?;
    if !factors.all_cyclotomic {
        return Ok(MatrixOrder::Infinite);
    }
    let l = lcm_all(factors.orders.iter().copied());
    if !m.pow(l).is_identity() {
        // Jordan block at a root of unity
        return Ok(MatrixOrder::Infinite);
    }
    let n = divisors(l)
        .into_iter()
        .find(|&d| m.pow(d).is_identity())
        .expect("l itself qualifies");
    Ok(MatrixOrder::Finite(n))
}

/// Finiteness certificate for a matrix group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitenessCert<T> {
    /// The reduction mod 3 is injective; `order` elements were enumerated.
    Finite { order: usize },
    /// A nonidentity element congruent to the identity mod 3, which therefore
    /// has infinite order.
    Infinite {
        witness_word: Word,
        witness_matrix: Matrix<T>,
    },
}

impl<T> FinitenessCert<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, FinitenessCert::Finite { .. })
    }
}

fn reduce_mod3<T: Scalar>(m: &Matrix<T>) -> Vec<u8> {
    let three = T::from_int(3);
    m.entries()
        .iter()
        .map(|x| x.mod_floor(&three).to_u8().expect("residue mod 3"))
        .collect()
}

/// Decides finiteness by enumerating the image mod 3 breadth-first (generator
/// order, FIFO) and checking every Schreier element over `Z`.
pub fn group_is_finite<T: Scalar>(g: &MatGroupGens<T>) -> FinitenessCert<T> {
    let id = Matrix::identity(g.rank);
    let mut reps: Vec<(Matrix<T>, Word)> = vec![(id.clone(), Word::identity())];
    let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(reduce_mod3(&id), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (gi, gen) in g.generators.iter().enumerate() {
            let prod = &reps[e].0 * gen;
            let key = reduce_mod3(&prod);
            match index.get(&key) {
                None => {
                    let word = reps[e].1.mul(&Word::generator(gi));
                    index.insert(key, reps.len());
                    queue.push_back(reps.len());
                    reps.push((prod, word));
                }
                Some(&j) => {
                    if prod != reps[j].0 {
                        let rep_inv = reps[j]
                            .0
                            .unimodular_inverse()
                            .expect("products of unimodular matrices are unimodular");
                        let witness_matrix = &prod * &rep_inv;
                        let witness_word = reps[e].1.mul(&Word::generator(gi)).mul(&reps[j].1.inverse());
                        return FinitenessCert::Infinite {
                            witness_word,
                            witness_matrix,
                        };
                    }
                }
            }
        }
    }
    FinitenessCert::Finite { order: reps.len() }
}

/// `{ v : the <m>-orbit of v is finite } = ker(m^L - I)`, where `L` is the
/// lcm of the cyclotomic orders dividing the characteristic polynomial.
pub fn single_finite_orbit_space<T: Scalar>(m: &Matrix<T>) -> Result<Lattice<T>, MatGroupError> {
    let factors = cyclotomic_orders(&charpoly(m)?, m.rows())?;
    let l = lcm_all(factors.orders.iter().copied());
    let shifted = &m.pow(l) - &Matrix::identity(m.rows());
    Ok(kernel_lattice(&shifted))
}

/// One shrink step of [`finite_orbit_sublattice`]: an element acting with
/// infinite order on the candidate space current at that step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteOrderWitness<T> {
    pub word: Word,
    /// The candidate space the element acted on.
    pub space: Lattice<T>,
    /// The element's action in coordinates of `space`.
    pub restricted_matrix: Matrix<T>,
}

/// The finite-orbit sublattice together with the evidence for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrbitCert<T> {
    pub lattice: Lattice<T>,
    pub infinite_order_witnesses: Vec<InfiniteOrderWitness<T>>,
    /// Finiteness of the group induced on `lattice`.
    pub induced_finiteness: FinitenessCert<T>,
}

impl<T> FiniteOrbitCert<T> {
    /// Order of the group induced on the lattice (bounds every orbit in it).
    pub fn induced_order(&self) -> usize {
        match self.induced_finiteness {
            FinitenessCert::Finite { order } => order,
            FinitenessCert::Infinite { .. } => unreachable!("certified finite"),
        }
    }
}

/// Largest sublattice of `c` invariant under every generator and inverse.
fn invariant_core<T: Scalar>(mut c: Lattice<T>, g: &MatGroupGens<T>) -> Lattice<T> {
    loop {
        let prev = c.clone();
        for m in g.symmetric_generators() {
            let img = c.image(m);
            c = lattice_intersect(&c, &img).expect("same ambient rank");
        }
        if c == prev {
            return c;
        }
    }
}

/// Computes `F = { v in Z^r : the orbit of v is finite }`.
///
/// Starts from the intersection of the single-generator finite-orbit spaces,
/// shrinks it to its largest invariant sublattice and tests the induced action
/// for finiteness. An infinite-order witness on the current space cuts it down
/// to the witness's own finite-orbit space, which strictly lowers the rank, so
/// at most `r` shrink steps occur.
pub fn finite_orbit_sublattice<T: Scalar>(g: &MatGroupGens<T>) -> Result<FiniteOrbitCert<T>, MatGroupError> {
    let mut c = Lattice::full(g.rank);
    for m in &g.generators {
        c = lattice_intersect(&c, &single_finite_orbit_space(m)?)?;
    }
    let mut witnesses = Vec::new();
    loop {
        c = invariant_core(c, g);
        let restricted: Vec<Matrix<T>> = g
            .generators
            .iter()
            .map(|m| c.restrict(m).expect("c is invariant"))
            .collect();
        let induced = MatGroupGens::new(c.rank(), restricted, g.labels.clone())?;
        match group_is_finite(&induced) {
            cert @ FinitenessCert::Finite { .. } => {
                return Ok(FiniteOrbitCert {
                    lattice: c,
                    infinite_order_witnesses: witnesses,
                    induced_finiteness: cert,
                });
            }
            FinitenessCert::Infinite {
                witness_word,
                witness_matrix,
            } => {
                let inner = single_finite_orbit_space(&witness_matrix)?;
                debug_assert!(inner.rank() < c.rank());
                let next = c.lift_coordinate_lattice(&inner);
                witnesses.push(InfiniteOrderWitness {
                    word: witness_word,
                    space: c,
                    restricted_matrix: witness_matrix,
                });
                c = next;
            }
        }
    }
}

/// Result of [`orbit_bfs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orbit<T> {
    /// The complete orbit, in discovery order (starting vector first).
    Finite(Vec<Vec<T>>),
    ExceededCap,
}

impl<T> Orbit<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Orbit::Finite(_))
    }
}

/// Breadth-first closure of `{v}` under the generators and their inverses.
/// Returns the orbit if it has at most `cap` elements.
pub fn orbit_bfs<T: Scalar>(g: &MatGroupGens<T>, v: &[T], cap: usize) -> Orbit<T> {
    let cap = cap.max(1);
    let mut seen: HashSet<Vec<T>> = HashSet::from([v.to_vec()]);
    let mut order = vec![v.to_vec()];
    let mut head = 0;
    while head < order.len() {
        let cur = order[head].clone();
        head += 1;
        for m in g.symmetric_generators() {
            let next = m.apply(&cur);
            if seen.insert(next.clone()) {
                if order.len() == cap {
                    return Orbit::ExceededCap;
                }
                order.push(next);
            }
        }
    }
    Orbit::Finite(order)
}
