//! Automorphisms of a free group of finite rank.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;

use super::free::{conjugacy_test_free, Conjugacy, Letter, Word};
use super::CatalogError;
use crate::IntMatrix;

/// Bound on the number of tuples explored on a length plateau before the
/// reduction gives up. Desk-scale inputs stay far below it.
pub const PLATEAU_STATE_CAP: usize = 200_000;

/// One elementary Nielsen transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NielsenMove {
    /// Entry being replaced.
    pub target: usize,
    /// Entry multiplied onto it.
    pub other: usize,
    /// Whether `other` enters inverted.
    pub inverted: bool,
    /// `other^e · target` when true, `target · other^e` otherwise.
    pub on_left: bool,
}

impl NielsenMove {
    pub fn apply(&self, tuple: &mut [Word]) {
        let mut o = tuple[self.other].clone();
        if self.inverted {
            o = o.inverse();
        }
        let t = &tuple[self.target];
        tuple[self.target] = if self.on_left { o.mul(t) } else { t.mul(&o) };
    }
}

/// Result of [`nielsen_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NielsenResult {
    pub reduced: Vec<Word>,
    /// True iff `reduced` is the standard basis up to order and inversion.
    pub is_basis: bool,
    /// Moves applied, in order, to the input tuple.
    pub log: Vec<NielsenMove>,
    /// False when the plateau search hit [`PLATEAU_STATE_CAP`].
    pub complete: bool,
}

fn moves(n: usize) -> impl Iterator<Item = NielsenMove> {
    (0..n).flat_map(move |target| {
        (0..n).filter(move |&o| o != target).flat_map(move |other| {
            [(false, false), (true, false), (false, true), (true, true)]
                .into_iter()
                .map(move |(inverted, on_left)| NielsenMove {
                    target,
                    other,
                    inverted,
                    on_left,
                })
        })
    })
}

/// The move with the largest strict length decrease, first in move order on ties.
fn best_strict_move(t: &[Word]) -> Option<NielsenMove> {
    let mut best: Option<(usize, NielsenMove)> = None;
    for mv in moves(t.len()) {
        let mut tt = t.to_vec();
        mv.apply(&mut tt);
        let before = t[mv.target].len();
        let after = tt[mv.target].len();
        if after < before {
            let gain = before - after;
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, mv));
            }
        }
    }
    best.map(|(_, mv)| mv)
}

/// Breadth-first search over length-preserving moves for a tuple that admits a
/// strict decrease. Returns the path (ending with the decreasing move).
fn plateau_search(start: &[Word]) -> Result<Option<Vec<NielsenMove>>, ()> {
    let mut parent: HashMap<Vec<Word>, Option<(Vec<Word>, NielsenMove)>> = HashMap::new();
    parent.insert(start.to_vec(), None);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(state) = queue.pop_front() {
        if let Some(mv) = best_strict_move(&state) {
            let mut path = vec![mv];
            let mut cur = state;
            while let Some(Some((prev, m))) = parent.get(&cur) {
                path.push(*m);
                cur = prev.clone();
            }
            path.reverse();
            return Ok(Some(path));
        }
        for mv in moves(state.len()) {
            let mut next = state.clone();
            mv.apply(&mut next);
            if next[mv.target].len() != state[mv.target].len() || parent.contains_key(&next) {
                continue;
            }
            if parent.len() >= PLATEAU_STATE_CAP {
                return Err(());
            }
            parent.insert(next.clone(), Some((state.clone(), mv)));
            queue.push_back(next);
        }
    }
    Ok(None)
}

fn is_standard_basis(t: &[Word], rank: usize) -> bool {
    if t.len() != rank {
        return false;
    }
    let mut seen = vec![false; rank];
    for w in t {
        if w.len() != 1 {
            return false;
        }
        let g = w.letters()[0].gen();
        if g >= rank || seen[g] {
            return false;
        }
        seen[g] = true;
    }
    true
}

/// Nielsen-reduces a tuple of words in the free group of the given rank.
///
/// Strictly length-decreasing moves are applied greedily. When none exists, a
/// breadth-first search over length-preserving moves looks for a tuple that
/// does admit one; total length never increases. For a tuple of `rank` words
/// the final flag decides whether the tuple is a free basis.
pub fn nielsen_reduce(tuple: &[Word], rank: usize) -> NielsenResult {
    let mut cur = tuple.to_vec();
    let mut log = Vec::new();
    let mut complete = true;
    loop {
        if is_standard_basis(&cur, rank) {
            break;
        }
        if let Some(mv) = best_strict_move(&cur) {
            mv.apply(&mut cur);
            log.push(mv);
            continue;
        }
        match plateau_search(&cur) {
            Ok(Some(path)) => {
                for mv in path {
                    mv.apply(&mut cur);
                    log.push(mv);
                }
            }
            Ok(None) => break,
            Err(()) => {
                complete = false;
                break;
            }
        }
    }
    NielsenResult {
        is_basis: is_standard_basis(&cur, rank),
        reduced: cur,
        log,
        complete,
    }
}

/// An automorphism of the free group `F_rank`, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeAut {
    rank: usize,
    images: Vec<Word>,
}

impl FreeAut {
    /// Validates that the images define an automorphism.
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self, CatalogError> {
        if images.len() != rank {
            return Err(CatalogError::RankMismatch {
                expected: rank,
                found: images.len(),
            });
        }
        if let Some(w) = images.iter().find(|w| w.rank_hint() > rank) {
            return Err(CatalogError::LetterOutOfRange {
                word: w.to_string(),
                rank,
            });
        }
        let res = nielsen_reduce(&images, rank);
        if !res.is_basis {
            return Err(CatalogError::NotAutomorphism {
                reason: if res.complete {
                    format!("images Nielsen-reduce to {}", fmt_tuple(&res.reduced))
                } else {
                    "Nielsen reduction exceeded its search cap".into()
                },
            });
        }
        Ok(Self { rank, images })
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            rank,
            images: (0..rank).map(Word::generator).collect(),
        }
    }

    /// `x -> w · x · w^-1`
    pub fn inner(rank: usize, w: &Word) -> Self {
        Self {
            rank,
            images: (0..rank)
                .map(|i| w.mul(&Word::generator(i)).mul(&w.inverse()))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| *w == Word::generator(i))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rank: self.rank,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let res = nielsen_reduce(&self.images, self.rank);
        assert!(res.is_basis, "validated automorphism failed to reduce");
        // The same moves applied to the formal basis track preimages:
        // reduced[i] = self(formal[i]).
        let mut formal: Vec<Word> = (0..self.rank).map(Word::generator).collect();
        for mv in &res.log {
            mv.apply(&mut formal);
        }
        let mut images = vec![Word::identity(); self.rank];
        for (r, f) in res.reduced.iter().zip(formal) {
            let l: Letter = r.letters()[0];
            images[l.gen()] = if l.is_inverse() { f.inverse() } else { f };
        }
        Self {
            rank: self.rank,
            images,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Action on the abelianization `Z^rank`; column `i` holds the exponent
    /// sums of the image of generator `i`.
    pub fn abelianization(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank, self.rank);
        for (i, w) in self.images.iter().enumerate() {
            for (j, e) in w.exponent_sums(self.rank).into_iter().enumerate() {
                m.set(j, i, BigInt::from(e));
            }
        }
        m
    }
}

fn fmt_tuple(t: &[Word]) -> String {
    let parts: Vec<String> = t.iter().map(Word::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Outcome of [`is_inner`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Innerness {
    /// `phi(x) = w · x · w^-1` for every generator.
    Inner(Word),
    NotInner,
}

/// Decides whether `phi` is an inner automorphism and recovers its conjugator.
pub fn is_inner(phi: &FreeAut) -> Innerness {
    let k = phi.rank();
    if k == 0 || phi.is_identity() {
        return Innerness::Inner(Word::identity());
    }
    if k == 1 || !phi.abelianization().is_identity() {
        return Innerness::NotInner;
    }
    let x1 = Word::generator(0);
    let img1 = &phi.images()[0];
    // c^-1 x1 c = phi(x1), so w0 = c^-1 solves w x1 w^-1 = phi(x1); every
    // other solution is w0 · x1^t.
    let w0 = match conjugacy_test_free(&x1, img1) {
        Conjugacy::Conjugator(c) => c.inverse(),
        Conjugacy::NotConjugate => return Innerness::NotInner,
    };
    let x2 = Word::generator(1);
    let img2 = &phi.images()[1];
    // Beyond this bound |w0 x1^t x2 x1^-t w0^-1| > |phi(x2)|.
    let bound = (img2.len() + w0.len() + 2) as i64;
    for t in -bound..=bound {
        let w = w0.mul(&x1.pow(t));
        if w.mul(&x2).mul(&w.inverse()) != *img2 {
            continue;
        }
        let all = (0..k).all(|i| {
            let x = Word::generator(i);
            w.mul(&x).mul(&w.inverse()) == phi.images()[i]
        });
        // the centralizer of {x1, x2} is trivial, so t is unique
        return if all { Innerness::Inner(w) } else { Innerness::NotInner };
    }
    Innerness::NotInner
}
