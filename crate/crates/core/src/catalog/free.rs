//! Reduced words in a free group and the conjugacy problem.

use std::fmt;

/// A generator or its inverse. Letters order as `a < a^-1 < b < b^-1 < ...`,
/// which fixes the lexicographic order used for canonical cyclic words.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Letter {
    gen: u32,
    inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Self {
            gen: gen as u32,
            inv: inverse,
        }
    }

    pub fn gen(self) -> usize {
        self.gen as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inv
    }

    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    /// Signed one-based index: `+(i+1)` for generator `i`, `-(i+1)` for its inverse.
    pub fn signed(self) -> i64 {
        let v = self.gen as i64 + 1;
        if self.inv {
            -v
        } else {
            v
        }
    }

    pub fn from_signed(s: i64) -> Self {
        assert!(s != 0, "signed letter index must be nonzero");
        Self::new((s.unsigned_abs() - 1) as usize, s < 0)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

/// Free reduction of an arbitrary letter sequence, using a stack.
pub fn normalize(letters: &[Letter]) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Cyclically reduces and returns the lexicographically least rotation: the
/// canonical representative of the conjugacy class.
pub fn cyclic_normalize(w: &Word) -> Word {
    canonical_rotation(w).0
}

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: &[Letter]) -> Self {
        normalize(letters)
    }

    pub fn generator(i: usize) -> Self {
        Self(vec![Letter::new(i, false)])
    }

    pub fn from_signed(s: &[i64]) -> Self {
        normalize(&s.iter().map(|&x| Letter::from_signed(x)).collect::<Vec<_>>())
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, plus one.
    pub fn rank_hint(&self) -> usize {
        self.0.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        normalize(&v)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `self^-1 · u · self`
    pub fn conjugate(&self, u: &Self) -> Self {
        self.inverse().mul(u).mul(self)
    }

    /// Replaces each generator `x_i` by `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let mut out = Vec::new();
        for l in &self.0 {
            let img = &images[l.gen()];
            if l.is_inverse() {
                out.extend(img.inverse().0);
            } else {
                out.extend_from_slice(&img.0);
            }
        }
        normalize(&out)
    }

    /// Exponent sum of every generator (the image in the abelianization).
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.gen()] += if l.is_inverse() { -1 } else { 1 };
        }
        v
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => self.0.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }

    /// Writes the word as `p · c · p^-1` with `c` cyclically reduced and
    /// returns `(p, c)`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (Word(self.0[..k].to_vec()), Word(self.0[k..n - k].to_vec()))
    }

    /// Shortest `r` with `self = r^m` for some `m >= 1` (for a cyclically
    /// reduced word this is its primitive root).
    pub fn primitive_root(&self) -> Word {
        let n = self.0.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.0[i] == self.0[i - d]) {
                return Word(self.0[..d].to_vec());
            }
        }
        self.clone()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay {
            word: self,
            names: Some(names),
        }
    }
}

/// Returns `(least rotation, a)` with `a^-1 · w · a` equal to the rotation.
fn canonical_rotation(w: &Word) -> (Word, Word) {
    let (p, core) = w.cyclic_reduction();
    let n = core.len();
    if n == 0 {
        return (Word::identity(), p);
    }
    let best = (0..n)
        .min_by(|&i, &j| {
            let ri = core.0[i..].iter().chain(&core.0[..i]);
            let rj = core.0[j..].iter().chain(&core.0[..j]);
            ri.cmp(rj)
        })
        .expect("nonempty core");
    let rotated = Word([&core.0[best..], &core.0[..best]].concat());
    // core = x·y with x = core[..best]; y·x = x^-1 · core · x.
    let x = Word(core.0[..best].to_vec());
    (rotated, p.mul(&x))
}

/// Outcome of the free-group conjugacy test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugacy {
    /// `w` with `w^-1 · u · w = v`.
    Conjugator(Word),
    NotConjugate,
}

/// Decides whether `u` and `v` are conjugate and, if so, returns the
/// shortest (then lexicographically least) conjugator among the coset of
/// solutions searched.
pub fn conjugacy_test_free(u: &Word, v: &Word) -> Conjugacy {
    let (cu, a) = canonical_rotation(u);
    let (cv, b) = canonical_rotation(v);
    if cu != cv {
        return Conjugacy::NotConjugate;
    }
    // a^-1 u a = b^-1 v b, so w0 = a b^-1 works; all solutions are z·w0 with
    // z in the centralizer of u, which is generated by the root of u.
    let w0 = a.mul(&b.inverse());
    if u.is_identity() {
        return Conjugacy::Conjugator(Word::identity());
    }
    let (p, core) = u.cyclic_reduction();
    let root = p.mul(&core.primitive_root()).mul(&p.inverse());
    let span = 2 * w0.len() as i64 + 1;
    let best = (-span..=span)
        .map(|k| root.pow(k).mul(&w0))
        .min_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)))
        .expect("nonempty search range");
    debug_assert_eq!(best.conjugate(u), *v);
    Conjugacy::Conjugator(best)
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: Option<&'a [String]>,
}

pub(crate) fn default_generator_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return write!(f, "1");
        }
        // Runs of the same letter print as powers.
        let letters = &self.word.0;
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let l = letters[i];
            let name = match self.names {
                Some(ns) if l.gen() < ns.len() => ns[l.gen()].clone(),
                _ => default_generator_name(l.gen()),
            };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let exp = (j - i) as i64 * if l.is_inverse() { -1 } else { 1 };
            if exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
            i = j;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        WordDisplay {
            word: self,
            names: None,
        }
        .fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i64]) -> Word {
        Word::from_signed(s)
    }

    // a = 1, b = 2
    #[test]
    fn free_reduction() {
        assert!(w(&[1, -1]).is_identity());
        assert_eq!(w(&[1, 2, -1, 1, 2]), w(&[1, 2, 2]));
        assert_eq!(w(&[1, 2, -2, -1, 2]), w(&[2]));
    }

    #[test]
    fn cyclic_forms() {
        assert_eq!(cyclic_normalize(&w(&[-2, 1, 2])), w(&[1]));
        assert_eq!(cyclic_normalize(&w(&[2, 1])), w(&[1, 2]));
        assert_eq!(cyclic_normalize(&Word::identity()), Word::identity());
        // a^-1 sorts after a, so b a^-1 rotates to b a^-1 -> a^-1 b.
        assert_eq!(cyclic_normalize(&w(&[2, -1])), w(&[-1, 2]));
    }

    #[test]
    fn conjugacy_examples() {
        let a = w(&[1]);
        let b = w(&[2]);
        assert_eq!(
            conjugacy_test_free(&a, &w(&[-2, 1, 2])),
            Conjugacy::Conjugator(b.clone())
        );
        assert_eq!(conjugacy_test_free(&a, &b), Conjugacy::NotConjugate);
        assert_eq!(conjugacy_test_free(&w(&[1, 2]), &w(&[2, 1])), Conjugacy::Conjugator(a));
    }

    #[test]
    fn conjugacy_with_unreduced_inputs() {
        let u = w(&[2, 1, 1, 2, -1, -2]); // b a (a b) a^-1 b^-1
        let v = w(&[-2, 2, 1, -1, 2, 1]); // b a
        match conjugacy_test_free(&u, &v) {
            Conjugacy::Conjugator(c) => assert_eq!(c.conjugate(&u), v),
            other => panic!("expected conjugate, got {other:?}"),
        }
    }

    #[test]
    fn roots_and_powers() {
        assert_eq!(w(&[1, 2, 1, 2]).primitive_root(), w(&[1, 2]));
        assert_eq!(w(&[1, 2]).pow(-2), w(&[-2, -1, -2, -1]));
        assert_eq!(w(&[1, 1, -2]).to_string(), "a^2 b^-1");
        assert_eq!(Word::identity().to_string(), "1");
    }
}
