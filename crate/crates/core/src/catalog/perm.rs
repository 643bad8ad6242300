//! Finite groups as explicit permutation element lists.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::free::Word;
use super::CatalogError;

/// Largest finite group materialized.
pub const FINITE_ORDER_CAP: usize = 10_000;

/// Permutation of `{0, .., n-1}` stored as its image list. Products compose
/// left to right: `(p * q)(i) = q(p(i))`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, CatalogError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(CatalogError::BadPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i as usize] = true;
        }
        Ok(Self(images))
    }

    /// Builds a permutation of `degree` points from cycles of 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, CatalogError> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(CatalogError::BadPermutation(format!("point {p} outside 1..={degree}")));
                }
                if used[p - 1] {
                    return Err(CatalogError::BadPermutation(format!("point {p} appears twice")));
                }
                used[p - 1] = true;
                img[p - 1] = (c[(k + 1) % c.len()] - 1) as u32;
            }
        }
        Ok(Self(img))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Self(inv)
    }

    /// Disjoint cycles of length at least two, as 1-based points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i + 1);
                i = self.0[i] as usize;
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

/// A finite permutation group with all of its elements listed.
///
/// Element 0 is the identity. Elements are numbered in breadth-first order
/// from the identity, multiplying by generators on the right, and each
/// element remembers the positive word in the generators that reached it.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    words: Vec<Word>,
    index: HashMap<Perm, usize>,
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    pub fn generate(degree: usize, generators: Vec<Perm>) -> Result<Self, CatalogError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(CatalogError::BadPermutation(format!(
                "generator {g} has degree {} instead of {degree}",
                g.degree()
            )));
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut words = vec![Word::identity()];
        let mut index = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let p = elements[e].mul(g);
                if index.contains_key(&p) {
                    continue;
                }
                if elements.len() >= FINITE_ORDER_CAP {
                    return Err(CatalogError::FiniteTooLarge { cap: FINITE_ORDER_CAP });
                }
                index.insert(p.clone(), elements.len());
                words.push(words[e].mul(&Word::generator(gi)));
                queue.push_back(elements.len());
                elements.push(p);
            }
        }
        Ok(Self {
            degree,
            generators,
            elements,
            words,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element(&self, id: usize) -> &Perm {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn id_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Positive word in the generators evaluating to element `id`.
    pub fn word(&self, id: usize) -> &Word {
        &self.words[id]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].mul(&self.elements[b])]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    /// Id of the `i`-th generator.
    pub fn generator_id(&self, i: usize) -> usize {
        self.index[&self.generators[i]]
    }
}
