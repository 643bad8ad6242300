//! The supported group classes.
//!
//! A [`GroupDesc`] is one of: an explicit finite permutation group, a finitely
//! generated abelian group `Z^m + Z/d1 + ... + Z/dt`, a free group, or a
//! direct product of those. For each the FC-subgroup (elements with finite
//! conjugacy class) is known structurally; see `CATALOG_AXIOMS.md` for the
//! facts this relies on and the tests that cross-check them.

mod element;
mod free;
mod freeaut;
mod perm;

pub use element::{FactorElement, GroupElement};
pub use free::{conjugacy_test_free, cyclic_normalize, normalize, Conjugacy, Letter, Word};
pub use freeaut::{is_inner, nielsen_reduce, FreeAut, Innerness, NielsenMove, NielsenResult};
pub use perm::{Perm, PermGroup, FINITE_ORDER_CAP};

pub(crate) use free::default_generator_name;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("expected {expected} generator images, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("word {word} uses a generator outside a rank-{rank} free group")]
    LetterOutOfRange { word: String, rank: usize },
    #[error("non-automorphism map: {reason}")]
    NotAutomorphism { reason: String },
    #[error("bad divisor chain {0:?}: divisors must be >= 2 and each must divide the next")]
    BadDivisorChain(Vec<u64>),
    #[error("a direct product needs at least two factors")]
    ProductArity,
    #[error("free group of rank 0; use the trivial group instead")]
    EmptyFree,
    #[error("finite group has more than {cap} elements")]
    FiniteTooLarge { cap: usize },
    #[error("bad permutation: {0}")]
    BadPermutation(String),
}

/// A group from the supported catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupDesc {
    Finite(PermGroup),
    FgAbelian { rank: usize, torsion: Vec<u64> },
    Free { rank: usize, names: Vec<String> },
    Product(Vec<GroupDesc>),
}

/// Role of one generator of a catalog group, in generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Generator of a free factor of rank at least two.
    FreeNonabelian,
    /// Generator of infinite order that spans an FC direction (a `Z`
    /// summand, or a free group of rank one).
    InfiniteCyclic,
    /// Torsion generator of order `d` in an abelian factor.
    Torsion(u64),
    /// Generator of the finite factor with the given index.
    FiniteFactor(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorInfo {
    /// Index of the (flattened) direct factor the generator belongs to.
    pub factor: usize,
    /// Index of the generator inside its factor.
    pub local: usize,
    pub kind: GeneratorKind,
}

impl GroupDesc {
    pub fn trivial() -> Self {
        Self::FgAbelian {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn fg_abelian(rank: usize, torsion: Vec<u64>) -> Result<Self, CatalogError> {
        validate_divisor_chain(&torsion)?;
        Ok(Self::FgAbelian { rank, torsion })
    }

    pub fn free(names: Vec<String>) -> Result<Self, CatalogError> {
        if names.is_empty() {
            return Err(CatalogError::EmptyFree);
        }
        Ok(Self::Free {
            rank: names.len(),
            names,
        })
    }

    pub fn free_rank(rank: usize) -> Result<Self, CatalogError> {
        Self::free((0..rank).map(default_generator_name).collect())
    }

    /// Direct product; nested products are flattened.
    pub fn product(factors: Vec<GroupDesc>) -> Result<Self, CatalogError> {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                GroupDesc::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(CatalogError::ProductArity);
        }
        Ok(Self::Product(flat))
    }

    /// Direct factors (a non-product group is its own single factor).
    pub fn factors(&self) -> &[GroupDesc] {
        match self {
            GroupDesc::Product(fs) => fs,
            other => std::slice::from_ref(other),
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            GroupDesc::Finite(g) => g.generators().len(),
            GroupDesc::FgAbelian { rank, torsion } => rank + torsion.len(),
            GroupDesc::Free { rank, .. } => *rank,
            GroupDesc::Product(fs) => fs.iter().map(GroupDesc::generator_count).sum(),
        }
    }

    /// Generators in order, with the factor they belong to.
    pub fn generators(&self) -> Vec<GeneratorInfo> {
        let mut out = Vec::new();
        for (fi, f) in self.factors().iter().enumerate() {
            match f {
                GroupDesc::Finite(g) => out.extend((0..g.generators().len()).map(|local| GeneratorInfo {
                    factor: fi,
                    local,
                    kind: GeneratorKind::FiniteFactor(fi),
                })),
                GroupDesc::FgAbelian { rank, torsion } => {
                    out.extend((0..*rank).map(|local| GeneratorInfo {
                        factor: fi,
                        local,
                        kind: GeneratorKind::InfiniteCyclic,
                    }));
                    out.extend(torsion.iter().enumerate().map(|(i, &d)| GeneratorInfo {
                        factor: fi,
                        local: rank + i,
                        kind: GeneratorKind::Torsion(d),
                    }));
                }
                GroupDesc::Free { rank, .. } => out.extend((0..*rank).map(|local| GeneratorInfo {
                    factor: fi,
                    local,
                    kind: if *rank == 1 {
                        GeneratorKind::InfiniteCyclic
                    } else {
                        GeneratorKind::FreeNonabelian
                    },
                })),
                GroupDesc::Product(_) => unreachable!("products are flattened"),
            }
        }
        out
    }

    /// True for the trivial group (in any of its catalog spellings).
    pub fn is_trivial(&self) -> bool {
        match self {
            GroupDesc::Finite(g) => g.order() == 1,
            GroupDesc::FgAbelian { rank, torsion } => *rank == 0 && torsion.is_empty(),
            GroupDesc::Free { .. } => false,
            GroupDesc::Product(fs) => fs.iter().all(GroupDesc::is_trivial),
        }
    }
}

fn validate_divisor_chain(torsion: &[u64]) -> Result<(), CatalogError> {
    let ok = torsion.iter().all(|&d| d >= 2) && torsion.windows(2).all(|w| w[1] % w[0] == 0);
    if ok {
        Ok(())
    } else {
        Err(CatalogError::BadDivisorChain(torsion.to_vec()))
    }
}

/// Structural description of `FC(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FcDescription {
    Trivial,
    Whole,
    Product(Vec<FcDescription>),
}

/// The FC-subgroup of a catalog group.
pub fn fc_subgroup(q: &GroupDesc) -> FcDescription {
    match q {
        GroupDesc::Finite(_) | GroupDesc::FgAbelian { .. } => FcDescription::Whole,
        GroupDesc::Free { rank, .. } => {
            if *rank >= 2 {
                FcDescription::Trivial
            } else {
                FcDescription::Whole
            }
        }
        GroupDesc::Product(fs) => FcDescription::Product(fs.iter().map(fc_subgroup).collect()),
    }
}

/// Whether `FC(q)` is the trivial subgroup.
pub fn fc_is_trivial(q: &GroupDesc) -> bool {
    match q {
        GroupDesc::Product(fs) => fs.iter().all(fc_is_trivial),
        GroupDesc::Free { rank, .. } => *rank >= 2,
        other => other.is_trivial(),
    }
}
