//! Extension descriptions and their validation.

use std::fmt;

use thiserror::Error;

use crate::catalog::{default_generator_name, is_inner, FreeAut, GeneratorKind, GroupDesc, Innerness, PermGroup, Word};
use crate::linalg::LinalgError;
use crate::IntMatrix;

/// The kernel `K` of an extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelDesc {
    /// `Z^rank + Z/d1 + ... + Z/dt`.
    Abelian {
        rank: usize,
        torsion: Vec<u64>,
    },
    /// Free group of rank at least two.
    Free {
        names: Vec<String>,
    },
    Finite(PermGroup),
}

impl KernelDesc {
    pub fn is_trivial(&self) -> bool {
        match self {
            KernelDesc::Abelian { rank, torsion } => *rank == 0 && torsion.is_empty(),
            KernelDesc::Free { .. } => false,
            KernelDesc::Finite(g) => g.order() == 1,
        }
    }

    /// Whether action data is read at all for this kernel.
    pub fn uses_action(&self) -> bool {
        match self {
            KernelDesc::Abelian { rank, torsion } => *rank > 0 && torsion.is_empty(),
            KernelDesc::Free { .. } => true,
            KernelDesc::Finite(_) => false,
        }
    }
}

/// The image of one quotient element in `Aut(K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AutElement {
    /// A unimodular matrix acting on column vectors of `Z^r`.
    Matrix(IntMatrix),
    /// An automorphism of a free group.
    Free(FreeAut),
}

impl AutElement {
    pub fn identity_like(&self) -> Self {
        match self {
            AutElement::Matrix(m) => AutElement::Matrix(IntMatrix::identity(m.rows())),
            AutElement::Free(f) => AutElement::Free(FreeAut::identity(f.rank())),
        }
    }

    /// The element `self · other`, i.e. apply `other` first.
    pub fn then(&self, other: &Self) -> Self {
        match (self, other) {
            (AutElement::Matrix(a), AutElement::Matrix(b)) => AutElement::Matrix(a * b),
            (AutElement::Free(a), AutElement::Free(b)) => AutElement::Free(a.compose(b)),
            _ => panic!("mixed action kinds"),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            AutElement::Matrix(m) => AutElement::Matrix(
                m.unimodular_inverse()
                    .expect("validated action matrices are unimodular"),
            ),
            AutElement::Free(f) => AutElement::Free(f.inverse()),
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.identity_like();
        for _ in 0..n.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        match self {
            AutElement::Matrix(m) => m.is_identity(),
            AutElement::Free(f) => f.is_identity(),
        }
    }

    /// Inner automorphisms of an abelian group are trivial, so for matrices
    /// this is the identity test.
    pub fn inner_conjugator(&self) -> Option<Word> {
        match self {
            AutElement::Matrix(m) => m.is_identity().then(Word::identity),
            AutElement::Free(f) => match is_inner(f) {
                Innerness::Inner(w) => Some(w),
                Innerness::NotInner => None,
            },
        }
    }
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutElement::Matrix(m) => write!(f, "{m}"),
            AutElement::Free(a) => {
                let parts: Vec<String> = a
                    .images()
                    .iter()
                    .enumerate()
                    .map(|(i, w)| format!("{} -> {}", default_generator_name(i), w))
                    .collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("expected {expected} action entries (one per quotient generator), found {found}")]
    ActionCount { expected: usize, found: usize },
    #[error("action for generator {generator}: expected a {expected}")]
    ActionKind { generator: String, expected: &'static str },
    #[error("action for generator {generator}: matrix is {rows}x{cols}, kernel rank is {rank}")]
    MatrixShape {
        generator: String,
        rows: usize,
        cols: usize,
        rank: usize,
    },
    #[error("action for generator {generator}: {source}")]
    Matrix { generator: String, source: LinalgError },
    #[error("action for generator {generator}: automorphism of rank {found}, kernel rank is {expected}")]
    FreeRank {
        generator: String,
        expected: usize,
        found: usize,
    },
    #[error("relation violation: {0}")]
    Relation(String),
    #[error("expected {expected} quotient generator labels, found {found}")]
    LabelCount { expected: usize, found: usize },
}

impl SpecError {
    /// Label of the quotient generator the error refers to, when there is one.
    pub fn generator(&self) -> Option<&str> {
        match self {
            SpecError::ActionKind { generator, .. }
            | SpecError::MatrixShape { generator, .. }
            | SpecError::Matrix { generator, .. }
            | SpecError::FreeRank { generator, .. } => Some(generator),
            _ => None,
        }
    }
}

/// A validated extension `1 -> K -> G -> Q -> 1`, described by the action
/// `θ : Q -> Aut(K)` on the quotient generators.
///
/// Only `θ` is recorded: the verdict depends on nothing else, so one spec
/// covers every extension (split or not) that realizes it. For finite
/// kernels, torsion kernels and the trivial kernel the action is never
/// consulted and is stored empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSpec {
    kernel: KernelDesc,
    quotient: GroupDesc,
    labels: Vec<String>,
    action: Vec<AutElement>,
}

/// Default quotient generator labels: free factors keep their names, other
/// generators are `q1, q2, ...` by global index.
pub fn default_labels(q: &GroupDesc) -> Vec<String> {
    let mut out = Vec::new();
    for (i, info) in q.generators().iter().enumerate() {
        match &q.factors()[info.factor] {
            GroupDesc::Free { names, .. } => out.push(names[info.local].clone()),
            _ => out.push(format!("q{}", i + 1)),
        }
    }
    out
}

impl ExtensionSpec {
    /// Validates shapes, unimodularity, automorphism ranks and the quotient
    /// relations under the action.
    ///
    /// A free kernel of rank one is rewritten as the abelian kernel `Z`, with
    /// each automorphism replaced by its `1x1` abelianization.
    pub fn new(
        kernel: KernelDesc,
        quotient: GroupDesc,
        labels: Option<Vec<String>>,
        action: Vec<AutElement>,
    ) -> Result<Self, SpecError> {
        let ngen = quotient.generator_count();
        let labels = match labels {
            Some(l) if l.len() != ngen => {
                return Err(SpecError::LabelCount {
                    expected: ngen,
                    found: l.len(),
                })
            }
            Some(l) => l,
            None => default_labels(&quotient),
        };
        let (kernel, action) = match kernel {
            KernelDesc::Free { names } if names.len() == 1 => {
                let action = action
                    .into_iter()
                    .map(|a| match a {
                        AutElement::Free(f) => AutElement::Matrix(f.abelianization()),
                        other => other,
                    })
                    .collect();
                (
                    KernelDesc::Abelian {
                        rank: 1,
                        torsion: Vec::new(),
                    },
                    action,
                )
            }
            k => (k, action),
        };
        if !kernel.uses_action() {
            return Ok(Self {
                kernel,
                quotient,
                labels,
                action: Vec::new(),
            });
        }
        if action.len() != ngen {
            return Err(SpecError::ActionCount {
                expected: ngen,
                found: action.len(),
            });
        }
        for (a, label) in action.iter().zip(&labels) {
            check_action_entry(&kernel, a, label)?;
        }
        let spec = Self {
            kernel,
            quotient,
            labels,
            action,
        };
        spec.check_relations()?;
        Ok(spec)
    }

    pub fn kernel(&self) -> &KernelDesc {
        &self.kernel
    }

    pub fn quotient(&self) -> &GroupDesc {
        &self.quotient
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Action of each quotient generator; empty when the action is unused.
    pub fn action(&self) -> &[AutElement] {
        &self.action
    }

    /// Identity automorphism of the kernel, if the action is used.
    pub fn identity_action(&self) -> Option<AutElement> {
        match &self.kernel {
            KernelDesc::Abelian { rank, .. } if self.kernel.uses_action() => {
                Some(AutElement::Matrix(IntMatrix::identity(*rank)))
            }
            KernelDesc::Free { names } => Some(AutElement::Free(FreeAut::identity(names.len()))),
            _ => None,
        }
    }

    /// `θ(w)` for a word in the quotient generators (left to right).
    pub fn evaluate(&self, w: &Word) -> Option<AutElement> {
        let id = self.identity_action()?;
        Some(w.letters().iter().fold(id, |acc, l| {
            let g = &self.action[l.gen()];
            if l.is_inverse() {
                acc.then(&g.inverse())
            } else {
                acc.then(g)
            }
        }))
    }

    /// Rewrites the action matrices as `P^-1 · M · P`, giving an isomorphic
    /// extension. Other specs are returned unchanged.
    pub fn change_kernel_basis(&self, p: &IntMatrix) -> Result<Self, LinalgError> {
        let pinv = p.unimodular_inverse()?;
        let action = self
            .action
            .iter()
            .map(|a| match a {
                AutElement::Matrix(m) => Ok(AutElement::Matrix(&(&pinv * m) * p)),
                other => Ok(other.clone()),
            })
            .collect::<Result<Vec<_>, LinalgError>>()?;
        Ok(Self { action, ..self.clone() })
    }

    fn check_relations(&self) -> Result<(), SpecError> {
        let gens = self.quotient.generators();
        let mut base = 0;
        for f in self.quotient.factors() {
            let n = f.generator_count();
            let local = &self.action[base..base + n];
            let names = &self.labels[base..base + n];
            match f {
                GroupDesc::Finite(g) => check_finite_factor(g, local, names)?,
                GroupDesc::FgAbelian { .. } => {
                    for i in 0..n {
                        for j in i + 1..n {
                            check_commute(&local[i], &local[j], &names[i], &names[j])?;
                        }
                        if let GeneratorKind::Torsion(d) = gens[base + i].kind {
                            if !local[i].pow(d as i64).is_identity() {
                                return Err(SpecError::Relation(format!(
                                    "generator {} has order {d} in the quotient but its action does not",
                                    names[i]
                                )));
                            }
                        }
                    }
                }
                GroupDesc::Free { .. } => {}
                GroupDesc::Product(_) => unreachable!("products are flattened"),
            }
            base += n;
        }
        // generators of different factors commute
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].factor != gens[j].factor {
                    check_commute(&self.action[i], &self.action[j], &self.labels[i], &self.labels[j])?;
                }
            }
        }
        Ok(())
    }
}

fn check_action_entry(kernel: &KernelDesc, a: &AutElement, label: &str) -> Result<(), SpecError> {
    match (kernel, a) {
        (KernelDesc::Abelian { rank, .. }, AutElement::Matrix(m)) => {
            if m.rows() != *rank || m.cols() != *rank {
                return Err(SpecError::MatrixShape {
                    generator: label.to_string(),
                    rows: m.rows(),
                    cols: m.cols(),
                    rank: *rank,
                });
            }
            m.check_unimodular().map_err(|source| SpecError::Matrix {
                generator: label.to_string(),
                source,
            })
        }
        (KernelDesc::Free { names }, AutElement::Free(f)) => {
            if f.rank() != names.len() {
                return Err(SpecError::FreeRank {
                    generator: label.to_string(),
                    expected: names.len(),
                    found: f.rank(),
                });
            }
            Ok(())
        }
        (KernelDesc::Abelian { .. }, _) => Err(SpecError::ActionKind {
            generator: label.to_string(),
            expected: "matrix",
        }),
        _ => Err(SpecError::ActionKind {
            generator: label.to_string(),
            expected: "free-group automorphism",
        }),
    }
}

fn check_commute(a: &AutElement, b: &AutElement, na: &str, nb: &str) -> Result<(), SpecError> {
    if a.then(b) == b.then(a) {
        Ok(())
    } else {
        Err(SpecError::Relation(format!(
            "generators {na} and {nb} commute in the quotient but their actions do not"
        )))
    }
}

/// Checks `θ(e)·θ(g) = θ(e·g)` for every element `e` and generator `g`, which
/// makes the assignment a homomorphism on the whole element table.
fn check_finite_factor(g: &PermGroup, local: &[AutElement], names: &[String]) -> Result<(), SpecError> {
    let Some(first) = local.first() else {
        return Ok(());
    };
    let eval = |w: &Word| {
        w.letters()
            .iter()
            .fold(first.identity_like(), |acc, l| acc.then(&local[l.gen()]))
    };
    let values: Vec<AutElement> = (0..g.order()).map(|e| eval(g.word(e))).collect();
    for e in 0..g.order() {
        for (gi, a) in local.iter().enumerate() {
            let target = g.mul(e, g.generator_id(gi));
            if values[e].then(a) != values[target] {
                let elem = g.word(e).display_with(names).to_string();
                return Err(SpecError::Relation(format!(
                    "action is not a homomorphism on the finite quotient: θ({elem})·θ({}) differs from θ of the product {}",
                    names[gi],
                    g.element(target)
                )));
            }
        }
    }
    Ok(())
}

/// Turns `[[a, b], [c, d]]` style rows into a matrix action entry.
pub fn matrix_action(rows: &[&[i64]]) -> AutElement {
    AutElement::Matrix(IntMatrix::from_i64_rows(rows))
}

/// Signed one-based letter lists into a free automorphism entry.
pub fn free_action(rank: usize, images: &[&[i64]]) -> Result<AutElement, crate::catalog::CatalogError> {
    Ok(AutElement::Free(FreeAut::new(
        rank,
        images.iter().map(|s| Word::from_signed(s)).collect(),
    )?))
}
