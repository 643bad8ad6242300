//! Verdicts, witnesses and per-condition results.

use std::fmt;

use crate::catalog::{Perm, Word};
use crate::IntVector;

/// Which decision rule produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremPath {
    /// `K = 1`, so `G = Q` and the catalog FC-subgroup decides.
    TrivialKernel,
    /// `K` finite and nontrivial: `K` itself is a finite normal subgroup.
    FiniteKernel,
    /// `K` finitely generated abelian: finite orbits in `K` and injectivity
    /// of `FC(Q) -> Aut(K)`.
    AbelianKernel,
    /// `K` free of rank at least two: injectivity of `FC(Q) -> Out(K)`.
    FreeKernel,
}

impl TheoremPath {
    /// Stable machine-readable tag.
    pub fn tag(self) -> &'static str {
        match self {
            TheoremPath::TrivialKernel => "trivial_kernel",
            TheoremPath::FiniteKernel => "finite_kernel",
            TheoremPath::AbelianKernel => "abelian_kernel",
            TheoremPath::FreeKernel => "free_kernel",
        }
    }
}

impl fmt::Display for TheoremPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConditionStatus {
    Holds,
    Fails,
    Unknown,
    /// Skipped because an earlier condition already decided the verdict.
    NotEvaluated,
}

impl ConditionStatus {
    pub fn tag(self) -> &'static str {
        match self {
            ConditionStatus::Holds => "holds",
            ConditionStatus::Fails => "fails",
            ConditionStatus::Unknown => "unknown",
            ConditionStatus::NotEvaluated => "not_evaluated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    /// Stable identifier, e.g. `kernel_torsion_free`.
    pub name: &'static str,
    pub status: ConditionStatus,
    pub detail: String,
}

impl ConditionResult {
    pub(crate) fn new(name: &'static str, status: ConditionStatus, detail: impl Into<String>) -> Self {
        Self {
            name,
            status,
            detail: detail.into(),
        }
    }
}

/// A nontrivial element of finite order in `K` whose class is trapped in a
/// finite characteristic subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionElement {
    /// Element of `Z^r + Z/d1 + ...` with zero free part; `coords[i]` is the
    /// coordinate in `Z/d_i`.
    Abelian { rank: usize, coords: Vec<u64> },
    /// Element of a finite permutation kernel.
    Permutation(Perm),
}

impl fmt::Display for TorsionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionElement::Abelian { rank, coords } => {
                let mut parts: Vec<String> = vec!["0".into(); *rank];
                parts.extend(coords.iter().map(u64::to_string));
                write!(f, "({})", parts.join(","))
            }
            TorsionElement::Permutation(p) => write!(f, "{p}"),
        }
    }
}

/// How a quotient element was shown to act trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftEvidence {
    /// `θ(q)` is the identity matrix.
    IdentityMatrix,
    /// `θ(q)` is conjugation `x -> w x w^-1` by this kernel word.
    InnerConjugator(Word),
    /// The kernel is trivial, so every element of `FC(Q)` has a finite class.
    TrivialKernel,
}

/// An element of `G` with a finite conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessElement {
    KernelTorsion {
        element: TorsionElement,
        /// Upper bound on the class size (order of the finite subgroup that
        /// traps the class).
        class_bound: u64,
    },
    KernelVector {
        vector: IntVector,
        /// The complete orbit of `vector`, which equals its class in `G`.
        orbit: Vec<IntVector>,
    },
    QuotientLift {
        /// Element of `FC(Q)` as a word in the quotient generators.
        word: Word,
        evidence: LiftEvidence,
    },
}

impl WitnessElement {
    pub fn kind(&self) -> &'static str {
        match self {
            WitnessElement::KernelTorsion { .. } => "kernel_torsion",
            WitnessElement::KernelVector { .. } => "kernel_vector",
            WitnessElement::QuotientLift { .. } => "quotient_lift",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Icc,
    /// One witness per failed condition, in condition order; never empty.
    NotIcc {
        witnesses: Vec<WitnessElement>,
    },
    Unknown {
        obstruction: String,
    },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Icc => "icc",
            Verdict::NotIcc { .. } => "not_icc",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    /// The first witness of a `NotIcc` verdict.
    pub fn witness(&self) -> Option<&WitnessElement> {
        self.witnesses().first()
    }

    pub fn witnesses(&self) -> &[WitnessElement] {
        match self {
            Verdict::NotIcc { witnesses } => witnesses,
            _ => &[],
        }
    }

    pub(crate) fn not_icc(w: WitnessElement) -> Self {
        Verdict::NotIcc { witnesses: vec![w] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub verdict: Verdict,
    pub theorem_path: TheoremPath,
    pub conditions: Vec<ConditionResult>,
}

/// Formats an integer vector as `(a,b,c)`.
pub fn fmt_vector(v: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}
