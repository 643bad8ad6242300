//! Brute-force ground truth on materialized split extensions.
//!
//! [`ConcreteGroup`] realizes `K ⋊ Q` with multiplication
//! `(k1, q1)(k2, q2) = (k1 · θ(q1)(k2), q1 q2)`. [`conjugacy_ball`] grows the
//! class of an element by repeated conjugation with the generators; a round
//! that adds nothing proves the class finite and complete. Growth alone never
//! proves a class infinite.
//!
//! Finite kernels are materialized as `K x Q`: their action data is ignored
//! by the analyzer, and the class of a kernel element stays inside `K` for any
//! action. Torsion kernels are not materialized.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::analyzer::{
    AutElement, ExtensionSpec, KernelDesc, LiftEvidence, Report, TorsionElement, Verdict, WitnessElement,
};
use crate::catalog::{GroupDesc, GroupElement, Letter, Word};
use crate::matgroup::{orbit_bfs, Orbit};
use crate::{IntMatGroup, IntVector};

/// Default number of conjugation rounds.
pub const DEFAULT_RADIUS: usize = 6;
/// Default class-size cap.
pub const DEFAULT_SIZE_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle does not materialize {0}")]
    Unsupported(String),
    #[error("exact orbit classes need a free abelian kernel")]
    NonAbelianKernel,
}

/// Kernel coordinate of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelPart {
    Vector(IntVector),
    Word(Word),
    /// Element id in the finite kernel's table.
    Finite(usize),
}

/// An element `(k, q)` of the split extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GElem {
    pub kernel: KernelPart,
    pub quotient: GroupElement,
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match &self.kernel {
            KernelPart::Vector(v) => crate::analyzer::fmt_vector(v),
            KernelPart::Word(w) => w.to_string(),
            KernelPart::Finite(id) => format!("#{id}"),
        };
        let q: Vec<String> = self.quotient.0.iter().map(ToString::to_string).collect();
        write!(f, "[{k} | {}]", q.join(" "))
    }
}

/// A materialized split extension.
#[derive(Clone, Debug)]
pub struct ConcreteGroup {
    spec: ExtensionSpec,
    /// Generators followed by their inverses.
    generators: Vec<GElem>,
}

impl ConcreteGroup {
    pub fn materialize(spec: &ExtensionSpec) -> Result<Self, OracleError> {
        if let KernelDesc::Abelian { torsion, .. } = spec.kernel() {
            if !torsion.is_empty() {
                return Err(OracleError::Unsupported("kernels with torsion".into()));
            }
        }
        let mut g = Self {
            spec: spec.clone(),
            generators: Vec::new(),
        };
        let q = spec.quotient();
        let one = q.identity_element();
        let mut gens: Vec<GElem> = match spec.kernel() {
            KernelDesc::Abelian { rank, .. } => (0..*rank)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); *rank];
                    v[i] = BigInt::one();
                    GElem {
                        kernel: KernelPart::Vector(v),
                        quotient: one.clone(),
                    }
                })
                .collect(),
            KernelDesc::Free { names } => (0..names.len())
                .map(|i| GElem {
                    kernel: KernelPart::Word(Word::generator(i)),
                    quotient: one.clone(),
                })
                .collect(),
            KernelDesc::Finite(k) => (0..k.generators().len())
                .map(|i| GElem {
                    kernel: KernelPart::Finite(k.generator_id(i)),
                    quotient: one.clone(),
                })
                .collect(),
        };
        for i in 0..q.generator_count() {
            gens.push(g.quotient_lift(&Word::generator(i)));
        }
        let inverses: Vec<GElem> = gens.iter().map(|x| g.inverse(x)).collect();
        gens.extend(inverses);
        g.generators = gens;
        Ok(g)
    }

    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    fn quotient(&self) -> &GroupDesc {
        self.spec.quotient()
    }

    /// Ball generators: kernel generators, quotient lifts with zero kernel
    /// part, then all their inverses.
    pub fn generators(&self) -> &[GElem] {
        &self.generators
    }

    pub fn identity(&self) -> GElem {
        GElem {
            kernel: self.kernel_identity(),
            quotient: self.quotient().identity_element(),
        }
    }

    fn kernel_identity(&self) -> KernelPart {
        match self.spec.kernel() {
            KernelDesc::Abelian { rank, .. } => KernelPart::Vector(vec![BigInt::zero(); *rank]),
            KernelDesc::Free { .. } => KernelPart::Word(Word::identity()),
            KernelDesc::Finite(_) => KernelPart::Finite(0),
        }
    }

    /// `(1, q)` for a word `q` in the quotient generators.
    pub fn quotient_lift(&self, q: &Word) -> GElem {
        GElem {
            kernel: self.kernel_identity(),
            quotient: self.quotient().element_of_word(q),
        }
    }

    pub fn kernel_element(&self, k: KernelPart) -> GElem {
        GElem {
            kernel: k,
            quotient: self.quotient().identity_element(),
        }
    }

    fn kernel_mul(&self, a: &KernelPart, b: &KernelPart) -> KernelPart {
        match (a, b) {
            (KernelPart::Vector(x), KernelPart::Vector(y)) => {
                KernelPart::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (KernelPart::Word(x), KernelPart::Word(y)) => KernelPart::Word(x.mul(y)),
            (KernelPart::Finite(x), KernelPart::Finite(y)) => match self.spec.kernel() {
                KernelDesc::Finite(k) => KernelPart::Finite(k.mul(*x, *y)),
                _ => unreachable!("finite kernel part"),
            },
            _ => unreachable!("kernel parts of one group"),
        }
    }

    fn kernel_inverse(&self, a: &KernelPart) -> KernelPart {
        match a {
            KernelPart::Vector(x) => KernelPart::Vector(x.iter().map(|p| -p).collect()),
            KernelPart::Word(w) => KernelPart::Word(w.inverse()),
            KernelPart::Finite(x) => match self.spec.kernel() {
                KernelDesc::Finite(k) => KernelPart::Finite(k.inverse(*x)),
                _ => unreachable!("finite kernel part"),
            },
        }
    }

    fn apply_letter(&self, l: Letter, k: KernelPart) -> KernelPart {
        let Some(a) = self.spec.action().get(l.gen()) else {
            return k;
        };
        let a = if l.is_inverse() { a.inverse() } else { a.clone() };
        match (a, k) {
            (AutElement::Matrix(m), KernelPart::Vector(v)) => KernelPart::Vector(m.apply(&v)),
            (AutElement::Free(f), KernelPart::Word(w)) => KernelPart::Word(f.apply(&w)),
            _ => unreachable!("action matches kernel"),
        }
    }

    /// `θ(q)(k)`, applying the letters of a word for `q` right to left.
    pub fn act(&self, q: &GroupElement, k: &KernelPart) -> KernelPart {
        if self.spec.action().is_empty() {
            return k.clone();
        }
        let w = self.quotient().word_of_element(q);
        w.letters()
            .iter()
            .rev()
            .fold(k.clone(), |acc, &l| self.apply_letter(l, acc))
    }

    pub fn mul(&self, a: &GElem, b: &GElem) -> GElem {
        GElem {
            kernel: self.kernel_mul(&a.kernel, &self.act(&a.quotient, &b.kernel)),
            quotient: self.quotient().multiply(&a.quotient, &b.quotient),
        }
    }

    /// `(k, q)^-1 = (θ(q^-1)(k^-1), q^-1)`.
    pub fn inverse(&self, a: &GElem) -> GElem {
        let qi = self.quotient().invert(&a.quotient);
        GElem {
            kernel: self.act(&qi, &self.kernel_inverse(&a.kernel)),
            quotient: qi,
        }
    }

    /// `g^-1 · u · g`.
    pub fn conjugate(&self, u: &GElem, g: &GElem) -> GElem {
        self.mul(&self.mul(&self.inverse(g), u), g)
    }

    pub fn is_identity(&self, a: &GElem) -> bool {
        *a == self.identity()
    }

    /// The first `n` nontrivial elements of the Cayley ball in breadth-first
    /// order: generators, then products of two, and so on.
    pub fn sample_elements(&self, n: usize) -> Vec<GElem> {
        let id = self.identity();
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    out.push(y.clone());
                    if out.len() == n {
                        return out;
                    }
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// The element of `G` a witness refers to. For an `Out`-trivial lift with
    /// conjugator `w`, this is `(w^-1, q)`, which centralizes `K`.
    pub fn witness_element(&self, w: &WitnessElement) -> GElem {
        match w {
            WitnessElement::KernelTorsion {
                element: TorsionElement::Permutation(p),
                ..
            } => match self.spec.kernel() {
                KernelDesc::Finite(k) => {
                    self.kernel_element(KernelPart::Finite(k.id_of(p).expect("witness lies in the kernel")))
                }
                _ => panic!("permutation witness needs a finite kernel"),
            },
            WitnessElement::KernelTorsion { .. } => panic!("torsion kernels are not materialized"),
            WitnessElement::KernelVector { vector, .. } => self.kernel_element(KernelPart::Vector(vector.clone())),
            WitnessElement::QuotientLift { word, evidence } => {
                let mut g = self.quotient_lift(word);
                if let LiftEvidence::InnerConjugator(c) = evidence {
                    g.kernel = KernelPart::Word(c.inverse());
                }
                g
            }
        }
    }
}

/// Whether a ball ended closed or was cut off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BallStatus {
    /// Conjugation by every generator added nothing after this many rounds:
    /// the set is the whole class.
    Closed {
        radius: usize,
    },
    StillGrowing {
        cap_exceeded: bool,
    },
}

/// Class sizes after each round of conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCurve {
    /// `sizes[r]` is the number of class elements found after `r` rounds.
    pub sizes: Vec<usize>,
    pub status: BallStatus,
    /// Class elements found, in discovery order.
    pub elements: Vec<GElem>,
}

impl GrowthCurve {
    pub fn is_closed(&self) -> bool {
        matches!(self.status, BallStatus::Closed { .. })
    }

    pub fn final_size(&self) -> usize {
        self.elements.len()
    }

    /// CSV with header `radius,size,status`; every row but the last is
    /// `growing`, the last carries the final status.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("radius,size,status\n");
        let last = self.sizes.len() - 1;
        for (r, n) in self.sizes.iter().enumerate() {
            let status = if r < last {
                "growing"
            } else {
                match self.status {
                    BallStatus::Closed { .. } => "closed",
                    BallStatus::StillGrowing { cap_exceeded: true } => "cap_exceeded",
                    BallStatus::StillGrowing { cap_exceeded: false } => "still_growing",
                }
            };
            s.push_str(&format!("{r},{n},{status}\n"));
        }
        s
    }
}

/// Grows the conjugacy class of `u` for up to `radius` rounds, conjugating
/// the newest elements by every generator and inverse. The class is closed
/// as soon as a round adds nothing; that verifying round is not counted in
/// the reported radius (a central element closes at radius 1).
pub fn conjugacy_ball(g: &ConcreteGroup, u: &GElem, radius: usize, cap: usize) -> GrowthCurve {
    let mut seen: HashSet<GElem> = HashSet::from([u.clone()]);
    let mut elements = vec![u.clone()];
    let mut sizes = vec![1];
    let mut frontier = vec![u.clone()];
    for round in 1..=radius.max(1) + 1 {
        let mut next = Vec::new();
        for x in &frontier {
            for s in g.generators() {
                let y = g.conjugate(x, s);
                if seen.insert(y.clone()) {
                    elements.push(y.clone());
                    next.push(y);
                    if elements.len() > cap {
                        sizes.push(elements.len());
                        return GrowthCurve {
                            sizes,
                            status: BallStatus::StillGrowing { cap_exceeded: true },
                            elements,
                        };
                    }
                }
            }
        }
        if next.is_empty() {
            let r = (round - 1).max(1);
            sizes.resize(r + 1, elements.len());
            return GrowthCurve {
                sizes,
                status: BallStatus::Closed { radius: r },
                elements,
            };
        }
        if round > radius {
            break;
        }
        sizes.push(elements.len());
        frontier = next;
    }
    GrowthCurve {
        sizes,
        status: BallStatus::StillGrowing { cap_exceeded: false },
        elements,
    }
}

/// Result of [`exact_abelian_class`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactClass {
    Finite(Vec<IntVector>),
    Exceeded,
}

/// For a free abelian kernel the class of `k` in `G` is its `θ(Q)`-orbit,
/// computed exactly by orbit enumeration.
pub fn exact_abelian_class(g: &ConcreteGroup, k: &[BigInt], cap: usize) -> Result<ExactClass, OracleError> {
    let KernelDesc::Abelian { rank, .. } = g.spec.kernel() else {
        return Err(OracleError::NonAbelianKernel);
    };
    let mut mats: Vec<_> = g
        .spec
        .action()
        .iter()
        .map(|a| match a {
            AutElement::Matrix(m) => m.clone(),
            AutElement::Free(_) => unreachable!("abelian kernel acts by matrices"),
        })
        .collect();
    if mats.is_empty() {
        mats.push(crate::IntMatrix::identity(*rank));
    }
    let group = IntMatGroup::from_matrices(*rank, mats).expect("validated action matrices");
    Ok(match orbit_bfs(&group, k, cap) {
        Orbit::Finite(o) => ExactClass::Finite(o),
        Orbit::ExceededCap => ExactClass::Exceeded,
    })
}

/// One probed element and its ball.
#[derive(Clone, Debug)]
pub struct Probe {
    pub element: GElem,
    pub curve: GrowthCurve,
}

/// Outcome of [`crosscheck`].
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub radius: usize,
    pub cap: usize,
    /// Balls of the verdict's witnesses (not-icc verdicts).
    pub witness_probes: Vec<Probe>,
    /// Balls of sampled nontrivial elements (icc and unknown verdicts).
    pub sample_probes: Vec<Probe>,
    /// For not-icc: every witness class closed within its bound. For icc: no
    /// sampled class closed. Unknown verdicts are always consistent.
    pub consistent: bool,
}

/// Cross-checks a report against conjugacy balls in the split extension.
pub fn crosscheck(
    spec: &ExtensionSpec,
    report: &Report,
    samples: usize,
    radius: usize,
    cap: usize,
) -> Result<CrossCheck, OracleError> {
    let g = ConcreteGroup::materialize(spec)?;
    let mut out = CrossCheck {
        radius,
        cap,
        witness_probes: Vec::new(),
        sample_probes: Vec::new(),
        consistent: true,
    };
    match &report.verdict {
        Verdict::NotIcc { witnesses } => {
            for w in witnesses {
                let element = g.witness_element(w);
                let curve = conjugacy_ball(&g, &element, radius, cap);
                let ok = curve.is_closed()
                    && match w {
                        WitnessElement::KernelTorsion { class_bound, .. } => curve.final_size() as u64 <= *class_bound,
                        WitnessElement::KernelVector { orbit, .. } => curve.final_size() == orbit.len(),
                        WitnessElement::QuotientLift { .. } => true,
                    };
                out.consistent &= ok;
                out.witness_probes.push(Probe { element, curve });
            }
        }
        Verdict::Icc | Verdict::Unknown { .. } => {
            for element in g.sample_elements(samples) {
                let curve = conjugacy_ball(&g, &element, radius, cap);
                if matches!(report.verdict, Verdict::Icc) && curve.is_closed() {
                    out.consistent = false;
                }
                out.sample_probes.push(Probe { element, curve });
            }
        }
    }
    Ok(out)
}
