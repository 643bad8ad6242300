//! Injectivity of the action restricted to `FC(Q)`.
//!
//! `FC(Q)` of a catalog group is `T x Z^m`: `T` collects the finite factors
//! and the torsion summands, `Z^m` the infinite cyclic directions. `T` is
//! enumerated outright. The `Z^m` part is exact for `m <= 1` and a bounded
//! search beyond that.

use crate::catalog::{GeneratorKind, GroupDesc, Letter, Word};
use crate::matgroup::{matrix_order, MatrixOrder};

use super::report::LiftEvidence;
use super::spec::{AutElement, ExtensionSpec};

/// Largest `|T|` that is enumerated.
pub const FC_ENUMERATION_CAP: usize = 100_000;
/// Largest number of `(t, exponent vector)` pairs tried by the relation search.
pub const RELATION_SEARCH_CAP: u64 = 2_000_000;

/// Whether triviality means the identity or an inner automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Codomain {
    Aut,
    Out,
}

/// Bounds for the semi-decision parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    /// Largest power `n` tried when asking whether `θ(z)^n` is inner.
    pub out_order_cap: u64,
    /// Max-norm of exponent vectors tried for several infinite directions.
    pub relation_bound: i64,
    /// Largest witness orbit listed explicitly.
    pub orbit_cap: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self {
            out_order_cap: 16,
            relation_bound: 8,
            orbit_cap: crate::matgroup::DEFAULT_ORBIT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FcInjectivity {
    /// Exactly decided: no nontrivial element of `FC(Q)` acts trivially.
    Injective { reason: String },
    /// A nontrivial element of `FC(Q)` acting trivially.
    Witness { word: Word, evidence: LiftEvidence },
    /// Bounded search exhausted; the tag names the obstruction.
    Unknown { obstruction: &'static str, detail: String },
}

fn trivial_evidence(a: &AutElement, codomain: Codomain) -> Option<LiftEvidence> {
    let w = match codomain {
        Codomain::Aut => a.is_identity().then(Word::identity)?,
        Codomain::Out => a.inner_conjugator()?,
    };
    Some(match a {
        AutElement::Matrix(_) => LiftEvidence::IdentityMatrix,
        AutElement::Free(_) => LiftEvidence::InnerConjugator(w),
    })
}

fn shift(w: &Word, base: usize) -> Word {
    let letters: Vec<Letter> = w
        .letters()
        .iter()
        .map(|l| Letter::new(l.gen() + base, l.is_inverse()))
        .collect();
    Word::new(&letters)
}

/// The finite part `T` as lists of (word, action) per direct component, plus
/// the global indices of the infinite cyclic FC generators.
fn fc_structure(spec: &ExtensionSpec) -> (Vec<Vec<(Word, AutElement)>>, Vec<usize>) {
    let q = spec.quotient();
    let infos = q.generators();
    let mut components = Vec::new();
    let mut infinite = Vec::new();
    let mut base = 0;
    for f in q.factors() {
        if let GroupDesc::Finite(g) = f {
            let comp = (0..g.order())
                .map(|e| {
                    let w = shift(g.word(e), base);
                    let a = spec.evaluate(&w).expect("action is used");
                    (w, a)
                })
                .collect();
            components.push(comp);
        }
        base += f.generator_count();
    }
    for (i, info) in infos.iter().enumerate() {
        match info.kind {
            GeneratorKind::InfiniteCyclic => infinite.push(i),
            GeneratorKind::Torsion(d) => {
                let z = Word::generator(i);
                let a = &spec.action()[i];
                components.push((0..d as i64).map(|j| (z.pow(j), a.pow(j))).collect());
            }
            _ => {}
        }
    }
    (components, infinite)
}

/// All elements of `T`, identity first, in mixed-radix order with the last
/// component varying fastest. `None` if `|T|` exceeds the cap.
fn enumerate_finite_part(
    components: &[Vec<(Word, AutElement)>],
    identity: &AutElement,
) -> Option<Vec<(Word, AutElement)>> {
    let mut size: usize = 1;
    for c in components {
        size = size.checked_mul(c.len()).filter(|&s| s <= FC_ENUMERATION_CAP)?;
    }
    let mut out = vec![(Word::identity(), identity.clone())];
    for c in components {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for (w, a) in &out {
            for (cw, ca) in c {
                next.push((w.mul(cw), a.then(ca)));
            }
        }
        out = next;
    }
    Some(out)
}

fn search_finite(t: &[(Word, AutElement)], codomain: Codomain) -> Option<FcInjectivity> {
    t.iter().skip(1).find_map(|(w, a)| {
        trivial_evidence(a, codomain).map(|evidence| FcInjectivity::Witness {
            word: w.clone(),
            evidence,
        })
    })
}

/// Decides whether `θ : FC(Q) -> Aut(K)` (or `Out(K)`) is injective.
///
/// Requires a spec whose action is used (torsion-free abelian or free
/// kernel).
pub fn theta_fc_injective(spec: &ExtensionSpec, codomain: Codomain, caps: SearchCaps) -> FcInjectivity {
    let identity = spec.identity_action().expect("FC injectivity needs action data");
    let (components, infinite) = fc_structure(spec);
    let Some(t) = enumerate_finite_part(&components, &identity) else {
        return FcInjectivity::Unknown {
            obstruction: "fc-enumeration-cap",
            detail: format!("finite part of FC(Q) exceeds {FC_ENUMERATION_CAP} elements"),
        };
    };
    if let Some(w) = search_finite(&t, codomain) {
        return w;
    }
    match infinite.as_slice() {
        [] => FcInjectivity::Injective {
            reason: if t.len() == 1 {
                "FC(Q) is trivial".into()
            } else {
                format!(
                    "FC(Q) is finite of order {}; every nontrivial element acts nontrivially",
                    t.len()
                )
            },
        },
        &[z] => single_direction(spec, codomain, caps, &t, z),
        zs => several_directions(spec, codomain, caps, &t, zs),
    }
}

/// `FC(Q) = T x <z>`.
///
/// If `θ(t)·θ(z)^n` is trivial with `n != 0` then `θ(z)^n` lies in the finite
/// group `θ(T)` (modulo inner automorphisms, whose image in the
/// abelianization is trivial), so `θ(z)` has finite order there. When it has
/// infinite order, injectivity is exact.
fn single_direction(
    spec: &ExtensionSpec,
    codomain: Codomain,
    caps: SearchCaps,
    t: &[(Word, AutElement)],
    z: usize,
) -> FcInjectivity {
    let label = &spec.labels()[z];
    let a = &spec.action()[z];
    let zw = Word::generator(z);
    match a {
        AutElement::Matrix(m) => match matrix_order(m).expect("validated unimodular") {
            MatrixOrder::Infinite => FcInjectivity::Injective {
                reason: format!("θ({label}) has infinite order"),
            },
            MatrixOrder::Finite(n) => FcInjectivity::Witness {
                word: zw.pow(n as i64),
                evidence: LiftEvidence::IdentityMatrix,
            },
        },
        AutElement::Free(phi) => {
            if matrix_order(&phi.abelianization()).expect("abelianization is unimodular") == MatrixOrder::Infinite {
                return FcInjectivity::Injective {
                    reason: format!("θ({label}) has infinite order on the abelianization of K"),
                };
            }
            let mut power = a.identity_like();
            for n in 1..=caps.out_order_cap {
                power = power.then(a);
                for (tw, ta) in t {
                    if let Some(evidence) = trivial_evidence(&ta.then(&power), codomain) {
                        return FcInjectivity::Witness {
                            word: tw.mul(&zw.pow(n as i64)),
                            evidence,
                        };
                    }
                }
            }
            FcInjectivity::Unknown {
                obstruction: "out-order-unbounded",
                detail: format!(
                    "no power θ({label})^n with n <= {} is trivial modulo the finite part",
                    caps.out_order_cap
                ),
            }
        }
    }
}

/// Exponent vectors in `[-b, b]^m`, nonzero with first nonzero entry positive,
/// ordered by max-norm and then lexicographically.
fn exponent_vectors(m: usize, b: i64) -> Vec<Vec<i64>> {
    let mut all: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..m {
        all = all
            .into_iter()
            .flat_map(|v| {
                (-b..=b).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<Vec<i64>> = all
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
        .collect();
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).max().unwrap_or(0), v.clone()));
    out
}

fn several_directions(
    spec: &ExtensionSpec,
    codomain: Codomain,
    caps: SearchCaps,
    t: &[(Word, AutElement)],
    zs: &[usize],
) -> FcInjectivity {
    let b = caps.relation_bound.max(0);
    let unknown = |detail: String| FcInjectivity::Unknown {
        obstruction: "abelian-relation-bound",
        detail,
    };
    let side = (2 * b + 1) as u64;
    let work = side
        .checked_pow(zs.len() as u32)
        .and_then(|x| x.checked_mul(t.len() as u64));
    if work.is_none_or(|w| w > RELATION_SEARCH_CAP) {
        return unknown(format!(
            "relation search over {} infinite directions with bound {b} exceeds {RELATION_SEARCH_CAP} candidates",
            zs.len()
        ));
    }
    // powers[i][k] = θ(z_i)^(k - b)
    let powers: Vec<Vec<AutElement>> = zs
        .iter()
        .map(|&z| (-b..=b).map(|k| spec.action()[z].pow(k)).collect())
        .collect();
    for e in exponent_vectors(zs.len(), b) {
        let mut acc = t[0].1.clone();
        let mut word = Word::identity();
        for (i, &x) in e.iter().enumerate() {
            acc = acc.then(&powers[i][(x + b) as usize]);
            word = word.mul(&Word::generator(zs[i]).pow(x));
        }
        for (tw, ta) in t {
            if let Some(evidence) = trivial_evidence(&ta.then(&acc), codomain) {
                return FcInjectivity::Witness {
                    word: tw.mul(&word),
                    evidence,
                };
            }
        }
    }
    unknown(format!(
        "no exponent vector of max-norm <= {b} over {} infinite directions gives a trivial action",
        zs.len()
    ))
}
