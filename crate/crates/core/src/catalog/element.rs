//! Normal forms for elements of catalog groups.

use std::fmt;

use super::free::Word;
use super::{GeneratorKind, GroupDesc, Letter};

/// Normal form of an element of one direct factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorElement {
    /// Element id in the factor's element table.
    Finite(usize),
    /// Coordinates in `Z^m + Z/d1 + ...`; torsion coordinates reduced.
    Abelian(Vec<i64>),
    Free(Word),
}

/// Normal form of an element of a catalog group: one entry per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<FactorElement>);

impl GroupDesc {
    pub fn identity_element(&self) -> GroupElement {
        GroupElement(
            self.factors()
                .iter()
                .map(|f| match f {
                    GroupDesc::Finite(_) => FactorElement::Finite(0),
                    GroupDesc::FgAbelian { rank, torsion } => FactorElement::Abelian(vec![0; rank + torsion.len()]),
                    GroupDesc::Free { .. } => FactorElement::Free(Word::identity()),
                    GroupDesc::Product(_) => unreachable!("products are flattened"),
                })
                .collect(),
        )
    }

    /// Normal form of a word in the (global) generators.
    pub fn element_of_word(&self, w: &Word) -> GroupElement {
        let infos = self.generators();
        let mut e = self.identity_element();
        for l in w.letters() {
            let info = &infos[l.gen()];
            let slot = &mut e.0[info.factor];
            let f = &self.factors()[info.factor];
            match (slot, f) {
                (FactorElement::Finite(id), GroupDesc::Finite(g)) => {
                    let gid = g.generator_id(info.local);
                    let step = if l.is_inverse() { g.inverse(gid) } else { gid };
                    *id = g.mul(*id, step);
                }
                (FactorElement::Abelian(v), GroupDesc::FgAbelian { .. }) => {
                    v[info.local] += if l.is_inverse() { -1 } else { 1 };
                    if let GeneratorKind::Torsion(d) = info.kind {
                        v[info.local] = v[info.local].rem_euclid(d as i64);
                    }
                }
                (FactorElement::Free(u), GroupDesc::Free { .. }) => {
                    *u = u.mul(&Word::new(&[Letter::new(info.local, l.is_inverse())]));
                }
                _ => unreachable!("normal form matches its factor"),
            }
        }
        e
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            self.factors()
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(f, pair)| match (f, pair) {
                    (GroupDesc::Finite(g), (FactorElement::Finite(x), FactorElement::Finite(y))) => {
                        FactorElement::Finite(g.mul(*x, *y))
                    }
                    (
                        GroupDesc::FgAbelian { rank, torsion },
                        (FactorElement::Abelian(x), FactorElement::Abelian(y)),
                    ) => FactorElement::Abelian(
                        x.iter()
                            .zip(y)
                            .enumerate()
                            .map(|(i, (p, q))| {
                                if i < *rank {
                                    p + q
                                } else {
                                    (p + q).rem_euclid(torsion[i - rank] as i64)
                                }
                            })
                            .collect(),
                    ),
                    (GroupDesc::Free { .. }, (FactorElement::Free(x), FactorElement::Free(y))) => {
                        FactorElement::Free(x.mul(y))
                    }
                    _ => unreachable!("normal forms match their factors"),
                })
                .collect(),
        )
    }

    pub fn invert(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            self.factors()
                .iter()
                .zip(&a.0)
                .map(|(f, x)| match (f, x) {
                    (GroupDesc::Finite(g), FactorElement::Finite(id)) => FactorElement::Finite(g.inverse(*id)),
                    (GroupDesc::FgAbelian { rank, torsion }, FactorElement::Abelian(v)) => FactorElement::Abelian(
                        v.iter()
                            .enumerate()
                            .map(|(i, p)| {
                                if i < *rank {
                                    -p
                                } else {
                                    (-p).rem_euclid(torsion[i - rank] as i64)
                                }
                            })
                            .collect(),
                    ),
                    (GroupDesc::Free { .. }, FactorElement::Free(w)) => FactorElement::Free(w.inverse()),
                    _ => unreachable!("normal forms match their factors"),
                })
                .collect(),
        )
    }

    pub fn is_identity_element(&self, a: &GroupElement) -> bool {
        *a == self.identity_element()
    }

    /// A word in the global generators evaluating to `a`.
    pub fn word_of_element(&self, a: &GroupElement) -> Word {
        let mut base = 0;
        let mut out = Word::identity();
        for (f, x) in self.factors().iter().zip(&a.0) {
            let local = match (f, x) {
                (GroupDesc::Finite(g), FactorElement::Finite(id)) => g.word(*id).clone(),
                (GroupDesc::FgAbelian { .. }, FactorElement::Abelian(v)) => v
                    .iter()
                    .enumerate()
                    .fold(Word::identity(), |acc, (i, &p)| acc.mul(&Word::generator(i).pow(p))),
                (GroupDesc::Free { .. }, FactorElement::Free(w)) => w.clone(),
                _ => unreachable!("normal forms match their factors"),
            };
            let shifted: Vec<Letter> = local
                .letters()
                .iter()
                .map(|l| Letter::new(l.gen() + base, l.is_inverse()))
                .collect();
            out = out.mul(&Word::new(&shifted));
            base += f.generator_count();
        }
        out
    }
}

impl fmt::Display for FactorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorElement::Finite(id) => write!(f, "#{id}"),
            FactorElement::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            FactorElement::Free(w) => write!(f, "{w}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Perm, PermGroup};

    #[test]
    fn normal_forms_in_a_product() {
        let s3 = PermGroup::generate(
            3,
            vec![
                Perm::from_cycles(3, &[vec![1, 2]]).unwrap(),
                Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let q = GroupDesc::product(vec![
            GroupDesc::Finite(s3),
            GroupDesc::fg_abelian(1, vec![2]).unwrap(),
            GroupDesc::free_rank(2).unwrap(),
        ])
        .unwrap();
        // generators: s, r | z, u | a, b
        let w = Word::from_signed(&[1, 3, 4, 4, 5, 1, -3, 6]);
        let e = q.element_of_word(&w);
        assert_eq!(e.0[0], FactorElement::Finite(0));
        assert_eq!(e.0[1], FactorElement::Abelian(vec![0, 0]));
        assert_eq!(e.0[2], FactorElement::Free(Word::from_signed(&[1, 2])));
        let back = q.element_of_word(&q.word_of_element(&e));
        assert_eq!(back, e);
        let x = q.element_of_word(&Word::from_signed(&[2, 3, 4, 6]));
        assert!(q.is_identity_element(&q.multiply(&x, &q.invert(&x))));
    }
}
