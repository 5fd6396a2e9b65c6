//! The semistability polytope of a curve and the stability verdicts.

use crate::curve::{stability_index_sets, Anchor, CompId, CoreKind, Curve, IndexSets, Marks};
use crate::lp::{Lp, Rel};
use crate::rational::{fmt_q, QStr, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Character {
    #[serde(with = "qvec")]
    pub a: Vec<Q>,
}

pub mod qvec {
    use crate::rational::{QStr, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| QStr(x.clone())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        Ok(Vec::<QStr>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

impl Character {
    pub fn new(a: Vec<Q>) -> Self {
        Character { a }
    }

    pub fn uniform(n: usize, x: Q) -> Self {
        Character { a: vec![x; n] }
    }

    pub fn sum_over(&self, s: &Marks) -> Q {
        s.iter().fold(Q::zero(), |acc, &i| acc + &self.a[i - 1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilityError {
    #[error("character has {got} entries, curve has n = {want}")]
    DimensionMismatch { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub name: String,
    #[serde(serialize_with = "ser_qs")]
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    #[serde(serialize_with = "ser_q")]
    pub rhs: Q,
}

fn ser_qs<S: serde::Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.iter().map(|x| QStr(x.clone())).collect::<Vec<_>>().serialize(s)
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(v))
}

impl Constraint {
    pub fn lhs(&self, x: &[Q]) -> Q {
        self.coeffs.iter().zip(x).fold(Q::zero(), |s, (c, v)| s + c * v)
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        self.rel.holds(&self.lhs(x), &self.rhs)
    }

    pub fn tight(&self, x: &[Q]) -> bool {
        self.lhs(x) == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HPolytope {
    pub n: usize,
    pub constraints: Vec<Constraint>,
}

impl HPolytope {
    pub fn contains(&self, x: &[Q]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }

    pub fn is_empty(&self) -> bool {
        // free variables, split as x = p - m
        let mut lp2 = Lp::new(2 * self.n);
        for c in &self.constraints {
            let mut row = c.coeffs.clone();
            row.extend(c.coeffs.iter().map(|v| -v.clone()));
            lp2.add(row, c.rel, c.rhs.clone());
        }
        lp2.feasible_point().is_none()
    }
}

fn indicator(n: usize, s: &Marks) -> Vec<Q> {
    (1..=n).map(|i| if s.contains(&i) { Q::one() } else { Q::zero() }).collect()
}

pub fn semistability_polytope(c: &Curve) -> HPolytope {
    let n = c.n;
    let ix = stability_index_sets(c);
    let mut cons = Vec::new();
    for i in 1..=n {
        cons.push(Constraint {
            name: format!("a{i} >= 0"),
            coeffs: indicator(n, &[i].into()),
            rel: Rel::Ge,
            rhs: Q::zero(),
        });
    }
    for i in 1..=n {
        if !ix.i.contains(&i) && !ix.j.contains(&i) {
            cons.push(Constraint {
                name: format!("a{i} = 0"),
                coeffs: indicator(n, &[i].into()),
                rel: Rel::Eq,
                rhs: Q::zero(),
            });
        }
    }
    cons.push(Constraint { name: "sum_I >= 1".into(), coeffs: indicator(n, &ix.i), rel: Rel::Ge, rhs: Q::one() });
    if !ix.i0.is_empty() {
        cons.push(Constraint { name: "sum_I0 <= 1".into(), coeffs: indicator(n, &ix.i0), rel: Rel::Le, rhs: Q::one() });
    }
    HPolytope { n, constraints: cons }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    pub semistable: bool,
    pub stable: bool,
    pub finite_reduced_stabilizer: bool,
    pub index_sets: IndexSets,
    pub violations: Vec<String>,
    pub tight: Vec<String>,
}

fn check_dim(c: &Curve, chi: &Character) -> Result<(), StabilityError> {
    if chi.a.len() != c.n {
        return Err(StabilityError::DimensionMismatch { got: chi.a.len(), want: c.n });
    }
    Ok(())
}

/// Full verdict; `is_semistable` and `is_stable` both return it.
pub fn verdict(c: &Curve, chi: &Character) -> Result<StabilityVerdict, StabilityError> {
    check_dim(c, chi)?;
    let p = semistability_polytope(c);
    let ix = stability_index_sets(c);
    let mut violations = Vec::new();
    let mut tight = Vec::new();
    for k in &p.constraints {
        if !k.holds(&chi.a) {
            violations.push(k.name.clone());
        } else if k.rel != Rel::Eq && k.tight(&chi.a) {
            tight.push(k.name.clone());
        }
    }
    let semistable = violations.is_empty();
    let finite = has_finite_reduced_stabilizer(c);
    let strict = chi.a.iter().all(|x| x.is_positive())
        && chi.sum_over(&ix.i) > Q::one()
        && (ix.i0.is_empty() || chi.sum_over(&ix.i0) < Q::one());
    let stable = finite && strict;
    Ok(StabilityVerdict { semistable, stable, finite_reduced_stabilizer: finite, index_sets: ix, violations, tight })
}

pub fn is_semistable(c: &Curve, chi: &Character) -> Result<StabilityVerdict, StabilityError> {
    verdict(c, chi)
}

pub fn is_stable(c: &Curve, chi: &Character) -> Result<StabilityVerdict, StabilityError> {
    verdict(c, chi)
}

/// Decided from the automorphism criterion on the curve itself, not from the
/// index sets.
pub fn has_finite_reduced_stabilizer(c: &Curve) -> bool {
    let tails_ok = c
        .components()
        .into_iter()
        .filter(|id| matches!(id, CompId::Tail(..)))
        .all(|id| c.special_counts(id).on_component >= 3);
    let core_ok = match c.core {
        CoreKind::Fold(m) => (0..m).any(|k| c.special_counts(CompId::Core(k)).on_component >= 3),
        _ => true,
    };
    tails_ok && core_ok
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaSets {
    pub n: usize,
    pub omega1: BTreeSet<usize>,
    pub omega0_rays: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("omega sets disagree for the Fold core: via index sets {via_index:?}, via attachment {via_attached:?}")]
pub struct OmegaMismatch {
    pub via_index: BTreeSet<usize>,
    pub via_attached: BTreeSet<usize>,
}

/// Marks `i` on the core with another mark attached to the component of
/// `p_i`: on the same component, or on a tail meeting it at a smooth point.
fn attached_core_marks(c: &Curve) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (k, ms) in c.core_marks.iter().enumerate() {
        let others_on_tails = c
            .tails
            .iter()
            .filter(|t| t.anchor == Anchor::Smooth { component: k })
            .any(|t| t.components.iter().any(|m| !m.is_empty()));
        for &i in ms {
            if ms.len() >= 2 || others_on_tails {
                out.insert(i);
            }
        }
    }
    out
}

pub fn omega_sets(c: &Curve) -> Result<OmegaSets, OmegaMismatch> {
    let ix = stability_index_sets(c);
    let mut rays: BTreeSet<usize> = ix.j.clone();
    let non_i0: BTreeSet<usize> = ix.i.difference(&ix.i0).copied().collect();
    if c.core.is_fold() {
        let att = attached_core_marks(c);
        if att != non_i0 {
            return Err(OmegaMismatch { via_index: non_i0, via_attached: att });
        }
    }
    rays.extend(non_i0);
    Ok(OmegaSets { n: c.n, omega1: ix.i, omega0_rays: rays })
}

/// Is `chi` in Conv(Omega1) + Cone(Omega0)?  Solved as an exact LP with one
/// weight per generator.
pub fn membership_lp(chi: &Character, omega: &OmegaSets) -> bool {
    let n = chi.a.len();
    let gens1: Vec<usize> = omega.omega1.iter().copied().collect();
    let gens0: Vec<usize> = omega.omega0_rays.iter().copied().collect();
    let nv = gens1.len() + gens0.len();
    let mut lp = Lp::new(nv);
    for row in 1..=n {
        let coeffs: Vec<Q> = gens1
            .iter()
            .chain(gens0.iter())
            .map(|&g| if g == row { Q::one() } else { Q::zero() })
            .collect();
        lp.add(coeffs, Rel::Eq, chi.a[row - 1].clone());
    }
    let mut conv = vec![Q::zero(); nv];
    for v in conv.iter_mut().take(gens1.len()) {
        *v = Q::one();
    }
    lp.add(conv, Rel::Eq, Q::one());
    lp.feasible_point().is_some()
}

/// Same LP for arbitrary generator vectors, used by tests.
pub fn membership_lp_general(chi: &[Q], omega1: &[Vec<Q>], omega0: &[Vec<Q>]) -> bool {
    let n = chi.len();
    let nv = omega1.len() + omega0.len();
    let mut lp = Lp::new(nv);
    for r in 0..n {
        let coeffs = omega1.iter().chain(omega0.iter()).map(|g| g[r].clone()).collect();
        lp.add(coeffs, Rel::Eq, chi[r].clone());
    }
    let conv = (0..nv).map(|k| if k < omega1.len() { Q::one() } else { Q::zero() }).collect();
    lp.add(conv, Rel::Eq, Q::one());
    lp.feasible_point().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn cusp_only_at_one() {
        let c = Curve::full(1, CoreKind::Fold(1), vec![vec![1]], vec![]).unwrap();
        for (a, ok) in [(qf(1, 2), false), (q(1), true), (q(2), false)] {
            assert_eq!(verdict(&c, &Character::new(vec![a])).unwrap().semistable, ok);
        }
    }

    #[test]
    fn negative_entry_unstable() {
        let c = Curve::full(2, CoreKind::Smooth, vec![vec![1, 2]], vec![]).unwrap();
        let v = verdict(&c, &Character::new(vec![q(-1), q(5)])).unwrap();
        assert!(!v.semistable);
        assert_eq!(v.violations, vec!["a1 >= 0".to_string()]);
    }

    #[test]
    fn dimension_mismatch() {
        let c = Curve::full(2, CoreKind::Smooth, vec![vec![1, 2]], vec![]).unwrap();
        assert!(verdict(&c, &Character::new(vec![q(1)])).is_err());
    }

    #[test]
    fn lp_examples() {
        let e1 = vec![q(1), q(0)];
        let e2 = vec![q(0), q(1)];
        assert!(membership_lp_general(&[qf(1, 2), qf(1, 2)], &[e1.clone(), e2.clone()], &[]));
        assert!(!membership_lp_general(&[qf(1, 3), qf(1, 3)], &[e1.clone(), e2], &[]));
        assert!(membership_lp_general(&[q(2), q(0)], &[e1.clone()], &[e1]));
    }
}
