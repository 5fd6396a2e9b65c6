//! Degenerate curves with explicit coordinates on every component.
//!
//! Fold cores use a coordinate `w` with the singular point at `w = 0`.
//! Ngon cores use `w` with the nodes at `w = 1` (towards the next component)
//! and `w = -1` (towards the previous one). A single-component tail uses `z`
//! with the attaching point at `z = 0`.

use crate::sym::Sym;
use git1::curve::{validate_curve, Anchor, CoreKind, Curve, CurveError};
use git1::rational::{fmt_q, random_nonzero_q, QStr, Q};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("curve is outside the coordinatized range: {0}")]
    NotRealizable(String),
    #[error("position clash: {0}")]
    PositionClash(String),
    #[error("scaling of mark {0} is zero")]
    ZeroScaling(usize),
    #[error("missing {0} for mark {1}")]
    MissingParameter(&'static str, usize),
    #[error("mark {0} does not lie on the core, no chart")]
    ChartInvalid(usize),
    #[error("weight vector has a zero entry or the wrong length")]
    ZeroLambda,
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

mod qmap {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, Q>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(k, v)| (k.to_string(), QStr(v.clone()))).collect::<BTreeMap<_, _>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, Q>, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, QStr>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.trim().parse::<usize>().map(|k| (k, v.0)).map_err(D::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinatizedCurve {
    #[serde(flatten)]
    pub base: Curve,
    #[serde(with = "qmap")]
    pub positions: BTreeMap<usize, Q>,
    #[serde(with = "qmap")]
    pub scalings: BTreeMap<usize, Q>,
    /// Coordinate of each tail's attaching point on its core component.
    #[serde(default, with = "git1::polytope::qvec")]
    pub anchor_positions: Vec<Q>,
}

pub fn coordinatized_from_json(s: &str) -> Result<CoordinatizedCurve, FfError> {
    let mut cc: CoordinatizedCurve =
        serde_json::from_str(s).map_err(|e| FfError::Curve(CurveError::Malformed(e.to_string())))?;
    cc.base = validate_curve(cc.base)?;
    check_coordinates(&cc)?;
    Ok(cc)
}

/// Where each mark and each tail lives.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub kind: CoreKind,
    pub m: usize,
    pub n: usize,
    pub ncomp: usize,
    pub comp_of: BTreeMap<usize, usize>,
    /// Per tail: the core component it is attached to.
    pub tail_base: Vec<usize>,
}

impl Geometry {
    pub fn of(c: &Curve) -> Result<Geometry, FfError> {
        let m = match c.core {
            CoreKind::Fold(m) | CoreKind::Ngon(m) => m,
            CoreKind::Smooth => return Err(FfError::NotRealizable("smooth core".into())),
        };
        let mut comp_of = BTreeMap::new();
        for (k, ms) in c.core_marks.iter().enumerate() {
            for &j in ms {
                comp_of.insert(j, k);
            }
        }
        let mut tail_base = Vec::new();
        for (t, tail) in c.tails.iter().enumerate() {
            let Anchor::Smooth { component } = tail.anchor else {
                return Err(FfError::NotRealizable(format!("tail {t} is not at a smooth core point")));
            };
            if tail.components.len() != 1 {
                return Err(FfError::NotRealizable(format!("tail {t} has more than one component")));
            }
            for &j in &tail.components[0] {
                comp_of.insert(j, m + t);
            }
            tail_base.push(component);
        }
        Ok(Geometry { kind: c.core, m, n: c.n, ncomp: m + c.tails.len(), comp_of, tail_base })
    }

    pub fn is_core_mark(&self, j: usize) -> bool {
        self.comp_of[&j] < self.m
    }

    pub fn is_fold(&self) -> bool {
        self.kind.is_fold()
    }

    pub fn marks_on(&self, comp: usize) -> Vec<usize> {
        self.comp_of.iter().filter(|(_, &c)| c == comp).map(|(&j, _)| j).collect()
    }

    pub fn tails_on(&self, k: usize) -> Vec<usize> {
        (0..self.tail_base.len()).filter(|&t| self.tail_base[t] == k).collect()
    }
}

pub fn is_realizable(c: &Curve) -> bool {
    Geometry::of(c).is_ok()
}

/// Check that positions avoid each other and the special points.
pub fn check_coordinates(cc: &CoordinatizedCurve) -> Result<(), FfError> {
    let g = Geometry::of(&cc.base)?;
    if cc.anchor_positions.len() != cc.base.tails.len() {
        return Err(FfError::MissingParameter("anchor position", cc.base.tails.len()));
    }
    for j in 1..=g.n {
        cc.positions.get(&j).ok_or(FfError::MissingParameter("position", j))?;
        let x = cc.scalings.get(&j).ok_or(FfError::MissingParameter("scaling", j))?;
        if x.is_zero() {
            return Err(FfError::ZeroScaling(j));
        }
    }
    for comp in 0..g.ncomp {
        let mut pts: Vec<(String, Q)> = g.marks_on(comp).iter().map(|j| (format!("mark {j}"), cc.positions[j].clone())).collect();
        if comp < g.m {
            for t in g.tails_on(comp) {
                pts.push((format!("tail {t}"), cc.anchor_positions[t].clone()));
            }
            if g.is_fold() {
                pts.push(("singular point".into(), Q::zero()));
            } else {
                pts.push(("node".into(), Q::one()));
                pts.push(("node".into(), -Q::one()));
            }
        } else {
            pts.push(("attaching point".into(), Q::zero()));
        }
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if pts[a].1 == pts[b].1 {
                    return Err(FfError::PositionClash(format!(
                        "{} and {} at {} on component {comp}",
                        pts[a].0,
                        pts[b].0,
                        fmt_q(&pts[a].1)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Draw positions, scalings and anchor positions at random.
pub fn random_coordinatization<R: Rng>(c: &Curve, rng: &mut R) -> Result<CoordinatizedCurve, FfError> {
    let g = Geometry::of(c)?;
    let mut positions = BTreeMap::new();
    let mut scalings = BTreeMap::new();
    let mut anchor_positions = vec![Q::zero(); c.tails.len()];
    for comp in 0..g.ncomp {
        let mut used: BTreeSet<Q> = BTreeSet::new();
        used.insert(Q::zero());
        if comp < g.m && !g.is_fold() {
            used.insert(Q::one());
            used.insert(-Q::one());
        }
        let mut draw = |rng: &mut R| loop {
            let v = random_nonzero_q(rng, 12, 7);
            if used.insert(v.clone()) {
                break v;
            }
        };
        for j in g.marks_on(comp) {
            positions.insert(j, draw(rng));
        }
        if comp < g.m {
            for t in g.tails_on(comp) {
                anchor_positions[t] = draw(rng);
            }
        }
    }
    for j in 1..=g.n {
        scalings.insert(j, random_nonzero_q(rng, 9, 5));
    }
    let cc = CoordinatizedCurve { base: c.clone(), positions, scalings, anchor_positions };
    check_coordinates(&cc)?;
    Ok(cc)
}

/// Parameter values used to build the tables, either numbers or variables.
#[derive(Debug, Clone)]
pub struct Setting {
    pub curve: Curve,
    pub geometry: Geometry,
    pub pos: BTreeMap<usize, Sym>,
    pub scale: BTreeMap<usize, Sym>,
    pub anchor: Vec<Sym>,
    /// Names of variables `1..`; variable 0 is the coordinate.
    pub names: Vec<String>,
}

impl Setting {
    pub fn numeric(cc: &CoordinatizedCurve) -> Result<Setting, FfError> {
        check_coordinates(cc)?;
        Ok(Setting {
            curve: cc.base.clone(),
            geometry: Geometry::of(&cc.base)?,
            pos: cc.positions.iter().map(|(&j, v)| (j, Sym::q(v.clone()))).collect(),
            scale: cc.scalings.iter().map(|(&j, v)| (j, Sym::q(v.clone()))).collect(),
            anchor: cc.anchor_positions.iter().map(|v| Sym::q(v.clone())).collect(),
            names: vec!["w".into()],
        })
    }

    /// Every position, scaling and anchor position is an indeterminate.
    pub fn symbolic(c: &Curve) -> Result<Setting, FfError> {
        let geometry = Geometry::of(c)?;
        let mut names = vec!["w".to_string()];
        let mut fresh = |name: String| {
            names.push(name);
            Sym::var(names.len() - 1)
        };
        let mut pos = BTreeMap::new();
        let mut scale = BTreeMap::new();
        for j in 1..=c.n {
            pos.insert(j, fresh(format!("mu{j}")));
            scale.insert(j, fresh(format!("x{j}")));
        }
        let anchor = (0..c.tails.len()).map(|t| fresh(format!("alpha{t}"))).collect();
        Ok(Setting { curve: c.clone(), geometry, pos, scale, anchor, names })
    }

    pub fn is_symbolic(&self) -> bool {
        self.names.len() > 1
    }

    pub fn render(&self, s: &Sym) -> String {
        s.render(&|i| self.names.get(i).cloned().unwrap_or_else(|| format!("t{i}")))
    }

    pub fn describe(&self) -> String {
        if self.is_symbolic() {
            return "symbolic".into();
        }
        let mut parts = Vec::new();
        for j in 1..=self.geometry.n {
            parts.push(format!("mu{j}={} x{j}={}", self.pos[&j], self.scale[&j]));
        }
        for (t, a) in self.anchor.iter().enumerate() {
            parts.push(format!("alpha{t}={a}"));
        }
        parts.join(" ")
    }
}
