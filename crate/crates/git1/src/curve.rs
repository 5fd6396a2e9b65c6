//! Combinatorial model of pointed genus-1 curves through their fundamental
//! decomposition: a minimal elliptic core with trees of rational tails.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type Marks = BTreeSet<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreKind {
    Smooth,
    Ngon(usize),
    Fold(usize),
}

impl CoreKind {
    pub fn components(self) -> usize {
        match self {
            CoreKind::Smooth => 1,
            CoreKind::Ngon(m) | CoreKind::Fold(m) => m,
        }
    }

    pub fn is_fold(self) -> bool {
        matches!(self, CoreKind::Fold(_))
    }
}

#[derive(Serialize, Deserialize)]
struct CoreRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
}

impl Serialize for CoreKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = match *self {
            CoreKind::Smooth => CoreRepr { kind: "smooth".into(), m: None },
            CoreKind::Ngon(m) => CoreRepr { kind: "ngon".into(), m: Some(m) },
            CoreKind::Fold(m) => CoreRepr { kind: "fold".into(), m: Some(m) },
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoreKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = CoreRepr::deserialize(d)?;
        match (r.kind.as_str(), r.m) {
            ("smooth", _) => Ok(CoreKind::Smooth),
            ("ngon", Some(m)) => Ok(CoreKind::Ngon(m)),
            ("fold", Some(m)) => Ok(CoreKind::Fold(m)),
            (k, None) => Err(D::Error::custom(format!("core kind {k} needs m"))),
            (k, _) => Err(D::Error::custom(format!("unknown core kind {k}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Anchor {
    /// A smooth point of core component `component`.
    Smooth { component: usize },
    /// The singular point of a Fold core.
    Singular,
    /// The node joining core components `component` and `component + 1` (cyclically).
    Node { component: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AnchorTag {
    Anchor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Base {
    Component(usize),
    #[serde(with = "anchor_tag")]
    Anchor,
}

mod anchor_tag {
    use super::AnchorTag;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        AnchorTag::Anchor.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        AnchorTag::deserialize(d).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Joint {
    pub base: Base,
    pub attached: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tail {
    pub anchor: Anchor,
    pub components: Vec<Marks>,
    pub joints: Vec<Joint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    pub n: usize,
    pub core: CoreKind,
    pub core_marks: Vec<Marks>,
    #[serde(default)]
    pub tails: Vec<Tail>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_unmarked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CompId {
    Core(usize),
    Tail(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("component {0:?} carries no mark")]
    UnmarkedComponent(CompId),
    #[error("mark {0} appears more than once")]
    DuplicateMark(usize),
    #[error("mark {0} is outside [1, n]")]
    MarkOutOfRange(usize),
    #[error("mark {0} is missing")]
    MissingMark(usize),
    #[error("two tails anchor at the same core point {0:?}")]
    AnchorClash(Anchor),
    #[error("singularity bound exceeded: {0}")]
    SingularityBoundExceeded(String),
    #[error("bad anchor {0:?} for this core")]
    BadAnchor(Anchor),
    #[error("malformed curve: {0}")]
    Malformed(String),
    #[error("enumeration budget of {0} classes exceeded")]
    BudgetExceeded(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SpecialCounts {
    pub on_component: usize,
    pub on_normalization: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    #[serde(rename = "I")]
    pub i: Marks,
    #[serde(rename = "J")]
    pub j: Marks,
    #[serde(rename = "I0")]
    pub i0: Marks,
}

/// Parse a JSON description and validate it.
pub fn curve_from_json(s: &str) -> Result<Curve, CurveError> {
    let raw: Curve = serde_json::from_str(s).map_err(|e| CurveError::Malformed(e.to_string()))?;
    validate_curve(raw)
}

pub fn validate_curve(c: Curve) -> Result<Curve, CurveError> {
    let k = c.core.components();
    if k == 0 {
        return Err(CurveError::Malformed("core needs m >= 1".into()));
    }
    if c.n == 0 {
        return Err(CurveError::Malformed("n must be positive".into()));
    }
    if c.core_marks.len() != k {
        return Err(CurveError::Malformed(format!(
            "core has {} components but {} mark lists",
            k,
            c.core_marks.len()
        )));
    }
    let mut seen = BTreeSet::new();
    let mut see = |m: usize| -> Result<(), CurveError> {
        if m == 0 || m > c.n {
            return Err(CurveError::MarkOutOfRange(m));
        }
        if !seen.insert(m) {
            return Err(CurveError::DuplicateMark(m));
        }
        Ok(())
    };
    for (ci, ms) in c.core_marks.iter().enumerate() {
        for &m in ms {
            see(m)?;
        }
        if ms.is_empty() && !c.allow_unmarked {
            return Err(CurveError::UnmarkedComponent(CompId::Core(ci)));
        }
    }
    for (ti, t) in c.tails.iter().enumerate() {
        for (cj, ms) in t.components.iter().enumerate() {
            for &m in ms {
                see(m)?;
            }
            if ms.is_empty() && !c.allow_unmarked {
                return Err(CurveError::UnmarkedComponent(CompId::Tail(ti, cj)));
            }
        }
    }
    if !c.allow_unmarked {
        if let Some(m) = (1..=c.n).find(|m| !seen.contains(m)) {
            return Err(CurveError::MissingMark(m));
        }
    }
    let mut used = BTreeSet::new();
    for t in &c.tails {
        match (t.anchor, c.core) {
            (Anchor::Smooth { component }, _) if component < k => {}
            (Anchor::Singular, CoreKind::Fold(_)) => {}
            (Anchor::Node { component }, CoreKind::Ngon(m)) if component < m => {}
            (a, _) => return Err(CurveError::BadAnchor(a)),
        }
        if !matches!(t.anchor, Anchor::Smooth { .. }) && !used.insert(t.anchor) {
            return Err(CurveError::AnchorClash(t.anchor));
        }
        check_tail_shape(t)?;
    }
    check_singularities(&c)?;
    Ok(c)
}

fn check_tail_shape(t: &Tail) -> Result<(), CurveError> {
    let nc = t.components.len();
    if nc == 0 {
        return Err(CurveError::Malformed("tail without components".into()));
    }
    let mut parent: Vec<Option<Base>> = vec![None; nc];
    let mut anchor_joints = 0;
    for j in &t.joints {
        if j.attached.is_empty() {
            return Err(CurveError::Malformed("joint with nothing attached".into()));
        }
        match j.base {
            Base::Anchor => anchor_joints += 1,
            Base::Component(b) if b >= nc => {
                return Err(CurveError::Malformed(format!("joint base {b} out of range")))
            }
            _ => {}
        }
        for &a in &j.attached {
            if a >= nc {
                return Err(CurveError::Malformed(format!("attached component {a} out of range")));
            }
            if parent[a].is_some() {
                return Err(CurveError::Malformed(format!("component {a} attached twice")));
            }
            parent[a] = Some(j.base);
        }
    }
    if anchor_joints != 1 {
        return Err(CurveError::Malformed("a tail needs exactly one joint at its anchor".into()));
    }
    for c in 0..nc {
        let mut cur = c;
        let mut steps = 0;
        loop {
            match parent[cur] {
                None => return Err(CurveError::Malformed(format!("component {c} is not attached"))),
                Some(Base::Anchor) => break,
                Some(Base::Component(p)) => {
                    cur = p;
                    steps += 1;
                    if steps > nc {
                        return Err(CurveError::Malformed("cycle among tail components".into()));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_singularities(c: &Curve) -> Result<(), CurveError> {
    let n = c.n;
    let bound = |kind: &str, branches: usize, max: usize| {
        if branches > max {
            Err(CurveError::SingularityBoundExceeded(format!(
                "{kind} point with {branches} branches, at most {max} allowed"
            )))
        } else {
            Ok(())
        }
    };
    let singular_tail = c
        .tails
        .iter()
        .find(|t| t.anchor == Anchor::Singular)
        .map(|t| anchor_joint(t).attached.len())
        .unwrap_or(0);
    if let CoreKind::Fold(m) = c.core {
        if singular_tail == 0 {
            bound("elliptic", m, n)?;
        } else {
            bound("elliptic+rational", m + singular_tail, n)?;
        }
    }
    for t in &c.tails {
        for j in &t.joints {
            let here = j.attached.len();
            match (j.base, t.anchor) {
                (Base::Anchor, Anchor::Singular) => {}
                (Base::Anchor, Anchor::Node { .. }) => bound("rational", 2 + here, n + 1)?,
                _ => bound("rational", 1 + here, n + 1)?,
            }
        }
    }
    Ok(())
}

pub fn anchor_joint(t: &Tail) -> &Joint {
    t.joints.iter().find(|j| j.base == Base::Anchor).expect("validated tail")
}

impl Curve {
    pub fn full(n: usize, core: CoreKind, core_marks: Vec<Vec<usize>>, tails: Vec<Tail>) -> Result<Curve, CurveError> {
        validate_curve(Curve {
            n,
            core,
            core_marks: core_marks.into_iter().map(|v| v.into_iter().collect()).collect(),
            tails,
            allow_unmarked: false,
        })
    }

    pub fn components(&self) -> Vec<CompId> {
        let mut v: Vec<CompId> = (0..self.core_marks.len()).map(CompId::Core).collect();
        for (ti, t) in self.tails.iter().enumerate() {
            v.extend((0..t.components.len()).map(|c| CompId::Tail(ti, c)));
        }
        v
    }

    pub fn marks_of(&self, id: CompId) -> &Marks {
        match id {
            CompId::Core(k) => &self.core_marks[k],
            CompId::Tail(t, c) => &self.tails[t].components[c],
        }
    }

    pub fn location_of(&self, mark: usize) -> Option<CompId> {
        self.components().into_iter().find(|&id| self.marks_of(id).contains(&mark))
    }

    pub fn core_mark_set(&self) -> Marks {
        self.core_marks.iter().flatten().copied().collect()
    }

    fn smooth_anchors_on(&self, k: usize) -> usize {
        self.tails.iter().filter(|t| t.anchor == Anchor::Smooth { component: k }).count()
    }

    pub fn special_counts(&self, id: CompId) -> SpecialCounts {
        let marks = self.marks_of(id).len();
        match id {
            CompId::Core(k) => {
                let anchors = self.smooth_anchors_on(k);
                let (on_c, on_n) = match self.core {
                    CoreKind::Smooth => (0, 0),
                    CoreKind::Ngon(1) => (1, 2),
                    CoreKind::Ngon(_) => (2, 2),
                    CoreKind::Fold(_) => (1, 1),
                };
                SpecialCounts { on_component: marks + anchors + on_c, on_normalization: marks + anchors + on_n }
            }
            CompId::Tail(t, c) => {
                let joints = self.tails[t].joints.iter().filter(|j| j.base == Base::Component(c)).count();
                let s = marks + 1 + joints;
                SpecialCounts { on_component: s, on_normalization: s }
            }
        }
    }
}

pub fn special_point_counts(c: &Curve) -> Vec<(CompId, SpecialCounts)> {
    c.components().into_iter().map(|id| (id, c.special_counts(id))).collect()
}

pub fn stability_index_sets(c: &Curve) -> IndexSets {
    let i = c.core_mark_set();
    let mut j = Marks::new();
    for (ti, t) in c.tails.iter().enumerate() {
        for (ci, ms) in t.components.iter().enumerate() {
            if c.special_counts(CompId::Tail(ti, ci)).on_component >= 3 {
                j.extend(ms.iter().copied());
            }
        }
    }
    let mut i0 = Marks::new();
    if c.core.is_fold() {
        for (k, ms) in c.core_marks.iter().enumerate() {
            if c.special_counts(CompId::Core(k)).on_component == 2 {
                i0.extend(ms.iter().copied());
            }
        }
    }
    IndexSets { i, j, i0 }
}

// ---------------------------------------------------------------------------
// canonical form

/// Rooted tree view of a tail component and everything hanging off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub marks: Marks,
    pub joints: Vec<Vec<Branch>>,
}

pub fn tail_tree(t: &Tail) -> Vec<Branch> {
    fn build(t: &Tail, c: usize) -> Branch {
        let joints = t
            .joints
            .iter()
            .filter(|j| j.base == Base::Component(c))
            .map(|j| j.attached.iter().map(|&a| build(t, a)).collect())
            .collect();
        Branch { marks: t.components[c].clone(), joints }
    }
    anchor_joint(t).attached.iter().map(|&a| build(t, a)).collect()
}

pub fn tail_from_tree(anchor: Anchor, roots: &[Branch]) -> Tail {
    fn push(b: &Branch, comps: &mut Vec<Marks>, joints: &mut Vec<Joint>) -> usize {
        let id = comps.len();
        comps.push(b.marks.clone());
        for j in &b.joints {
            let attached = j.iter().map(|c| push(c, comps, joints)).collect();
            joints.push(Joint { base: Base::Component(id), attached });
        }
        id
    }
    let mut comps = Vec::new();
    let mut joints = Vec::new();
    let attached = roots.iter().map(|b| push(b, &mut comps, &mut joints)).collect();
    joints.insert(0, Joint { base: Base::Anchor, attached });
    Tail { anchor, components: comps, joints }
}

fn marks_str(m: &Marks) -> String {
    m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn branch_key(b: &Branch) -> String {
    let mut js: Vec<String> = b.joints.iter().map(|j| joint_key(j)).collect();
    js.sort();
    format!("({};{})", marks_str(&b.marks), js.concat())
}

fn joint_key(j: &[Branch]) -> String {
    let mut bs: Vec<String> = j.iter().map(branch_key).collect();
    bs.sort();
    format!("[{}]", bs.concat())
}

fn tail_key(t: &Tail) -> String {
    joint_key(&tail_tree(t))
}

fn core_component_key(c: &Curve, k: usize) -> String {
    let mut ts: Vec<String> = c
        .tails
        .iter()
        .filter(|t| t.anchor == Anchor::Smooth { component: k })
        .map(tail_key)
        .collect();
    ts.sort();
    format!("<{}|{}>", marks_str(&c.core_marks[k]), ts.concat())
}

/// A string that is equal for two curves exactly when they are isomorphic
/// as labeled curves.
pub fn canonical_form(c: &Curve) -> String {
    let special = |a: Anchor| -> String {
        c.tails.iter().find(|t| t.anchor == a).map(tail_key).unwrap_or_default()
    };
    let body = match c.core {
        CoreKind::Smooth => core_component_key(c, 0),
        CoreKind::Fold(m) => {
            let mut ks: Vec<String> = (0..m).map(|k| core_component_key(c, k)).collect();
            ks.sort();
            format!("{}@{}", ks.concat(), special(Anchor::Singular))
        }
        CoreKind::Ngon(m) => {
            let mut tokens = Vec::with_capacity(2 * m);
            for k in 0..m {
                tokens.push(core_component_key(c, k));
                tokens.push(format!("{{{}}}", special(Anchor::Node { component: k })));
            }
            let mut rev: Vec<String> = tokens.iter().rev().cloned().collect();
            rev.rotate_left(1);
            let mut best: Option<Vec<String>> = None;
            for seq in [&tokens, &rev] {
                for r in (0..2 * m).step_by(2) {
                    let mut s = seq.clone();
                    s.rotate_left(r);
                    if best.as_ref().map_or(true, |b| s < *b) {
                        best = Some(s);
                    }
                }
            }
            best.unwrap().concat()
        }
    };
    let kind = match c.core {
        CoreKind::Smooth => "S".to_string(),
        CoreKind::Ngon(m) => format!("N{m}"),
        CoreKind::Fold(m) => format!("F{m}"),
    };
    format!("n{}:{}:{}", c.n, kind, body)
}

// ---------------------------------------------------------------------------
// enumeration

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub allow_unmarked: bool,
    pub max_core_m: usize,
    pub max_tail_components: usize,
    /// Only binary joints and smooth-point anchors.
    pub nodal_tails: bool,
    /// Every tail component has at least three special points.
    pub stable_tails: bool,
    pub max_unmarked: usize,
    pub budget: usize,
}

pub const DEFAULT_BUDGET: usize = 2_000_000;

pub fn budget_from_env() -> usize {
    std::env::var("GIT1_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

impl EnumOptions {
    pub fn defaults(n: usize) -> Self {
        EnumOptions {
            allow_unmarked: false,
            max_core_m: n,
            max_tail_components: n,
            nodal_tails: false,
            stable_tails: false,
            max_unmarked: 0,
            budget: budget_from_env(),
        }
    }
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let mut out = Vec::new();
    for p in set_partitions(&items[1..]) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0u32..(1 << items.len()))
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &x)| x).collect())
        .collect()
}

struct Gen<'a> {
    o: &'a EnumOptions,
}

/// (tree, components used, unmarked used)
type Grown<T> = Vec<(T, usize, usize)>;

impl Gen<'_> {
    fn joint(&self, marks: &[usize], budget: usize, unmarked: usize) -> Grown<Vec<Branch>> {
        let mut out = Vec::new();
        for part in set_partitions(marks) {
            if self.o.nodal_tails && part.len() != 1 {
                continue;
            }
            if part.len() > budget {
                continue;
            }
            let mut acc: Grown<Vec<Branch>> = vec![(Vec::new(), 0, 0)];
            for block in &part {
                let mut next = Vec::new();
                for (bs, used, un) in &acc {
                    if *used >= budget {
                        continue;
                    }
                    for (b, u2, n2) in self.branch(block, budget - used, unmarked - un) {
                        let mut v = bs.clone();
                        v.push(b);
                        next.push((v, used + u2, un + n2));
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
        out
    }

    fn branch(&self, marks: &[usize], budget: usize, unmarked: usize) -> Grown<Branch> {
        let mut out = Vec::new();
        if budget == 0 {
            return out;
        }
        for own in subsets(marks) {
            let is_unmarked = own.is_empty();
            if is_unmarked && (!self.o.allow_unmarked || unmarked == 0) {
                continue;
            }
            let rest: Vec<usize> = marks.iter().copied().filter(|m| !own.contains(m)).collect();
            let un_here = usize::from(is_unmarked);
            for part in set_partitions(&rest) {
                if self.o.stable_tails && own.len() + 1 + part.len() < 3 {
                    continue;
                }
                let mut acc: Grown<Vec<Vec<Branch>>> = vec![(Vec::new(), 1, un_here)];
                for block in &part {
                    let mut next = Vec::new();
                    for (js, used, un) in &acc {
                        if *used >= budget {
                            continue;
                        }
                        for (j, u2, n2) in self.joint(block, budget - used, unmarked - un) {
                            let mut v = js.clone();
                            v.push(j);
                            next.push((v, used + u2, un + n2));
                        }
                    }
                    acc = next;
                }
                for (js, used, un) in acc {
                    out.push((Branch { marks: own.iter().copied().collect(), joints: js }, used, un));
                }
            }
        }
        out
    }
}

fn core_kinds(o: &EnumOptions) -> Vec<CoreKind> {
    let mut v = vec![CoreKind::Smooth];
    v.extend((1..=o.max_core_m).map(CoreKind::Ngon));
    v.extend((1..=o.max_core_m).map(CoreKind::Fold));
    v
}

/// All isomorphism classes allowed by the options, sorted by canonical form.
pub fn enumerate_curves(n: usize, o: &EnumOptions) -> Result<Vec<Curve>, CurveError> {
    let mut found: BTreeMap<String, Curve> = BTreeMap::new();
    let g = Gen { o };
    for core in core_kinds(o) {
        let k = core.components();
        let slots = k + 1;
        let total = slots.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut core_marks = vec![Marks::new(); k];
            let mut pool = Vec::new();
            for m in 1..=n {
                let s = c % slots;
                c /= slots;
                if s < k {
                    core_marks[s].insert(m);
                } else {
                    pool.push(m);
                }
            }
            let core_unmarked = core_marks.iter().filter(|m| m.is_empty()).count();
            if core_unmarked > 0 && (!o.allow_unmarked || core_unmarked > o.max_unmarked) {
                continue;
            }
            if core_unmarked == k && pool.is_empty() {
                continue;
            }
            let un_left = o.max_unmarked.saturating_sub(core_unmarked);
            for part in set_partitions(&pool) {
                // grow each tail independently, then combine under the budgets
                let mut acc: Grown<Vec<Vec<Branch>>> = vec![(Vec::new(), 0, 0)];
                for block in &part {
                    let mut next = Vec::new();
                    for (ts, used, un) in &acc {
                        if *used >= o.max_tail_components {
                            continue;
                        }
                        let budget = o.max_tail_components - used;
                        let un_avail = if o.allow_unmarked { un_left - un } else { 0 };
                        for (t, u2, n2) in g.joint(block, budget, un_avail) {
                            let mut v = ts.clone();
                            v.push(t);
                            next.push((v, used + u2, un + n2));
                        }
                    }
                    acc = next;
                }
                let anchors = anchor_choices(core, o);
                for (trees, _, _) in acc {
                    assign_anchors(&trees, &anchors, &mut Vec::new(), &mut |assign| {
                        let tails: Vec<Tail> =
                            trees.iter().zip(assign).map(|(t, &a)| tail_from_tree(a, t)).collect();
                        let cand = Curve {
                            n,
                            core,
                            core_marks: core_marks.clone(),
                            tails,
                            allow_unmarked: o.allow_unmarked,
                        };
                        if let Ok(cv) = validate_curve(cand) {
                            found.entry(canonical_form(&cv)).or_insert(cv);
                        }
                    });
                    if found.len() > o.budget {
                        return Err(CurveError::BudgetExceeded(o.budget));
                    }
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

fn anchor_choices(core: CoreKind, o: &EnumOptions) -> Vec<Anchor> {
    let mut v: Vec<Anchor> = (0..core.components()).map(|k| Anchor::Smooth { component: k }).collect();
    if !o.nodal_tails {
        match core {
            CoreKind::Fold(_) => v.push(Anchor::Singular),
            CoreKind::Ngon(m) => v.extend((0..m).map(|k| Anchor::Node { component: k })),
            CoreKind::Smooth => {}
        }
    }
    v
}

fn assign_anchors(trees: &[Vec<Branch>], choices: &[Anchor], cur: &mut Vec<Anchor>, f: &mut dyn FnMut(&[Anchor])) {
    if cur.len() == trees.len() {
        f(cur);
        return;
    }
    for &a in choices {
        if !matches!(a, Anchor::Smooth { .. }) && cur.contains(&a) {
            continue;
        }
        cur.push(a);
        assign_anchors(trees, choices, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: &[usize]) -> Marks {
        v.iter().copied().collect()
    }

    #[test]
    fn json_shape() {
        let s = r#"{"n":3,"core":{"kind":"fold","m":2},"core_marks":[[1],[2]],
            "tails":[{"anchor":{"type":"smooth","component":0},"components":[[3]],
            "joints":[{"base":"anchor","attached":[0]}]}]}"#;
        let c = curve_from_json(s).unwrap();
        assert_eq!(c.core, CoreKind::Fold(2));
        let back = serde_json::to_string(&c).unwrap();
        assert_eq!(curve_from_json(&back).unwrap(), c);
    }

    #[test]
    fn unmarked_tail_rejected() {
        let t = Tail {
            anchor: Anchor::Smooth { component: 0 },
            components: vec![Marks::new()],
            joints: vec![Joint { base: Base::Anchor, attached: ms(&[0]) }],
        };
        let err = Curve::full(2, CoreKind::Smooth, vec![vec![1]], vec![t]).unwrap_err();
        assert_eq!(err, CurveError::UnmarkedComponent(CompId::Tail(0, 0)));
    }

    #[test]
    fn anchor_errors() {
        let t = |a| Tail {
            anchor: a,
            components: vec![ms(&[2])],
            joints: vec![Joint { base: Base::Anchor, attached: ms(&[0]) }],
        };
        let e = Curve::full(2, CoreKind::Smooth, vec![vec![1]], vec![t(Anchor::Singular)]).unwrap_err();
        assert!(matches!(e, CurveError::BadAnchor(_)));
        let e = Curve::full(2, CoreKind::Fold(1), vec![vec![1]], vec![t(Anchor::Node { component: 0 })]).unwrap_err();
        assert!(matches!(e, CurveError::BadAnchor(_)));
        let mut t2 = t(Anchor::Node { component: 0 });
        t2.components[0] = ms(&[3]);
        let e = Curve::full(3, CoreKind::Ngon(1), vec![vec![1]], vec![t(Anchor::Node { component: 0 }), t2])
            .unwrap_err();
        assert!(matches!(e, CurveError::AnchorClash(_)));
    }

    #[test]
    fn duplicate_mark() {
        let e = Curve::full(2, CoreKind::Fold(2), vec![vec![1], vec![1, 2]], vec![]).unwrap_err();
        assert_eq!(e, CurveError::DuplicateMark(1));
    }

    #[test]
    fn counts_examples() {
        let c = Curve::full(2, CoreKind::Ngon(1), vec![vec![1, 2]], vec![]).unwrap();
        assert_eq!(c.special_counts(CompId::Core(0)), SpecialCounts { on_component: 3, on_normalization: 4 });
        let c = Curve::full(3, CoreKind::Fold(3), vec![vec![1], vec![2], vec![3]], vec![]).unwrap();
        for k in 0..3 {
            assert_eq!(c.special_counts(CompId::Core(k)).on_component, 2);
        }
    }

    #[test]
    fn set_partition_counts() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (k, &b) in bell.iter().enumerate() {
            let items: Vec<usize> = (0..k).collect();
            assert_eq!(set_partitions(&items).len(), b);
        }
    }
}
