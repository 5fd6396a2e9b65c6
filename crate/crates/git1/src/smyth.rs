//! Smyth m-stability, the extremal-assignment stability, contraction of
//! unmarked components and the inclusion checks into the semistable loci.

use crate::curve::{
    anchor_joint, canonical_form, enumerate_curves, tail_from_tree, validate_curve, Anchor, Base, Branch, CompId,
    CoreKind, Curve, CurveError, EnumOptions, Marks,
};
use crate::lp::{Lp, Rel};
use crate::curve::stability_index_sets;
use crate::polytope::{verdict, Character};
use crate::rational::{fmt_q, qf, Q};
use num_traits::{One, Signed};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmythError {
    #[error("curve is not a valid m-stability input: {0}")]
    InvalidForMStability(String),
    #[error("contraction changed the arithmetic genus to {0}")]
    GenusLost(i64),
    #[error("contraction produced an invalid curve: {0}")]
    BadImage(CurveError),
    #[error("character violates the hypothesis of this mode: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Every rational component has at least three special points on its
/// normalization; a smooth core is exempt.
pub fn is_zu_stable(c: &Curve) -> bool {
    c.components().into_iter().all(|id| match (id, c.core) {
        (CompId::Core(_), CoreKind::Smooth) => true,
        _ => c.special_counts(id).on_normalization >= 3,
    })
}

fn check_nodal_tails(c: &Curve) -> Result<(), SmythError> {
    for t in &c.tails {
        if !matches!(t.anchor, Anchor::Smooth { .. }) {
            return Err(SmythError::InvalidForMStability(format!("tail anchored at {:?}", t.anchor)));
        }
        if t.joints.iter().any(|j| j.attached.len() != 1) {
            return Err(SmythError::InvalidForMStability("tail with a non-nodal joint".into()));
        }
    }
    Ok(())
}

/// No infinitesimal automorphisms, for curves that may have unmarked
/// components.
pub fn no_infinitesimal_autos(c: &Curve) -> bool {
    let rational_ok = c.components().into_iter().all(|id| match (id, c.core) {
        (CompId::Core(_), CoreKind::Smooth) => c.special_counts(id).on_component >= 1,
        (CompId::Core(_), CoreKind::Fold(_)) => c.special_counts(id).on_component >= 2,
        _ => c.special_counts(id).on_normalization >= 3,
    });
    let fold_ok = match c.core {
        CoreKind::Fold(m) => (0..m).any(|k| c.special_counts(CompId::Core(k)).on_component >= 3),
        _ => true,
    };
    rational_ok && fold_ok
}

pub fn level(c: &Curve) -> usize {
    c.tails.len() + c.core_mark_set().len()
}

pub fn is_m_stable(c: &Curve, m: usize) -> Result<bool, SmythError> {
    check_nodal_tails(c)?;
    if let CoreKind::Fold(k) = c.core {
        if k > m {
            return Ok(false);
        }
    }
    Ok(level(c) > m && no_infinitesimal_autos(c))
}

// ---------------------------------------------------------------------------
// contraction

#[derive(Debug, Clone)]
struct NetPoint {
    ell: Vec<usize>,
    rat: Vec<usize>,
}

impl NetPoint {
    fn all(&self) -> impl Iterator<Item = usize> + '_ {
        self.ell.iter().chain(self.rat.iter()).copied()
    }

    fn delta(&self) -> i64 {
        if self.ell.is_empty() {
            self.rat.len() as i64 - 1
        } else {
            (self.ell.len() + self.rat.len()) as i64
        }
    }
}

/// Components and the singular points joining them.
#[derive(Debug, Clone)]
struct Net {
    marks: Vec<Marks>,
    genus1: Vec<bool>,
    core: Vec<usize>,
    points: Vec<NetPoint>,
}

impl Net {
    fn from_curve(c: &Curve) -> Net {
        let k = c.core_marks.len();
        let mut marks: Vec<Marks> = c.core_marks.clone();
        let mut offsets = Vec::new();
        for t in &c.tails {
            offsets.push(marks.len());
            marks.extend(t.components.iter().cloned());
        }
        let genus1 = (0..marks.len()).map(|i| i == 0 && c.core == CoreKind::Smooth).collect();
        let mut points = Vec::new();
        let tail_at = |a: Anchor| -> Vec<usize> {
            c.tails
                .iter()
                .zip(&offsets)
                .find(|(t, _)| t.anchor == a)
                .map(|(t, &o)| anchor_joint(t).attached.iter().map(|x| x + o).collect())
                .unwrap_or_default()
        };
        match c.core {
            CoreKind::Smooth => {}
            CoreKind::Ngon(m) => {
                for i in 0..m {
                    let mut rat = vec![i, (i + 1) % m];
                    rat.extend(tail_at(Anchor::Node { component: i }));
                    points.push(NetPoint { ell: vec![], rat });
                }
            }
            CoreKind::Fold(m) => {
                points.push(NetPoint { ell: (0..m).collect(), rat: tail_at(Anchor::Singular) });
            }
        }
        for (t, &o) in c.tails.iter().zip(&offsets) {
            for j in &t.joints {
                let base = match (j.base, t.anchor) {
                    (Base::Component(b), _) => Some(b + o),
                    (Base::Anchor, Anchor::Smooth { component }) => Some(component),
                    _ => None,
                };
                if let Some(b) = base {
                    let mut rat = vec![b];
                    rat.extend(j.attached.iter().map(|x| x + o));
                    points.push(NetPoint { ell: vec![], rat });
                }
            }
        }
        Net { marks, genus1, core: (0..k).collect(), points }
    }

    fn genus(&self) -> i64 {
        let g: i64 = self.genus1.iter().filter(|&&b| b).count() as i64;
        let d: i64 = self.points.iter().map(NetPoint::delta).sum();
        g + d - self.marks.len() as i64 + 1
    }

    fn contract(&self) -> Net {
        let nc = self.marks.len();
        let unmarked: Vec<bool> = self.marks.iter().map(|m| m.is_empty()).collect();
        // union-find on unmarked components sharing a point
        let mut parent: Vec<usize> = (0..nc).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for pt in &self.points {
            let us: Vec<usize> = pt.all().filter(|&c| unmarked[c]).collect();
            for w in us.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let mut clusters: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for c in 0..nc {
            if unmarked[c] {
                let r = find(&mut parent, c);
                clusters.entry(r).or_default().insert(c);
            }
        }
        let mut points: Vec<NetPoint> = Vec::new();
        let mut absorbed = vec![false; self.points.len()];
        for u in clusters.values() {
            let carries_genus = self.core.iter().all(|c| u.contains(c)) || u.iter().any(|&c| self.genus1[c]);
            let mut ell = Vec::new();
            let mut rat = Vec::new();
            for (pi, pt) in self.points.iter().enumerate() {
                if !pt.all().any(|c| u.contains(&c)) {
                    continue;
                }
                absorbed[pi] = true;
                for &c in &pt.ell {
                    if !unmarked[c] {
                        ell.push(c);
                    }
                }
                for &c in &pt.rat {
                    if !unmarked[c] {
                        if carries_genus { ell.push(c) } else { rat.push(c) }
                    }
                }
            }
            points.push(NetPoint { ell, rat });
        }
        for (pi, pt) in self.points.iter().enumerate() {
            if !absorbed[pi] {
                points.push(pt.clone());
            }
        }
        let keep: Vec<usize> = (0..nc).filter(|&c| !unmarked[c]).collect();
        let remap: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let points = points
            .into_iter()
            .map(|p| NetPoint {
                ell: p.ell.iter().map(|c| remap[c]).collect(),
                rat: p.rat.iter().map(|c| remap[c]).collect(),
            })
            .filter(|p| !p.ell.is_empty() || p.rat.len() >= 2)
            .collect();
        Net {
            marks: keep.iter().map(|&c| self.marks[c].clone()).collect(),
            genus1: keep.iter().map(|&c| self.genus1[c]).collect(),
            core: self.core.iter().filter_map(|c| remap.get(c).copied()).collect(),
            points,
        }
    }

    /// Read off the fundamental decomposition.
    fn to_curve(&self, n: usize) -> Result<Curve, SmythError> {
        let nc = self.marks.len();
        let bad = |s: &str| SmythError::InvalidForMStability(format!("cannot normalize: {s}"));
        let mut core_points: Vec<(usize, Anchor)> = Vec::new();
        let (core, core_comps): (CoreKind, Vec<usize>) = if let Some(c) = (0..nc).find(|&c| self.genus1[c]) {
            (CoreKind::Smooth, vec![c])
        } else if let Some(pi) = self.points.iter().position(|p| !p.ell.is_empty()) {
            core_points.push((pi, Anchor::Singular));
            (CoreKind::Fold(self.points[pi].ell.len()), self.points[pi].ell.clone())
        } else {
            let (comps, pts) = self.cycle().ok_or_else(|| bad("no cycle"))?;
            for (k, &p) in pts.iter().enumerate() {
                core_points.push((p, Anchor::Node { component: k }));
            }
            (CoreKind::Ngon(comps.len()), comps)
        };
        let core_index: BTreeMap<usize, usize> = core_comps.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut visited = vec![false; nc];
        for &c in &core_comps {
            visited[c] = true;
        }
        let mut used_point = vec![false; self.points.len()];
        let mut tails = Vec::new();
        for &(pi, anchor) in &core_points {
            used_point[pi] = true;
            let mut roots: Vec<usize> = Vec::new();
            let mut cycle_seen = BTreeMap::<usize, usize>::new();
            for c in self.points[pi].all() {
                if core_index.contains_key(&c) {
                    *cycle_seen.entry(c).or_default() += 1;
                } else {
                    roots.push(c);
                }
            }
            if !roots.is_empty() {
                let trees = self.grow(&roots, pi, &mut visited, &mut used_point)?;
                tails.push(tail_from_tree(anchor, &trees));
            }
        }
        for (k, &cc) in core_comps.iter().enumerate() {
            for (pi, p) in self.points.iter().enumerate() {
                if used_point[pi] || !p.all().any(|c| c == cc) {
                    continue;
                }
                used_point[pi] = true;
                let roots: Vec<usize> = p.all().filter(|&c| c != cc).collect();
                if roots.iter().any(|r| core_index.contains_key(r)) {
                    return Err(bad("two core components meet away from the core points"));
                }
                let trees = self.grow(&roots, pi, &mut visited, &mut used_point)?;
                tails.push(tail_from_tree(Anchor::Smooth { component: k }, &trees));
            }
        }
        if visited.iter().any(|v| !v) || used_point.iter().any(|u| !u) {
            return Err(bad("disconnected pieces"));
        }
        let c = Curve {
            n,
            core,
            core_marks: core_comps.iter().map(|&c| self.marks[c].clone()).collect(),
            tails,
            allow_unmarked: false,
        };
        validate_curve(c).map_err(SmythError::BadImage)
    }

    fn grow(
        &self,
        roots: &[usize],
        from: usize,
        visited: &mut Vec<bool>,
        used: &mut Vec<bool>,
    ) -> Result<Vec<Branch>, SmythError> {
        let mut out = Vec::new();
        for &r in roots {
            if visited[r] {
                return Err(SmythError::InvalidForMStability("tail components form a cycle".into()));
            }
            visited[r] = true;
            let mut joints = Vec::new();
            for (pi, p) in self.points.iter().enumerate() {
                if pi == from || used[pi] || !p.all().any(|c| c == r) {
                    continue;
                }
                used[pi] = true;
                let kids: Vec<usize> = p.all().filter(|&c| c != r).collect();
                joints.push(self.grow(&kids, pi, visited, used)?);
            }
            out.push(Branch { marks: self.marks[r].clone(), joints });
        }
        Ok(out)
    }

    /// The unique cycle of the incidence graph, as components and the points
    /// between consecutive ones.
    fn cycle(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let nc = self.marks.len();
        for (pi, p) in self.points.iter().enumerate() {
            let all: Vec<usize> = p.all().collect();
            for (a, &x) in all.iter().enumerate() {
                if all[a + 1..].contains(&x) {
                    return Some((vec![x], vec![pi]));
                }
            }
        }
        // prune leaves of the bipartite graph
        let np = self.points.len();
        let mut alive_c = vec![true; nc];
        let mut alive_p = vec![true; np];
        loop {
            let mut changed = false;
            for c in 0..nc {
                if alive_c[c] {
                    let deg = (0..np).filter(|&p| alive_p[p] && self.points[p].all().any(|x| x == c)).count();
                    if deg <= 1 {
                        alive_c[c] = false;
                        changed = true;
                    }
                }
            }
            for p in 0..np {
                if alive_p[p] {
                    let deg = self.points[p].all().filter(|&x| alive_c[x]).count();
                    if deg <= 1 {
                        alive_p[p] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let start = (0..nc).find(|&c| alive_c[c])?;
        let mut comps = vec![start];
        let mut pts = Vec::new();
        let mut cur = start;
        let mut prev_p: Option<usize> = None;
        loop {
            let p = (0..np).find(|&p| alive_p[p] && Some(p) != prev_p && self.points[p].all().any(|x| x == cur))?;
            let next = self.points[p].all().find(|&x| alive_c[x] && x != cur)?;
            pts.push(p);
            if next == start {
                break;
            }
            comps.push(next);
            prev_p = Some(p);
            cur = next;
            if comps.len() > nc {
                return None;
            }
        }
        Some((comps, pts))
    }
}

/// Contract every connected unmarked subcurve to a point and renormalize.
pub fn contract_unmarked(c: &Curve) -> Result<Curve, SmythError> {
    let net = Net::from_curve(c);
    let g0 = net.genus();
    if g0 != 1 {
        return Err(SmythError::GenusLost(g0));
    }
    if net.marks.iter().all(|m| !m.is_empty()) {
        let mut out = c.clone();
        out.allow_unmarked = false;
        return validate_curve(out).map_err(SmythError::BadImage);
    }
    let image = net.contract();
    let g1 = image.genus();
    if g1 != 1 {
        return Err(SmythError::GenusLost(g1));
    }
    image.to_curve(c.n)
}

// ---------------------------------------------------------------------------
// inclusion checks

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// m = n - 1
    NMinus1,
    /// m = n - 2
    NMinus2,
    /// m = n - 3
    NMinus3,
}

impl Mode {
    pub fn m(self, n: usize) -> usize {
        match self {
            Mode::NMinus1 => n - 1,
            Mode::NMinus2 => n - 2,
            Mode::NMinus3 => n - 3,
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "n-1" | "1" => Some(Mode::NMinus1),
            "n-2" | "2" => Some(Mode::NMinus2),
            "n-3" | "3" => Some(Mode::NMinus3),
            _ => None,
        }
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Marks> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (1..=n).filter(|i| m & (1 << (i - 1)) != 0).collect())
        .collect()
}

pub fn check_hypothesis(mode: Mode, chi: &Character) -> Result<(), SmythError> {
    let n = chi.a.len();
    let fail = |s: String| Err(SmythError::HypothesisViolated(s));
    if let Some(i) = chi.a.iter().position(|x| x.is_negative()) {
        return fail(format!("a{} < 0", i + 1));
    }
    let all: Marks = (1..=n).collect();
    match mode {
        Mode::NMinus1 => {
            if n < 2 {
                return fail("needs n >= 2".into());
            }
            if chi.sum_over(&all) < Q::one() {
                return fail("sum of all a_i < 1".into());
            }
            for s in subsets_of_size(n, n - 2) {
                if chi.sum_over(&s) > Q::one() {
                    return fail(format!("sum over {s:?} exceeds 1"));
                }
            }
        }
        Mode::NMinus2 => {
            if n < 3 {
                return fail("needs n >= 3".into());
            }
            for s in subsets_of_size(n, n - 2) {
                if chi.sum_over(&s) < Q::one() {
                    return fail(format!("sum over {s:?} is below 1"));
                }
            }
            for s in subsets_of_size(n, n - 3) {
                if chi.sum_over(&s) > Q::one() {
                    return fail(format!("sum over {s:?} exceeds 1"));
                }
            }
        }
        Mode::NMinus3 => {
            if n <= 4 {
                return fail("needs n > 4".into());
            }
            let want = qf(1, n as i64 - 4);
            if chi.a.iter().any(|x| *x != want) {
                return fail(format!("every a_i must equal {}", fmt_q(&want)));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SmythEnum {
    pub max_unmarked: usize,
    pub max_core_m: usize,
    pub max_tail_components: usize,
    pub budget: usize,
}

impl SmythEnum {
    pub fn defaults(n: usize) -> Self {
        SmythEnum { max_unmarked: 2, max_core_m: n, max_tail_components: n, budget: crate::curve::budget_from_env() }
    }
}

/// Classes of m-stable curves with nodal tails, within the caps.
pub fn enumerate_m_stable(n: usize, m: usize, caps: &SmythEnum) -> Result<Vec<Curve>, SmythError> {
    let o = EnumOptions {
        allow_unmarked: true,
        max_core_m: caps.max_core_m,
        max_tail_components: caps.max_tail_components,
        nodal_tails: true,
        stable_tails: true,
        max_unmarked: caps.max_unmarked,
        budget: caps.budget,
    };
    let mut out = Vec::new();
    for c in enumerate_curves(n, &o)? {
        if is_m_stable(&c, m)? {
            out.push(c);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub curve: String,
    pub image: String,
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub chi: Character,
    pub classes_checked: usize,
    pub with_unmarked: usize,
    pub violations: Vec<Violation>,
}

pub fn check_inclusion(mode: Mode, chi: &Character, caps: &SmythEnum) -> Result<InclusionReport, SmythError> {
    check_hypothesis(mode, chi)?;
    let n = chi.a.len();
    let m = mode.m(n);
    let curves = enumerate_m_stable(n, m, caps)?;
    let mut violations = Vec::new();
    let mut with_unmarked = 0;
    for c in &curves {
        if c.components().into_iter().any(|id| c.marks_of(id).is_empty()) {
            with_unmarked += 1;
        }
        let img = contract_unmarked(c)?;
        let v = verdict(&img, chi).expect("same n");
        if !v.semistable {
            violations.push(Violation { curve: canonical_form(c), image: canonical_form(&img), failed: v.violations });
        }
    }
    Ok(InclusionReport {
        mode,
        n,
        m,
        chi: chi.clone(),
        classes_checked: curves.len(),
        with_unmarked,
        violations,
    })
}

// ---------------------------------------------------------------------------
// uniform characters

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiWindow {
    /// `None` means unbounded.
    pub lower: Option<Q>,
    pub upper: Option<Q>,
    /// Set when some curve has no semistable uniform character at all.
    pub void: bool,
}

impl ChiWindow {
    pub fn everything() -> Self {
        ChiWindow { lower: None, upper: None, void: false }
    }

    pub fn is_empty(&self) -> bool {
        self.void || matches!((&self.lower, &self.upper), (Some(l), Some(u)) if l > u)
    }

    pub fn contains(&self, a: &Q) -> bool {
        !self.void && self.lower.as_ref().map_or(true, |l| a >= l) && self.upper.as_ref().map_or(true, |u| a <= u)
    }

    pub fn intersect(&self, o: &ChiWindow) -> ChiWindow {
        let lower = match (&self.lower, &o.lower) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let upper = match (&self.upper, &o.upper) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        ChiWindow { lower, upper, void: self.void || o.void }
    }

    pub fn describe(&self) -> String {
        if self.void {
            return "empty".into();
        }
        let l = self.lower.as_ref().map_or("(-inf".to_string(), |x| format!("[{}", fmt_q(x)));
        let u = self.upper.as_ref().map_or("inf)".to_string(), |x| format!("{}]", fmt_q(x)));
        let tag = if self.is_empty() { " (empty)" } else { "" };
        format!("{l}, {u}{tag}")
    }
}

/// Uniform characters `a·(1,…,1)` semistable for a fully marked curve.
pub fn uniform_window_of(c: &Curve) -> ChiWindow {
    let ix = stability_index_sets(c);
    let covered = ix.i.len() + ix.j.len() == c.n;
    if !covered {
        // a = 0 is forced but then sum_I a >= 1 fails
        return ChiWindow { lower: None, upper: None, void: true };
    }
    let lower = Some(qf(1, ix.i.len() as i64));
    let upper = if ix.i0.is_empty() { None } else { Some(qf(1, ix.i0.len() as i64)) };
    ChiWindow { lower, upper, void: false }
}

pub fn uniform_chi_window(curves: &[Curve], _m: usize) -> Result<ChiWindow, SmythError> {
    let mut w = ChiWindow::everything();
    for c in curves {
        let img = contract_unmarked(c)?;
        w = w.intersect(&uniform_window_of(&img));
    }
    Ok(w)
}

/// A character, not necessarily uniform, that is semistable for every image;
/// `None` when the polytopes have empty intersection.
pub fn common_character(images: &[Curve]) -> Option<Character> {
    let n = images.first()?.n;
    let mut rows: BTreeSet<(Vec<Q>, u8, Q)> = BTreeSet::new();
    for c in images {
        for k in crate::polytope::semistability_polytope(c).constraints {
            let tag = match k.rel {
                Rel::Ge => 0,
                Rel::Le => 1,
                Rel::Eq => 2,
            };
            rows.insert((k.coeffs, tag, k.rhs));
        }
    }
    let mut lp = Lp::new(n);
    for (coeffs, tag, rhs) in rows {
        let rel = [Rel::Ge, Rel::Le, Rel::Eq][tag as usize];
        lp.add(coeffs, rel, rhs);
    }
    lp.feasible_point().map(Character::new)
}

/// The two curves of the uniform-character obstruction for `m = n - k`:
/// a smooth core with `k - 1` two-pointed tails, and the elliptic m-fold
/// curve with one mark on all but one component.
pub fn obstruction_pair(n: usize, k: usize) -> Result<(Curve, Curve), SmythError> {
    let m = n - k;
    let mut next = 1..=n;
    let mut tails = Vec::new();
    for _ in 0..k - 1 {
        let pair: Marks = [next.next().unwrap(), next.next().unwrap()].into();
        tails.push(tail_from_tree(Anchor::Smooth { component: 0 }, &[Branch { marks: pair, joints: vec![] }]));
    }
    let core_marks = vec![next.collect::<Marks>()];
    let a = validate_curve(Curve { n, core: CoreKind::Smooth, core_marks, tails, allow_unmarked: false })?;
    let mut fm: Vec<Marks> = (1..m).map(|i| [i].into()).collect();
    fm.push((m..=n).collect());
    let b = validate_curve(Curve { n, core: CoreKind::Fold(m), core_marks: fm, tails: vec![], allow_unmarked: false })?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Joint;

    fn unmarked_smooth_core(k: usize) -> Curve {
        // smooth unmarked E with k two-pointed tails
        let mut tails = Vec::new();
        for i in 0..k {
            tails.push(tail_from_tree(
                Anchor::Smooth { component: 0 },
                &[Branch { marks: [2 * i + 1, 2 * i + 2].into(), joints: vec![] }],
            ));
        }
        validate_curve(Curve {
            n: 2 * k,
            core: CoreKind::Smooth,
            core_marks: vec![Marks::new()],
            tails,
            allow_unmarked: true,
        })
        .unwrap()
    }

    #[test]
    fn smooth_unmarked_core_becomes_fold() {
        let c = unmarked_smooth_core(3);
        let img = contract_unmarked(&c).unwrap();
        assert_eq!(img.core, CoreKind::Fold(3));
        assert!(img.tails.is_empty());
        assert_eq!(contract_unmarked(&img).unwrap(), img);
    }

    #[test]
    fn ngon_unmarked_component() {
        // Ngon(3) with component 2 unmarked carrying a two-pointed tail
        let t = Curve {
            n: 4,
            core: CoreKind::Ngon(3),
            core_marks: vec![[1].into(), [2].into(), Marks::new()],
            tails: vec![crate::curve::Tail {
                anchor: Anchor::Smooth { component: 2 },
                components: vec![[3, 4].into()],
                joints: vec![Joint { base: Base::Anchor, attached: [0].into() }],
            }],
            allow_unmarked: true,
        };
        let img = contract_unmarked(&validate_curve(t).unwrap()).unwrap();
        assert_eq!(img.core, CoreKind::Ngon(2));
        assert_eq!(img.tails.len(), 1);
        assert!(matches!(img.tails[0].anchor, Anchor::Node { .. }));
    }

    #[test]
    fn window_examples() {
        let c = Curve::full(3, CoreKind::Smooth, vec![vec![1, 2, 3]], vec![]).unwrap();
        let w = uniform_chi_window(&[c], 2).unwrap();
        assert_eq!(w.lower, Some(qf(1, 3)));
        assert_eq!(w.upper, None);
        let e = uniform_chi_window(&[], 2).unwrap();
        assert_eq!(e, ChiWindow::everything());
        assert!(!e.is_empty());
    }
}
