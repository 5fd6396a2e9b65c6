//! Walls `a_i = 0`, `sum_S a = 1` in character space, their chambers, and the
//! stability classification on each chamber.

use crate::curve::{canonical_form, enumerate_curves, Curve, CurveError, EnumOptions};
use crate::lp::{Lp, LpOutcome, Rel};
use crate::polytope::{verdict, Character};
use crate::rational::{fmt_q, q, qf, Q};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Wall {
    Axis(usize),
    Level(BTreeSet<usize>),
}

impl Wall {
    pub fn normal(&self, n: usize) -> (Vec<Q>, Q) {
        match self {
            Wall::Axis(i) => ((1..=n).map(|k| if k == *i { Q::one() } else { Q::zero() }).collect(), Q::zero()),
            Wall::Level(s) => ((1..=n).map(|k| if s.contains(&k) { Q::one() } else { Q::zero() }).collect(), Q::one()),
        }
    }

    /// `g·a - c`; the sign of this decides the side.
    pub fn eval(&self, a: &[Q]) -> Q {
        match self {
            Wall::Axis(i) => a[i - 1].clone(),
            Wall::Level(s) => s.iter().fold(-Q::one(), |acc, &i| acc + &a[i - 1]),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Wall::Axis(i) => format!("a{i}=0"),
            Wall::Level(s) => {
                let terms: Vec<String> = s.iter().map(|i| format!("a{i}")).collect();
                format!("{}=1", terms.join("+"))
            }
        }
    }
}

pub fn wall_arrangement(n: usize) -> Vec<Wall> {
    let mut w: Vec<Wall> = (1..=n).map(Wall::Axis).collect();
    for mask in 1u32..(1 << n) {
        w.push(Wall::Level((1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect()));
    }
    w
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub id: usize,
    /// One entry per wall, `+1` or `-1`.
    pub signs: Vec<i8>,
    #[serde(with = "crate::polytope::qvec")]
    pub witness: Vec<Q>,
}

impl Chamber {
    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }
}

#[derive(Debug, Clone)]
pub struct BoxBounds {
    pub lo: Q,
    pub hi: Q,
}

impl BoxBounds {
    pub fn default_for(n: usize) -> Self {
        BoxBounds { lo: q(-1), hi: q(n as i64 + 1) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChamberError {
    #[error("n = {n} exceeds the chamber enumeration cap {cap}")]
    BudgetExceeded { n: usize, cap: usize },
    #[error("classification of {class} changes inside chamber {chamber}")]
    ConstancyViolation { chamber: usize, class: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

pub const DEFAULT_CAP: usize = 4;

/// Max-slack point of a strict sign system inside the box, if the slack is positive.
fn strict_point(n: usize, walls: &[Wall], signs: &[i8], b: &BoxBounds) -> Option<Vec<Q>> {
    // variables y = a - lo (n of them), then eps
    let mut lp = Lp::new(n + 1);
    let mut obj = vec![Q::zero(); n + 1];
    obj[n] = -Q::one();
    lp.objective = obj;
    let width = &b.hi - &b.lo;
    for (w, &s) in walls.iter().zip(signs) {
        let (g, c) = w.normal(n);
        let sg = q(s as i64);
        let glo = g.iter().fold(Q::zero(), |acc, v| acc + v * &b.lo);
        let mut row: Vec<Q> = g.iter().map(|v| &sg * v).collect();
        row.push(-Q::one());
        lp.add(row, Rel::Ge, &sg * (c - glo));
    }
    for i in 0..n {
        let mut row = vec![Q::zero(); n + 1];
        row[i] = Q::one();
        row[n] = -Q::one();
        lp.add(row.clone(), Rel::Ge, Q::zero());
        row[n] = Q::one();
        lp.add(row, Rel::Le, width.clone());
    }
    let mut cap = vec![Q::zero(); n + 1];
    cap[n] = Q::one();
    lp.add(cap, Rel::Le, Q::one());
    match lp.solve() {
        LpOutcome::Optimal { x, .. } if x[n].is_positive() => Some(x[..n].iter().map(|y| y + &b.lo).collect()),
        _ => None,
    }
}

pub fn enumerate_chambers(n: usize, b: &BoxBounds) -> Result<Vec<Chamber>, ChamberError> {
    enumerate_chambers_capped(n, b, DEFAULT_CAP)
}

pub fn enumerate_chambers_capped(n: usize, b: &BoxBounds, cap: usize) -> Result<Vec<Chamber>, ChamberError> {
    if n > cap {
        return Err(ChamberError::BudgetExceeded { n, cap });
    }
    let walls = wall_arrangement(n);
    let mut partial: Vec<Vec<i8>> = vec![vec![]];
    for w in 0..walls.len() {
        let mut next = Vec::new();
        for p in &partial {
            for s in [1i8, -1] {
                let mut v = p.clone();
                v.push(s);
                if strict_point(n, &walls[..=w], &v, b).is_some() {
                    next.push(v);
                }
            }
        }
        partial = next;
    }
    partial.sort_by(|x, y| y.cmp(x));
    Ok(partial
        .into_iter()
        .enumerate()
        .map(|(id, signs)| {
            let witness = strict_point(n, &walls, &signs, b).expect("feasible by construction");
            Chamber { id, signs, witness }
        })
        .collect())
}

/// Random points strictly inside the chamber (and the box): move from the
/// witness along a random direction, a random fraction of the way to the
/// boundary.
pub fn interior_points<R: Rng>(ch: &Chamber, b: &BoxBounds, k: usize, rng: &mut R) -> Vec<Vec<Q>> {
    let n = ch.witness.len();
    let walls = wall_arrangement(n);
    let mut out = Vec::new();
    while out.len() < k {
        let d: Vec<Q> = (0..n).map(|_| qf(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect();
        if d.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut tmax: Option<Q> = None;
        let mut bound = |slack: Q, rate: Q| {
            // slack + t*rate must stay positive
            if rate.is_negative() {
                let t = slack / -rate;
                if tmax.as_ref().map_or(true, |m| t < *m) {
                    tmax = Some(t);
                }
            }
        };
        for (w, &s) in walls.iter().zip(&ch.signs) {
            let (g, _) = w.normal(n);
            let sg = q(s as i64);
            let rate = g.iter().zip(&d).fold(Q::zero(), |acc, (x, y)| acc + x * y) * &sg;
            bound(w.eval(&ch.witness) * &sg, rate);
        }
        for i in 0..n {
            bound(&ch.witness[i] - &b.lo, d[i].clone());
            bound(&b.hi - &ch.witness[i], -d[i].clone());
        }
        let frac = qf(rng.gen_range(1..=9), 10);
        let t = tmax.map(|m| m * frac).unwrap_or_else(Q::one);
        out.push(ch.witness.iter().zip(&d).map(|(w, x)| w + &t * x).collect());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub class: String,
    pub stable: bool,
}

pub fn classify_chamber<R: Rng>(
    ch: &Chamber,
    curves: &[Curve],
    b: &BoxBounds,
    k: usize,
    rng: &mut R,
) -> Result<Vec<ClassVerdict>, ChamberError> {
    let mut points = vec![ch.witness.clone()];
    points.extend(interior_points(ch, b, k, rng));
    let mut out = Vec::with_capacity(curves.len());
    for c in curves {
        let class = canonical_form(c);
        let mut seen: Option<bool> = None;
        for p in &points {
            let v = verdict(c, &Character::new(p.clone())).expect("dimension checked by caller");
            if v.stable != v.semistable || seen.map_or(false, |s| s != v.stable) {
                return Err(ChamberError::ConstancyViolation { chamber: ch.id, class });
            }
            seen = Some(v.stable);
        }
        out.push(ClassVerdict { class, stable: seen.unwrap() });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub wall: String,
    pub from: usize,
    pub to: usize,
    pub entering: Vec<String>,
    pub leaving: Vec<String>,
    /// Semistable at the crossing point but stable on neither side.
    pub on_wall: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasReport {
    pub n: usize,
    pub walls: Vec<String>,
    pub chambers: Vec<Chamber>,
    pub classes: Vec<String>,
    pub table: Vec<Vec<ClassVerdict>>,
    pub crossings: Vec<Crossing>,
}

pub fn atlas_report<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<AtlasReport, ChamberError> {
    let b = BoxBounds::default_for(n);
    let chambers = enumerate_chambers(n, &b)?;
    let curves = enumerate_curves(n, &EnumOptions::defaults(n))?;
    let walls = wall_arrangement(n);
    let mut table = Vec::new();
    for ch in &chambers {
        table.push(classify_chamber(ch, &curves, &b, k, rng)?);
    }
    let mut crossings = Vec::new();
    for (x, cx) in chambers.iter().enumerate() {
        for (y, cy) in chambers.iter().enumerate() {
            let diff: Vec<usize> = (0..walls.len()).filter(|&w| cx.signs[w] != cy.signs[w]).collect();
            // report each crossing once, from the negative side to the positive side
            if diff.len() != 1 || cx.signs[diff[0]] > 0 {
                continue;
            }
            let entering = table[y]
                .iter()
                .zip(&table[x])
                .filter(|(a, b)| a.stable && !b.stable)
                .map(|(a, _)| a.class.clone())
                .collect();
            let leaving = table[x]
                .iter()
                .zip(&table[y])
                .filter(|(a, b)| a.stable && !b.stable)
                .map(|(a, _)| a.class.clone())
                .collect();
            // the segment between the witnesses meets no other wall
            let (vx, vy) = (walls[diff[0]].eval(&cx.witness), walls[diff[0]].eval(&cy.witness));
            let t = &vx / (&vx - &vy);
            let mid: Vec<Q> = cx.witness.iter().zip(&cy.witness).map(|(a, b)| a + &t * (b - a)).collect();
            let on_wall = curves
                .iter()
                .zip(table[x].iter().zip(&table[y]))
                .filter(|(c, (a, b))| {
                    !a.stable && !b.stable && verdict(c, &Character::new(mid.clone())).map_or(false, |v| v.semistable)
                })
                .map(|(c, _)| canonical_form(c))
                .collect();
            crossings.push(Crossing { wall: walls[diff[0]].label(), from: x, to: y, entering, leaving, on_wall });
        }
    }
    Ok(AtlasReport {
        n,
        walls: walls.iter().map(Wall::label).collect(),
        classes: curves.iter().map(canonical_form).collect(),
        chambers,
        table,
        crossings,
    })
}

impl AtlasReport {
    pub fn tsv(&self) -> String {
        let mut s = String::from("chamber\tsigns\twitness\tclass\tverdict\n");
        for (ch, row) in self.chambers.iter().zip(&self.table) {
            let w: Vec<String> = ch.witness.iter().map(fmt_q).collect();
            for cv in row {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    ch.id,
                    ch.sign_string(),
                    w.join(","),
                    cv.class,
                    if cv.stable { "stable" } else { "unstable" }
                ));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_counts() {
        assert_eq!(wall_arrangement(1).len(), 2);
        assert_eq!(wall_arrangement(2).len(), 5);
        assert_eq!(wall_arrangement(3).len(), 10);
        let labels: Vec<String> = wall_arrangement(2).iter().map(Wall::label).collect();
        assert_eq!(labels, ["a1=0", "a2=0", "a1=1", "a2=1", "a1+a2=1"]);
    }

    #[test]
    fn one_dimension() {
        let ch = enumerate_chambers(1, &BoxBounds::default_for(1)).unwrap();
        assert_eq!(ch.len(), 3);
    }

    #[test]
    fn clipped_box() {
        let b = BoxBounds { lo: q(-1), hi: qf(1, 2) };
        let ch = enumerate_chambers(2, &b).unwrap();
        assert!(ch.iter().all(|c| c.witness.iter().all(|x| *x < Q::one())));
        assert_eq!(ch.len(), 4);
    }

    #[test]
    fn cap() {
        assert!(enumerate_chambers_capped(3, &BoxBounds::default_for(3), 2).is_err());
    }
}
