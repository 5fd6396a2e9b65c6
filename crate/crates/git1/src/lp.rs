//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Problems are `min c·x` subject to linear rows and `x ≥ 0`.

use crate::rational::Q;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Rel {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Rel {
    pub fn holds(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Rel::Ge => lhs >= rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Ge => ">=",
            Rel::Le => "<=",
            Rel::Eq => "=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Q>, value: Q },
}

#[derive(Debug, Clone, Default)]
pub struct Lp {
    pub nvars: usize,
    pub rows: Vec<Row>,
    pub objective: Vec<Q>,
}

impl Lp {
    pub fn new(nvars: usize) -> Self {
        Lp { nvars, rows: Vec::new(), objective: vec![Q::zero(); nvars] }
    }

    pub fn add(&mut self, coeffs: Vec<Q>, rel: Rel, rhs: Q) {
        assert_eq!(coeffs.len(), self.nvars);
        self.rows.push(Row { coeffs, rel, rhs });
    }

    /// Minimizes the objective.
    pub fn solve(&self) -> LpOutcome {
        // standard form: one slack per inequality
        let nslack = self.rows.iter().filter(|r| r.rel != Rel::Eq).count();
        let ncols = self.nvars + nslack;
        let mut a: Vec<Vec<Q>> = Vec::with_capacity(self.rows.len());
        let mut b: Vec<Q> = Vec::with_capacity(self.rows.len());
        let mut s = 0;
        for r in &self.rows {
            let mut row = r.coeffs.clone();
            row.resize(ncols, Q::zero());
            match r.rel {
                Rel::Le => {
                    row[self.nvars + s] = Q::one();
                    s += 1;
                }
                Rel::Ge => {
                    row[self.nvars + s] = -Q::one();
                    s += 1;
                }
                Rel::Eq => {}
            }
            let mut rhs = r.rhs.clone();
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                rhs = -rhs;
            }
            a.push(row);
            b.push(rhs);
        }
        let mut c = self.objective.clone();
        c.resize(ncols, Q::zero());
        match simplex_std(a, b, &c) {
            LpOutcome::Optimal { mut x, value } => {
                x.truncate(self.nvars);
                LpOutcome::Optimal { x, value }
            }
            o => o,
        }
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        let mut p = self.clone();
        p.objective = vec![Q::zero(); self.nvars];
        match p.solve() {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    t: Vec<Vec<Q>>, // rows with rhs in last column
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.t[r][col].clone();
        for v in self.t[r].iter_mut() {
            *v = &*v / &p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(prow.iter()) {
                if !pv.is_zero() {
                    *v = &*v - &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Bland's rule minimization of `cost` restricted to `allowed` columns.
    fn run(&mut self, cost: &[Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let m = self.t.len();
            let mut enter = None;
            for j in 0..self.width {
                if !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for i in 0..m {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !self.t[i][j].is_zero() {
                        rc -= cb * &self.t[i][j];
                    }
                }
                if rc.is_negative() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else { return true };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..m {
                if self.t[i][j].is_positive() {
                    let ratio = &self.t[i][self.width] / &self.t[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

/// `min c·x`, `A x = b`, `b ≥ 0`, `x ≥ 0`.
fn simplex_std(a: Vec<Vec<Q>>, b: Vec<Q>, c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    if m == 0 {
        // every variable free to be zero; unbounded iff some cost negative
        if c.iter().any(|v| v.is_negative()) {
            return LpOutcome::Unbounded;
        }
        return LpOutcome::Optimal { x: vec![Q::zero(); n], value: Q::zero() };
    }
    let width = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.into_iter().zip(b).enumerate() {
        let mut r = row;
        r.resize(width, Q::zero());
        r[n + i] = Q::one();
        r.push(rhs);
        t.push(r);
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), width };
    let mut cost1 = vec![Q::zero(); width];
    for v in cost1.iter_mut().skip(n) {
        *v = Q::one();
    }
    tab.run(&cost1, &|_| true);
    let infeas: Q = (0..m)
        .filter(|&i| tab.basis[i] >= n)
        .map(|i| tab.t[i][width].clone())
        .fold(Q::zero(), |x, y| x + y);
    if infeas.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    let mut cost2 = c.to_vec();
    cost2.resize(width, Q::zero());
    if !tab.run(&cost2, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (r, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.t[r][width].clone();
        }
    }
    let value = x.iter().zip(c).fold(Q::zero(), |s, (xi, ci)| s + xi * ci);
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn small_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6
        let mut lp = Lp::new(2);
        lp.objective = vec![q(-1), q(-1)];
        lp.add(vec![q(1), q(2)], Rel::Le, q(4));
        lp.add(vec![q(3), q(1)], Rel::Le, q(6));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, qf(-14, 5));
                assert_eq!(x, vec![qf(8, 5), qf(6, 5)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = Lp::new(1);
        lp.add(vec![q(1)], Rel::Ge, q(2));
        lp.add(vec![q(1)], Rel::Le, q(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = Lp::new(1);
        lp.objective = vec![q(-1)];
        lp.add(vec![q(1)], Rel::Ge, q(2));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(2);
        lp.add(vec![q(1), q(1)], Rel::Eq, q(1));
        lp.add(vec![q(2), q(2)], Rel::Eq, q(2));
        assert!(lp.feasible_point().is_some());
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, cycles under the textbook rule
        let mut lp = Lp::new(4);
        lp.objective = vec![qf(-3, 4), q(150), qf(-1, 50), q(6)];
        lp.add(vec![qf(1, 4), q(-60), qf(-1, 25), q(9)], Rel::Le, q(0));
        lp.add(vec![qf(1, 2), q(-90), qf(-1, 50), q(3)], Rel::Le, q(0));
        lp.add(vec![q(0), q(0), q(1), q(0)], Rel::Le, q(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, qf(-1, 20)),
            o => panic!("{o:?}"),
        }
    }
}
