//! Chart functions `f_i`, `h_i`, `h_ij` on coordinatized curves and the
//! coordinate table they produce.

use crate::coords::{CoordinatizedCurve, FfError, Geometry, Setting};
use crate::sym::{Sym, SymError};
use git1::rational::Q;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A function on the curve, one rational function per component.
pub type Func = Vec<Sym>;

pub fn fconst(ncomp: usize, v: &Sym) -> Func {
    vec![v.clone(); ncomp]
}

pub fn fadd(a: &Func, b: &Func) -> Func {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn fsub(a: &Func, b: &Func) -> Func {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn fmul(a: &Func, b: &Func) -> Func {
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
}

pub fn fscale(a: &Func, k: &Sym) -> Func {
    a.iter().map(|x| x.mul(k)).collect()
}

fn degenerate(what: &str) -> impl Fn(SymError) -> FfError + '_ {
    move |e| FfError::Degenerate(format!("{what}: {e:?}"))
}

/// Quantities of chart `i`.
#[derive(Debug, Clone)]
pub struct Chart {
    pub i: usize,
    pub f: Func,
    pub h: Func,
    pub hij: BTreeMap<usize, Func>,
    pub a: BTreeMap<usize, Sym>,
    pub b: BTreeMap<usize, Sym>,
    pub e: BTreeMap<usize, Sym>,
    pub pi: Sym,
    pub s: Sym,
    /// `c[(j, k)] = h_ij(p_k)`
    pub c: BTreeMap<(usize, usize), Sym>,
}

/// How the components are glued.
#[derive(Debug, Clone)]
pub enum Glue {
    /// Equal values at two points.
    Points { a: (usize, Sym), b: (usize, Sym) },
    /// The singular point of a Fold core: equal values at `w = 0` on the
    /// listed components and vanishing sum of derivatives there.
    Fold { comps: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Globals {
    pub pi: BTreeMap<usize, Sym>,
    pub s: BTreeMap<usize, Sym>,
    pub b: BTreeMap<(usize, usize), Sym>,
    pub e: BTreeMap<(usize, usize), Sym>,
    /// `c[(i, j, j')] = C_{jj'}(i)`
    pub c: BTreeMap<(usize, usize, usize), Sym>,
}

#[derive(Debug, Clone)]
pub struct CoordinateTable {
    pub n: usize,
    pub ncomp: usize,
    pub fold: bool,
    pub x: BTreeMap<usize, Sym>,
    pub charts: BTreeMap<usize, Chart>,
    pub globals: Globals,
    pub glue: Vec<Glue>,
    /// Component and coordinate of each mark.
    pub points: BTreeMap<usize, (usize, Sym)>,
    pub description: String,
    pub names: Vec<String>,
}

impl CoordinateTable {
    pub fn render(&self, s: &Sym) -> String {
        s.render(&|i| self.names.get(i).cloned().unwrap_or_else(|| format!("t{i}")))
    }

    pub fn eval(&self, f: &Func, j: usize) -> Result<Sym, FfError> {
        let (comp, pt) = &self.points[&j];
        f[*comp].subst0(pt).map_err(degenerate("evaluation at a mark"))
    }
}

struct Builder<'a> {
    set: &'a Setting,
    g: &'a Geometry,
}

impl Builder<'_> {
    fn w() -> Sym {
        Sym::var(0)
    }

    /// The coordinate of mark `j` on its component: zero at the singular
    /// point (Fold), `±x_j` at the nodes (Ngon), zero at the attaching point
    /// (tail); pole at the mark, scaled by `x_j`.
    fn coord(&self, j: usize) -> Sym {
        let mu = &self.set.pos[&j];
        let x = &self.set.scale[&j];
        let w = Self::w();
        let den = mu.sub(&w);
        let num = if self.g.is_core_mark(j) && !self.g.is_fold() {
            mu.mul(&w).sub(&Sym::one())
        } else {
            mu.mul(&w)
        };
        x.mul(&num).div(&den).expect("position is not a free pole")
    }

    fn point(&self, j: usize) -> (usize, Sym) {
        (self.g.comp_of[&j], self.set.pos[&j].clone())
    }

    /// Extend a function given on the core to the tails by constants.
    fn fill_tails(&self, f: &mut Func) -> Result<(), FfError> {
        for (t, &k) in self.g.tail_base.iter().enumerate() {
            f[self.g.m + t] = f[k].subst0(&self.set.anchor[t]).map_err(degenerate("value at an attaching point"))?;
        }
        Ok(())
    }

    fn core_value_away(&self, t: &Sym) -> Result<Sym, FfError> {
        let at = if self.g.is_fold() { Sym::zero() } else { Sym::one() };
        t.subst0(&at).map_err(degenerate("value at a special point"))
    }

    fn chart(&self, i: usize) -> Result<Chart, FfError> {
        let g = self.g;
        let nc = g.ncomp;
        let k = g.comp_of[&i];
        let u = self.coord(i);
        let xi = &self.set.scale[&i];
        let xi2 = xi.pow(2);
        let third = Sym::q(Q::new(1.into(), 3.into()));
        let (mut f, mut h) = if g.is_fold() {
            let mut f = fconst(nc, &Sym::zero());
            let mut h = fconst(nc, &Sym::zero());
            f[k] = u.pow(2);
            h[k] = u.pow(3);
            (f, h)
        } else {
            let mut f = fconst(nc, &xi2.mul(&third));
            let mut h = fconst(nc, &Sym::zero());
            f[k] = u.pow(2).sub(&xi2.mul(&third).scale(&Q::from_integer(2.into())));
            h[k] = u.mul(&u.pow(2).sub(&xi2));
            (f, h)
        };
        self.fill_tails(&mut f)?;
        self.fill_tails(&mut h)?;

        // h^2 - f^3 = pi f + s, fitted at two sample points of E_k
        let resid = h[k].pow(2).sub(&f[k].pow(3));
        let mut samples = Vec::new();
        for (p, q) in [(1, 2), (1, 3), (2, 1), (3, 1), (-1, 2), (5, 7), (-7, 5), (11, 13), (-13, 3), (17, 19)] {
            let pt = Sym::q(Q::new(p.into(), q.into()));
            if let (Ok(fv), Ok(rv)) = (f[k].subst0(&pt), resid.subst0(&pt)) {
                if samples.iter().all(|(f0, _): &(Sym, Sym)| *f0 != fv) {
                    samples.push((fv, rv));
                }
            }
            if samples.len() == 2 {
                break;
            }
        }
        if samples.len() < 2 {
            return Err(FfError::Degenerate("no sample points for the Weierstrass fit".into()));
        }
        let pi = samples[0].1.sub(&samples[1].1).div(&samples[0].0.sub(&samples[1].0)).map_err(degenerate("fit"))?;
        let s = samples[0].1.sub(&pi.mul(&samples[0].0));

        let mut hij = BTreeMap::new();
        let mut a = BTreeMap::new();
        for j in 1..=g.n {
            if j == i {
                continue;
            }
            let kj = g.comp_of[&j];
            let mut hj = fconst(nc, &Sym::zero());
            let aj;
            if kj == k {
                let lam = u.subst0(&self.set.pos[&j]).map_err(degenerate("u_i at p_j"))?;
                let shift = if g.is_fold() { Sym::zero() } else { xi2.clone() };
                let top = u.pow(2).sub(&lam.mul(&u)).add(&lam.pow(2)).sub(&shift);
                let t = top.div(&u.sub(&lam)).map_err(degenerate("template"))?;
                let ru = self.coord(j).residue0(&self.set.pos[&j]).map_err(degenerate("residue of u_j"))?;
                let rt = t.residue0(&self.set.pos[&j]).map_err(degenerate("residue of template"))?;
                aj = ru.div(&rt).map_err(degenerate("residue ratio"))?;
                let away = self.core_value_away(&t)?;
                for l in 0..g.m {
                    hj[l] = if l == k { aj.mul(&t) } else { aj.mul(&away) };
                }
            } else if kj < g.m {
                let uj = self.coord(j);
                if g.is_fold() {
                    let z = Sym::zero();
                    let di = u.derivative0().subst0(&z).map_err(degenerate("u_i'(0)"))?;
                    let dj = uj.derivative0().subst0(&z).map_err(degenerate("u_j'(0)"))?;
                    aj = dj.neg().div(&di).map_err(degenerate("derivative ratio"))?;
                    hj[k] = aj.mul(&u);
                    hj[kj] = uj;
                } else {
                    let val = |f: &Sym, p: i64| f.subst0(&Sym::int(p)).map_err(degenerate("node value"));
                    let (uip, uim, ujp, ujm) = (val(&u, 1)?, val(&u, -1)?, val(&uj, 1)?, val(&uj, -1)?);
                    // a u_i(+1) = u_j(-1) + beta along the forward arc, a u_i(-1) = u_j(+1) + beta backwards
                    aj = ujm.sub(&ujp).div(&uip.sub(&uim)).map_err(degenerate("node continuity"))?;
                    let beta = aj.mul(&uip).sub(&ujm);
                    let m = g.m;
                    for l in 0..m {
                        hj[l] = if l == k {
                            aj.mul(&u)
                        } else if l == kj {
                            uj.add(&beta)
                        } else if (l + m - k) % m < (kj + m - k) % m {
                            aj.mul(&uip)
                        } else {
                            aj.mul(&uim)
                        };
                    }
                }
            } else {
                aj = Sym::zero();
                hj[kj] = self.coord(j);
            }
            let tail_own = if kj >= g.m { Some(kj) } else { None };
            for (t, &base) in g.tail_base.iter().enumerate() {
                if Some(g.m + t) != tail_own {
                    hj[g.m + t] = hj[base].subst0(&self.set.anchor[t]).map_err(degenerate("value at an attaching point"))?;
                }
            }
            hij.insert(j, hj);
            a.insert(j, aj);
        }

        let ev = |f: &Func, j: usize| -> Result<Sym, FfError> {
            let (comp, pt) = self.point(j);
            f[comp].subst0(&pt).map_err(degenerate("evaluation at a mark"))
        };
        let mut b = BTreeMap::new();
        let mut e = BTreeMap::new();
        let mut c = BTreeMap::new();
        for j in 1..=g.n {
            if j == i {
                continue;
            }
            b.insert(j, ev(&f, j)?);
            e.insert(j, ev(&h, j)?);
            for jj in 1..=g.n {
                if jj != i && jj != j {
                    c.insert((j, jj), ev(&hij[&j], jj)?);
                }
            }
        }
        Ok(Chart { i, f, h, hij, a, b, e, pi, s, c })
    }

    fn glue(&self) -> Vec<Glue> {
        let g = self.g;
        let mut out = Vec::new();
        if g.is_fold() {
            out.push(Glue::Fold { comps: (0..g.m).collect() });
        } else {
            for k in 0..g.m {
                out.push(Glue::Points { a: (k, Sym::int(1)), b: ((k + 1) % g.m, Sym::int(-1)) });
            }
        }
        for (t, &k) in g.tail_base.iter().enumerate() {
            out.push(Glue::Points { a: (k, self.set.anchor[t].clone()), b: (g.m + t, Sym::zero()) });
        }
        out
    }
}

pub fn build_table(set: &Setting) -> Result<CoordinateTable, FfError> {
    let g = &set.geometry;
    let bld = Builder { set, g };
    let mut charts = BTreeMap::new();
    for i in 1..=g.n {
        if g.is_core_mark(i) {
            charts.insert(i, bld.chart(i)?);
        }
    }
    let x = (1..=g.n)
        .map(|j| (j, if g.is_core_mark(j) { set.scale[&j].clone() } else { Sym::zero() }))
        .collect();
    let points = (1..=g.n).map(|j| (j, bld.point(j))).collect();
    let mut t = CoordinateTable {
        n: g.n,
        ncomp: g.ncomp,
        fold: g.is_fold(),
        x,
        charts,
        globals: Globals {
            pi: BTreeMap::new(),
            s: BTreeMap::new(),
            b: BTreeMap::new(),
            e: BTreeMap::new(),
            c: BTreeMap::new(),
        },
        glue: bld.glue(),
        points,
        description: set.describe(),
        names: set.names.clone(),
    };
    t.globals = compute_globals(&t)?;
    Ok(t)
}

/// Chart table of a coordinatized curve with a Fold core.
pub fn realize_fold(cc: &CoordinatizedCurve) -> Result<CoordinateTable, FfError> {
    if !cc.base.core.is_fold() {
        return Err(FfError::NotRealizable("core is not a Fold".into()));
    }
    build_table(&Setting::numeric(cc)?)
}

/// Chart table of a coordinatized curve with an Ngon core.
pub fn realize_ngon(cc: &CoordinatizedCurve) -> Result<CoordinateTable, FfError> {
    if !matches!(cc.base.core, git1::curve::CoreKind::Ngon(_)) {
        return Err(FfError::NotRealizable("core is not an Ngon".into()));
    }
    build_table(&Setting::numeric(cc)?)
}

pub fn realize(cc: &CoordinatizedCurve) -> Result<CoordinateTable, FfError> {
    build_table(&Setting::numeric(cc)?)
}

/// The chart of mark `i`.
pub fn chart_table(t: &CoordinateTable, i: usize) -> Result<&Chart, FfError> {
    t.charts.get(&i).ok_or(FfError::ChartInvalid(i))
}

// ---------------------------------------------------------------------------
// global functions, one expression per chart

pub fn pi_candidates(t: &CoordinateTable, i: usize) -> Vec<(usize, Sym)> {
    t.charts
        .values()
        .map(|ch| {
            let r = t.x[&i].pow(4).mul(&ch.pi).div(&t.x[&ch.i].pow(4)).expect("chart has x != 0");
            (ch.i, r)
        })
        .collect()
}

pub fn s_candidates(t: &CoordinateTable, i: usize) -> Vec<(usize, Sym)> {
    t.charts
        .values()
        .map(|ch| {
            let r = t.x[&i].pow(6).mul(&ch.s).div(&t.x[&ch.i].pow(6)).expect("chart has x != 0");
            (ch.i, r)
        })
        .collect()
}

pub fn b_candidates(t: &CoordinateTable, i: usize, j: usize) -> Vec<(usize, Sym)> {
    let mut out = Vec::new();
    for (&k, ch) in &t.charts {
        let v = if k == i {
            ch.b[&j].clone()
        } else if k == j {
            ch.a[&i].pow(2).mul(&ch.b[&i])
        } else {
            let a2 = ch.a[&i].pow(2);
            ch.c[&(i, j)].pow(2).sub(&a2.mul(&ch.b[&j])).sub(&a2.mul(&ch.b[&i]))
        };
        out.push((k, v));
    }
    out
}

pub fn e_candidates(t: &CoordinateTable, i: usize, j: usize) -> Vec<(usize, Sym)> {
    let mut out = Vec::new();
    for (&k, ch) in &t.charts {
        let v = if k == i {
            ch.e[&j].clone()
        } else if k == j {
            ch.a[&i].pow(3).mul(&ch.e[&i])
        } else {
            let a = &ch.a[&i];
            let cij = &ch.c[&(i, j)];
            cij.pow(3)
                .sub(&a.pow(3).mul(&ch.e[&j]))
                .sub(&a.pow(2).mul(&ch.b[&i]).mul(cij).scale(&Q::from_integer(3.into())))
                .sub(&a.pow(3).mul(&ch.e[&i]).scale(&Q::from_integer(2.into())))
        };
        out.push((k, v));
    }
    out
}

/// `C_{jj'}(i)` from every chart.
pub fn c_candidates(t: &CoordinateTable, i: usize, j: usize, jj: usize) -> Vec<(usize, Sym)> {
    let mut out = Vec::new();
    for (&m, ch) in &t.charts {
        let xm = &t.x[&m];
        let v = if m == i {
            ch.c[&(j, jj)].mul(xm)
        } else if m == j {
            ch.c[&(i, jj)].mul(xm).neg()
        } else if m == jj {
            ch.a[&j].mul(&ch.c[&(i, j)]).mul(xm).neg()
        } else {
            let t1 = ch.a[&i].mul(&ch.c[&(j, jj)]);
            let t2 = ch.a[&j].mul(&ch.c[&(i, jj)]);
            let t3 = ch.a[&i].mul(&ch.c[&(j, i)]);
            t1.neg().add(&t2).add(&t3).mul(xm)
        };
        out.push((m, v));
    }
    out
}

fn first(v: Vec<(usize, Sym)>) -> Result<Sym, FfError> {
    v.into_iter().next().map(|(_, s)| s).ok_or_else(|| FfError::Degenerate("no valid chart".into()))
}

pub fn compute_globals(t: &CoordinateTable) -> Result<Globals, FfError> {
    let n = t.n;
    let mut gl = Globals { pi: BTreeMap::new(), s: BTreeMap::new(), b: BTreeMap::new(), e: BTreeMap::new(), c: BTreeMap::new() };
    for i in 1..=n {
        gl.pi.insert(i, first(pi_candidates(t, i))?);
        gl.s.insert(i, first(s_candidates(t, i))?);
        for j in 1..=n {
            if j == i {
                continue;
            }
            gl.b.insert((i, j), first(b_candidates(t, i, j))?);
            gl.e.insert((i, j), first(e_candidates(t, i, j))?);
            for jj in 1..=n {
                if jj != i && jj != j {
                    gl.c.insert((i, j, jj), first(c_candidates(t, i, j, jj))?);
                }
            }
        }
    }
    Ok(gl)
}

// ---------------------------------------------------------------------------
// torus action

/// Scale every quantity by `prod lambda_i^{wt_i}`.
pub fn weight_act(t: &CoordinateTable, lambda: &[Q]) -> Result<CoordinateTable, FfError> {
    if lambda.len() != t.n || lambda.iter().any(|l| l.is_zero()) {
        return Err(FfError::ZeroLambda);
    }
    let l = |i: usize| Sym::q(lambda[i - 1].clone());
    let lp = |i: usize, e: u32| l(i).pow(e);
    let mut out = t.clone();
    for (&i, ch) in out.charts.iter_mut() {
        ch.f = fscale(&ch.f, &lp(i, 2));
        ch.h = fscale(&ch.h, &lp(i, 3));
        for (&j, hj) in ch.hij.iter_mut() {
            *hj = fscale(hj, &l(j));
        }
        for (&j, a) in ch.a.iter_mut() {
            *a = a.mul(&l(j)).div(&l(i)).expect("nonzero");
        }
        for v in ch.b.values_mut() {
            *v = v.mul(&lp(i, 2));
        }
        for v in ch.e.values_mut() {
            *v = v.mul(&lp(i, 3));
        }
        ch.pi = ch.pi.mul(&lp(i, 4));
        ch.s = ch.s.mul(&lp(i, 6));
        for (&(j, _), v) in ch.c.iter_mut() {
            *v = v.mul(&l(j));
        }
    }
    for (&i, v) in out.x.iter_mut() {
        *v = v.mul(&l(i));
    }
    let gl = &mut out.globals;
    for (&i, v) in gl.pi.iter_mut() {
        *v = v.mul(&lp(i, 4));
    }
    for (&i, v) in gl.s.iter_mut() {
        *v = v.mul(&lp(i, 6));
    }
    for (&(i, _), v) in gl.b.iter_mut() {
        *v = v.mul(&lp(i, 2));
    }
    for (&(i, _), v) in gl.e.iter_mut() {
        *v = v.mul(&lp(i, 3));
    }
    for (&(i, j, _), v) in gl.c.iter_mut() {
        *v = v.mul(&l(i)).mul(&l(j));
    }
    Ok(out)
}
