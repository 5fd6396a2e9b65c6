//! The catalog of identities between chart quantities and global functions,
//! checked exactly on a coordinate table.

use crate::coords::{CoordinatizedCurve, FfError, Setting};
use crate::sym::Sym;
use crate::table::{
    b_candidates, build_table, c_candidates, e_candidates, fadd, fconst, fmul, fscale, fsub, pi_candidates,
    s_candidates, CoordinateTable, Func, Glue,
};
use git1::rational::Q;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub checked: usize,
    pub failures: Vec<Witness>,
}

impl IdentityOutcome {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub parameters: String,
    pub identities: BTreeMap<String, IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.identities.values().all(IdentityOutcome::holds)
    }

    /// Per identity: number of instances checked and whether all held.
    pub fn pass_vector(&self) -> BTreeMap<String, (usize, bool)> {
        self.identities.iter().map(|(k, v)| (k.clone(), (v.checked, v.holds()))).collect()
    }

    pub fn failing(&self) -> Vec<&str> {
        self.identities.iter().filter(|(_, v)| !v.holds()).map(|(k, _)| k.as_str()).collect()
    }

    pub fn merge(&mut self, o: &IdentityReport) {
        for (k, v) in &o.identities {
            let slot = self.identities.entry(k.clone()).or_default();
            slot.checked += v.checked;
            for w in &v.failures {
                let mut w = w.clone();
                w.instance = format!("{} [{}]", w.instance, o.parameters);
                slot.failures.push(w);
            }
        }
    }
}

struct Checker<'a> {
    t: &'a CoordinateTable,
    out: BTreeMap<String, IdentityOutcome>,
}

fn int(k: i64) -> Q {
    Q::from_integer(k.into())
}

impl Checker<'_> {
    fn eq(&mut self, tag: &str, inst: String, lhs: &Sym, rhs: &Sym) {
        let slot = self.out.entry(tag.to_string()).or_default();
        slot.checked += 1;
        if lhs != rhs {
            slot.failures.push(Witness { instance: inst, lhs: self.t.render(lhs), rhs: self.t.render(rhs) });
        }
    }

    fn feq(&mut self, tag: &str, inst: String, lhs: &Func, rhs: &Func) {
        let slot = self.out.entry(tag.to_string()).or_default();
        slot.checked += 1;
        for (comp, (l, r)) in lhs.iter().zip(rhs).enumerate() {
            if l != r {
                slot.failures.push(Witness {
                    instance: format!("{inst} on component {comp}"),
                    lhs: self.t.render(l),
                    rhs: self.t.render(r),
                });
                break;
            }
        }
    }

    fn truth(&mut self, tag: &str, inst: String, ok: bool, what: &str) {
        let slot = self.out.entry(tag.to_string()).or_default();
        slot.checked += 1;
        if !ok {
            slot.failures.push(Witness { instance: inst, lhs: what.into(), rhs: String::new() });
        }
    }
}

fn distinct(xs: &[usize]) -> bool {
    let s: BTreeSet<_> = xs.iter().collect();
    s.len() == xs.len()
}

pub fn verify_table(t: &CoordinateTable) -> IdentityReport {
    let mut ck = Checker { t, out: BTreeMap::new() };
    let n = t.n;
    let nc = t.ncomp;
    let k_of = |s: &Sym| fconst(nc, s);
    let marks: Vec<usize> = (1..=n).collect();

    // regularity of every chart function at the glued points
    for (&i, ch) in &t.charts {
        let mut funcs: Vec<(String, &Func)> = vec![(format!("f_{i}"), &ch.f), (format!("h_{i}"), &ch.h)];
        for (j, hj) in &ch.hij {
            funcs.push((format!("h_{i}{j}"), hj));
        }
        for (name, f) in funcs {
            let mut ok = true;
            for gl in &t.glue {
                match gl {
                    Glue::Points { a, b } => {
                        let va = f[a.0].subst0(&a.1);
                        let vb = f[b.0].subst0(&b.1);
                        ok &= matches!((va, vb), (Ok(x), Ok(y)) if x == y);
                    }
                    Glue::Fold { comps } => {
                        let z = Sym::zero();
                        let vals: Vec<_> = comps.iter().map(|&c| f[c].subst0(&z)).collect();
                        ok &= vals.iter().all(|v| matches!((v, &vals[0]), (Ok(x), Ok(y)) if x == y));
                        let mut d = Sym::zero();
                        for &c in comps {
                            match f[c].derivative0().subst0(&z) {
                                Ok(v) => d = d.add(&v),
                                Err(_) => ok = false,
                            }
                        }
                        ok &= d.is_zero();
                    }
                }
            }
            ck.truth("regularity", name, ok, "not continuous or not regular at a singular point");
        }
    }

    for (&i, ch) in &t.charts {
        let (f, h, pi, s) = (&ch.f, &ch.h, &ch.pi, &ch.s);
        // chart constants
        let xi = &t.x[&i];
        if t.fold {
            ck.eq("chart-constants", format!("pi_{i}"), pi, &Sym::zero());
            ck.eq("chart-constants", format!("s_{i}"), s, &Sym::zero());
        } else {
            ck.eq("chart-constants", format!("pi_{i}"), pi, &xi.pow(4).scale(&Q::new((-1).into(), 3.into())));
            ck.eq("chart-constants", format!("s_{i}"), s, &xi.pow(6).scale(&Q::new(2.into(), 27.into())));
        }
        let disc = pi.pow(3).scale(&int(4)).add(&s.pow(2).scale(&int(27)));
        ck.eq("chart-constants", format!("discriminant_{i}"), &disc, &Sym::zero());

        let rhs = fadd(&fadd(&fmul(&fmul(f, f), f), &fscale(f, pi)), &k_of(s));
        ck.feq("g1-curve-eq", format!("i={i}"), &fmul(h, h), &rhs);
        for j in marks.iter().copied().filter(|&j| j != i) {
            let (a, b, e) = (&ch.a[&j], &ch.b[&j], &ch.e[&j]);
            let hj = &ch.hij[&j];
            let l2 = fmul(f, hj);
            let r2 = fadd(&fadd(&fscale(hj, b), &fscale(h, a)), &k_of(&a.mul(e)));
            ck.feq("g1-curve-eq", format!("f h, i={i} j={j}"), &l2, &r2);
            let l3 = fmul(h, hj);
            let r3 = fadd(
                &fadd(&fscale(hj, e), &fscale(&fmul(f, f), a)),
                &fadd(&fscale(f, &a.mul(b)), &k_of(&a.mul(&pi.add(&b.pow(2))))),
            );
            ck.feq("g1-curve-eq", format!("h h, i={i} j={j}"), &l3, &r3);
            let sv = e.pow(2).sub(&b.mul(&pi.add(&b.pow(2))));
            ck.eq("s-for-eq", format!("i={i} j={j}"), s, &sv);
            ck.eq("a-x-ij-eq", format!("i={i} j={j}"), &t.x[&j], &a.mul(&t.x[&i]).neg());
        }
        for &j in &marks {
            for &jj in &marks {
                if !distinct(&[i, j, jj]) || jj < j {
                    continue;
                }
                let (hj, hjj) = (&ch.hij[&j], &ch.hij[&jj]);
                let aa = ch.a[&j].mul(&ch.a[&jj]);
                let r = fsub(
                    &fsub(&fsub(&fmul(hj, hjj), &fscale(hj, &ch.c[&(jj, j)])), &fscale(hjj, &ch.c[&(j, jj)])),
                    &fscale(f, &aa),
                );
                let consts = r.iter().all(|v| v.is_constant_in_coordinate()) && r.iter().all(|v| *v == r[0]);
                ck.truth("h-ij-ij'-eq", format!("i={i} j={j} j'={jj}"), consts, "remainder is not a constant");
                let d = aa.mul(&ch.b[&j].add(&ch.b[&jj]));
                ck.eq("d-jj'-i-eq", format!("i={i} j={j} j'={jj}"), &r[0], &d);
            }
        }
        for &j in &marks {
            for &k in &marks {
                if !distinct(&[i, j, k]) {
                    continue;
                }
                let inst = format!("i={i} j={j} k={k}");
                let (aj, ak) = (&ch.a[&j], &ch.a[&k]);
                let (bj, bk, ej, ek) = (&ch.b[&j], &ch.b[&k], &ch.e[&j], &ch.e[&k]);
                let cjk = &ch.c[&(j, k)];
                ck.eq("c-kj-jk-eq", inst.clone(), &aj.mul(&ch.c[&(k, j)]), &ak.mul(cjk).neg());
                ck.eq("b-c-e-eq", inst.clone(), &bk.sub(bj).mul(cjk), &aj.mul(&ej.add(ek)));
                let quad = ch.pi.add(&bj.pow(2)).add(&bj.mul(bk)).add(&bk.pow(2));
                ck.eq("e-c-pi-b-eq", inst.clone(), &ek.sub(ej).mul(cjk), &aj.mul(&quad));
                for &jj in &marks {
                    if !distinct(&[i, j, jj, k]) {
                        continue;
                    }
                    let c = |p: usize, q: usize| ch.c[&(p, q)].clone();
                    let l = c(j, k).mul(&c(jj, k)).sub(&c(jj, j).mul(&c(j, k))).sub(&c(j, jj).mul(&c(jj, k)));
                    let r = aj.mul(&ch.a[&jj]).mul(&bk.add(bj).add(&ch.b[&jj]));
                    ck.eq("c-quadr-eq", format!("i={i} j={j} j'={jj} k={k}"), &l, &r);
                }
            }
        }
    }

    // pairs of charts
    for (&i, ci) in &t.charts {
        for (&j, cj) in &t.charts {
            if i == j {
                continue;
            }
            let inst = format!("i={i} j={j}");
            let aij = &ci.a[&j];
            ck.feq("h-ji-ij-eq", inst.clone(), &cj.hij[&i], &fscale(&ci.hij[&j], &cj.a[&i]));
            let hij = &ci.hij[&j];
            let fj = fsub(&fsub(&fmul(hij, hij), &fscale(&ci.f, &aij.pow(2))), &k_of(&aij.pow(2).mul(&ci.b[&j])));
            ck.feq("f-ji-eq", inst.clone(), &cj.f, &fj);
            let hj = fsub(
                &fsub(&fsub(&fmul(&fmul(hij, hij), hij), &fscale(&ci.h, &aij.pow(3))), &fscale(hij, &aij.pow(2).mul(&ci.b[&j]).scale(&int(3)))),
                &k_of(&aij.pow(3).mul(&ci.e[&j]).scale(&int(2))),
            );
            ck.feq("h-ji-eq", inst.clone(), &cj.h, &hj);
            ck.eq("b-e-pi-ji-eq", format!("b, {inst}"), &cj.b[&i], &aij.pow(2).mul(&ci.b[&j]));
            ck.eq("b-e-pi-ji-eq", format!("e, {inst}"), &cj.e[&i], &aij.pow(3).mul(&ci.e[&j]));
            ck.eq("b-e-pi-ji-eq", format!("pi, {inst}"), &cj.pi, &aij.pow(4).mul(&ci.pi));
            ck.eq("b-e-pi-ji-eq", format!("s, {inst}"), &cj.s, &aij.pow(6).mul(&ci.s));
            for &k in &marks {
                if !distinct(&[i, j, k]) {
                    continue;
                }
                let inst = format!("i={i} j={j} k={k}");
                ck.eq("a-ijk-eq", inst.clone(), &ci.a[&k], &aij.mul(&cj.a[&k]).neg());
                ck.eq("c-ijk-eq", inst.clone(), &cj.c[&(i, k)], &cj.a[&i].mul(&ci.c[&(j, k)]));
                ck.eq("c-ijk-bis-eq", inst.clone(), &cj.c[&(k, i)], &ci.a[&k].mul(&cj.c[&(i, k)]));
                ck.eq("c-ijk-bis-eq", inst.clone(), &cj.c[&(k, i)], &cj.a[&k].mul(&ci.c[&(j, k)]).neg());
                let hjk = fsub(&fadd(&ci.hij[&k], &fscale(hij, &cj.a[&k])), &k_of(&ci.c[&(k, j)]));
                ck.feq("h-jk-i-eq", inst.clone(), &cj.hij[&k], &hjk);
                for &m in &marks {
                    if !distinct(&[i, j, k, m]) {
                        continue;
                    }
                    let r = ci.c[&(k, m)].add(&cj.a[&k].mul(&ci.c[&(j, m)])).sub(&ci.c[&(k, j)]);
                    ck.eq("c-ijkm-eq", format!("{inst} m={m}"), &cj.c[&(k, m)], &r);
                }
            }
        }
    }

    // chart k against chart i
    for (&k, chk) in &t.charts {
        for (&i, chi) in &t.charts {
            if i == k {
                continue;
            }
            let aki = &chk.a[&i];
            for &j in &marks {
                if !distinct(&[i, j, k]) {
                    continue;
                }
                let inst = format!("i={i} j={j} k={k}");
                let cij = &chk.c[&(i, j)];
                let b = cij.pow(2).sub(&aki.pow(2).mul(&chk.b[&j])).sub(&aki.pow(2).mul(&chk.b[&i]));
                ck.eq("b-c-ijk-eq", inst.clone(), &chi.b[&j], &b);
                let e = cij
                    .pow(3)
                    .sub(&aki.pow(3).mul(&chk.e[&j]))
                    .sub(&aki.pow(2).mul(&chk.b[&i]).mul(cij).scale(&int(3)))
                    .sub(&aki.pow(3).mul(&chk.e[&i]).scale(&int(2)));
                ck.eq("e-c-ijk-eq", inst, &chi.e[&j], &e);
            }
        }
        for (&kk, chkk) in &t.charts {
            if kk == k {
                continue;
            }
            for &i in &marks {
                for &j in &marks {
                    if !distinct(&[i, j, k, kk]) {
                        continue;
                    }
                    let c = |p: usize, q: usize| chk.c[&(p, q)].clone();
                    let akki = &chkk.a[&i];
                    let l = akki
                        .mul(&c(i, j))
                        .mul(&c(kk, j))
                        .sub(&c(i, j).mul(&c(i, kk)))
                        .sub(&akki.mul(&c(kk, j)).mul(&c(i, kk)));
                    let r = chk.a[&i].pow(2).mul(&chk.b[&j].add(&chk.b[&i]).add(&chk.b[&kk])).neg();
                    ck.eq("c-quadratic-eq", format!("i={i} j={j} k={k} k'={kk}"), &l, &r);
                }
            }
        }
    }

    // global functions
    let gl = &t.globals;
    let x = |i: usize| t.x[&i].clone();
    for &i in &marks {
        for (chart, v) in pi_candidates(t, i) {
            ck.eq("Pi-S-global", format!("Pi_{i} from chart {chart}"), &gl.pi[&i], &v);
        }
        for (chart, v) in s_candidates(t, i) {
            ck.eq("Pi-S-global", format!("S_{i} from chart {chart}"), &gl.s[&i], &v);
        }
        for &j in &marks {
            if i == j {
                continue;
            }
            for (chart, v) in b_candidates(t, i, j) {
                ck.eq("B-global", format!("B_{i}{j} from chart {chart}"), &gl.b[&(i, j)], &v);
            }
            for (chart, v) in e_candidates(t, i, j) {
                ck.eq("E-global", format!("E_{i}{j} from chart {chart}"), &gl.e[&(i, j)], &v);
            }
            let (bij, eij) = (&gl.b[&(i, j)], &gl.e[&(i, j)]);
            let sv = eij.pow(2).sub(&bij.mul(&gl.pi[&i].add(&bij.pow(2))));
            ck.eq("S-Pi-eq", format!("i={i} j={j}"), &gl.s[&i], &sv);
            ck.eq("B-x-eq", format!("i={i} j={j}"), &bij.mul(&x(j).pow(2)), &gl.b[&(j, i)].mul(&x(i).pow(2)));
            // odd weight: the two sides differ by the sign of a_ij^3
            ck.eq("E-x-eq", format!("i={i} j={j}"), &eij.mul(&x(j).pow(3)), &gl.e[&(j, i)].mul(&x(i).pow(3)).neg());
            ck.eq("Pi-x-eq", format!("i={i} j={j}"), &gl.pi[&i].mul(&x(j).pow(4)), &gl.pi[&j].mul(&x(i).pow(4)));
            for &jj in &marks {
                if !distinct(&[i, j, jj]) {
                    continue;
                }
                let inst = format!("i={i} j={j} j'={jj}");
                for (chart, v) in c_candidates(t, i, j, jj) {
                    ck.eq("C-global", format!("C_{j}{jj}({i}) from chart {chart}"), &gl.c[&(i, j, jj)], &v);
                }
                let cg = |a: usize, b: usize, c: usize| gl.c[&(a, b, c)].clone();
                let c = cg(i, j, jj);
                let r = gl.b[&(j, jj)].mul(&x(i).pow(2)).add(&bij.add(&gl.b[&(i, jj)]).mul(&x(j).pow(2)));
                ck.eq("C-sq-identity-eq", inst.clone(), &c.pow(2), &r);
                ck.eq("C-swap-eq", inst.clone(), &c, &cg(j, i, jj).neg());
                ck.eq("C-x-eq", inst.clone(), &c.mul(&x(jj)), &cg(jj, i, j).mul(&x(j)));
                let cube = gl.e[&(j, jj)]
                    .mul(&x(i).pow(3))
                    .sub(&gl.e[&(i, jj)].mul(&x(j).pow(3)))
                    .add(&c.mul(bij).mul(&x(j).pow(2)).scale(&int(3)))
                    .sub(&eij.mul(&x(j).pow(3)).scale(&int(2)));
                ck.eq("C-cube-eq", inst.clone(), &c.pow(3), &cube);
                for &m in &marks {
                    if !distinct(&[i, j, jj, m]) {
                        continue;
                    }
                    let r = cg(m, j, jj).mul(&x(i)).sub(&cg(m, i, jj).mul(&x(j))).sub(&cg(m, j, i).mul(&x(i)));
                    ck.eq("C-m-eq", format!("{inst} m={m}"), &c.mul(&x(m)), &r);
                }
            }
            for &k in &marks {
                if !distinct(&[i, j, k]) {
                    continue;
                }
                let inst = format!("i={i} j={j} k={k}");
                let (bik, eik) = (&gl.b[&(i, k)], &gl.e[&(i, k)]);
                let cjk = cg3(gl, i, j, k);
                ck.eq("B-C-E-eq", inst.clone(), &bik.sub(bij).mul(&cjk), &eij.add(eik).mul(&x(j)).neg());
                let quad = gl.pi[&i].add(&bij.pow(2)).add(&bij.mul(bik)).add(&bik.pow(2));
                ck.eq("E-C-Pi-eq", inst.clone(), &eik.sub(eij).mul(&cjk), &quad.mul(&x(j)).neg());
                for &jj in &marks {
                    if !distinct(&[i, j, jj, k]) {
                        continue;
                    }
                    let l = cjk
                        .mul(&cg3(gl, i, jj, k))
                        .sub(&cg3(gl, i, jj, j).mul(&cjk))
                        .sub(&cg3(gl, i, j, jj).mul(&cg3(gl, i, jj, k)));
                    let r = bik.add(bij).add(&gl.b[&(i, jj)]).mul(&x(j)).mul(&x(jj));
                    ck.eq("C-quad-eq", format!("{inst} j'={jj}"), &l, &r);
                }
            }
        }
    }

    IdentityReport { parameters: t.description.clone(), identities: ck.out }
}

fn cg3(gl: &crate::table::Globals, i: usize, j: usize, k: usize) -> Sym {
    gl.c[&(i, j, k)].clone()
}

pub fn verify_identities(cc: &CoordinatizedCurve) -> Result<IdentityReport, FfError> {
    Ok(verify_table(&build_table(&Setting::numeric(cc)?)?))
}

/// Every position and scaling an indeterminate.
pub fn verify_symbolic(c: &git1::curve::Curve) -> Result<IdentityReport, FfError> {
    Ok(verify_table(&build_table(&Setting::symbolic(c)?)?))
}
