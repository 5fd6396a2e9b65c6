//! Sparse multivariate polynomials over the rationals, lex order with
//! variable 0 most significant.

use git1::rational::{fmt_q, Q};
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector with trailing zeros trimmed.
pub type Mono = Vec<u16>;

fn trim(mut m: Mono) -> Mono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = vec![0u16; a.len().max(b.len())];
    for (i, e) in a.iter().enumerate() {
        r[i] += e;
    }
    for (i, e) in b.iter().enumerate() {
        r[i] += e;
    }
    r
}

fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    if b.len() > a.len() {
        return None;
    }
    let mut r = a.clone();
    for (i, e) in b.iter().enumerate() {
        r[i] = r[i].checked_sub(*e)?;
    }
    Some(trim(r))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MPoly {
    terms: BTreeMap<Mono, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::new(), c);
        }
        p
    }

    pub fn one() -> Self {
        MPoly::constant(Q::one())
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(i, 1)
    }

    pub fn monomial(i: usize, e: u16) -> Self {
        let mut m = vec![0u16; i + 1];
        m[i] = e;
        let mut p = MPoly::zero();
        p.terms.insert(trim(m), Q::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Mono::new()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn lead(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &Q) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Mono, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                *acc.entry(trim(mono_mul(ma, mb))).or_insert_with(Q::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly { terms: acc }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut r = MPoly::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Quotient when `g` divides `self` exactly.
    pub fn div_exact(&self, g: &MPoly) -> Option<MPoly> {
        let (lg, cg) = g.lead()?;
        let (lg, cg) = (lg.clone(), cg.clone());
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((lr, cr)) = r.lead() {
            let m = mono_div(lr, &lg)?;
            let c = cr / &cg;
            let mut t = MPoly::zero();
            t.terms.insert(m, c);
            r = r.sub(&t.mul(g));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.keys().map(|m| m.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut r = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.get(v).copied().unwrap_or(0);
            if e > 0 {
                let mut m2 = m.clone();
                m2[v] -= 1;
                r.add_term(trim(m2), c * Q::from_integer(e.into()));
            }
        }
        r
    }

    /// Split as `sum_k coeff_k * x_v^k`.
    pub fn coefficients_in(&self, v: usize) -> BTreeMap<u16, MPoly> {
        let mut out: BTreeMap<u16, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.get(v).copied().unwrap_or(0);
            let mut m2 = m.clone();
            if e > 0 {
                m2[v] = 0;
            }
            out.entry(e).or_default().add_term(trim(m2), c.clone());
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Mono::new() };
        let mut g = first.clone();
        for m in it {
            for (i, e) in g.iter_mut().enumerate() {
                *e = (*e).min(m.get(i).copied().unwrap_or(0));
            }
        }
        trim(g)
    }

    pub fn from_mono(m: Mono) -> MPoly {
        let mut p = MPoly::zero();
        p.terms.insert(trim(m), Q::one());
        p
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut s = String::new();
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
                .collect();
            if vars.is_empty() {
                s.push_str(&fmt_q(c));
            } else if c.is_one() {
                s.push_str(&vars.join("*"));
            } else if *c == -Q::one() {
                s.push('-');
                s.push_str(&vars.join("*"));
            } else {
                s.push_str(&format!("{}*{}", fmt_q(c), vars.join("*")));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| format!("v{i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use git1::rational::q;

    #[test]
    fn exact_division() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let a = x.add(&y);
        let b = x.sub(&y.scale(&q(2)));
        let p = a.mul(&b).mul(&a);
        assert_eq!(p.div_exact(&a).unwrap(), a.mul(&b));
        assert_eq!(p.div_exact(&b).unwrap(), a.mul(&a));
        assert!(p.div_exact(&x).is_none());
        assert!(p.add(&MPoly::one()).div_exact(&a).is_none());
    }

    #[test]
    fn derivative_and_content() {
        let x = MPoly::var(0);
        let y = MPoly::var(2);
        let p = x.pow(3).mul(&y).add(&x.mul(&y).scale(&q(5)));
        assert_eq!(p.derivative(0), x.pow(2).mul(&y).scale(&q(3)).add(&y.scale(&q(5))));
        assert_eq!(p.monomial_content(), vec![1, 0, 1]);
    }
}
