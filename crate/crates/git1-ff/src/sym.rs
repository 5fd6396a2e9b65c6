//! Rational functions over the rationals: a polynomial numerator over a
//! product of monic factors. Variable 0 is the coordinate on a component;
//! the others are free parameters in symbolic mode.
//!
//! Denominators are kept as factor lists so that sums use a common multiple
//! instead of the full product, and factors are cancelled against the
//! numerator by exact division whenever possible.

use crate::poly::MPoly;
use git1::rational::{fmt_q, Q};
use num_traits::One;
use std::fmt;

#[derive(Clone, Debug)]
pub struct Sym {
    num: MPoly,
    den: Vec<(MPoly, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymError {
    DivisionByZero,
    /// Evaluation hit a pole or an indeterminate form.
    Pole,
    /// A residue was requested at a point that is not a simple pole.
    NotSimplePole,
}

fn merge(a: &[(MPoly, u32)], b: &[(MPoly, u32)], add: bool) -> Vec<(MPoly, u32)> {
    let mut out: Vec<(MPoly, u32)> = a.to_vec();
    for (g, e) in b {
        if let Some(slot) = out.iter_mut().find(|(h, _)| h == g) {
            slot.1 = if add { slot.1 + e } else { slot.1.max(*e) };
        } else {
            out.push((g.clone(), *e));
        }
    }
    out
}

/// Product of the factors of `full` not already accounted for by `part`.
fn cofactor(full: &[(MPoly, u32)], part: &[(MPoly, u32)]) -> MPoly {
    let mut r = MPoly::one();
    for (g, e) in full {
        let have = part.iter().find(|(h, _)| h == g).map_or(0, |(_, k)| *k);
        if *e > have {
            r = r.mul(&g.pow(e - have));
        }
    }
    r
}

fn expand(den: &[(MPoly, u32)]) -> MPoly {
    den.iter().fold(MPoly::one(), |acc, (g, e)| acc.mul(&g.pow(*e)))
}

/// Split a nonzero polynomial into a scalar and monic factors.
fn factor_monic(p: &MPoly) -> (Q, Vec<(MPoly, u32)>) {
    let content = p.monomial_content();
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for (v, &e) in content.iter().enumerate() {
        if e > 0 {
            let x = MPoly::var(v);
            factors.push((x.clone(), e as u32));
            rest = rest.div_exact(&x.pow(e as u32)).expect("monomial content divides");
        }
    }
    let lc = rest.lead().map(|(_, c)| c.clone()).unwrap_or_else(Q::one);
    let monic = rest.scale(&(Q::one() / &lc));
    if monic.as_constant().is_none() {
        factors.push((monic, 1));
    }
    (lc, factors)
}

impl Sym {
    pub fn zero() -> Sym {
        Sym { num: MPoly::zero(), den: vec![] }
    }

    pub fn one() -> Sym {
        Sym::q(Q::one())
    }

    pub fn q(c: Q) -> Sym {
        Sym { num: MPoly::constant(c), den: vec![] }
    }

    pub fn int(c: i64) -> Sym {
        Sym::q(Q::from_integer(c.into()))
    }

    pub fn var(i: usize) -> Sym {
        Sym { num: MPoly::var(i), den: vec![] }
    }

    pub fn poly(p: MPoly) -> Sym {
        Sym { num: p, den: vec![] }
    }

    fn build(num: MPoly, den: Vec<(MPoly, u32)>) -> Sym {
        if num.is_zero() {
            return Sym::zero();
        }
        let mut num = num;
        let mut out = Vec::new();
        for (g, mut e) in den {
            while e > 0 {
                match num.div_exact(&g) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                out.push((g, e));
            }
        }
        Sym { num, den: out }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_q(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> MPoly {
        expand(&self.den)
    }

    /// True when the value does not involve variable 0.
    pub fn is_constant_in_coordinate(&self) -> bool {
        self.num.degree_in(0) == 0 && self.den.iter().all(|(g, _)| g.degree_in(0) == 0)
    }

    pub fn add(&self, o: &Sym) -> Sym {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let l = merge(&self.den, &o.den, false);
        let a = self.num.mul(&cofactor(&l, &self.den));
        let b = o.num.mul(&cofactor(&l, &o.den));
        Sym::build(a.add(&b), l)
    }

    pub fn neg(&self) -> Sym {
        Sym { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Sym) -> Sym {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Sym) -> Sym {
        if self.is_zero() || o.is_zero() {
            return Sym::zero();
        }
        Sym::build(self.num.mul(&o.num), merge(&self.den, &o.den, true))
    }

    pub fn scale(&self, k: &Q) -> Sym {
        Sym::build(self.num.scale(k), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Sym {
        let mut r = Sym::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn inv(&self) -> Result<Sym, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let (lc, factors) = factor_monic(&self.num);
        let num = expand(&self.den).scale(&(Q::one() / lc));
        Ok(Sym::build(num, factors))
    }

    pub fn div(&self, o: &Sym) -> Result<Sym, SymError> {
        Ok(self.mul(&o.inv()?))
    }

    /// Substitute `v` for variable 0.
    pub fn subst0(&self, v: &Sym) -> Result<Sym, SymError> {
        let top = poly_at(&self.num, v);
        let mut bottom = Sym::one();
        for (g, e) in &self.den {
            let gv = poly_at(g, v);
            if gv.is_zero() {
                return Err(SymError::Pole);
            }
            bottom = bottom.mul(&gv.pow(*e));
        }
        top.div(&bottom)
    }

    pub fn derivative0(&self) -> Sym {
        // (N/D)' = N'/D - (N/D) * sum e g'/g
        let base = Sym { num: MPoly::one(), den: self.den.clone() };
        let mut r = Sym::poly(self.num.derivative(0)).mul(&base);
        for (g, e) in &self.den {
            let t = Sym::poly(g.derivative(0).scale(&Q::from_integer((*e as i64).into())))
                .div(&Sym::poly(g.clone()))
                .expect("factor is nonzero");
            r = r.sub(&self.mul(&t));
        }
        r
    }

    /// Residue in variable 0 at a simple pole `pt`.
    pub fn residue0(&self, pt: &Sym) -> Result<Sym, SymError> {
        let mut vanishing = None;
        let mut rest = Sym::one();
        for (g, e) in &self.den {
            let gv = poly_at(g, pt);
            if gv.is_zero() {
                if vanishing.is_some() || *e != 1 {
                    return Err(SymError::NotSimplePole);
                }
                vanishing = Some(g);
            } else {
                rest = rest.mul(&gv.pow(*e));
            }
        }
        let g = vanishing.ok_or(SymError::NotSimplePole)?;
        let dg = poly_at(&g.derivative(0), pt);
        let nv = poly_at(&self.num, pt);
        if dg.is_zero() || nv.is_zero() {
            return Err(SymError::NotSimplePole);
        }
        nv.div(&rest.mul(&dg))
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if let Some(c) = self.as_q() {
            return fmt_q(&c);
        }
        let n = self.num.render(names);
        if self.den.is_empty() {
            return n;
        }
        let d: Vec<String> = self
            .den
            .iter()
            .map(|(g, e)| {
                let s = format!("({})", g.render(names));
                if *e == 1 { s } else { format!("{s}^{e}") }
            })
            .collect();
        format!("({n})/{}", d.join("*"))
    }
}

fn poly_at(p: &MPoly, v: &Sym) -> Sym {
    let coeffs = p.coefficients_in(0);
    let top = coeffs.keys().next_back().copied().unwrap_or(0);
    let mut acc = Sym::zero();
    for k in (0..=top).rev() {
        acc = acc.mul(v);
        if let Some(c) = coeffs.get(&k) {
            acc = acc.add(&Sym::poly(c.clone()));
        }
    }
    acc
}

impl PartialEq for Sym {
    fn eq(&self, o: &Sym) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.sub(o).is_zero()
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|i| if i == 0 { "w".into() } else { format!("t{i}") }))
    }
}

impl From<Q> for Sym {
    fn from(c: Q) -> Sym {
        Sym::q(c)
    }
}

impl From<i64> for Sym {
    fn from(c: i64) -> Sym {
        Sym::int(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use git1::rational::{q, qf};

    fn w() -> Sym {
        Sym::var(0)
    }

    #[test]
    fn field_ops() {
        let t = Sym::var(1);
        let a = w().div(&t.sub(&w())).unwrap();
        let b = a.mul(&t.sub(&w()));
        assert_eq!(b, w());
        let c = a.add(&Sym::one());
        assert_eq!(c, t.div(&t.sub(&w())).unwrap());
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.inv().unwrap().inv().unwrap(), a);
    }

    #[test]
    fn residues_and_derivatives() {
        // 3 w / (2 - w) has residue -6 at 2 and derivative 3/2 at 0
        let f = w().scale(&q(3)).div(&Sym::int(2).sub(&w())).unwrap();
        assert_eq!(f.residue0(&Sym::int(2)).unwrap(), Sym::int(-6));
        assert_eq!(f.derivative0().subst0(&Sym::zero()).unwrap(), Sym::q(qf(3, 2)));
        assert_eq!(f.subst0(&Sym::int(2)), Err(SymError::Pole));
        assert_eq!(f.subst0(&Sym::int(1)).unwrap(), Sym::int(3));
    }
}
