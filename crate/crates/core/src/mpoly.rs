//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! Variables are small integer ids; a monomial is a sorted list of
//! (variable, exponent) pairs with nonzero exponents. Negative exponents are
//! allowed so that monomial denominators such as 1/f_sigma stay polynomial.

use crate::ring::Ring;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Var = u16;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub Vec<(Var, i32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn without(&self, v: Var) -> Mono {
        Mono(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    pub terms: BTreeMap<Mono, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(Mono::var(v, 1), BigRational::one())
    }

    pub fn monomial(m: Mono, c: BigRational) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse when the polynomial is a single monomial.
    pub fn monomial_inverse(&self) -> Option<MPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let inv = Mono(m.0.iter().map(|&(v, e)| (v, -e)).collect());
        Some(MPoly::monomial(inv, c.recip()))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    /// Collects the coefficient of v^e for every exponent e of v.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<i32, MPoly> {
        let mut out: BTreeMap<i32, MPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(v)).or_default().add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars().collect::<Vec<_>>()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Evaluates in a ring; `val` supplies each variable's value.
    pub fn eval<R: Ring>(&self, r: &R, val: &dyn Fn(Var) -> R::E) -> R::E {
        self.try_eval(r, val).expect("negative power of a non-unit")
    }

    /// Evaluation that reports a non-invertible value under a negative
    /// exponent as `None`.
    pub fn try_eval<R: Ring>(&self, r: &R, val: &dyn Fn(Var) -> R::E) -> Option<R::E> {
        let mut cache: BTreeMap<(Var, i32), R::E> = BTreeMap::new();
        let mut acc = r.zero();
        for (m, c) in &self.terms {
            let mut t = r.from_q(c);
            for &(v, e) in &m.0 {
                let pw = match cache.get(&(v, e)) {
                    Some(x) => x.clone(),
                    None => {
                        let base = val(v);
                        let base = if e < 0 { r.inv(&base)? } else { base };
                        let x = r.pow(&base, e.unsigned_abs());
                        cache.insert((v, e), x.clone());
                        x
                    }
                };
                t = r.mul(&t, &pw);
            }
            acc = r.add(&acc, &t);
        }
        Some(acc)
    }

    /// Substitutes polynomials for some variables (nonnegative exponents only
    /// for substituted variables unless the image is a monomial).
    pub fn substitute(&self, sub: &dyn Fn(Var) -> Option<MPoly>) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::monomial(Mono::one(), c.clone());
            for &(v, e) in &m.0 {
                match sub(v) {
                    Some(img) => {
                        let base = if e < 0 {
                            img.monomial_inverse().expect("negative power of a non-monomial")
                        } else {
                            img
                        };
                        t = t.mul(&base.pow(e.unsigned_abs()));
                    }
                    None => t = t.mul(&MPoly::monomial(Mono::var(v, e), BigRational::one())),
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn fmt_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = format!("({c})");
            for &(v, e) in &m.0 {
                if e == 1 {
                    s.push_str(&format!("*{}", name(v)));
                } else {
                    s.push_str(&format!("*{}^{}", name(v), e));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("x{v}")))
    }
}

/// Laurent polynomials as a ring; only monomials are invertible.
#[derive(Clone, Copy, Debug, Default)]
pub struct LaurentRing;

impl Ring for LaurentRing {
    type E = MPoly;
    fn zero(&self) -> MPoly {
        MPoly::zero()
    }
    fn one(&self) -> MPoly {
        MPoly::one()
    }
    fn from_int(&self, n: i64) -> MPoly {
        MPoly::constant(BigRational::from_integer(n.into()))
    }
    fn try_from_q(&self, q: &BigRational) -> Option<MPoly> {
        Some(MPoly::constant(q.clone()))
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b)
    }
    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.sub(b)
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.mul(b)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg()
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &MPoly) -> Option<MPoly> {
        a.monomial_inverse()
    }
}
