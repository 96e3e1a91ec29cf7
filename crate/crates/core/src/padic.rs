//! Capped-precision p-adic numbers, the Iwasawa logarithm, Teichmüller
//! lifts, Coleman polylogarithms and rational reconstruction.
//!
//! A number is `p^val * unit` with `unit` known modulo `p^rel`. `rel == 0`
//! means "zero to absolute precision val"; exact zero is a separate state.

use crate::ring::{int_valuation, is_prime_u64, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p must not be 2 or 3")]
    ForbiddenPrime,
    #[error("precision must be at least 5, got {0}")]
    LowPrecision(u32),
    #[error("argument is zero")]
    Zero,
    #[error("argument is not a unit")]
    NonUnit,
    #[error("argument lies in the residue disk of 1")]
    ResidueDiskOfOne,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("no rational reconstruction within bounds")]
    NoReconstruction,
    #[error("polylogarithm weight {0} is above the supported maximum {1}")]
    WeightTooLarge(usize, usize),
}

const EXACT: i64 = i64::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicNumber {
    val: i64,
    unit: BigInt,
    rel: u32,
}

impl PadicNumber {
    pub fn exact_zero() -> Self {
        PadicNumber { val: EXACT, unit: BigInt::zero(), rel: 0 }
    }

    /// Zero known modulo p^abs.
    pub fn zero_to(abs: i64) -> Self {
        PadicNumber { val: abs, unit: BigInt::zero(), rel: 0 }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val == EXACT
    }

    /// Indistinguishable from zero at its own precision.
    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Valuation, or the absolute precision floor for a zero.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    pub fn abs_prec(&self) -> i64 {
        if self.is_exact_zero() {
            EXACT
        } else {
            self.val + self.rel as i64
        }
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }
}

/// Prime, relative precision and a table of powers of p. Implements
/// [`Ring`] with [`PadicNumber`] elements.
#[derive(Clone, Debug)]
pub struct PadicContext {
    p: u64,
    prec: u32,
    pows: Vec<BigInt>,
}

fn ilog(k: u64, p: u64) -> i64 {
    let mut e = 0;
    let mut x = k;
    while x >= p {
        x /= p;
        e += 1;
    }
    e
}

impl PadicContext {
    pub fn new(p: u64, prec: u32) -> Result<Self, PadicError> {
        if !is_prime_u64(p) {
            return Err(PadicError::NotPrime(p));
        }
        if p == 2 || p == 3 {
            return Err(PadicError::ForbiddenPrime);
        }
        if prec < 5 {
            return Err(PadicError::LowPrecision(prec));
        }
        let mut pows = vec![BigInt::one()];
        let pb = BigInt::from(p);
        for i in 1..=(4 * prec as usize + 64) {
            let next = &pows[i - 1] * &pb;
            pows.push(next);
        }
        Ok(PadicContext { p, prec, pows })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same prime, different precision.
    pub fn with_prec(&self, prec: u32) -> PadicContext {
        PadicContext::new(self.p, prec).expect("prime already validated")
    }

    pub fn pk(&self, k: u32) -> BigInt {
        match self.pows.get(k as usize) {
            Some(x) => x.clone(),
            None => BigInt::from(self.p).pow(k),
        }
    }

    fn make(&self, mut val: i64, unit: BigInt, mut rel: u32) -> PadicNumber {
        if rel == 0 {
            return PadicNumber::zero_to(val);
        }
        let mut x = unit.mod_floor(&self.pk(rel));
        if x.is_zero() {
            return PadicNumber::zero_to(val + rel as i64);
        }
        let pb = BigInt::from(self.p);
        loop {
            let (q, r) = x.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            x = q;
            val += 1;
            rel -= 1;
        }
        PadicNumber { val, unit: x, rel }
    }

    /// Rational at a given relative precision.
    pub fn from_q_prec(&self, q: &BigRational, rel: u32) -> PadicNumber {
        if q.is_zero() {
            return PadicNumber::exact_zero();
        }
        let vn = int_valuation(q.numer(), self.p);
        let vd = int_valuation(q.denom(), self.p);
        let n = q.numer() / self.pk(vn);
        let d = q.denom() / self.pk(vd);
        let m = self.pk(rel);
        let di = d.mod_floor(&m).modinv(&m).expect("denominator coprime to p");
        self.make(vn as i64 - vd as i64, n * di, rel)
    }

    /// The integer residue x known modulo p^abs.
    pub fn from_residue(&self, x: &BigInt, abs: u32) -> PadicNumber {
        self.make(0, x.clone(), abs)
    }

    /// Lowers the relative precision to at most `rel`.
    pub fn truncate(&self, x: &PadicNumber, rel: u32) -> PadicNumber {
        if x.rel <= rel {
            x.clone()
        } else {
            self.make(x.val, x.unit.clone(), rel)
        }
    }

    /// Lowers the absolute precision to at most `abs`.
    pub fn truncate_abs(&self, x: &PadicNumber, abs: i64) -> PadicNumber {
        if x.abs_prec() <= abs {
            return x.clone();
        }
        if x.val >= abs {
            return PadicNumber::zero_to(abs);
        }
        self.make(x.val, x.unit.clone(), (abs - x.val) as u32)
    }

    pub fn teichmuller(&self, x: &PadicNumber) -> Result<PadicNumber, PadicError> {
        if x.is_zero() {
            return Err(PadicError::Zero);
        }
        if x.val != 0 {
            return Err(PadicError::NonUnit);
        }
        let m = self.pk(x.rel);
        let pb = BigInt::from(self.p);
        let mut t = x.unit.clone();
        for _ in 0..=x.rel {
            t = t.modpow(&pb, &m);
        }
        Ok(self.make(0, t, x.rel))
    }

    /// Iwasawa logarithm: log p = 0 and log kills roots of unity.
    pub fn log(&self, x: &PadicNumber) -> Result<PadicNumber, PadicError> {
        if x.is_zero() {
            return Err(PadicError::Zero);
        }
        let u = self.make(0, x.unit.clone(), x.rel);
        let t = self.teichmuller(&u)?;
        let y = self.mul(&u, &self.inv(&t).expect("unit"));
        let z = self.sub(&y, &self.one());
        if z.is_zero() {
            return Ok(PadicNumber::zero_to(z.abs_prec().min(x.rel as i64)));
        }
        let target = x.rel as i64;
        let vz = z.val;
        let mut acc = PadicNumber::exact_zero();
        let mut zk = z.clone();
        let mut k: u64 = 1;
        while (k as i64) * vz - ilog(k, self.p) <= target + 1 {
            let term = self.mul(&zk, &self.from_q_prec(&BigRational::new(1.into(), (k as i64).into()), target as u32 + 4));
            acc = if k % 2 == 1 { self.add(&acc, &term) } else { self.sub(&acc, &term) };
            zk = self.mul(&zk, &z);
            k += 1;
        }
        Ok(self.truncate_abs(&acc, target))
    }

    /// Unique a/b with |a|, |b| <= sqrt(p^N / 2) and a/b = unit mod p^N
    /// (N = relative precision), times p^val.
    pub fn rational_reconstruct(&self, x: &PadicNumber) -> Result<BigRational, PadicError> {
        if x.is_zero() {
            return Ok(BigRational::zero());
        }
        let m = self.pk(x.rel);
        let bound = (&m / BigInt::from(2)).sqrt();
        let (mut r0, mut r1) = (m.clone(), x.unit.clone());
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            r0 = std::mem::replace(&mut r1, r2);
            let t2 = &t0 - &q * &t1;
            t0 = std::mem::replace(&mut t1, t2);
        }
        if t1.is_zero() || t1.abs() > bound || (&t1 % BigInt::from(self.p)).is_zero() {
            return Err(PadicError::NoReconstruction);
        }
        let base = BigRational::new(r1, t1);
        let pv = BigRational::from_integer(self.pk(x.val.unsigned_abs() as u32));
        Ok(if x.val >= 0 { base * pv } else { base / pv })
    }

    /// Base-p digits, low to high, with valuation prefix.
    pub fn digits(&self, x: &PadicNumber) -> String {
        if x.is_exact_zero() {
            return "0".into();
        }
        if x.is_zero() {
            return format!("O({}^{})", self.p, x.val);
        }
        let pb = BigInt::from(self.p);
        let mut u = x.unit.clone();
        let mut ds = Vec::with_capacity(x.rel as usize);
        for _ in 0..x.rel {
            let (q, r) = u.div_rem(&pb);
            ds.push(r.to_string());
            u = q;
        }
        format!("v={} [{}] + O({}^{})", x.val, ds.join(" "), self.p, x.abs_prec())
    }

    /// Residue of a p-integral number modulo p (None for non-integral).
    pub fn residue(&self, x: &PadicNumber) -> Option<u64> {
        if x.val > 0 || x.is_zero() {
            return Some(0);
        }
        if x.val < 0 {
            return None;
        }
        (&x.unit % BigInt::from(self.p)).to_u64()
    }
}

impl Ring for PadicContext {
    type E = PadicNumber;

    fn zero(&self) -> PadicNumber {
        PadicNumber::exact_zero()
    }

    fn one(&self) -> PadicNumber {
        self.make(0, BigInt::one(), self.prec)
    }

    fn from_int(&self, n: i64) -> PadicNumber {
        self.from_q_prec(&BigRational::from_integer(n.into()), self.prec)
    }

    fn try_from_q(&self, q: &BigRational) -> Option<PadicNumber> {
        Some(self.from_q_prec(q, self.prec))
    }

    fn add(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        if a.is_exact_zero() {
            return b.clone();
        }
        if b.is_exact_zero() {
            return a.clone();
        }
        let prec = a.abs_prec().min(b.abs_prec());
        if a.is_zero() && b.is_zero() {
            return PadicNumber::zero_to(prec);
        }
        if a.is_zero() || b.is_zero() {
            let x = if a.is_zero() { b } else { a };
            return if prec <= x.val {
                PadicNumber::zero_to(prec)
            } else {
                self.make(x.val, x.unit.clone(), (prec - x.val) as u32)
            };
        }
        let v = a.val.min(b.val);
        let r = prec - v;
        if r <= 0 {
            return PadicNumber::zero_to(prec);
        }
        let x = &a.unit * self.pk((a.val - v) as u32) + &b.unit * self.pk((b.val - v) as u32);
        self.make(v, x, r as u32)
    }

    fn sub(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        if a.is_exact_zero() || b.is_exact_zero() {
            return PadicNumber::exact_zero();
        }
        if a.is_zero() || b.is_zero() {
            return PadicNumber::zero_to(a.val + b.val);
        }
        self.make(a.val + b.val, &a.unit * &b.unit, a.rel.min(b.rel))
    }

    fn neg(&self, a: &PadicNumber) -> PadicNumber {
        if a.is_zero() {
            return a.clone();
        }
        self.make(a.val, -&a.unit, a.rel)
    }

    fn is_zero(&self, a: &PadicNumber) -> bool {
        a.is_zero()
    }

    fn is_exact_zero(&self, a: &PadicNumber) -> bool {
        a.is_exact_zero()
    }

    fn inv(&self, a: &PadicNumber) -> Option<PadicNumber> {
        if a.is_zero() {
            return None;
        }
        let m = self.pk(a.rel);
        let u = a.unit.modinv(&m)?;
        Some(PadicNumber { val: -a.val, unit: u, rel: a.rel })
    }

    fn pivot_key(&self, a: &PadicNumber) -> Option<i64> {
        if a.is_zero() {
            None
        } else {
            Some(a.val)
        }
    }
}

/// Highest polylogarithm weight the engine prepares.
pub const MAX_WEIGHT: usize = 6;
const GUARD: u32 = 10;

/// Coleman polylogarithms for one (p, precision). Internally works with
/// `GUARD` extra digits and truncates results to the requested precision.
///
/// ℓ_n(z) = Li_n(z) − p^{−n} Li_n(z^p) is kept as a single power series in
/// w = 1/(1 − z), which converges on |w| ≤ 1, i.e. everywhere outside the
/// residue disk of 1.
pub struct PolylogEngine {
    out: PadicContext,
    work: PadicContext,
    ell: OnceLock<Vec<Vec<PadicNumber>>>,
}

impl PolylogEngine {
    pub fn new(ctx: &PadicContext) -> Self {
        PolylogEngine { out: ctx.clone(), work: ctx.with_prec(ctx.prec + GUARD), ell: OnceLock::new() }
    }

    /// Shared engine per (p, precision).
    pub fn shared(ctx: &PadicContext) -> Arc<PolylogEngine> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<PolylogEngine>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        cache
            .lock()
            .unwrap()
            .entry((ctx.p, ctx.prec))
            .or_insert_with(|| Arc::new(PolylogEngine::new(ctx)))
            .clone()
    }

    pub fn context(&self) -> &PadicContext {
        &self.out
    }

    /// The working context (extra guard digits).
    pub fn work(&self) -> &PadicContext {
        &self.work
    }

    fn finish(&self, x: PadicNumber) -> PadicNumber {
        self.out.truncate(&x, self.out.prec)
    }

    /// Coefficients of ℓ_1, …, ℓ_MAX_WEIGHT in w.
    pub fn ell_series(&self) -> &Vec<Vec<PadicNumber>> {
        self.ell.get_or_init(|| self.build_ell())
    }

    fn build_ell(&self) -> Vec<Vec<PadicNumber>> {
        let c = &self.work;
        let p = c.p;
        let w = c.prec;
        let deg = ((w + 12) as u64 * (p - 1)) as usize;
        let extra = MAX_WEIGHT as u32 * (ilog(deg as u64 + 1, p) as u32 + 1);
        let ap = w + 10 + extra;
        let m = c.pk(ap);
        // h(w) = (w^p − (w−1)^p − 1)/p has integer coefficients.
        let mut h = vec![BigInt::zero(); p as usize];
        let mut binom = BigInt::one();
        for k in 0..p {
            if k > 0 {
                binom = binom * BigInt::from(p - k + 1) / BigInt::from(k);
            }
            let sign = if (p - k) % 2 == 0 { 1 } else { -1 };
            let mut coef = -&binom * sign;
            if k == 0 {
                coef -= 1;
            }
            h[k as usize] = coef / BigInt::from(p);
        }
        // ℓ_1 = (1/p) log(1 + p h) = Σ (−1)^{m+1} p^{m−1} h^m / m, p-integral.
        let mut acc = vec![BigInt::zero(); deg + 1];
        let mut hm = vec![BigInt::one()];
        let mut k: u64 = 1;
        loop {
            if k as i64 - 1 - ilog(k, p) >= ap as i64 {
                break;
            }
            let e = int_valuation(&BigInt::from(k), p);
            let mut next = vec![BigInt::zero(); (hm.len() + p as usize - 1).min(deg + 1)];
            for (i, a) in hm.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in h.iter().enumerate() {
                    if i + j <= deg {
                        next[i + j] += a * b;
                    }
                }
            }
            for x in next.iter_mut() {
                *x = x.mod_floor(&m);
            }
            hm = next;
            let kp = BigInt::from(k / p.pow(e));
            let mut coef = c.pk(k as u32 - 1 - e) * kp.modinv(&m).expect("coprime");
            if k % 2 == 0 {
                coef = -coef;
            }
            for (i, a) in hm.iter().enumerate() {
                acc[i] = (&acc[i] + &coef * a).mod_floor(&m);
            }
            k += 1;
        }
        let mut out = Vec::with_capacity(MAX_WEIGHT);
        let mut cur: Vec<PadicNumber> = acc.iter().map(|x| c.from_residue(x, ap)).collect();
        out.push(cur.clone());
        for _ in 1..MAX_WEIGHT {
            // dℓ_n/dw = ℓ_{n−1}/(w(w−1)); ℓ_{n−1}(w = 0) = 0 so drop the constant.
            let mut partial = PadicNumber::exact_zero();
            let mut next = vec![PadicNumber::exact_zero(); cur.len()];
            for (k, g) in cur.iter().enumerate().skip(1) {
                partial = c.add(&partial, g);
                let ck = c.neg(&partial);
                next[k] = c.mul(&ck, &c.from_q_prec(&BigRational::new(1.into(), (k as i64).into()), ap));
            }
            let mut total = PadicNumber::exact_zero();
            for x in &next[1..] {
                total = c.add(&total, x);
            }
            next[0] = c.neg(&total);
            out.push(next.clone());
            cur = next;
        }
        out
    }

    fn check_weight(n: usize) -> Result<(), PadicError> {
        if n == 0 || n > MAX_WEIGHT {
            Err(PadicError::WeightTooLarge(n, MAX_WEIGHT))
        } else {
            Ok(())
        }
    }

    /// ℓ_n at z (z outside the residue disk of 1), working precision.
    pub fn ell(&self, n: usize, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        Self::check_weight(n)?;
        let c = &self.work;
        let one_minus = c.sub(&c.one(), z);
        if one_minus.is_zero() || one_minus.val > 0 {
            return Err(PadicError::ResidueDiskOfOne);
        }
        let w = c.inv(&one_minus).expect("nonzero");
        let coeffs = &self.ell_series()[n - 1];
        let mut acc = PadicNumber::exact_zero();
        for a in coeffs.iter().rev() {
            acc = c.add(&c.mul(&acc, &w), a);
        }
        Ok(acc)
    }

    /// Li_n at a Teichmüller point t ≠ 1, working precision.
    fn li_teich(&self, n: usize, t: &PadicNumber) -> Result<PadicNumber, PadicError> {
        let c = &self.work;
        if n == 0 {
            let d = c.sub(&c.one(), t);
            return Ok(c.mul(t, &c.inv(&d).ok_or(PadicError::ResidueDiskOfOne)?));
        }
        let l = self.ell(n, t)?;
        let factor = c.sub(&c.one(), &c.from_q_prec(&BigRational::new(1.into(), c.pk(n as u32)), c.prec));
        Ok(c.mul(&l, &c.inv(&factor).expect("nonzero")))
    }

    /// Taylor coefficients in s of Li_n(t e^s) around the Teichmüller point
    /// t, up to s^order, for weights 0..=n (index = weight).
    pub fn local_expansion(&self, n: usize, t: &PadicNumber, order: usize) -> Result<Vec<Vec<PadicNumber>>, PadicError> {
        Self::check_weight(n)?;
        let c = &self.work;
        let mut fact = vec![BigInt::one()];
        for k in 1..=order + n + 1 {
            let next = &fact[k - 1] * BigInt::from(k);
            fact.push(next);
        }
        let inv_fact = |k: usize| c.from_q_prec(&BigRational::new(1.into(), fact[k].clone()), c.prec);
        // Li_0(t e^s) = t e^s/(1 − t e^s)
        let den0 = c.sub(&c.one(), t);
        let den0_inv = c.inv(&den0).ok_or(PadicError::ResidueDiskOfOne)?;
        let mut li0: Vec<PadicNumber> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = c.mul(t, &inv_fact(k));
            for j in 1..=k {
                let dj = c.neg(&c.mul(t, &inv_fact(j)));
                acc = c.sub(&acc, &c.mul(&dj, &li0[k - j]));
            }
            li0.push(c.mul(&acc, &den0_inv));
        }
        let mut out = vec![li0];
        for w in 1..=n {
            let prev = &out[w - 1];
            let mut next = Vec::with_capacity(order + 1);
            next.push(self.li_teich(w, t)?);
            for k in 1..=order {
                let inv_k = c.from_q_prec(&BigRational::new(1.into(), (k as i64).into()), c.prec);
                next.push(c.mul(&prev[k - 1], &inv_k));
            }
            out.push(next);
        }
        Ok(out)
    }

    fn li_unit(&self, n: usize, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        let c = &self.work;
        let t = c.teichmuller(z)?;
        if c.residue(&c.sub(&t, &c.one())) == Some(0) {
            return Err(PadicError::ResidueDiskOfOne);
        }
        let s = c.log(&c.mul(z, &c.inv(&t).expect("unit")))?;
        if s.is_zero() {
            let l = self.li_teich(n, &t)?;
            return Ok(c.add(&l, &s));
        }
        // Terms of order k have valuation at least k (p − 2)/(p − 1).
        let p = c.p as i64;
        let target = c.prec as i64 + 2;
        let order = ((target + 3 * n as i64) * (p - 1) / (p - 2) + 5) as usize;
        let coeffs = self.local_expansion(n, &t, order)?;
        let mut acc = PadicNumber::exact_zero();
        for a in coeffs[n].iter().rev() {
            acc = c.add(&c.mul(&acc, &s), a);
        }
        Ok(acc)
    }

    /// Σ z^k / k^n for |z| < 1, working precision.
    fn li_small(&self, n: usize, z: &PadicNumber) -> PadicNumber {
        let c = &self.work;
        if z.is_exact_zero() {
            return PadicNumber::exact_zero();
        }
        let target = c.prec as i64 + 2;
        let vz = z.val;
        let mut acc = PadicNumber::exact_zero();
        let mut zk = z.clone();
        let mut k: u64 = 1;
        while (k as i64) * vz - n as i64 * ilog(k, c.p) <= target {
            let kn = BigInt::from(k).pow(n as u32);
            let term = c.mul(&zk, &c.from_q_prec(&BigRational::new(1.into(), kn), c.prec));
            acc = c.add(&acc, &term);
            zk = c.mul(&zk, z);
            k += 1;
        }
        acc
    }

    /// Coleman polylogarithm with the Iwasawa branch.
    pub fn li(&self, n: usize, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        Self::check_weight(n)?;
        Ok(self.finish(self.li_work(n, z)?))
    }

    fn li_work(&self, n: usize, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        let c = &self.work;
        if z.is_exact_zero() {
            return Ok(PadicNumber::exact_zero());
        }
        if z.is_zero() {
            return Err(PadicError::PrecisionExhausted);
        }
        if z.val > 0 {
            return Ok(self.li_small(n, z));
        }
        if z.val < 0 {
            // Li_n(z) = −log(z)^n/n! − (−1)^n Li_n(1/z)
            let lg = c.log(z)?;
            let mut nf = BigInt::one();
            for k in 2..=n {
                nf *= k;
            }
            let head = c.mul(&c.pow(&lg, n as u32), &c.from_q_prec(&BigRational::new((-1).into(), nf), c.prec));
            let inv = self.li_small(n, &c.inv(z).expect("nonzero"));
            return Ok(if n % 2 == 0 { c.sub(&head, &inv) } else { c.add(&head, &inv) });
        }
        self.li_unit(n, z)
    }

    pub fn li_q(&self, n: usize, z: &BigRational) -> Result<PadicNumber, PadicError> {
        self.li(n, &self.work.from_q_prec(z, self.work.prec))
    }

    /// Li_n on |z| < 1 through the Frobenius equation,
    /// Li_n(z) = Σ_j p^{−jn} ℓ_n(z^{p^j}); independent of the direct series.
    pub fn li_small_frobenius(&self, n: usize, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        Self::check_weight(n)?;
        let c = &self.work;
        if z.val <= 0 {
            return Err(PadicError::NonUnit);
        }
        let mut acc = PadicNumber::exact_zero();
        let mut zj = z.clone();
        let mut j: u32 = 0;
        let target = c.prec as i64 + 2;
        loop {
            let l = self.ell(n, &zj)?;
            let scale = c.from_q_prec(&BigRational::new(1.into(), c.pk(j * n as u32)), c.prec);
            acc = c.add(&acc, &c.mul(&l, &scale));
            zj = c.pow(&zj, c.p as u32);
            j += 1;
            if zj.val - (j * n as u32) as i64 > target + 2 {
                break;
            }
        }
        Ok(self.finish(acc))
    }

    /// Direct series for |z| < 1.
    pub fn li_series(&self, n: usize, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        if z.val <= 0 {
            return Err(PadicError::NonUnit);
        }
        Ok(self.finish(self.li_small(n, z)))
    }

    /// ζ_p(n) = 2^{n−1} Li_n(−1)/(1 − 2^{n−1}).
    pub fn zeta(&self, n: usize) -> Result<PadicNumber, PadicError> {
        let c = &self.work;
        let li = self.li_work(n, &c.from_int(-1))?;
        let two = BigInt::from(2).pow(n as u32 - 1);
        let factor = BigRational::new(two.clone(), BigInt::one() - two);
        Ok(self.finish(c.mul(&li, &c.from_q_prec(&factor, c.prec))))
    }

    pub fn log_q(&self, q: &BigRational) -> Result<PadicNumber, PadicError> {
        let c = &self.work;
        Ok(self.finish(c.log(&c.from_q_prec(q, c.prec))?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q_frac, q_int};

    fn ctx() -> PadicContext {
        PadicContext::new(13, 20).unwrap()
    }

    #[test]
    fn context_validation() {
        assert_eq!(PadicContext::new(3, 20).unwrap_err(), PadicError::ForbiddenPrime);
        assert_eq!(PadicContext::new(15, 20).unwrap_err(), PadicError::NotPrime(15));
        assert_eq!(PadicContext::new(7, 4).unwrap_err(), PadicError::LowPrecision(4));
    }

    #[test]
    fn arithmetic_roundtrip() {
        let c = ctx();
        let a = c.from_q(&q_frac(7, 26));
        assert_eq!(a.valuation(), -1);
        let b = c.inv(&a).unwrap();
        let one = c.mul(&a, &b);
        assert_eq!(c.rational_reconstruct(&one).unwrap(), q_int(1));
        assert_eq!(c.rational_reconstruct(&a).unwrap(), q_frac(7, 26));
        let z = c.sub(&a, &a);
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.valuation(), 19);
    }

    #[test]
    fn teichmuller_basics() {
        let c = ctx();
        assert_eq!(c.teichmuller(&c.one()).unwrap(), c.one());
        let m1 = c.from_int(-1);
        assert_eq!(c.teichmuller(&m1).unwrap(), m1);
        let t = c.teichmuller(&c.from_int(5)).unwrap();
        assert_eq!(c.pow(&t, 12), c.one());
        assert_eq!(c.teichmuller(&c.from_int(13)).unwrap_err(), PadicError::NonUnit);
    }

    #[test]
    fn log_branch() {
        let c = ctx();
        assert!(c.log(&c.one()).unwrap().is_zero());
        assert!(c.log(&c.from_int(13)).unwrap().is_zero());
        assert_eq!(c.log(&c.from_int(-3)).unwrap(), c.log(&c.from_int(3)).unwrap());
        let t = c.teichmuller(&c.from_int(7)).unwrap();
        assert!(c.log(&t).unwrap().is_zero());
    }

    #[test]
    fn li1_closed_forms() {
        let c = ctx();
        let e = PolylogEngine::new(&c);
        let l3 = e.log_q(&q_int(3)).unwrap();
        // Li_1(4/3) = −log(−1/3) = log 3 on the Iwasawa branch.
        assert_eq!(e.li_q(1, &q_frac(4, 3)).unwrap(), l3);
        let l2 = e.log_q(&q_int(2)).unwrap();
        assert_eq!(e.li_q(1, &q_int(-1)).unwrap(), c.neg(&l2));
        assert_eq!(e.li_q(1, &q_int(5)).unwrap(), c.neg(&e.log_q(&q_int(4)).unwrap()));
    }

    #[test]
    fn zeta3_has_valuation_three_at_13() {
        let e = PolylogEngine::new(&ctx());
        let z = e.zeta(3).unwrap();
        assert!(!z.is_zero());
        assert_eq!(z.valuation(), 3);
    }

    #[test]
    fn residue_disk_of_one_rejected() {
        let e = PolylogEngine::new(&ctx());
        assert_eq!(e.li_q(2, &q_int(14)).unwrap_err(), PadicError::ResidueDiskOfOne);
    }
}
