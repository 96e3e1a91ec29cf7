//! Scalar rings used by the generic algorithms.
//!
//! A ring is a context object; elements are plain values. This keeps the
//! modulus of `Zq` and the prime/precision of the p-adic field out of the
//! element types while letting one code path run over Q, Z/q, Q_p and
//! symbolic Laurent polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

pub trait Ring: Sync {
    type E: Clone + Debug + Send + Sync;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_int(&self, n: i64) -> Self::E;
    /// Image of a rational; `None` when the denominator is not invertible.
    fn try_from_q(&self, q: &BigRational) -> Option<Self::E>;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Zero with no precision caveat; may be skipped in sums and products.
    fn is_exact_zero(&self, a: &Self::E) -> bool {
        self.is_zero(a)
    }
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self, a: &Self::E) -> Option<Self::E>;

    /// Pivot preference for elimination: smaller is better, `None` means zero.
    fn pivot_key(&self, a: &Self::E) -> Option<i64> {
        if self.is_zero(a) {
            None
        } else {
            Some(0)
        }
    }

    fn from_q(&self, q: &BigRational) -> Self::E {
        self.try_from_q(q)
            .unwrap_or_else(|| panic!("denominator of {q} is not invertible in this ring"))
    }

    fn pow(&self, a: &Self::E, mut n: u32) -> Self::E {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn scale_int(&self, a: &Self::E, n: i64) -> Self::E {
        self.mul(a, &self.from_int(n))
    }
}

/// Exact rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn try_from_q(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn pivot_key(&self, a: &BigRational) -> Option<i64> {
        if a.is_zero() {
            None
        } else {
            Some((a.numer().bits() + a.denom().bits()) as i64)
        }
    }
}

/// Z/q for an odd prime q < 2^63, elements kept in Montgomery form.
#[derive(Clone, Debug)]
pub struct Zq {
    q: u64,
    qinv_neg: u64,
    r2: u64,
}

impl Zq {
    pub fn new(q: u64) -> Self {
        assert!(q % 2 == 1 && q < (1u64 << 63), "modulus must be odd and below 2^63");
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        let r = (1u128 << 64) % q as u128;
        let r2 = (r * r % q as u128) as u64;
        Zq { q, qinv_neg: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.qinv_neg);
        let s = ((t + m as u128 * self.q as u128) >> 64) as u64;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.q));
        self.to_mont(r.to_u64().expect("reduced value fits"))
    }

    /// Centered lift of a Montgomery element.
    pub fn lift(&self, a: u64) -> i128 {
        let v = self.from_mont(a) as i128;
        if v > (self.q / 2) as i128 {
            v - self.q as i128
        } else {
            v
        }
    }

    fn pow_mont(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.redc(acc as u128 * b as u128);
            }
            b = self.redc(b as u128 * b as u128);
            e >>= 1;
        }
        acc
    }
}

impl Ring for Zq {
    type E = u64;
    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        self.to_mont(1)
    }
    fn from_int(&self, n: i64) -> u64 {
        let r = (n as i128).rem_euclid(self.q as i128) as u64;
        self.to_mont(r)
    }
    fn try_from_q(&self, q: &BigRational) -> Option<u64> {
        let d = self.reduce_bigint(q.denom());
        let di = self.inv(&d)?;
        Some(self.mul(&self.reduce_bigint(q.numer()), &di))
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(*a as u128 * *b as u128)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow_mont(*a, self.q - 2))
        }
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below 2^62, in decreasing order.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

pub fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn q_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Parses "a" or "a/b".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Canonical "num/den" rendering (always with a denominator).
pub fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn q_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_matches_plain_arithmetic() {
        let q = large_primes(1)[0];
        let r = Zq::new(q);
        let a = 123_456_789_012_345u64;
        let b = 987_654_321_098_765u64;
        let prod = r.from_mont(r.mul(&r.to_mont(a), &r.to_mont(b)));
        assert_eq!(prod as u128, (a as u128 * b as u128) % q as u128);
        let x = r.to_mont(a);
        assert_eq!(r.mul(&x, &r.inv(&x).unwrap()), r.one());
        assert_eq!(r.lift(r.from_int(-5)), -5);
    }

    #[test]
    fn rational_image_in_zq() {
        let r = Zq::new(1_000_003);
        let x = r.from_q(&q_frac(3, 7));
        assert_eq!(r.mul(&x, &r.from_int(7)), r.from_int(3));
    }

    #[test]
    fn primes_are_prime() {
        for p in large_primes(5) {
            assert!(is_prime_u64(p));
            assert!(p < 1 << 62);
        }
        assert!(!is_prime_u64(1 << 61));
    }
}
