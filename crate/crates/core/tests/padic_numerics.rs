use m05_kim::padic::{PadicContext, PadicNumber, PolylogEngine};
use m05_kim::ring::{q_frac, q_int, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

const P: u64 = 13;
const N: u32 = 20;

fn ctx() -> PadicContext {
    PadicContext::new(P, N).unwrap()
}

fn engine() -> std::sync::Arc<PolylogEngine> {
    PolylogEngine::shared(&ctx())
}

fn agrees(c: &PadicContext, a: &PadicNumber, b: &PadicNumber, digits: i64) -> bool {
    let d = c.sub(a, b);
    d.is_zero() || d.valuation() >= digits
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-5000i64..5000, 1i64..5000, -2i32..3).prop_filter_map("nonzero", |(n, d, k)| {
        (n != 0).then(|| q_frac(n, d) * q_int(P as i64).pow(k))
    })
}

fn unit() -> impl Strategy<Value = BigRational> {
    (1i64..100_000, 1i64..100_000, any::<bool>()).prop_filter_map("unit", |(n, d, s)| {
        (n % P as i64 != 0 && d % P as i64 != 0).then(|| q_frac(if s { n } else { -n }, d))
    })
}

/// Units z with z, −z, z² all outside the residue disk of 1.
fn distribution_point() -> impl Strategy<Value = BigRational> {
    unit().prop_filter("z ≢ ±1", |z| {
        let p = BigInt::from(P);
        !((z.numer() - z.denom()) % &p).is_zero() && !((z.numer() + z.denom()) % &p).is_zero()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_to_precision(a in rational(), b in rational(), x in rational()) {
        let c = ctx();
        let (a, b, x) = (c.from_q(&a), c.from_q(&b), c.from_q(&x));
        let l = c.add(&c.add(&a, &b), &x);
        let r = c.add(&a, &c.add(&b, &x));
        prop_assert!(c.sub(&l, &r).is_zero());
        let l = c.mul(&a, &c.add(&b, &x));
        let r = c.add(&c.mul(&a, &b), &c.mul(&a, &x));
        prop_assert!(c.sub(&l, &r).is_zero());
    }

    #[test]
    fn log_is_a_homomorphism(a in unit(), b in unit()) {
        let c = ctx();
        let (a, b) = (c.from_q(&a), c.from_q(&b));
        let lab = c.log(&c.mul(&a, &b)).unwrap();
        let sum = c.add(&c.log(&a).unwrap(), &c.log(&b).unwrap());
        prop_assert!(agrees(&c, &lab, &sum, N as i64));
        prop_assert!(c.log(&c.teichmuller(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn small_disk_matches_frobenius_route(n in 1usize..=4, z in unit(), k in 1i32..3) {
        let e = engine();
        let c = ctx();
        let z = c.from_q(&(z * q_int(P as i64).pow(k)));
        let series = e.li_series(n, &z).unwrap();
        prop_assert!(agrees(&c, &series, &e.li(n, &z).unwrap(), N as i64 - 1));
        prop_assert!(agrees(&c, &series, &e.li_small_frobenius(n, &z).unwrap(), N as i64 - 1));
    }

    #[test]
    fn distribution_relation(z in distribution_point()) {
        let e = engine();
        let c = ctx();
        for n in 1..=4usize {
            let lhs = e.li_q(n, &(&z * &z)).unwrap();
            let rhs = c.scale_int(&c.add(&e.li_q(n, &z).unwrap(), &e.li_q(n, &-z.clone()).unwrap()), 1 << (n - 1));
            prop_assert!(agrees(&c, &lhs, &rhs, N as i64 - 2), "n = {n}, z = {z}");
        }
    }
}

#[test]
fn distribution_relation_on_the_series_region() {
    let e = engine();
    let c = ctx();
    for k in 1..=25 {
        let z = q_frac(13 * k, 7 + k);
        for n in 1..=4usize {
            let lhs = e.li_q(n, &(&z * &z)).unwrap();
            let rhs = c.scale_int(&c.add(&e.li_q(n, &z).unwrap(), &e.li_q(n, &-z.clone()).unwrap()), 1 << (n - 1));
            assert!(agrees(&c, &lhs, &rhs, N as i64 - 2));
        }
    }
}

#[test]
fn local_expansion_satisfies_the_differential_system() {
    let e = engine();
    let c = e.work().clone();
    for a in 2..=11 {
        let t = c.teichmuller(&c.from_int(a)).unwrap();
        let coeffs = e.local_expansion(4, &t, 30).unwrap();
        for w in 1..=4 {
            for k in 1..=30 {
                assert_eq!(c.scale_int(&coeffs[w][k], k as i64), coeffs[w - 1][k - 1], "w = {w}, k = {k}");
            }
        }
    }
}

#[test]
fn li1_is_minus_log_one_minus_z() {
    let e = engine();
    let c = ctx();
    for z in [q_int(-1), q_int(5), q_frac(4, 3), q_frac(-1, 8), q_frac(26, 5)] {
        let one_minus = c.from_q(&(q_int(1) - &z));
        assert!(agrees(&c, &e.li_q(1, &z).unwrap(), &c.neg(&c.log(&one_minus).unwrap()), N as i64));
    }
}

#[test]
fn zeta3_is_precision_coherent() {
    let hi = PolylogEngine::new(&PadicContext::new(P, 20).unwrap()).zeta(3).unwrap();
    let lo = PolylogEngine::new(&PadicContext::new(P, 10).unwrap()).zeta(3).unwrap();
    let c = PadicContext::new(P, 10).unwrap();
    assert_eq!(c.truncate(&hi, 10), lo);
    for p in [5, 7, 11, 13] {
        assert!(!PolylogEngine::new(&PadicContext::new(p, 20).unwrap()).zeta(3).unwrap().is_zero());
    }
}

#[test]
fn concurrent_calls_agree() {
    use rayon::prelude::*;
    let e = engine();
    let z = q_frac(-1, 2);
    let vals: Vec<_> = (0..8).into_par_iter().map(|_| e.li_q(4, &z).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] == w[1]));
}
