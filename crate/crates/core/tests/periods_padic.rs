use m05_kim::padic::{PadicContext, PolylogEngine};
use m05_kim::periods::*;
use m05_kim::ring::{q_frac, q_int};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn engine(p: u64, prec: u32) -> std::sync::Arc<PolylogEngine> {
    PolylogEngine::shared(&PadicContext::new(p, prec).unwrap())
}

fn six_unit_points() -> Vec<BigRational> {
    let mut out = Vec::new();
    for i in -4..=4 {
        for j in -3..=3 {
            for s in [1i64, -1] {
                let a = q_int(s) * q_int(2).pow(i) * q_int(3).pow(j);
                let b = BigRational::one() - &a;
                if !b.is_zero() && is_s_unit(&b) && !out.contains(&a) {
                    out.push(a);
                }
            }
        }
    }
    out
}

#[test]
fn zeta3_coefficient_of_li3_two_thirds_is_one() {
    let residual = zeta3_residual(&q_frac(2, 3)).unwrap();
    assert_eq!(zeta3_coefficient(&residual, &engine(13, 20)).unwrap(), q_int(1));
    assert_eq!(zeta3_coefficient(&PeriodPolynomial::zero(), &engine(13, 20)).unwrap(), q_int(0));
}

#[test]
fn sigma_of_li3_four_thirds_at_several_primes() {
    let engines: Vec<_> = [5, 7, 11].iter().map(|&p| engine(p, 20)).collect();
    let refs: Vec<&PolylogEngine> = engines.iter().map(|e| &**e).collect();
    assert_eq!(sigma_coefficient(&q_frac(4, 3), &refs).unwrap(), q_frac(-1, 3));
    // Pins the 8/7 correction of the imported f_{στ₂} constant.
    assert_eq!(sigma_coefficient(&q_int(2), &refs).unwrap(), q_frac(7, 8));
}

#[test]
fn dictionary_builds_and_matches_frozen_table() {
    let d = build_period_dictionary(&PadicContext::new(13, 20).unwrap()).unwrap();
    assert_eq!(d, corrected_table());
    let printed = build_period_dictionary_with(&PadicContext::new(7, 20).unwrap(), ImportVariant::Printed).unwrap();
    assert_eq!(differing_entries(&printed, &printed_table()), ["ττυυ", "τυυυ"]);
}

#[test]
fn polylog_identities_hold_with_the_dictionary() {
    let points = six_unit_points();
    assert_eq!(points.len(), 21);
    let (e13, e11) = (engine(13, 20), engine(11, 20));
    let sigma = compute_sigma_table_at(&points, &[&*e13, &*e11]).unwrap();
    let good = corrected_table();
    let bad = printed_table();
    for e in [&e13, &e11] {
        let mut cache = BTreeMap::new();
        for a in &points {
            for n in 2..=4 {
                let r = identity_residual(&good, &sigma, n, a, e, &mut cache).unwrap();
                assert!(r.valuation() >= 19, "Li_{n}({a}) at p = {}: {}", e.context().p(), r.valuation());
            }
        }
        let worst = points
            .iter()
            .map(|a| identity_residual(&bad, &sigma, 4, a, e, &mut cache).unwrap().valuation())
            .min()
            .unwrap();
        assert!(worst <= 5, "printed table unexpectedly satisfies every weight-4 identity");
    }
}
