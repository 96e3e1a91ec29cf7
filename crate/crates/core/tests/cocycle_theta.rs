use m05_kim::mpoly::{MPoly, Mono};
use m05_kim::ring::{q_frac, Rationals};
use m05_kim::theta::*;
use num_rational::BigRational;
use proptest::prelude::*;

#[test]
fn dimension_audit_counts() {
    assert_eq!(dimension_audit(Curve::M05, 3), (11, 13));
    assert_eq!(dimension_audit(Curve::M05, 4), (14, 13));
    assert_eq!(dimension_audit(Curve::M04, 4), (5, 5));
}

#[test]
fn galois_config_validation() {
    let bad = GaloisConfig { odd: [(4, "x".to_string())].into(), ..GaloisConfig::default() };
    assert!(GaloisSide::new(bad).is_err());
    let zero = GaloisConfig { weight_bound: 0, ..GaloisConfig::default() };
    assert!(GaloisSide::new(zero).is_err());
}

#[test]
fn hardcoded_table_equals_derived_theta() {
    let s = m05();
    for &c in &s.coordinates {
        assert_eq!(theta_table().get(c), &s.theta_derived(c).unwrap(), "{}", s.shape.name(c));
    }
}

#[test]
fn cocycle_expansion_is_graded() {
    // Every word with nonzero coefficient has the weight of λ.
    let s = m05();
    for &c in &s.coordinates {
        let e = s.cocycle_expand(c, &s.symbolic_phi()).unwrap();
        for w in e.terms.keys() {
            assert_eq!(galois().alphabet.half_weight(w), s.shape.weight(c));
        }
    }
}

fn poly() -> impl Strategy<Value = MPoly> {
    let var = prop_oneof![0u16..11, (0u16..13).prop_map(|i| PHI_BASE + i)];
    prop::collection::vec((prop::collection::vec((var, 1i32..3), 0..3), -9i64..=9, 1i64..=5), 0..5).prop_map(|ts| {
        let mut p = MPoly::zero();
        for (vs, n, d) in ts {
            let m = vs.into_iter().fold(Mono::one(), |acc, (v, e)| acc.mul(&Mono::var(v, e)));
            p.add_term(m, q_frac(n, d));
        }
        p
    })
}

fn values(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-50i64..=50, 1i64..=9).prop_map(|(a, b)| q_frac(a, b)), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn specialize_is_a_ring_homomorphism(p in poly(), q in poly(), l in values(11), phi in values(13)) {
        let r = Rationals;
        let spec = ArithSpecialization { lyndon: l };
        let seed = CocycleSeed { phi };
        let sp = |x: &MPoly| specialize(&r, &spec, &seed, x).unwrap();
        prop_assert_eq!(sp(&p.mul(&q)), sp(&p) * sp(&q));
        prop_assert_eq!(sp(&p.add(&q)), sp(&p) + sp(&q));
    }
}
