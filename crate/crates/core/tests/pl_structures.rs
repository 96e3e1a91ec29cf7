use m05_kim::pl::*;
use m05_kim::ring::{q_frac, q_int};
use m05_kim::shuffle::ShuffleElement;
use proptest::prelude::*;
use std::sync::OnceLock;

fn oracle() -> &'static FreeLieOracle {
    static O: OnceLock<FreeLieOracle> = OnceLock::new();
    O.get_or_init(|| FreeLieOracle::new(6))
}

#[test]
fn dimensions_by_the_free_lie_oracle() {
    let dims: Vec<usize> = (1..=6).map(|n| oracle().pl_dim(n)).collect();
    assert_eq!(dims, [5, 3, 3, 3, 3, 3]);
    assert_eq!(pl_dim(2), 3);
}

#[test]
fn every_coordinate_is_a_pl_coordinate() {
    let s = PlShape::m05(4);
    let coords = s.coordinates();
    assert_eq!(coords.len(), 14);
    for c in coords {
        assert!(verify_pl_coordinate(&s, c, 6), "{}", s.name(c));
    }
}

#[test]
fn mixed_word_is_not_a_pl_coordinate() {
    let f = ShuffleElement::word(gamma(), gamma().word("e1 e12").unwrap());
    assert!(!verify_dual(&f, 6));
}

#[test]
fn tower_coordinates_pair_to_signs() {
    // ⟨f_{e11 e1^n}, (ad e1)^n(e11)⟩ = (−1)^n.
    let s = PlShape::m05(6);
    for n in 0..=5u32 {
        let f = s.dual(s.tower_coordinate(0, n));
        let x = PlBasisVector::Ad11(n).expression().expand();
        assert_eq!(pairing(&f, &x), q_int(if n % 2 == 0 { 1 } else { -1 }), "n = {n}");
    }
}

#[test]
fn normal_forms_agree_with_the_oracle() {
    // x − expand(nf(x)) lies in the defining ideal.
    for spec in ["[e2,[e1,[e1,e11]]]", "[e12,e11]", "[e2,[e1,e12]]", "[[e1,e2],[e1,e11]]", "[e22,[e2,[e2,e22]]]"] {
        let x = LieExpr::parse(spec).unwrap();
        let n = x.half_weight() as usize;
        let diff = x.expand().add(&lie_normal_form(&x, 6).unwrap().expand().scale(&q_int(-1))).unwrap();
        assert!(oracle().ideal_contains(n, &diff), "{spec}");
    }
    let e1e12 = LieExpr::parse("[e1,e12]").unwrap().expand();
    assert!(!oracle().ideal_contains(2, &e1e12));
}

fn lie_element() -> impl Strategy<Value = PlLieElement> {
    let v = prop_oneof![
        Just(PlBasisVector::E1),
        Just(PlBasisVector::E2),
        (0u32..3).prop_map(PlBasisVector::Ad11),
        (0u32..3).prop_map(PlBasisVector::Ad22),
        (0u32..3).prop_map(PlBasisVector::Ad12),
    ];
    prop::collection::vec((v, -5i64..=5, 1i64..=3), 1..5).prop_map(|ts| {
        let mut e = PlLieElement::zero();
        for (v, n, d) in ts {
            e.add_term(v, q_frac(n, d));
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bracket_is_antisymmetric(a in lie_element(), b in lie_element()) {
        prop_assert!(a.bracket(&b).add(&b.bracket(&a)).is_zero());
        prop_assert!(a.bracket(&a).is_zero());
    }

    #[test]
    fn bracket_satisfies_jacobi(a in lie_element(), b in lie_element(), c in lie_element()) {
        let j = a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn normal_form_of_random_brackets_is_in_the_ideal_class(
        letters in prop::collection::vec(0u8..5, 1..=5)
    ) {
        let x = LieExpr::right_normed(&letters);
        let n = letters.len();
        let diff = x.expand().add(&lie_normal_form(&x, 6).unwrap().expand().scale(&q_int(-1))).unwrap();
        prop_assert!(oracle().ideal_contains(n, &diff));
    }
}
