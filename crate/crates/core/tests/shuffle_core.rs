use m05_kim::mpoly::MPoly;
use m05_kim::ring::{q_frac, q_int};
use m05_kim::shuffle::*;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use std::sync::Arc;

fn sigma() -> Arc<GradedAlphabet> {
    GradedAlphabet::new(&[("τ", 1), ("υ", 1), ("σ", 3)]).unwrap()
}

fn element(a: Arc<GradedAlphabet>) -> impl Strategy<Value = ShuffleElement> {
    let n = a.len() as u8;
    prop::collection::vec((prop::collection::vec(0..n, 0..=5), -6i64..=6, 1i64..=4), 1..4)
        .prop_map(move |ts| ShuffleElement::from_terms(&a, ts.into_iter().map(|(w, x, y)| (Word(w), q_frac(x, y)))))
}

fn el(a: &Arc<GradedAlphabet>, spec: &str) -> ShuffleElement {
    ShuffleElement::word(a, a.word(spec).unwrap())
}

#[test]
fn shuffle_examples() {
    let a = sigma();
    let lhs = shuffle(&el(&a, "τ"), &el(&a, "σ")).unwrap();
    assert_eq!(lhs, el(&a, "τ σ").add(&el(&a, "σ τ")).unwrap());
    assert_eq!(shuffle(&el(&a, "υ"), &el(&a, "υ")).unwrap(), el(&a, "υ υ").scale(&q_int(2)));
    let w = el(&a, "τ υ σ");
    assert_eq!(shuffle(&ShuffleElement::unit(&a), &w).unwrap(), w);
    let other = GradedAlphabet::new(&[("x", 1)]).unwrap();
    assert!(shuffle(&w, &ShuffleElement::unit(&other)).is_err());
    assert_eq!(w.weights(), [5]);
}

#[test]
fn shuffle_power_identity() {
    // (a f_τ + b f_υ)^⧢n = n! Σ a^{#τ} b^{#υ} f_{τ1⋯τn}.
    let a = GradedAlphabet::new(&[("τ", 1), ("υ", 1)]).unwrap();
    let x = ShuffleElement::<MPoly>::from_terms(&a, [(Word::letter(0), MPoly::var(0)), (Word::letter(1), MPoly::var(1))]);
    let mut fact = BigRational::one();
    for n in 1..=4u32 {
        fact *= q_int(n as i64);
        let mut rhs = ShuffleElement::<MPoly>::zero(&a);
        for w in a.words_of_weight(n) {
            let c = w.0.iter().fold(MPoly::constant(fact.clone()), |acc, &l| acc.mul(&MPoly::var(l.into())));
            rhs.add_term(w, c);
        }
        assert_eq!(shuffle_power(&x, n), rhs, "n = {n}");
    }
}

#[test]
fn lyndon_expansion_round_trips() {
    let a = sigma();
    let b = LyndonBasis::new(&a, 5);
    for n in 1..=5 {
        for w in a.words_of_weight(n) {
            assert_eq!(b.realize(&b.expand(&w)), ShuffleElement::word(&a, w.clone()), "{}", a.render(&w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shuffle_is_commutative_and_associative(u in element(sigma()), v in element(sigma()), w in element(sigma())) {
        prop_assert_eq!(shuffle(&u, &v).unwrap(), shuffle(&v, &u).unwrap());
        let l = shuffle(&shuffle(&u, &v).unwrap(), &w).unwrap();
        let r = shuffle(&u, &shuffle(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn deconcat_is_coassociative(u in element(sigma())) {
        let (l, r) = coassociativity_sides(&deconcat(&u));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn deconcat_is_an_algebra_map(u in element(sigma()), v in element(sigma())) {
        let lhs = deconcat(&shuffle(&u, &v).unwrap());
        prop_assert_eq!(lhs, deconcat(&u).shuffle(&deconcat(&v)));
    }

    #[test]
    fn pairing_is_bilinear(u in element(sigma()), v in element(sigma()), x in element(sigma())) {
        let s = pair(&u.add(&v).unwrap(), &x).unwrap();
        prop_assert_eq!(s, pair(&u, &x).unwrap() + pair(&v, &x).unwrap());
    }
}
