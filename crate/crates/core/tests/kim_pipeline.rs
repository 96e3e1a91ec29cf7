use m05_kim::geom::{program, Specialization};
use m05_kim::kim::*;
use m05_kim::padic::{PadicNumber, PolylogEngine};
use m05_kim::ring::{q_frac, q_int, Ring};
use m05_kim::theta::{m05, theta_table, ArithSpecialization, CocycleSeed};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::OnceLock;

fn kc() -> &'static KimContext {
    static K: OnceLock<KimContext> = OnceLock::new();
    K.get_or_init(|| KimContext::new(RunConfig::default()).unwrap())
}

#[test]
fn x_points_match_the_oracle() {
    let x = x_points();
    assert_eq!(x.len(), 21);
    assert!(x.contains(&q_frac(9, 8)) && x.contains(&q_int(-8)));
    assert_eq!(x.iter().cloned().collect::<BTreeSet<_>>(), x_points_oracle(7));
}

#[test]
fn y_points_membership_and_symmetry() {
    let y = y_points();
    assert_eq!(y.len(), 120);
    let has = |a: BigRational, b: BigRational| y.contains(&IntegralPoint { z1: a, z2: b });
    assert!(has(q_frac(1, 2), q_frac(1, 2)));
    assert!(!has(q_int(-1), q_int(-1)));
    assert!(!has(q_int(9), q_frac(8, 9)));
    for pt in &y {
        assert!(has(pt.z2.clone(), pt.z1.clone()));
        assert!(good_reduction(&pt.z1, &pt.z2, 13));
    }
}

#[test]
fn albanese_substitutions() {
    let k = kc();
    let s = m05();
    let e = &k.engine;
    let c = k.ctx.clone();
    let (z1, z2) = (q_frac(1, 2), q_frac(1, 2));
    let f = k.albanese_values(&z1, &z2).unwrap();
    let at = |name: &str| f[s.coordinates.iter().position(|&x| x == s.coordinate(name)).unwrap()].clone();
    assert_eq!(at("e12"), c.neg(&e.log_q(&q_frac(3, 4)).unwrap()));
    let li4 = |z: BigRational| e.li_q(4, &z).unwrap();
    assert_eq!(at("e12(e1+e2)^3"), li4(q_frac(1, 4)));
    // Li_4(z^2) = 8 (Li_4(z) + Li_4(−z)).
    let dist = c.scale_int(&c.add(&li4(q_frac(1, 2)), &li4(q_frac(-1, 2))), 8);
    assert!(c.sub(&li4(q_frac(1, 4)), &dist).valuation() >= 38);
    // f_e1 only sees z1; tower 3 at (z1, z2) is tower 1 at (z1 z2, ·).
    let g = k.albanese_values(&q_int(2), &q_int(3)).unwrap();
    let h = k.albanese_values(&q_int(2), &q_frac(-1, 8)).unwrap();
    let i = k.albanese_values(&q_int(6), &q_int(5)).unwrap();
    assert_eq!(g[0], h[0]);
    for w in 2..=4 {
        let t0 = s.coordinates.iter().position(|&x| x == s.shape.tower_coordinate(0, w - 1)).unwrap();
        let t2 = s.coordinates.iter().position(|&x| x == s.shape.tower_coordinate(2, w - 1)).unwrap();
        assert_eq!(g[t2], i[t0]);
    }
}

#[test]
fn bad_reduction_is_reported() {
    assert!(matches!(kc().evaluate(&q_int(14), &q_int(2)), Err(KimError::BadReduction(..))));
    assert!(!good_reduction(&q_int(13), &q_int(2), 13));
}

#[test]
fn integral_point_vanishes_and_control_does_not() {
    let k = kc();
    let e = k.evaluate(&q_frac(-8, 1), &q_frac(-1, 2)).unwrap();
    assert!(e.valuation >= k.config.threshold() && e.is_integral);
    let ctrl = k.evaluate(&q_int(5), &q_int(7)).unwrap();
    assert_eq!(ctrl.valuation, -10);
    assert_eq!(ctrl.loss, 11);
    assert_eq!(ctrl, k.evaluate(&q_int(5), &q_int(7)).unwrap());
}

#[test]
fn padic_kernel_spot_check() {
    // Random p-adic units as Lyndon and Φ values, f_λ set to their θ images.
    let k = kc();
    let c = &k.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut unit = || loop {
        let n: i64 = rng.gen_range(1..1_000_000);
        if n % 13 != 0 {
            return c.from_q(&q_int(n));
        }
    };
    let floor = k.config.threshold();
    let vanishes = |x: &PadicNumber| x.is_zero() || x.valuation() >= floor;
    for _ in 0..4 {
        let lyndon: Vec<_> = (0..11).map(|_| unit()).collect();
        let phi: Vec<_> = (0..m05().phi.len()).map(|_| unit()).collect();
        let f = m05().theta_values(c, theta_table(), &ArithSpecialization { lyndon: lyndon.clone() }, &CocycleSeed { phi });
        let spec = Specialization { lyndon, f };
        let v = program().evaluate_f_with(c, &spec, &vanishes).unwrap();
        assert!(v.is_zero() && v.abs_prec() >= floor, "{v:?}");
        let mut bent = spec.clone();
        bent.f[5] = c.add(&bent.f[5], &c.one());
        let w = program().evaluate_f_with(c, &bent, &vanishes).unwrap();
        assert!(!w.is_zero() && w.rel_prec() > 0, "{w:?}");
    }
}

#[test]
fn empty_report_passes_with_warning() {
    let r = report(kc(), &[], &[]).unwrap();
    assert_eq!(r["overall_pass"], true);
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
    assert_eq!(r["certification"]["d"], serde_json::json!([2, 2, 2]));
}

#[test]
fn zero_slack_fails_with_loss_accounting() {
    let k = KimContext::new(RunConfig { slack: 0, ..RunConfig::default() }).unwrap();
    let pts = y_points();
    let r = report(&k, &pts[..2], &[]).unwrap();
    assert_eq!(r["overall_pass"], false);
    let losses: Vec<i64> = r["points"].as_array().unwrap().iter().map(|p| p["loss"].as_i64().unwrap()).collect();
    assert_eq!(losses, [12, 12]);
}

#[test]
fn config_round_trip() {
    let c: RunConfig = serde_json::from_str(r#"{"p": 13, "precision": 40, "slack": 15, "seed": 0}"#).unwrap();
    assert_eq!(c, RunConfig::default());
    assert!(matches!(KimContext::new(RunConfig { p: 3, ..c }), Err(KimError::BadPrime(3))));
    let _ = PolylogEngine::shared(&kc().ctx);
}

#[test]
fn rational_parser() {
    assert_eq!(parse_rational("-9/8"), Some(q_frac(-9, 8)));
    assert_eq!(parse_rational("4"), Some(q_int(4)));
    assert_eq!(parse_rational("1/0"), None);
}
