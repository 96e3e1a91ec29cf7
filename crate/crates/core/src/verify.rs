//! The acceptance checks, one function per criterion. Shared by the
//! acceptance test and `verify all`.

use crate::geom::{kernel_check, kernel_check_with, program, witness};
use crate::kim::{control_points, report, x_points, x_points_oracle, y_points, y_points_oracle, KimContext, RunConfig, CONTROLS};
use crate::padic::{PadicContext, PadicNumber, PolylogEngine};
use crate::periods::{
    self,
    build_period_dictionary, build_period_dictionary_with, coproduct_mismatches, differing_entries,
    printed_coproduct_table_2, printed_coproduct_table_3, printed_table, sigma_coefficient, zeta3_coefficient,
    zeta3_residual, ImportVariant,
};
use crate::pl::{pairing, verify_pl_coordinate, FreeLieOracle, PlBasisVector, PlShape};
use crate::ring::{q_frac, q_int, Rationals, Ring, Zq};
use crate::theta::{m05, theta_table};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// The criterion is unattainable as stated; the documented deviation
    /// was reproduced exactly.
    Deviation,
}

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Criterion {
    fn new(id: u8, name: &'static str, ok: bool, detail: String) -> Self {
        Criterion { id, name, status: if ok { Status::Pass } else { Status::Fail }, detail }
    }

    pub fn line(&self) -> String {
        let s = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Deviation => "DEVIATION",
        };
        format!("[{s}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

pub const KERNEL_TRIALS: usize = 100;
pub const WITNESS_MOD: u64 = (1 << 61) - 1;
pub const WITNESS_RESIDUE: u64 = 1_683_903_726_371_250_734;
pub const WITNESS_BITS: (u64, u64) = (6171, 6343);
/// Dictionary entries that differ from the printed table: the imported
/// f_{στ₂} constant and the two weight-4 entries.
pub const DICTIONARY_DEVIATION: [&str; 3] = ["τσ", "ττυυ", "τυυυ"];
/// Entries that differ when the printed import constant is kept.
pub const PRINTED_IMPORT_DEVIATION: [&str; 2] = ["ττυυ", "τυυυ"];
pub const Y_COUNT: usize = 120;

pub fn kernel_identity() -> Criterion {
    let r = kernel_check(KERNEL_TRIALS, 0);
    let mut table = theta_table().clone();
    table.perturb(m05().coordinate("e11e1^3"), 1);
    let mutated = kernel_check_with(&table, 3, 0);
    Criterion::new(
        1,
        "kernel identity",
        r.all_zero && !mutated.all_zero,
        format!(
            "{} θ-consistent trials exactly zero: {} ({} degenerate redraws); mutated table leaves the kernel: {}",
            r.trials, r.all_zero, r.degenerate_retries, !mutated.all_zero
        ),
    )
}

pub fn nonvanishing() -> Criterion {
    let v = program().evaluate_f(&Rationals, &witness());
    let (ok, detail) = match v {
        Ok(v) => {
            let z = Zq::new(WITNESS_MOD);
            let res = z.from_mont(z.from_q(&v));
            let bits = (v.numer().bits(), v.denom().bits());
            (
                !v.is_zero() && res == WITNESS_RESIDUE && bits == WITNESS_BITS,
                format!(
                    "F(witness) ≠ 0, {}/{}-bit numerator/denominator, ≡ {res} mod 2^61−1 \
                     (p_i taken as the factor Q1a − b0·Q1b; the literal norm vanishes identically)",
                    bits.0, bits.1
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    Criterion::new(2, "nonvanishing of F", ok, detail)
}

pub fn lie_structure() -> Criterion {
    let o = FreeLieOracle::new(6);
    let dims: Vec<usize> = (1..=6).map(|n| o.pl_dim(n)).collect();
    let shape = PlShape::m05(4);
    let coords = shape.coordinates();
    let members = coords.iter().filter(|&&c| verify_pl_coordinate(&shape, c, 6)).count();
    let tall = PlShape::m05(6);
    let pairs_ok = (0..=5u32).all(|n| {
        let f = tall.dual(tall.tower_coordinate(0, n));
        let x = PlBasisVector::Ad11(n).expression().expand();
        pairing(&f, &x) == q_int(if n % 2 == 0 { 1 } else { -1 })
    });
    Criterion::new(
        3,
        "Lie/Hopf structure",
        dims == [5, 3, 3, 3, 3, 3] && members == coords.len() && coords.len() == 14 && pairs_ok,
        format!("pl_dim(1..6) = {dims:?}; {members}/{} coordinates verified at bound 6; pairing (−1)^n for n ≤ 5: {pairs_ok}", coords.len()),
    )
}

pub fn theta_equivalence() -> Criterion {
    let s = m05();
    let bad: Vec<String> = s
        .coordinates
        .iter()
        .filter(|&&c| s.theta_derived(c).map_or(true, |d| &d != theta_table().get(c)))
        .map(|&c| s.shape.name(c))
        .collect();
    Criterion::new(
        4,
        "θ-table equivalence",
        bad.is_empty(),
        format!("{}/{} coordinates equal as exact polynomials", s.coordinates.len() - bad.len(), s.coordinates.len()),
    )
}

pub fn arithmetic_step() -> Criterion {
    let run = || -> Result<(Vec<String>, Vec<String>, usize, Vec<String>), String> {
        let ctx = PadicContext::new(13, 20).map_err(|e| e.to_string())?;
        let d = build_period_dictionary(&ctx).map_err(|e| e.to_string())?;
        let printed_import =
            build_period_dictionary_with(&ctx, ImportVariant::Printed).map_err(|e| e.to_string())?;
        let t2 = coproduct_mismatches(&printed_coproduct_table_2()).map_err(|e| e.to_string())?;
        let t3 = coproduct_mismatches(&printed_coproduct_table_3()).map_err(|e| e.to_string())?;
        let t3: Vec<String> = t3.iter().map(|m| format!("{} row {}", m.column, m.row)).collect();
        Ok((differing_entries(&d, &printed_table()), differing_entries(&printed_import, &printed_table()), t2.len(), t3))
    };
    match run() {
        Ok((diff, diff_printed, t2, t3)) => {
            let expected = diff == DICTIONARY_DEVIATION
                && diff_printed == PRINTED_IMPORT_DEVIATION
                && t2 == 0
                && t3 == [format!("{} row 6", periods::log(2).mul(&periods::li(2, q_int(-2))))];
            Criterion {
                id: 5,
                name: "arithmetic step",
                status: if expected { Status::Deviation } else { Status::Fail },
                detail: format!(
                    "dictionary differs from the printed table in {diff:?} (printed import constant: {diff_printed:?}); \
                     both differences are forced by the polylog identities. Weight-2 coproduct table: {t2} mismatches; \
                     weight-3 table mismatches: {t3:?} (printed 0, multiplicativity forces 1)"
                ),
            }
        }
        Err(e) => Criterion::new(5, "arithmetic step", false, e),
    }
}

pub fn padic_identities() -> Criterion {
    let run = || -> Result<(BigRational, BigRational), String> {
        let e13 = PolylogEngine::shared(&PadicContext::new(13, 20).map_err(|e| e.to_string())?);
        let z = zeta3_coefficient(&zeta3_residual(&q_frac(2, 3)).map_err(|e| e.to_string())?, &e13)
            .map_err(|e| e.to_string())?;
        let engines: Vec<_> = [5, 7, 11]
            .iter()
            .map(|&p| PadicContext::new(p, 20).map(|c| PolylogEngine::shared(&c)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let refs: Vec<&PolylogEngine> = engines.iter().map(|e| &**e).collect();
        let s = sigma_coefficient(&q_frac(4, 3), &refs).map_err(|e| e.to_string())?;
        Ok((z, s))
    };
    match run() {
        Ok((z, s)) => Criterion::new(
            6,
            "p-adic identities",
            z == q_int(1) && s == q_frac(-1, 3),
            format!("ζ(3)-coefficient of the Li3(2/3) combination = {z} at p = 13; ⟨Li3(4/3), σ⟩ = {s} at p = 5, 7, 11"),
        ),
        Err(e) => Criterion::new(6, "p-adic identities", false, e),
    }
}

pub const ENGINE_P: u64 = 13;
pub const ENGINE_N: u32 = 20;
pub const ENGINE_SAMPLES: usize = 20;

fn agrees(c: &PadicContext, a: &PadicNumber, b: &PadicNumber, digits: i64) -> bool {
    let d = c.sub(a, b);
    d.is_zero() || d.valuation() >= digits
}

/// Units z with z, −z, z² outside the residue disk of 1.
fn distribution_points(p: u64, count: usize) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    while out.len() < count {
        let z = q_frac(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=10_000));
        let units = !(z.numer() % &pb).is_zero() && !(z.denom() % &pb).is_zero();
        if units && !((z.numer() - z.denom()) % &pb).is_zero() && !((z.numer() + z.denom()) % &pb).is_zero() {
            out.push(z);
        }
    }
    out
}

pub fn polylog_engine() -> Criterion {
    let run = || -> Result<(usize, usize), String> {
        let c = PadicContext::new(ENGINE_P, ENGINE_N).map_err(|e| e.to_string())?;
        let e = PolylogEngine::shared(&c);
        let n = ENGINE_N as i64;
        let mut series_ok = 0;
        let mut dist_ok = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..ENGINE_SAMPLES {
            // p-unit numerator and denominator, then a factor p or p².
            let unit = |rng: &mut ChaCha8Rng| loop {
                let n: i64 = rng.gen_range(1..=1000);
                if n % ENGINE_P as i64 != 0 {
                    return n;
                }
            };
            let (a, b) = (unit(&mut rng), unit(&mut rng));
            let z = q_frac(a, b) * q_int(ENGINE_P as i64).pow(rng.gen_range(1..=2));
            let zp = c.from_q(&z);
            let all = (1..=4).all(|k| {
                let s = e.li_series(k, &zp);
                let f = e.li_small_frobenius(k, &zp);
                matches!((s, f), (Ok(s), Ok(f)) if agrees(&c, &s, &f, n - 1))
            });
            series_ok += usize::from(all);
        }
        for z in distribution_points(ENGINE_P, ENGINE_SAMPLES) {
            let all = (1..=4usize).all(|k| {
                let val = |x: &BigRational| e.li_q(k, x);
                match (val(&(&z * &z)), val(&z), val(&-z.clone())) {
                    (Ok(a), Ok(b), Ok(m)) => agrees(&c, &a, &c.scale_int(&c.add(&b, &m), 1 << (k - 1)), n - 2),
                    _ => false,
                }
            });
            dist_ok += usize::from(all);
        }
        Ok((series_ok, dist_ok))
    };
    match run() {
        Ok((s, d)) => Criterion::new(
            7,
            "polylog engine",
            s == ENGINE_SAMPLES && d == ENGINE_SAMPLES,
            format!(
                "p = {ENGINE_P}, N = {ENGINE_N}: series vs Frobenius route to N−1 digits on {s}/{ENGINE_SAMPLES} points of |z| < 1, \
                 n ≤ 4; distribution relation to N−2 digits on {d}/{ENGINE_SAMPLES} unit points, n ≤ 4"
            ),
        ),
        Err(e) => Criterion::new(7, "polylog engine", false, e),
    }
}

/// The full run at the default configuration, with the report it produced.
pub fn end_to_end_with(config: RunConfig) -> (Criterion, Option<serde_json::Value>) {
    let run = || -> Result<serde_json::Value, String> {
        let kc = KimContext::new(config.clone()).map_err(|e| e.to_string())?;
        report(&kc, &y_points(), &control_points(&config, CONTROLS)).map_err(|e| e.to_string())
    };
    match run() {
        Ok(r) => {
            let pts = r["points"].as_array().map_or(0, Vec::len);
            let min = r["points"].as_array().and_then(|v| v.iter().filter_map(|p| p["valuation"].as_i64()).min());
            let median = r["control_median_valuation"].as_i64();
            let ok = r["overall_pass"] == true && pts == Y_COUNT && median.is_some_and(|m| m <= 3);
            let c = Criterion::new(
                8,
                "end-to-end vanishing",
                ok,
                format!(
                    "p = {}, precision {}, slack {}: {pts} integral points, minimum valuation {min:?} (threshold {}); \
                     {} controls, median valuation {median:?}",
                    config.p,
                    config.precision,
                    config.slack,
                    config.threshold(),
                    r["controls"].as_array().map_or(0, Vec::len)
                ),
            );
            (c, Some(r))
        }
        Err(e) => (Criterion::new(8, "end-to-end vanishing", false, e), None),
    }
}

pub fn end_to_end() -> Criterion {
    end_to_end_with(RunConfig::default()).0
}

pub fn enumeration() -> Criterion {
    let x = x_points();
    let xs: BTreeSet<BigRational> = x.iter().cloned().collect();
    let x_ok = x.len() == 21 && xs.len() == 21 && xs == x_points_oracle(7);
    let y = y_points();
    let ys: BTreeSet<_> = y.iter().cloned().collect();
    let y_ok = ys == y_points_oracle(7);
    let sym = y.iter().all(|p| ys.contains(&crate::kim::IntegralPoint { z1: p.z2.clone(), z2: p.z1.clone() }));
    Criterion::new(
        9,
        "enumeration",
        x_ok && y_ok && sym && y.len() == Y_COUNT,
        format!("|X| = {} (oracle agrees: {x_ok}); |Y| = {} (oracle agrees: {y_ok}; swap symmetric: {sym})", x.len(), y.len()),
    )
}

/// Every criterion, in order.
pub fn all() -> Vec<Criterion> {
    vec![
        kernel_identity(),
        nonvanishing(),
        lie_structure(),
        theta_equivalence(),
        arithmetic_step(),
        padic_identities(),
        polylog_engine(),
        end_to_end(),
        enumeration(),
    ]
}
