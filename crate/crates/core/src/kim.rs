//! Integral points of M_{0,5} over Z[1/6] and the p-adic Kim function:
//! F evaluated at the p-adic periods of the Lyndon duals and the Albanese
//! values of a point.

use crate::geom::{program, rescale, GeomError, ResultantProgram, Specialization};
use crate::padic::{PadicContext, PadicError, PadicNumber, PolylogEngine};
use crate::periods::{build_period_dictionary, evaluate_padic, is_s_unit, PeriodError};
use crate::pl::PlCoordinate;
use crate::ring::{q_frac, q_int, Ring};
use crate::theta::{galois, m05};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KimError {
    #[error("p = {0} must not divide 6")]
    BadPrime(u64),
    #[error("({0}, {1}) has bad reduction at p")]
    BadReduction(String, String),
    #[error("ζ_p(3) vanishes to working precision")]
    ZetaVanishes,
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

// ---------------------------------------------------------------------------
// Points.

/// X(Z[1/6]): u with u and 1 − u both 6-units, in S3-orbit order.
pub fn x_points() -> Vec<BigRational> {
    [
        (2, 1),
        (1, 2),
        (-1, 1),
        (3, 1),
        (1, 3),
        (2, 3),
        (3, 2),
        (-1, 2),
        (-2, 1),
        (4, 1),
        (1, 4),
        (4, 3),
        (3, 4),
        (-1, 3),
        (-3, 1),
        (-1, 8),
        (1, 9),
        (9, 8),
        (8, 9),
        (9, 1),
        (-8, 1),
    ]
    .iter()
    .map(|&(n, d)| q_frac(n, d))
    .collect()
}

/// Brute force over ±2^a 3^b with |a|, |b| ≤ `bound`.
pub fn x_points_oracle(bound: u32) -> BTreeSet<BigRational> {
    let b = bound as i32;
    let mut out = BTreeSet::new();
    for a in -b..=b {
        for c in -b..=b {
            let mag = q_int(2).pow(a) * q_int(3).pow(c);
            for u in [mag.clone(), -mag] {
                let w = BigRational::one() - &u;
                if is_s_unit(&w) {
                    out.insert(u);
                }
            }
        }
    }
    out
}

/// A point (z1, z2) of M_{0,5}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntegralPoint {
    pub z1: BigRational,
    pub z2: BigRational,
}

/// Y(Z[1/6]): pairs in X² whose product is again in X; sorted.
pub fn y_points() -> Vec<IntegralPoint> {
    let x = x_points();
    let xs: BTreeSet<BigRational> = x.iter().cloned().collect();
    let mut out: BTreeSet<IntegralPoint> = BTreeSet::new();
    for z1 in &x {
        for z2 in &x {
            if xs.contains(&(z1 * z2)) {
                out.insert(IntegralPoint { z1: z1.clone(), z2: z2.clone() });
            }
        }
    }
    out.into_iter().collect()
}

/// Brute force: pairs of oracle 6-units u with 1 − u and 1 − z1 z2 6-units.
pub fn y_points_oracle(bound: u32) -> BTreeSet<IntegralPoint> {
    let x = x_points_oracle(bound);
    let mut out = BTreeSet::new();
    for z1 in &x {
        for z2 in &x {
            let w = BigRational::one() - z1 * z2;
            if !w.is_zero() && is_s_unit(&w) {
                out.insert(IntegralPoint { z1: z1.clone(), z2: z2.clone() });
            }
        }
    }
    out
}

fn residue(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb);
    if d.is_zero() {
        return None;
    }
    let inv = d.modinv(&pb)?;
    let r = (q.numer() * inv).mod_floor(&pb);
    Some(r.try_into().expect("residue fits"))
}

/// Good reduction at p: z1, z2, z1 z2 are p-units and none is 1 mod p.
pub fn good_reduction(z1: &BigRational, z2: &BigRational, p: u64) -> bool {
    [z1.clone(), z2.clone(), z1 * z2].iter().all(|z| match (residue(z, p), residue(&z.recip(), p)) {
        (Some(r), Some(_)) => r != 0 && r != 1,
        _ => false,
    })
}

// ---------------------------------------------------------------------------
// Evaluation.

/// p, working precision, slack for the claimed precision, control seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub p: u64,
    pub precision: u32,
    pub slack: u32,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { p: 13, precision: 40, slack: 15, seed: 0 }
    }
}

impl RunConfig {
    /// Valuation a vanishing value must reach.
    pub fn threshold(&self) -> i64 {
        self.precision as i64 - self.slack as i64
    }
}

/// F^BC at one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KimEvaluation {
    pub z1: String,
    pub z2: String,
    pub digits: String,
    pub valuation: i64,
    /// Lower bound on the true valuation implied by tracked precision.
    pub valuation_floor: i64,
    /// Digits of absolute precision lost relative to the working precision.
    pub loss: i64,
    pub is_integral: bool,
}

/// Shared state for one (p, precision): the p-adic Lyndon values and the
/// certified resultant program.
pub struct KimContext {
    pub config: RunConfig,
    pub ctx: PadicContext,
    pub engine: Arc<PolylogEngine>,
    pub lyndon: Vec<PadicNumber>,
    pub dictionary_sha: String,
    pub program: &'static ResultantProgram,
}

impl KimContext {
    pub fn new(config: RunConfig) -> Result<Self, KimError> {
        if config.p % 2 == 0 || config.p % 3 == 0 {
            return Err(KimError::BadPrime(config.p));
        }
        let ctx = PadicContext::new(config.p, config.precision)?;
        let engine = PolylogEngine::shared(&ctx);
        if engine.zeta(3)?.is_zero() {
            return Err(KimError::ZetaVanishes);
        }
        let dict = build_period_dictionary(&ctx)?;
        let mut cache = BTreeMap::new();
        let lyndon = (0..galois().lyndon.words.len() as u16)
            .map(|v| evaluate_padic(&dict.entries[&v], &engine, &mut cache))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KimContext { config, ctx, engine, lyndon, dictionary_sha: dict.sha256(), program: program() })
    }

    /// The 14 f_λ values at (z1, z2), in coordinate order.
    pub fn albanese_values(&self, z1: &BigRational, z2: &BigRational) -> Result<Vec<PadicNumber>, KimError> {
        if !good_reduction(z1, z2, self.config.p) {
            return Err(KimError::BadReduction(z1.to_string(), z2.to_string()));
        }
        let tails = [z1.clone(), z2.clone(), z1 * z2];
        let s = m05();
        let (e1, e2) = (s.coordinate("e1"), s.coordinate("e2"));
        s.coordinates
            .iter()
            .map(|&c| -> Result<PadicNumber, KimError> {
                Ok(match c {
                    _ if c == e1 => self.engine.log_q(z1)?,
                    _ if c == e2 => self.engine.log_q(z2)?,
                    PlCoordinate::Letter(l) => {
                        let tower = s.shape.towers.iter().position(|t| t.head == l).expect("head letter");
                        self.engine.li_q(1, &tails[tower])?
                    }
                    PlCoordinate::Tower { tower, weight } => self.engine.li_q(weight as usize, &tails[tower])?,
                })
            })
            .collect()
    }

    /// F^BC(z1, z2).
    pub fn evaluate(&self, z1: &BigRational, z2: &BigRational) -> Result<KimEvaluation, KimError> {
        let f = self.albanese_values(z1, z2)?;
        // F is weighted homogeneous: evaluate at p^{-n}·(weight-n input),
        // which are near-units, i.e. compute p^{-W} F^BC.
        let inv_p = self.ctx.from_q(&BigRational::new(1.into(), self.config.p.into()));
        let spec = rescale(&self.ctx, &Specialization { lyndon: self.lyndon.clone(), f }, &inv_p);
        let floor = self.config.threshold();
        let value = self
            .program
            .evaluate_f_with(&self.ctx, &spec, &|x| x.is_zero() || x.valuation() >= floor)?;
        let abs = value.abs_prec().min(i64::MAX / 2);
        let xs: BTreeSet<BigRational> = x_points().into_iter().collect();
        Ok(KimEvaluation {
            z1: z1.to_string(),
            z2: z2.to_string(),
            digits: self.ctx.digits(&value),
            valuation: value.valuation().min(abs),
            valuation_floor: value.valuation().min(abs),
            loss: self.config.precision as i64 - abs,
            is_integral: xs.contains(z1) && xs.contains(z2) && xs.contains(&(z1 * z2)),
        })
    }

    pub fn evaluate_point(&self, pt: &IntegralPoint) -> Result<KimEvaluation, KimError> {
        self.evaluate(&pt.z1, &pt.z2)
    }
}

/// Number of control points in a report.
pub const CONTROLS: usize = 24;

/// Good-reduction points with none of z1, z2, z1 z2 in X(Z[1/6]), drawn
/// from the seed. A coordinate in X can make a tower polynomial vanish on
/// its own (e.g. Li_1(2) = 0 kills p_1), so such points are not controls.
pub fn control_points(config: &RunConfig, count: usize) -> Vec<IntegralPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let xs: BTreeSet<BigRational> = x_points().into_iter().collect();
    let mut out = Vec::new();
    let draw = |rng: &mut ChaCha8Rng| q_frac(rng.gen_range(-30..=30), rng.gen_range(1..=7));
    while out.len() < count {
        let (z1, z2) = (draw(&mut rng), draw(&mut rng));
        let touches_x = xs.contains(&z1) || xs.contains(&z2) || xs.contains(&(&z1 * &z2));
        if !touches_x && good_reduction(&z1, &z2, config.p) && !z1.is_zero() && !z2.is_zero() {
            out.push(IntegralPoint { z1, z2 });
        }
    }
    out
}

fn median(v: &[i64]) -> Option<i64> {
    let mut s = v.to_vec();
    s.sort();
    (!s.is_empty()).then(|| s[s.len() / 2])
}

/// Verification document for a list of points plus controls.
pub fn report(kc: &KimContext, points: &[IntegralPoint], controls: &[IntegralPoint]) -> Result<Value, KimError> {
    let threshold = kc.config.threshold();
    let (good, bad): (Vec<&IntegralPoint>, Vec<&IntegralPoint>) =
        points.iter().partition(|pt| good_reduction(&pt.z1, &pt.z2, kc.config.p));
    let evals = good.par_iter().map(|pt| kc.evaluate_point(pt)).collect::<Result<Vec<_>, _>>()?;
    let ctrl = controls.par_iter().map(|pt| kc.evaluate_point(pt)).collect::<Result<Vec<_>, _>>()?;
    let pts: Vec<Value> = evals
        .iter()
        .map(|e| {
            json!({
                "z1": e.z1, "z2": e.z2, "valuation": e.valuation, "pass": e.valuation >= threshold,
                "loss": e.loss,
            })
        })
        .collect();
    let ctrl_vals: Vec<i64> = ctrl.iter().map(|e| e.valuation).collect();
    let mut warnings = Vec::new();
    if evals.is_empty() {
        warnings.push("no points evaluated".to_string());
    }
    let overall = evals.iter().all(|e| e.valuation >= threshold);
    Ok(json!({
        "config": kc.config,
        "certification": {
            "d": kc.program.d, "k": kc.program.k, "weights": kc.program.weights,
            "f_weight": kc.program.f_weight(),
        },
        "dictionary_sha": kc.dictionary_sha,
        "points": pts,
        "bad_reduction": bad.iter().map(|pt| json!({"z1": pt.z1.to_string(), "z2": pt.z2.to_string()})).collect::<Vec<_>>(),
        "controls": ctrl.iter().map(|e| json!({"z1": e.z1, "z2": e.z2, "valuation": e.valuation})).collect::<Vec<_>>(),
        "control_median_valuation": median(&ctrl_vals),
        "warnings": warnings,
        "overall_pass": overall,
    }))
}

/// Parses "n" or "n/d".
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}
