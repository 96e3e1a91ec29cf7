//! The geometric step: the tower polynomials p1, p2, p3 and the double
//! resultant F = Res_Y(Res_X(p1(X), p2(Y - X)), p3(Y)).
//!
//! F is never expanded. Everything is built generically over a [`Ring`], so
//! the same code produces symbolic coefficients (over [`LaurentRing`]),
//! exact values (over the rationals) and p-adic values.

use crate::linalg::{self, Poly};
use crate::mpoly::{LaurentRing, MPoly};
use crate::pl::PlCoordinate;
use crate::ring::{Rationals, Ring};
use crate::shuffle::Word;
use crate::theta::{galois, m05, theta_table, ArithSpecialization, CocycleSeed, ThetaTable};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("f_σ vanishes at this specialization")]
    SigmaZero,
    #[error("tower {tower}: coefficient of Y^{index} of P does not vanish")]
    StripNonzero { tower: usize, index: usize },
    #[error("certification: {0}")]
    Certification(String),
}

/// Which Q1/C1 to build: the one derived from θ, or the literal display.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Derived,
    Printed,
}

// ---------------------------------------------------------------------------
// Input values.

fn tu_words(len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| [format!("{w}τ"), format!("{w}υ")]).collect();
    }
    out
}

fn galois_words() -> &'static Vec<(Word, MPoly)> {
    static W: OnceLock<Vec<(Word, MPoly)>> = OnceLock::new();
    W.get_or_init(|| {
        let mut specs: Vec<String> = (1..=4).flat_map(tu_words).collect();
        specs.extend(["σ", "στ", "συ"].map(String::from));
        specs
            .iter()
            .map(|s| {
                let w = galois().word(s);
                let e = galois().lyndon.expand(&w);
                (w, e)
            })
            .collect()
    })
}

/// The f_w (w a Galois word) entering Q1, induced by the Lyndon values.
#[derive(Debug, Clone)]
pub struct GaloisValues<E> {
    values: BTreeMap<Word, E>,
}

impl<E: Clone> GaloisValues<E> {
    pub fn new<R: Ring<E = E>>(r: &R, lyndon: &[E]) -> Self {
        let values = galois_words()
            .iter()
            .map(|(w, e)| (w.clone(), e.eval(r, &|v| lyndon[v as usize].clone())))
            .collect();
        GaloisValues { values }
    }

    /// f_w for a word written in τ, υ, σ.
    pub fn get(&self, spec: &str) -> &E {
        &self.values[&galois().word(spec)]
    }
}

/// f_tail, f_head and f_{head tail^k} (k = 1, 2, 3) for one tower.
#[derive(Debug, Clone)]
pub struct TowerValues<E> {
    pub tail: E,
    pub head: E,
    pub h: [E; 3],
}

/// Tower values read off the 14 f_λ values (in coordinate order).
pub fn tower_values<R: Ring>(r: &R, f: &[R::E], tower: usize) -> TowerValues<R::E> {
    let s = m05();
    let at = |c: PlCoordinate| f[s.coordinate_index(c)].clone();
    let mut tail = r.zero();
    for &(l, c) in &s.shape.towers[tower].tail {
        tail = r.add(&tail, &r.scale_int(&at(PlCoordinate::Letter(l)), c));
    }
    let coord = |k| at(s.shape.tower_coordinate(tower, k));
    TowerValues { tail, head: coord(0), h: [coord(1), coord(2), coord(3)] }
}

/// (Φ^υ, Φ^τ) at the tail of a tower: the point where p_i^θ vanishes.
pub fn tower_point<R: Ring>(r: &R, phi: &[R::E], tower: usize) -> (R::E, R::E) {
    let s = m05();
    let g = &galois().alphabet;
    let comp = |rho: &str| {
        let rho = g.index(rho).expect("letter");
        let mut acc = r.zero();
        for &(l, c) in &s.shape.towers[tower].tail {
            let i = s.phi_index(rho, PlCoordinate::Letter(l)).expect("weight-one Φ");
            acc = r.add(&acc, &r.scale_int(&phi[i], c));
        }
        acc
    };
    (comp("υ"), comp("τ"))
}

// ---------------------------------------------------------------------------
// Bivariate polynomials in X, Y of total degree ≤ 4: entry [i][j] is the
// coefficient of X^i Y^j.

pub type BiPoly<E> = Vec<Vec<E>>;
const BI: usize = 5;

fn bi_zero<R: Ring>(r: &R) -> BiPoly<R::E> {
    vec![vec![r.zero(); BI]; BI]
}

fn bi_const<R: Ring>(r: &R, c: &R::E) -> BiPoly<R::E> {
    let mut out = bi_zero(r);
    out[0][0] = c.clone();
    out
}

fn bi_lin<R: Ring>(r: &R, x: &R::E, y: &R::E) -> BiPoly<R::E> {
    let mut out = bi_zero(r);
    out[1][0] = x.clone();
    out[0][1] = y.clone();
    out
}

fn bi_add<R: Ring>(r: &R, a: &BiPoly<R::E>, b: &BiPoly<R::E>) -> BiPoly<R::E> {
    a.iter().zip(b).map(|(u, v)| u.iter().zip(v).map(|(x, y)| r.add(x, y)).collect()).collect()
}

fn bi_neg<R: Ring>(r: &R, a: &BiPoly<R::E>) -> BiPoly<R::E> {
    a.iter().map(|u| u.iter().map(|x| r.neg(x)).collect()).collect()
}

fn bi_scale<R: Ring>(r: &R, a: &BiPoly<R::E>, c: &R::E) -> BiPoly<R::E> {
    a.iter().map(|u| u.iter().map(|x| r.mul(x, c)).collect()).collect()
}

fn bi_mul<R: Ring>(r: &R, a: &BiPoly<R::E>, b: &BiPoly<R::E>) -> BiPoly<R::E> {
    let mut out = bi_zero(r);
    for i in 0..BI {
        for j in 0..BI {
            if r.is_exact_zero(&a[i][j]) {
                continue;
            }
            for k in 0..BI {
                for l in 0..BI {
                    if r.is_exact_zero(&b[k][l]) {
                        continue;
                    }
                    assert!(i + k < BI && j + l < BI, "bivariate degree overflow");
                    out[i + k][j + l] = r.add(&out[i + k][j + l], &r.mul(&a[i][j], &b[k][l]));
                }
            }
        }
    }
    out
}

/// Evaluates a bivariate polynomial at (x, y).
pub fn bi_eval<R: Ring>(r: &R, a: &BiPoly<R::E>, x: &R::E, y: &R::E) -> R::E {
    let mut acc = r.zero();
    for (i, row) in a.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !r.is_exact_zero(c) {
                let m = r.mul(&r.pow(x, i as u32), &r.pow(y, j as u32));
                acc = r.add(&acc, &r.mul(c, &m));
            }
        }
    }
    acc
}

/// Σ_{|w| = len} f_{ρw} X^{#υ(w)} Y^{#τ(w)}: the cocycle coefficient of
/// the head letter ρ at tail-length `len`, written in X = Φ^υ, Y = Φ^τ.
fn tail_sum<R: Ring>(r: &R, g: &GaloisValues<R::E>, rho: &str, len: usize) -> BiPoly<R::E> {
    let mut out = bi_zero(r);
    for w in tu_words(len) {
        let nu = w.chars().filter(|&c| c == 'υ').count();
        let f = g.get(&format!("{rho}{w}"));
        out[nu][len - nu] = r.add(&out[nu][len - nu], f);
    }
    out
}

// ---------------------------------------------------------------------------
// Q1, A1, B1, C1.

/// Q1(X, Y) for one tower. `Form::Printed` reproduces the displayed formula
/// literally; it does not satisfy Q1^θ(Φ^υ, Φ^τ) = 0.
pub fn build_q1<R: Ring>(
    r: &R,
    g: &GaloisValues<R::E>,
    t: &TowerValues<R::E>,
    form: Form,
) -> Result<BiPoly<R::E>, GeomError> {
    let f = |s: &str| g.get(s).clone();
    let (ft, fu) = (f("τ"), f("υ"));
    let inv_sigma = r.inv(g.get("σ")).ok_or(GeomError::SigmaZero)?;
    let [f1, f2, f3] = &t.h;
    let ut = bi_lin(r, &f("τυ"), &f("ττ"));
    let uu = bi_lin(r, &f("υυ"), &f("υτ"));
    let cbr = bi_add(r, &bi_const(r, &r.mul(&fu, f1)), &bi_neg(r, &bi_scale(r, &uu, &t.head)));
    let dbr = bi_add(r, &bi_const(r, &r.neg(&r.mul(&ft, f1))), &bi_scale(r, &ut, &t.head));
    let v = bi_lin(r, &f("συ"), &f("στ"));
    let head3 = bi_add(
        r,
        &bi_mul(r, &cbr, &tail_sum(r, g, "τ", 3)),
        &bi_mul(r, &dbr, &tail_sum(r, g, "υ", 3)),
    );
    let (s_t, s_u) = (tail_sum(r, g, "τ", 2), tail_sum(r, g, "υ", 2));
    match form {
        Form::Derived => {
            let d = bi_add(r, &bi_scale(r, &uu, &ft), &bi_neg(r, &bi_scale(r, &ut, &fu)));
            let inner = bi_add(
                r,
                &bi_scale(r, &d, f2),
                &bi_add(r, &bi_mul(r, &cbr, &s_t), &bi_mul(r, &dbr, &s_u)),
            );
            let block = bi_scale(r, &bi_mul(r, &v, &inner), &inv_sigma);
            Ok(bi_add(r, &bi_add(r, &bi_scale(r, &d, f3), &head3), &bi_neg(r, &block)))
        }
        Form::Printed => {
            let x = r.sub(&r.mul(&ft, &f("υυ")), &r.mul(&f("τυ"), &fu));
            let y = r.sub(&r.mul(&ft, &f("υυ")), &r.mul(&f("ττ"), &fu));
            let d = bi_lin(r, &x, &y);
            let inner = bi_add(
                r,
                &bi_const(r, f2),
                &bi_add(r, &bi_neg(r, &bi_mul(r, &cbr, &s_t)), &bi_mul(r, &dbr, &s_u)),
            );
            let block = bi_scale(r, &bi_mul(r, &v, &inner), &inv_sigma);
            Ok(bi_add(r, &bi_add(r, &bi_scale(r, &d, f3), &head3), &block))
        }
    }
}

/// A1 (degree 0), B1 (degree 1), C1 (degree 2) in Y.
#[derive(Debug, Clone, PartialEq)]
pub struct Abc<E> {
    pub a: Poly<E>,
    pub b: Poly<E>,
    pub c: Poly<E>,
}

/// The quadratic A1 X^2 + B1 X + C1 cut out by the tower's cocycle relations.
/// `Form::Printed` keeps f_υυ in the last term of C1.
pub fn build_abc<R: Ring>(r: &R, g: &GaloisValues<R::E>, t: &TowerValues<R::E>, form: Form) -> Abc<R::E> {
    let f = |s: &str| g.get(s).clone();
    let (ft, fu) = (f("τ"), f("υ"));
    let half = |x: &R::E| r.mul(x, &r.from_q(&BigRational::new(1.into(), 2.into())));
    let alpha = r.sub(&f("τυ"), &half(&r.mul(&ft, &fu)));
    let beta = r.sub(&f("υτ"), &half(&r.mul(&fu, &ft)));
    let f1 = &t.h[0];
    let gg = r.sub(f1, &half(&r.mul(&t.head, &t.tail)));
    let m = |xs: &[&R::E]| xs.iter().fold(r.one(), |acc, x| r.mul(&acc, x));
    let a = vec![r.neg(&m(&[&alpha, &f("υυ"), &t.head]))];
    let bx = r.sub(&r.mul(&f("τυ"), &fu), &r.mul(&ft, &f("υυ")));
    let b0 = r.sub(&m(&[&alpha, &fu, f1]), &r.mul(&bx, &gg));
    let b1 = r.add(&r.neg(&m(&[&alpha, &f("υτ"), &t.head])), &m(&[&beta, &f("τυ"), &t.head]));
    let last = match form {
        Form::Derived => f("υτ"),
        Form::Printed => f("υυ"),
    };
    let cx = r.sub(&r.mul(&f("ττ"), &fu), &r.mul(&ft, &last));
    let c1 = r.sub(&r.neg(&m(&[&beta, &ft, f1])), &r.mul(&cx, &gg));
    let c2 = m(&[&beta, &f("ττ"), &t.head]);
    Abc { a, b: vec![b0, b1], c: vec![r.zero(), c1, c2] }
}

/// Q1a, Q1b with (2A1)^4 Q1((−B1 + δ)/(2A1), Y) = Q1a + δ Q1b, δ^2 = Δ.
pub fn build_q1ab<R: Ring>(r: &R, q1: &BiPoly<R::E>, abc: &Abc<R::E>) -> (Poly<R::E>, Poly<R::E>) {
    let two_a = r.scale_int(&abc.a[0], 2);
    let nb: Poly<R::E> = abc.b.iter().map(|x| r.neg(x)).collect();
    let delta = discriminant(r, abc);
    let binom = |n: usize, k: usize| -> i64 { (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64) };
    let mut qa: Poly<R::E> = vec![r.zero()];
    let mut qb: Poly<R::E> = vec![r.zero()];
    for (i, row) in q1.iter().enumerate() {
        // (−B1 + δ)^i = sa + δ sb.
        let mut sa: Poly<R::E> = vec![r.zero()];
        let mut sb: Poly<R::E> = vec![r.zero()];
        for k in 0..=i {
            let term = poly_scale_int(
                r,
                &linalg::poly_mul(r, &linalg::poly_pow(r, &delta, (k / 2) as u32), &linalg::poly_pow(r, &nb, (i - k) as u32)),
                binom(i, k),
            );
            if k % 2 == 0 {
                sa = linalg::poly_add(r, &sa, &term);
            } else {
                sb = linalg::poly_add(r, &sb, &term);
            }
        }
        let scale = r.pow(&two_a, (4 - i) as u32);
        for (j, a) in row.iter().enumerate() {
            if r.is_exact_zero(a) {
                continue;
            }
            let mut c = vec![r.zero(); j];
            c.push(r.mul(a, &scale));
            qa = linalg::poly_add(r, &qa, &linalg::poly_mul(r, &c, &sa));
            qb = linalg::poly_add(r, &qb, &linalg::poly_mul(r, &c, &sb));
        }
    }
    (qa, qb)
}

fn poly_scale_int<R: Ring>(r: &R, a: &[R::E], n: i64) -> Poly<R::E> {
    a.iter().map(|x| r.scale_int(x, n)).collect()
}

/// Δ1 = B1^2 − 4 A1 C1.
pub fn discriminant<R: Ring>(r: &R, abc: &Abc<R::E>) -> Poly<R::E> {
    let b2 = linalg::poly_mul(r, &abc.b, &abc.b);
    let ac = poly_scale_int(r, &linalg::poly_mul(r, &abc.a, &abc.c), 4);
    linalg::poly_sub(r, &b2, &ac)
}

/// Formal Y-length of the literal norm P = Q1a^2 − Δ1 Q1b^2 (degree ≤ 16).
pub const NORM_LEN: usize = 17;

/// The literal norm P = Q1a^2 − Δ1 Q1b^2, padded to [`NORM_LEN`].
///
/// This is identically zero: Δ1 = b0^2 with b0 = B1(0), one root of
/// A1 X^2 + B1 X + C1 is the line f_υ X + f_τ Y = 0, and Q1 vanishes on it,
/// so Q1a + b0 Q1b = 0. See [`build_p`].
pub fn build_norm<R: Ring>(
    r: &R,
    g: &GaloisValues<R::E>,
    t: &TowerValues<R::E>,
) -> Result<Poly<R::E>, GeomError> {
    let q1 = build_q1(r, g, t, Form::Derived)?;
    let abc = build_abc(r, g, t, Form::Derived);
    let (qa, qb) = build_q1ab(r, &q1, &abc);
    let delta = discriminant(r, &abc);
    let mut p = linalg::poly_sub(
        r,
        &linalg::poly_mul(r, &qa, &qa),
        &linalg::poly_mul(r, &delta, &linalg::poly_mul(r, &qb, &qb)),
    );
    assert!(p.len() <= NORM_LEN);
    p.resize(NORM_LEN, r.zero());
    Ok(p)
}

/// Formal Y-length of the tower factor (degree ≤ 8).
pub const P_LEN: usize = 9;

/// The tower factor P = Q1a − b0 Q1b = (2A1)^4 Q1((−B1 − b0)/(2A1), Y),
/// padded to [`P_LEN`]. Its θ-image vanishes at Y = Φ^τ of the tower tail.
pub fn build_p<R: Ring>(r: &R, g: &GaloisValues<R::E>, t: &TowerValues<R::E>) -> Result<Poly<R::E>, GeomError> {
    let q1 = build_q1(r, g, t, Form::Derived)?;
    let abc = build_abc(r, g, t, Form::Derived);
    let (qa, qb) = build_q1ab(r, &q1, &abc);
    let mut p = linalg::poly_sub(r, &qa, &linalg::poly_scale(r, &qb, &abc.b[0]));
    assert!(p.len() <= P_LEN);
    p.resize(P_LEN, r.zero());
    Ok(p)
}

// ---------------------------------------------------------------------------
// The resultant program.

/// Certified generic degrees d_i of p_i and Y-strip exponents k_i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultantProgram {
    pub d: [usize; 3],
    pub k: [usize; 3],
    /// p_i is homogeneous of this weight when a weight-n input has weight n
    /// (Y has weight 0).
    pub weights: [u32; 3],
    pub seeds: Vec<u64>,
}

/// Scalar inputs of F: the 11 Lyndon values and the 14 f_λ values.
#[derive(Debug, Clone)]
pub struct Specialization<E> {
    pub lyndon: Vec<E>,
    pub f: Vec<E>,
}

impl ResultantProgram {
    /// Weight of F: R(Y) has coefficients of weight d2 w1 + d1 w2, and
    /// F = Res(R, p3) has weight d3 w_R + d1 d2 w3.
    pub fn f_weight(&self) -> u32 {
        let [d1, d2, d3] = self.d.map(|x| x as u32);
        let [w1, w2, w3] = self.weights;
        d3 * (d2 * w1 + d1 * w2) + d1 * d2 * w3
    }

    /// p_i = P_i / Y^{k_i} at formal degree d_i. Stripped and excess
    /// coefficients must satisfy `vanishes`.
    pub fn tower_poly<R: Ring>(
        &self,
        r: &R,
        g: &GaloisValues<R::E>,
        f: &[R::E],
        tower: usize,
        vanishes: &dyn Fn(&R::E) -> bool,
    ) -> Result<Poly<R::E>, GeomError> {
        let p = build_p(r, g, &tower_values(r, f, tower))?;
        let (k, d) = (self.k[tower], self.d[tower]);
        for (index, c) in p.iter().enumerate() {
            if (index < k || index > k + d) && !vanishes(c) {
                return Err(GeomError::StripNonzero { tower, index });
            }
        }
        Ok(p[k..=k + d].to_vec())
    }

    /// The three tower polynomials.
    pub fn tower_polys<R: Ring>(
        &self,
        r: &R,
        s: &Specialization<R::E>,
        vanishes: &dyn Fn(&R::E) -> bool,
    ) -> Result<[Poly<R::E>; 3], GeomError> {
        let g = GaloisValues::new(r, &s.lyndon);
        Ok([
            self.tower_poly(r, &g, &s.f, 0, vanishes)?,
            self.tower_poly(r, &g, &s.f, 1, vanishes)?,
            self.tower_poly(r, &g, &s.f, 2, vanishes)?,
        ])
    }

    /// F at a specialization, over an exact field.
    pub fn evaluate_f<R: Ring>(&self, r: &R, s: &Specialization<R::E>) -> Result<R::E, GeomError> {
        self.evaluate_f_with(r, s, &|x| r.is_zero(x))
    }

    /// F at a specialization, with a custom test for the coefficients that
    /// must vanish (used for p-adic precision floors).
    pub fn evaluate_f_with<R: Ring>(
        &self,
        r: &R,
        s: &Specialization<R::E>,
        vanishes: &dyn Fn(&R::E) -> bool,
    ) -> Result<R::E, GeomError> {
        let [p1, p2, p3] = self.tower_polys(r, s, vanishes)?;
        Ok(double_resultant(r, &p1, self.d[0], &p2, self.d[1], &p3, self.d[2]))
    }
}

/// Res_Y(Res_X(p1(X), p2(Y − X)), p3(Y)) at fixed degrees; the sample
/// determinants of the inner resultant run in parallel.
pub fn double_resultant<R: Ring>(
    r: &R,
    p1: &[R::E],
    d1: usize,
    p2: &[R::E],
    d2: usize,
    p3: &[R::E],
    d3: usize,
) -> R::E {
    let big = d1 * d2;
    let xs: Vec<R::E> = (0..=big as i64).map(|i| r.from_int(i)).collect();
    let ys: Vec<R::E> = xs
        .par_iter()
        .map(|y| linalg::resultant(r, p1, d1, &linalg::shifted_reflection(r, p2, y), d2))
        .collect();
    let inner = linalg::interpolate(r, &xs, &ys);
    linalg::resultant(r, &inner, big, p3, d3)
}

// ---------------------------------------------------------------------------
// Random exact specializations.

/// Uniform rational with numerator in [−2^16, 2^16] and denominator in [1, 2^16].
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    const B: i64 = 1 << 16;
    BigRational::new(BigInt::from(rng.gen_range(-B..=B)), BigInt::from(rng.gen_range(1..=B)))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

fn sigma_var() -> usize {
    galois().lyndon.var_of(&galois().word("σ")).expect("σ is Lyndon") as usize
}

/// Lyndon values with f_σ ≠ 0; returns the number of rejected draws too.
pub fn random_lyndon(rng: &mut ChaCha8Rng) -> (Vec<BigRational>, usize) {
    let n = galois().lyndon.words.len();
    let mut retries = 0;
    loop {
        let v = random_vec(rng, n);
        if v[sigma_var()] != BigRational::from_integer(0.into()) {
            return (v, retries);
        }
        retries += 1;
    }
}

/// Lyndon values and independent f_λ values.
pub fn random_free(rng: &mut ChaCha8Rng) -> Specialization<BigRational> {
    let (lyndon, _) = random_lyndon(rng);
    let f = random_vec(rng, m05().coordinates.len());
    Specialization { lyndon, f }
}

/// A θ-consistent draw: Lyndon values, Φ values and f_λ = θ(f_λ).
pub fn random_theta(
    rng: &mut ChaCha8Rng,
    table: &ThetaTable,
) -> (Specialization<BigRational>, Vec<BigRational>, usize) {
    let (lyndon, retries) = random_lyndon(rng);
    let phi = random_vec(rng, m05().phi.len());
    let spec = ArithSpecialization { lyndon: lyndon.clone() };
    let seed = CocycleSeed { phi: phi.clone() };
    let f = m05().theta_values(&Rationals, table, &spec, &seed);
    (Specialization { lyndon, f }, phi, retries)
}

/// Seed of the free specialization used as the nonvanishing witness.
pub const WITNESS_SEED: u64 = 0;

pub fn witness() -> Specialization<BigRational> {
    random_free(&mut ChaCha8Rng::seed_from_u64(WITNESS_SEED))
}

fn power_of_two(q: &BigRational) -> Option<u32> {
    let n = q.numer();
    (q.denom().is_one() && n.sign() == num_bigint::Sign::Plus && n.magnitude().count_ones() == 1).then(|| n.trailing_zeros().expect("nonzero") as u32)
}

/// Half-weights of the 11 Lyndon inputs and the 14 f_λ inputs.
pub fn input_weights() -> (Vec<u32>, Vec<u32>) {
    let g = galois();
    let s = m05();
    (
        g.lyndon.words.iter().map(|w| g.alphabet.half_weight(w)).collect(),
        s.coordinates.iter().map(|&c| s.shape.weight(c)).collect(),
    )
}

/// Multiplies every weight-n input by c^n; F scales by c^{f_weight}.
pub fn rescale<R: Ring>(r: &R, s: &Specialization<R::E>, c: &R::E) -> Specialization<R::E> {
    let (lw, fw) = input_weights();
    let sc = |xs: &[R::E], ws: &[u32]| xs.iter().zip(ws).map(|(x, &n)| r.mul(x, &r.pow(c, n))).collect();
    Specialization { lyndon: sc(&s.lyndon, &lw), f: sc(&s.f, &fw) }
}

fn y_profile(p: &[BigRational]) -> Option<(usize, usize)> {
    let lo = p.iter().position(|c| !c.is_zero())?;
    let hi = p.iter().rposition(|c| !c.is_zero())?;
    Some((lo, hi))
}

/// Certifies (d_i, k_i) from `trials` free and `trials` θ-consistent exact
/// specializations. Free draws must agree exactly; θ-consistent draws may
/// only raise the valuation or lower the degree.
pub fn certify(seed: u64, trials: usize) -> Result<ResultantProgram, GeomError> {
    let mut profiles: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 3];
    let mut weights: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); 3];
    let mut theta_profiles: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 3];
    let mut seeds = Vec::new();
    for t in 0..trials as u64 {
        let s = seed.wrapping_mul(1_000_003).wrapping_add(t);
        seeds.push(s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let free = random_free(&mut rng);
        let (theta, _, _) = random_theta(&mut rng, theta_table());
        let two = BigRational::from_integer(2.into());
        let scaled = rescale(&Rationals, &free, &two);
        let (g, gs) = (GaloisValues::new(&Rationals, &free.lyndon), GaloisValues::new(&Rationals, &scaled.lyndon));
        for (tower, w) in weights.iter_mut().enumerate() {
            let p = build_p(&Rationals, &g, &tower_values(&Rationals, &free.f, tower))?;
            let ps = build_p(&Rationals, &gs, &tower_values(&Rationals, &scaled.f, tower))?;
            for (a, b) in p.iter().zip(&ps) {
                if !a.is_zero() {
                    w.insert(power_of_two(&(b / a)).ok_or_else(|| {
                        GeomError::Certification(format!("tower {}: p is not weighted homogeneous", tower + 1))
                    })?);
                }
            }
        }
        for (spec, out) in [(&free, &mut profiles), (&theta, &mut theta_profiles)] {
            let g = GaloisValues::new(&Rationals, &spec.lyndon);
            for (tower, prof) in out.iter_mut().enumerate() {
                let p = build_p(&Rationals, &g, &tower_values(&Rationals, &spec.f, tower))?;
                let yp = y_profile(&p)
                    .ok_or_else(|| GeomError::Certification(format!("P_{} vanished identically", tower + 1)))?;
                prof.push(yp);
            }
        }
    }
    let mut d = [0; 3];
    let mut k = [0; 3];
    for tower in 0..3 {
        let (lo, hi) = profiles[tower][0];
        if profiles[tower].iter().any(|&x| x != (lo, hi)) {
            return Err(GeomError::Certification(format!(
                "tower {}: free profiles {:?} disagree",
                tower + 1,
                profiles[tower]
            )));
        }
        if theta_profiles[tower].iter().any(|&(l, h)| l < lo || h > hi) {
            return Err(GeomError::Certification(format!(
                "tower {}: θ profiles {:?} exceed the generic one",
                tower + 1,
                theta_profiles[tower]
            )));
        }
        k[tower] = lo;
        d[tower] = hi - lo;
    }
    if weights.iter().any(|w| w.len() != 1) {
        return Err(GeomError::Certification(format!("inconsistent weights {weights:?}")));
    }
    let weights = [0, 1, 2].map(|t| *weights[t].first().expect("one weight"));
    Ok(ResultantProgram { d, k, weights, seeds })
}

pub const CERTIFY_SEED: u64 = 0;
pub const CERTIFY_TRIALS: usize = 6;

/// The program certified with the default seed.
pub fn program() -> &'static ResultantProgram {
    static P: OnceLock<ResultantProgram> = OnceLock::new();
    P.get_or_init(|| certify(CERTIFY_SEED, CERTIFY_TRIALS).expect("certification"))
}

// ---------------------------------------------------------------------------
// Kernel check.

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelCheckReport {
    pub trials: usize,
    pub seeds: Vec<u64>,
    pub all_zero: bool,
    pub degenerate_retries: usize,
}

/// F at θ-consistent random points; `all_zero` means every value is an
/// exact rational zero.
pub fn kernel_check(trials: usize, seed: u64) -> KernelCheckReport {
    kernel_check_with(theta_table(), trials, seed)
}

/// [`kernel_check`] against an arbitrary θ table.
pub fn kernel_check_with(table: &ThetaTable, trials: usize, seed: u64) -> KernelCheckReport {
    let prog = program();
    let seeds: Vec<u64> = (0..trials as u64).map(|t| seed.wrapping_mul(7_919).wrapping_add(t)).collect();
    let results: Vec<(bool, usize)> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut retries = 0;
            loop {
                let (spec, _, r) = random_theta(&mut rng, table);
                retries += r;
                match prog.evaluate_f(&Rationals, &spec) {
                    Ok(v) => return (v.is_zero(), retries),
                    Err(GeomError::SigmaZero) => retries += 1,
                    // A table outside the kernel of θ can break the strip pattern.
                    Err(_) => return (false, retries),
                }
            }
        })
        .collect();
    KernelCheckReport {
        trials,
        seeds,
        all_zero: results.iter().all(|r| r.0),
        degenerate_retries: results.iter().map(|r| r.1).sum(),
    }
}

/// Symbolic Galois values: each Lyndon dual is its own variable.
pub fn symbolic_galois() -> GaloisValues<MPoly> {
    let n = galois().lyndon.words.len();
    let vars: Vec<MPoly> = (0..n).map(|v| MPoly::var(v as u16)).collect();
    GaloisValues::new(&LaurentRing, &vars)
}

/// Symbolic f_λ values: the variables F_BASE + index.
pub fn symbolic_f() -> Vec<MPoly> {
    (0..m05().coordinates.len()).map(|i| MPoly::var(crate::theta::F_BASE + i as u16)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rng(s: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(s)
    }

    #[test]
    fn q1_vanishes_on_theta_points() {
        for s in 0..10 {
            let (spec, phi, _) = random_theta(&mut rng(s), theta_table());
            let g = GaloisValues::new(&Rationals, &spec.lyndon);
            for tower in 0..3 {
                let t = tower_values(&Rationals, &spec.f, tower);
                let (x, y) = tower_point(&Rationals, &phi, tower);
                let q = build_q1(&Rationals, &g, &t, Form::Derived).unwrap();
                assert!(bi_eval(&Rationals, &q, &x, &y).is_zero(), "seed {s} tower {tower}");
                let printed = build_q1(&Rationals, &g, &t, Form::Printed).unwrap();
                assert!(!bi_eval(&Rationals, &printed, &x, &y).is_zero());
            }
        }
    }

    #[test]
    fn abc_vanishes_on_theta_points() {
        for s in 0..10 {
            let (spec, phi, _) = random_theta(&mut rng(100 + s), theta_table());
            let g = GaloisValues::new(&Rationals, &spec.lyndon);
            for tower in 0..3 {
                let t = tower_values(&Rationals, &spec.f, tower);
                let (x, y) = tower_point(&Rationals, &phi, tower);
                let abc = build_abc(&Rationals, &g, &t, Form::Derived);
                let quad = vec![
                    linalg::poly_eval(&Rationals, &abc.c, &y),
                    linalg::poly_eval(&Rationals, &abc.b, &y),
                    linalg::poly_eval(&Rationals, &abc.a, &y),
                ];
                assert!(linalg::poly_eval(&Rationals, &quad, &x).is_zero());
                let printed = build_abc(&Rationals, &g, &t, Form::Printed);
                let quad = vec![
                    linalg::poly_eval(&Rationals, &printed.c, &y),
                    linalg::poly_eval(&Rationals, &printed.b, &y),
                    linalg::poly_eval(&Rationals, &printed.a, &y),
                ];
                assert!(!linalg::poly_eval(&Rationals, &quad, &x).is_zero());
            }
        }
    }

    #[test]
    fn q1_symbolic_identity() {
        let g = symbolic_galois();
        let f = symbolic_f();
        let t = tower_values(&LaurentRing, &f, 0);
        let q = build_q1(&LaurentRing, &g, &t, Form::Derived).unwrap();
        let s = m05();
        let sub = |v: u16| -> Option<MPoly> {
            (v >= crate::theta::F_BASE).then(|| theta_table().get(s.coordinates[(v - crate::theta::F_BASE) as usize]).clone())
        };
        let q: BiPoly<MPoly> = q.iter().map(|row| row.iter().map(|c| c.substitute(&sub)).collect()).collect();
        let phi: Vec<MPoly> = (0..s.phi.len()).map(|i| MPoly::var(s.phi_var(i))).collect();
        let (x, y) = tower_point(&LaurentRing, &phi, 0);
        assert!(bi_eval(&LaurentRing, &q, &x, &y).is_zero());
    }

    #[test]
    fn q1_spot_values() {
        let g = symbolic_galois();
        let f = symbolic_f();
        let t = tower_values(&LaurentRing, &f, 0);
        // −f_τυ f_υ X f_{e11e1^3} from the first bracket.
        let m = g.get("τυ").mul(g.get("υ")).mul(&t.h[2]);
        let mono = m.terms.keys().next().unwrap();
        for form in [Form::Derived, Form::Printed] {
            let q = build_q1(&LaurentRing, &g, &t, form).unwrap();
            assert_eq!(q[1][0].terms.get(mono), Some(&BigRational::from_integer((-1).into())));
        }
        let zero = vec![Rationals.zero(); 14];
        let (lyndon, _) = random_lyndon(&mut rng(3));
        let gz = GaloisValues::new(&Rationals, &lyndon);
        let tz = tower_values(&Rationals, &zero, 0);
        for form in [Form::Derived, Form::Printed] {
            assert!(build_q1(&Rationals, &gz, &tz, form).unwrap().iter().flatten().all(|c| c.is_zero()));
            let abc = build_abc(&Rationals, &gz, &tz, form);
            assert!(abc.a.iter().chain(&abc.b).chain(&abc.c).all(|c| c.is_zero()));
        }
        let abc = build_abc(&LaurentRing, &g, &t, Form::Printed);
        let alpha = g.get("τυ").sub(&g.get("τ").mul(g.get("υ")).scale(&BigRational::new(1.into(), 2.into())));
        assert_eq!(abc.a[0], alpha.mul(g.get("υυ")).mul(&t.head).neg());
    }
}
