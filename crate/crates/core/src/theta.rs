//! Galois-side coordinates, universal cocycle coefficients and the map θ.
//!
//! Polynomials produced here live in one variable space: the Lyndon duals
//! of the Galois alphabet are variables `0..`, the cocycle coordinates
//! Φ^ρ_λ start at [`PHI_BASE`] and the geometric coordinates f_λ at
//! [`F_BASE`].

use crate::mpoly::{MPoly, Mono, Var};
use crate::pl::{PlCoordinate, PlShape};
use crate::ring::Ring;
use crate::shuffle::{Coeff, GradedAlphabet, LyndonBasis, ShuffleElement, Word};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

pub const PHI_BASE: Var = 32;
pub const F_BASE: Var = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ThetaError {
    #[error("generator weights must be odd and at least 3, got {0}")]
    EvenGenerator(u32),
    #[error("weight bound must be at least 1")]
    ZeroBound,
    #[error("coordinate {0} is outside the weight bound")]
    OutOfBound(String),
    #[error("malformed table line: {0}")]
    Table(String),
    #[error("alphabet: {0}")]
    Alphabet(#[from] crate::shuffle::ShuffleError),
}

/// A free graded Galois side: letters of half-weight one and one generator
/// in each listed odd half-weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisConfig {
    pub weight_one: Vec<String>,
    pub odd: BTreeMap<u32, String>,
    pub weight_bound: u32,
}

impl Default for GaloisConfig {
    fn default() -> Self {
        GaloisConfig {
            weight_one: vec!["τ".into(), "υ".into()],
            odd: BTreeMap::from([(3, "σ".into())]),
            weight_bound: 4,
        }
    }
}

/// The alphabet of a [`GaloisConfig`] and its Lyndon basis up to the bound.
pub struct GaloisSide {
    pub config: GaloisConfig,
    pub alphabet: Arc<GradedAlphabet>,
    pub lyndon: LyndonBasis,
}

impl GaloisSide {
    pub fn new(config: GaloisConfig) -> Result<Self, ThetaError> {
        if config.weight_bound == 0 {
            return Err(ThetaError::ZeroBound);
        }
        if let Some(&n) = config.odd.keys().find(|&&n| n < 3 || n % 2 == 0) {
            return Err(ThetaError::EvenGenerator(n));
        }
        let mut letters: Vec<(&str, u32)> = config.weight_one.iter().map(|s| (s.as_str(), 1)).collect();
        letters.extend(config.odd.iter().map(|(&n, s)| (s.as_str(), n)));
        let alphabet = GradedAlphabet::new(&letters)?;
        let lyndon = LyndonBasis::new(&alphabet, config.weight_bound);
        Ok(GaloisSide { config, alphabet, lyndon })
    }

    /// Letters of a given half-weight.
    pub fn generators_of_weight(&self, n: u32) -> Vec<u8> {
        (0..self.alphabet.len() as u8).filter(|&l| self.alphabet.weight(l) == n).collect()
    }

    pub fn word(&self, spec: &str) -> Word {
        Word(
            spec.chars()
                .map(|c| self.alphabet.index(&c.to_string()).unwrap_or_else(|| panic!("unknown letter {c}")))
                .collect(),
        )
    }
}

/// The default side τ, υ, σ with Lyndon basis up to half-weight 4.
pub fn galois() -> &'static GaloisSide {
    static G: OnceLock<GaloisSide> = OnceLock::new();
    G.get_or_init(|| GaloisSide::new(GaloisConfig::default()).expect("valid default"))
}

/// Cocycle coordinates Φ^ρ_λ for a Galois side and a polylogarithmic shape:
/// one for each generator ρ and coordinate λ of equal half-weight.
pub struct CocycleSpace {
    pub galois: &'static GaloisSide,
    pub shape: PlShape,
    pub phi: Vec<(u8, PlCoordinate)>,
    pub coordinates: Vec<PlCoordinate>,
}

impl CocycleSpace {
    pub fn new(galois: &'static GaloisSide, shape: PlShape) -> Self {
        let coordinates = shape.coordinates();
        let mut phi = Vec::new();
        for n in 1..=galois.config.weight_bound.min(shape.weight_bound) {
            for rho in galois.generators_of_weight(n) {
                for &c in coordinates.iter().filter(|&&c| shape.weight(c) == n) {
                    phi.push((rho, c));
                }
            }
        }
        CocycleSpace { galois, shape, phi, coordinates }
    }

    pub fn phi_index(&self, rho: u8, c: PlCoordinate) -> Option<usize> {
        self.phi.iter().position(|&(r, d)| r == rho && d == c)
    }

    pub fn phi_var(&self, i: usize) -> Var {
        PHI_BASE + i as Var
    }

    pub fn phi_name(&self, i: usize) -> String {
        let (rho, c) = self.phi[i];
        format!("Φ^{}_{}", self.galois.alphabet.name(rho), self.shape.name(c))
    }

    pub fn coordinate_index(&self, c: PlCoordinate) -> usize {
        self.coordinates.iter().position(|&d| d == c).expect("known coordinate")
    }

    pub fn f_var(&self, c: PlCoordinate) -> Var {
        F_BASE + self.coordinate_index(c) as Var
    }

    pub fn coordinate(&self, name: &str) -> PlCoordinate {
        self.shape.parse(name).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Display name of any variable in the shared layout.
    pub fn var_name(&self, v: Var) -> String {
        if v >= F_BASE {
            format!("f_{}", self.shape.name(self.coordinates[(v - F_BASE) as usize]))
        } else if v >= PHI_BASE {
            self.phi_name((v - PHI_BASE) as usize)
        } else {
            self.galois.lyndon.name(v)
        }
    }

    /// (geometric count, cocycle count): the f_λ and the Φ^ρ_λ.
    pub fn dimension_audit(&self) -> (usize, usize) {
        (self.coordinates.len(), self.phi.len())
    }

    /// c♯f_λ = Σ_w φ^w_λ f_w. With λ = head·tail^(n-1), the word ρτ1⋯τr
    /// (ρ of half-weight n-r, τi of half-weight one) has coefficient
    /// Φ^ρ_{head·tail^(n-r-1)}·∏Φ^τi_tail; every other word has coefficient 0.
    pub fn cocycle_expand<C: Coeff>(
        &self,
        c: PlCoordinate,
        phi: &dyn Fn(usize) -> C,
    ) -> Result<ShuffleElement<C>, ThetaError> {
        let n = self.shape.weight(c);
        if n > self.shape.weight_bound || n > self.galois.config.weight_bound {
            return Err(ThetaError::OutOfBound(self.shape.name(c)));
        }
        let alphabet = &self.galois.alphabet;
        let ones = self.galois.generators_of_weight(1);
        let mut out = ShuffleElement::zero(alphabet);
        let coeff = |rho: u8, d: PlCoordinate| self.phi_index(rho, d).map(phi);
        match c {
            PlCoordinate::Letter(_) => {
                for &rho in &ones {
                    if let Some(x) = coeff(rho, c) {
                        out.add_term(Word::letter(rho), x);
                    }
                }
            }
            PlCoordinate::Tower { tower, weight } => {
                let tail = &self.shape.towers[tower].tail;
                let tail_phi = |tau: u8| {
                    tail.iter().fold(C::zero(), |acc, &(l, k)| {
                        let x = coeff(tau, PlCoordinate::Letter(l)).expect("weight-one coordinate");
                        acc.add(&x.mul(&C::from_int(k)))
                    })
                };
                let tails: BTreeMap<u8, C> = ones.iter().map(|&t| (t, tail_phi(t))).collect();
                for r in 0..weight {
                    let head = self.shape.tower_coordinate(tower, weight - r - 1);
                    for rho in self.galois.generators_of_weight(weight - r) {
                        let Some(x) = coeff(rho, head) else { continue };
                        for taus in tuples(&ones, r as usize) {
                            let mut word = vec![rho];
                            word.extend_from_slice(&taus);
                            let y = taus.iter().fold(x.clone(), |acc, t| acc.mul(&tails[t]));
                            out.add_term(Word(word), y);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Symbolic Φ seed: Φ^ρ_λ is its own variable.
    pub fn symbolic_phi(&self) -> impl Fn(usize) -> MPoly + '_ {
        move |i| MPoly::var(self.phi_var(i))
    }

    /// θ(f_λ) derived from the cocycle formula, in Lyndon duals and Φ's.
    pub fn theta_derived(&self, c: PlCoordinate) -> Result<MPoly, ThetaError> {
        let e = self.cocycle_expand(c, &self.symbolic_phi())?;
        Ok(self.rewrite_in_lyndon(&e))
    }

    /// Σ c_w f_w with polynomial coefficients, with f_w in Lyndon duals.
    pub fn rewrite_in_lyndon(&self, e: &ShuffleElement<MPoly>) -> MPoly {
        let mut acc = MPoly::zero();
        for (w, c) in &e.terms {
            acc = acc.add(&self.galois.lyndon.expand(w).mul(c));
        }
        acc
    }

    /// Values of every f_λ at a specialization: θ(f_λ) evaluated.
    pub fn theta_values<R: Ring>(
        &self,
        r: &R,
        table: &ThetaTable,
        spec: &ArithSpecialization<R::E>,
        seed: &CocycleSeed<R::E>,
    ) -> Vec<R::E> {
        self.coordinates
            .iter()
            .map(|&c| specialize(r, spec, seed, table.get(c)).expect("θ images are polynomial"))
            .collect()
    }
}

fn tuples(letters: &[u8], r: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                letters.iter().map(move |&l| {
                    let mut w = v.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

/// The space for M_{0,5} with the default Galois side, half-weight ≤ 4.
pub fn m05() -> &'static CocycleSpace {
    static S: OnceLock<CocycleSpace> = OnceLock::new();
    S.get_or_init(|| CocycleSpace::new(galois(), PlShape::m05(4)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    M05,
    M04,
}

/// (geometric, cocycle) coordinate counts at the given weight bound.
pub fn dimension_audit(curve: Curve, weight_bound: u32) -> (usize, usize) {
    let shape = match curve {
        Curve::M05 => PlShape::m05(weight_bound),
        Curve::M04 => PlShape::m04(weight_bound),
    };
    CocycleSpace::new(galois(), shape).dimension_audit()
}

// ---------------------------------------------------------------------------
// Hardcoded θ table.

const THETA_TABLE: &str = include_str!("../data/theta_table.txt");

/// θ(f_λ) for the 14 coordinates of M_{0,5}, written out term by term and
/// rewritten in Lyndon duals. Entries are plain data and may be edited.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaTable {
    pub entries: BTreeMap<PlCoordinate, MPoly>,
}

impl ThetaTable {
    /// Lines "λ | w | Φ-factors"; a factor "ρ.x+y" stands for Φ^ρ_x + Φ^ρ_y.
    pub fn hardcoded() -> Result<Self, ThetaError> {
        let s = m05();
        let g = galois();
        let mut entries: BTreeMap<PlCoordinate, MPoly> = BTreeMap::new();
        for line in THETA_TABLE.lines().filter(|l| !l.trim().is_empty()) {
            let bad = || ThetaError::Table(line.to_string());
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            let [lambda, word, factors] = parts[..] else { return Err(bad()) };
            let c = s.shape.parse(lambda).map_err(|_| bad())?;
            let mut term = g.lyndon.expand(&g.word(word));
            for f in factors.split_whitespace() {
                let (rho, sub) = f.split_once('.').ok_or_else(bad)?;
                let rho = g.alphabet.index(rho).ok_or_else(bad)?;
                let mut sum = MPoly::zero();
                let pieces: Vec<&str> = if sub.contains('(') { vec![sub] } else { sub.split('+').collect() };
                for piece in pieces {
                    let d = s.shape.parse(piece).map_err(|_| bad())?;
                    let i = s.phi_index(rho, d).ok_or_else(bad)?;
                    sum = sum.add(&MPoly::var(s.phi_var(i)));
                }
                term = term.mul(&sum);
            }
            let e = entries.entry(c).or_default();
            *e = e.add(&term);
        }
        Ok(ThetaTable { entries })
    }

    pub fn get(&self, c: PlCoordinate) -> &MPoly {
        &self.entries[&c]
    }

    /// Adds `delta` times one monomial of the entry for λ (mutation testing).
    pub fn perturb(&mut self, c: PlCoordinate, delta: i64) {
        let e = self.entries.get_mut(&c).expect("known coordinate");
        let m = e.terms.keys().next().cloned().unwrap_or_else(Mono::one);
        e.add_term(m, BigRational::from_integer(delta.into()));
    }
}

/// The shared hardcoded table.
pub fn theta_table() -> &'static ThetaTable {
    static T: OnceLock<ThetaTable> = OnceLock::new();
    T.get_or_init(|| ThetaTable::hardcoded().expect("well-formed table"))
}

/// θ(f_λ) from the hardcoded table.
pub fn theta(c: PlCoordinate) -> &'static MPoly {
    theta_table().get(c)
}

// ---------------------------------------------------------------------------
// Specialization.

/// Values of the Lyndon duals; every f_w value is induced from them.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithSpecialization<E> {
    pub lyndon: Vec<E>,
}

/// Values of the Φ^ρ_λ.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleSeed<E> {
    pub phi: Vec<E>,
}

/// Evaluates a polynomial in the shared variable layout; geometric f_λ
/// variables must not occur. `None` signals division by zero.
pub fn specialize<R: Ring>(
    r: &R,
    spec: &ArithSpecialization<R::E>,
    seed: &CocycleSeed<R::E>,
    p: &MPoly,
) -> Option<R::E> {
    p.try_eval(r, &|v| {
        if v >= F_BASE {
            panic!("geometric variable in a Galois-side polynomial")
        } else if v >= PHI_BASE {
            seed.phi[(v - PHI_BASE) as usize].clone()
        } else {
            spec.lyndon[v as usize].clone()
        }
    })
}

/// Value of f_w induced by the Lyndon values.
pub fn word_value<R: Ring>(r: &R, spec: &ArithSpecialization<R::E>, w: &Word) -> R::E {
    galois().lyndon.expand(w).eval(r, &|v| spec.lyndon[v as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q_int, Rationals};

    #[test]
    fn thirteen_cocycle_coordinates() {
        let s = m05();
        let names: Vec<String> = (0..s.phi.len()).map(|i| s.phi_name(i)).collect();
        assert_eq!(
            names,
            [
                "Φ^τ_e1", "Φ^τ_e2", "Φ^τ_e11", "Φ^τ_e22", "Φ^τ_e12", "Φ^υ_e1", "Φ^υ_e2", "Φ^υ_e11", "Φ^υ_e22",
                "Φ^υ_e12", "Φ^σ_e11e1^2", "Φ^σ_e22e2^2", "Φ^σ_e12(e1+e2)^2"
            ]
        );
        assert_eq!(dimension_audit(Curve::M05, 4), (14, 13));
        assert_eq!(dimension_audit(Curve::M04, 4), (5, 5));
    }

    #[test]
    fn cocycle_example_e11e1() {
        let s = m05();
        let g = galois();
        let abcd: Vec<i64> = vec![2, 3, 5, 7];
        // Φ^τ_e1 = a, Φ^υ_e1 = b, Φ^τ_e11 = c, Φ^υ_e11 = d.
        let idx = |rho: &str, l: &str| s.phi_index(g.alphabet.index(rho).unwrap(), s.coordinate(l)).unwrap();
        let vals: BTreeMap<usize, i64> = [
            (idx("τ", "e1"), abcd[0]),
            (idx("υ", "e1"), abcd[1]),
            (idx("τ", "e11"), abcd[2]),
            (idx("υ", "e11"), abcd[3]),
        ]
        .into();
        let e = s
            .cocycle_expand(s.coordinate("e11e1"), &|i| q_int(*vals.get(&i).unwrap_or(&0)))
            .unwrap();
        let (a, b, c, d) = (abcd[0], abcd[1], abcd[2], abcd[3]);
        assert_eq!(e.coefficient(&g.word("ττ")), q_int(c * a));
        assert_eq!(e.coefficient(&g.word("τυ")), q_int(c * b));
        assert_eq!(e.coefficient(&g.word("υτ")), q_int(d * a));
        assert_eq!(e.coefficient(&g.word("υυ")), q_int(d * b));
        assert_eq!(e.terms.len(), 4);
    }

    #[test]
    fn cocycle_sigma_terms() {
        let s = m05();
        let g = galois();
        let e = s.cocycle_expand(s.coordinate("e11e1^3"), &s.symbolic_phi()).unwrap();
        let sig = s.phi_index(2, s.coordinate("e11e1^2")).unwrap();
        let tau = s.phi_index(0, s.coordinate("e1")).unwrap();
        let expect = MPoly::var(s.phi_var(sig)).mul(&MPoly::var(s.phi_var(tau)));
        assert_eq!(e.coefficient(&g.word("στ")), expect);
        assert!(e.coefficient(&g.word("τσ")).is_zero());
        assert_eq!(e.weights(), [4]);
    }

    #[test]
    fn table_matches_cocycle_formula() {
        let s = m05();
        for &c in &s.coordinates {
            assert_eq!(theta(c), &s.theta_derived(c).unwrap(), "{}", s.shape.name(c));
        }
    }

    #[test]
    fn first_entries() {
        let s = m05();
        let t = theta(s.coordinate("e1"));
        assert_eq!(t.len(), 2);
        let spec = ArithSpecialization { lyndon: [1, 0].iter().chain([0; 9].iter()).map(|&x| q_int(x)).collect() };
        let mut phi = vec![q_int(0); 13];
        phi[0] = q_int(5);
        assert_eq!(specialize(&Rationals, &spec, &CocycleSeed { phi }, t), Some(q_int(5)));
        let all_one = ArithSpecialization { lyndon: vec![q_int(1); 11] };
        let seed = CocycleSeed { phi: vec![q_int(1); 13] };
        assert_eq!(specialize(&Rationals, &all_one, &seed, theta(s.coordinate("e11e1"))), Some(q_int(2)));
    }

    #[test]
    fn homogeneity() {
        let s = m05();
        for &c in &s.coordinates {
            let n = s.shape.weight(c) as i32;
            for m in theta(c).terms.keys() {
                let (mut lw, mut pw) = (0, 0);
                for &(v, e) in &m.0 {
                    if v >= PHI_BASE {
                        pw += s.shape.weight(s.phi[(v - PHI_BASE) as usize].1) as i32 * e;
                    } else {
                        lw += galois().alphabet.half_weight(&galois().lyndon.words[v as usize]) as i32 * e;
                    }
                }
                assert_eq!((lw, pw), (n, n), "{}", s.shape.name(c));
            }
        }
    }
}
