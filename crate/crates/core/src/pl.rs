//! The polylogarithmic Lie algebra: its basis and bracket table, a rank
//! oracle over the free Lie algebra, the coordinates f_λ and their
//! membership checks.

use crate::shuffle::{GradedAlphabet, ShuffleElement, Word};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlError {
    #[error("expression of half-weight {0} exceeds the bound {1}")]
    WeightExceeded(u32, u32),
    #[error("cannot parse Lie expression: {0}")]
    Parse(String),
    #[error("unknown coordinate {0}")]
    UnknownCoordinate(String),
}

/// A tower head·tail^k; the tail is a linear combination of letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub head: u8,
    pub tail: Vec<(u8, i64)>,
}

/// Coordinate index λ: a weight-one letter, or head·tail^(weight-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlCoordinate {
    Letter(u8),
    Tower { tower: usize, weight: u32 },
}

/// Letters and towers of a polylogarithmic quotient, with a weight bound.
#[derive(Debug, Clone)]
pub struct PlShape {
    pub alphabet: Arc<GradedAlphabet>,
    pub towers: Vec<Tower>,
    pub weight_bound: u32,
}

impl PlShape {
    /// Γ = {e1, e2, e11, e22, e12} with towers e11e1^k, e22e2^k, e12(e1+e2)^k.
    pub fn m05(weight_bound: u32) -> Self {
        let alphabet = gamma().clone();
        let towers = vec![
            Tower { head: E11, tail: vec![(E1, 1)] },
            Tower { head: E22, tail: vec![(E2, 1)] },
            Tower { head: E12, tail: vec![(E1, 1), (E2, 1)] },
        ];
        PlShape { alphabet, towers, weight_bound }
    }

    /// The thrice-punctured line: letters d0, d1 and the tower d1d0^k.
    pub fn m04(weight_bound: u32) -> Self {
        let alphabet = GradedAlphabet::new(&[("d0", 1), ("d1", 1)]).expect("valid alphabet");
        PlShape { alphabet, towers: vec![Tower { head: 1, tail: vec![(0, 1)] }], weight_bound }
    }

    /// Letters first, then towers by weight.
    pub fn coordinates(&self) -> Vec<PlCoordinate> {
        let mut out: Vec<PlCoordinate> = (0..self.alphabet.len() as u8).map(PlCoordinate::Letter).collect();
        for weight in 2..=self.weight_bound {
            out.extend((0..self.towers.len()).map(|tower| PlCoordinate::Tower { tower, weight }));
        }
        out
    }

    pub fn weight(&self, c: PlCoordinate) -> u32 {
        match c {
            PlCoordinate::Letter(_) => 1,
            PlCoordinate::Tower { weight, .. } => weight,
        }
    }

    /// head·tail^(k) as a coordinate; k = 0 gives the head letter.
    pub fn tower_coordinate(&self, tower: usize, k: u32) -> PlCoordinate {
        if k == 0 {
            PlCoordinate::Letter(self.towers[tower].head)
        } else {
            PlCoordinate::Tower { tower, weight: k + 1 }
        }
    }

    pub fn tail_name(&self, tower: usize) -> String {
        let t = &self.towers[tower];
        if t.tail.len() == 1 && t.tail[0].1 == 1 {
            return self.alphabet.name(t.tail[0].0).to_string();
        }
        let parts: Vec<String> = t
            .tail
            .iter()
            .map(|&(l, c)| if c == 1 { self.alphabet.name(l).to_string() } else { format!("{c}{}", self.alphabet.name(l)) })
            .collect();
        format!("({})", parts.join("+"))
    }

    pub fn name(&self, c: PlCoordinate) -> String {
        match c {
            PlCoordinate::Letter(l) => self.alphabet.name(l).to_string(),
            PlCoordinate::Tower { tower, weight } => {
                let head = self.alphabet.name(self.towers[tower].head);
                let tail = self.tail_name(tower);
                if weight == 2 {
                    format!("{head}{tail}")
                } else {
                    format!("{head}{tail}^{}", weight - 1)
                }
            }
        }
    }

    pub fn parse(&self, s: &str) -> Result<PlCoordinate, PlError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        self.coordinates()
            .into_iter()
            .chain((0..self.towers.len()).flat_map(|t| (2..=8).map(move |w| PlCoordinate::Tower { tower: t, weight: w })))
            .find(|&c| self.name(c) == s)
            .ok_or(PlError::UnknownCoordinate(s))
    }

    /// The dual f_λ as a combination of words in Γ.
    pub fn dual(&self, c: PlCoordinate) -> ShuffleElement {
        match c {
            PlCoordinate::Letter(l) => ShuffleElement::word(&self.alphabet, Word::letter(l)),
            PlCoordinate::Tower { tower, weight } => {
                let t = &self.towers[tower];
                let tail = ShuffleElement::from_terms(
                    &self.alphabet,
                    t.tail.iter().map(|&(l, k)| (Word::letter(l), BigRational::from_integer(k.into()))),
                );
                let mut acc = ShuffleElement::word(&self.alphabet, Word::letter(t.head));
                for _ in 1..weight {
                    acc = acc.concat(&tail).expect("same alphabet");
                }
                acc
            }
        }
    }
}

pub const E1: u8 = 0;
pub const E2: u8 = 1;
pub const E11: u8 = 2;
pub const E22: u8 = 3;
pub const E12: u8 = 4;

/// The generating set Γ, in the order e1, e2, e11, e22, e12.
pub fn gamma() -> &'static Arc<GradedAlphabet> {
    static G: OnceLock<Arc<GradedAlphabet>> = OnceLock::new();
    G.get_or_init(|| {
        GradedAlphabet::new(&[("e1", 1), ("e2", 1), ("e11", 1), ("e22", 1), ("e12", 1)]).expect("valid alphabet")
    })
}

fn depth(l: u8) -> u32 {
    u32::from(l >= E11)
}

// ---------------------------------------------------------------------------
// Basis and bracket table.

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlBasisVector {
    E1,
    E2,
    Ad11(u32),
    Ad22(u32),
    Ad12(u32),
}

impl PlBasisVector {
    pub fn half_weight(self) -> u32 {
        match self {
            PlBasisVector::E1 | PlBasisVector::E2 => 1,
            PlBasisVector::Ad11(n) | PlBasisVector::Ad22(n) | PlBasisVector::Ad12(n) => n + 1,
        }
    }

    /// The basis vector as a nested bracket of generators.
    pub fn expression(self) -> LieExpr {
        let tower = |e: u8, head: u8, n: u32| {
            let mut x = LieExpr::Gen(head);
            for _ in 0..n {
                x = LieExpr::bracket(LieExpr::Gen(e), x);
            }
            x
        };
        match self {
            PlBasisVector::E1 => LieExpr::Gen(E1),
            PlBasisVector::E2 => LieExpr::Gen(E2),
            PlBasisVector::Ad11(n) => tower(E1, E11, n),
            PlBasisVector::Ad22(n) => tower(E2, E22, n),
            PlBasisVector::Ad12(n) => tower(E1, E12, n),
        }
    }

    fn of_generator(g: u8) -> Self {
        match g {
            E1 => PlBasisVector::E1,
            E2 => PlBasisVector::E2,
            E11 => PlBasisVector::Ad11(0),
            E22 => PlBasisVector::Ad22(0),
            _ => PlBasisVector::Ad12(0),
        }
    }

    /// All basis vectors of a given half-weight.
    pub fn of_weight(n: u32) -> Vec<Self> {
        match n {
            0 => Vec::new(),
            1 => vec![
                PlBasisVector::E1,
                PlBasisVector::E2,
                PlBasisVector::Ad11(0),
                PlBasisVector::Ad22(0),
                PlBasisVector::Ad12(0),
            ],
            _ => vec![PlBasisVector::Ad11(n - 1), PlBasisVector::Ad22(n - 1), PlBasisVector::Ad12(n - 1)],
        }
    }
}

impl fmt::Display for PlBasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlBasisVector::E1 => write!(f, "e1"),
            PlBasisVector::E2 => write!(f, "e2"),
            PlBasisVector::Ad11(n) => write!(f, "(ad e1)^{n}(e11)"),
            PlBasisVector::Ad22(n) => write!(f, "(ad e2)^{n}(e22)"),
            PlBasisVector::Ad12(n) => write!(f, "(ad e1)^{n}(e12)"),
        }
    }
}

/// Ordered bracket of two basis vectors: the only nonzero ones are
/// [e_i, (ad e_i)^n(e_jk)] and their negatives.
fn basis_bracket(a: PlBasisVector, b: PlBasisVector) -> Option<(PlBasisVector, i64)> {
    use PlBasisVector::*;
    let raise = |x: PlBasisVector, y: PlBasisVector| match (x, y) {
        (E1, Ad11(n)) => Some(Ad11(n + 1)),
        (E2, Ad22(n)) => Some(Ad22(n + 1)),
        (E1 | E2, Ad12(n)) => Some(Ad12(n + 1)),
        _ => None,
    };
    raise(a, b).map(|v| (v, 1)).or_else(|| raise(b, a).map(|v| (v, -1)))
}

/// Element of L^PL in basis coordinates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PlLieElement {
    pub terms: BTreeMap<PlBasisVector, BigRational>,
}

impl PlLieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(v: PlBasisVector) -> Self {
        let mut e = Self::zero();
        e.add_term(v, BigRational::one());
        e
    }

    pub fn add_term(&mut self, v: PlBasisVector, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.get(&v).cloned().unwrap_or_else(BigRational::zero) + c;
        if s.is_zero() {
            self.terms.remove(&v);
        } else {
            self.terms.insert(v, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &o.terms {
            out.add_term(*v, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (v, x) in &self.terms {
            out.add_term(*v, x * c);
        }
        out
    }

    pub fn bracket(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if let Some((v, s)) = basis_bracket(*a, *b) {
                    out.add_term(v, x * y * BigRational::from_integer(s.into()));
                }
            }
        }
        out
    }

    /// The associative expansion of the canonical representatives.
    pub fn expand(&self) -> ShuffleElement {
        let mut acc = ShuffleElement::zero(gamma());
        for (v, c) in &self.terms {
            acc = acc.add(&v.expression().expand().scale(c)).expect("same alphabet");
        }
        acc
    }
}

/// Rational combination of nested brackets of generators.
#[derive(Debug, Clone, PartialEq)]
pub enum LieExpr {
    Gen(u8),
    Bracket(Box<LieExpr>, Box<LieExpr>),
    Sum(Vec<(BigRational, LieExpr)>),
}

impl LieExpr {
    pub fn bracket(a: LieExpr, b: LieExpr) -> LieExpr {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    /// Right-normed word [l0,[l1,[...,l_{n-1}]]].
    pub fn right_normed(letters: &[u8]) -> LieExpr {
        let (last, rest) = letters.split_last().expect("nonempty word");
        rest.iter().rev().fold(LieExpr::Gen(*last), |acc, &l| LieExpr::bracket(LieExpr::Gen(l), acc))
    }

    /// Maximal half-weight of a bracket monomial.
    pub fn half_weight(&self) -> u32 {
        match self {
            LieExpr::Gen(_) => 1,
            LieExpr::Bracket(a, b) => a.half_weight() + b.half_weight(),
            LieExpr::Sum(v) => v.iter().map(|(_, x)| x.half_weight()).max().unwrap_or(0),
        }
    }

    /// Image in the universal enveloping algebra of the free Lie algebra.
    pub fn expand(&self) -> ShuffleElement {
        match self {
            LieExpr::Gen(g) => ShuffleElement::word(gamma(), Word::letter(*g)),
            LieExpr::Bracket(a, b) => {
                let (x, y) = (a.expand(), b.expand());
                let xy = x.concat(&y).expect("same alphabet");
                let yx = y.concat(&x).expect("same alphabet");
                xy.add(&yx.scale(&-BigRational::one())).expect("same alphabet")
            }
            LieExpr::Sum(v) => {
                let mut acc = ShuffleElement::zero(gamma());
                for (c, x) in v {
                    acc = acc.add(&x.expand().scale(c)).expect("same alphabet");
                }
                acc
            }
        }
    }

    /// Parses e.g. "[e1,[e1,e11]] - 2[e2,e12]".
    pub fn parse(s: &str) -> Result<LieExpr, PlError> {
        let toks: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let e = parse_sum(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(PlError::Parse(s.to_string()));
        }
        Ok(e)
    }
}

fn parse_sum(t: &[char], pos: &mut usize) -> Result<LieExpr, PlError> {
    let mut terms = Vec::new();
    loop {
        let mut sign = BigRational::one();
        while *pos < t.len() && (t[*pos] == '+' || t[*pos] == '-') {
            if t[*pos] == '-' {
                sign = -sign;
            }
            *pos += 1;
        }
        let start = *pos;
        while *pos < t.len() && (t[*pos].is_ascii_digit() || t[*pos] == '/') {
            *pos += 1;
        }
        let coeff = if start == *pos {
            BigRational::one()
        } else {
            let s: String = t[start..*pos].iter().collect();
            crate::ring::parse_rational(&s).ok_or_else(|| PlError::Parse(s.clone()))?
        };
        let atom = parse_atom(t, pos)?;
        terms.push((sign * coeff, atom));
        if *pos >= t.len() || !(t[*pos] == '+' || t[*pos] == '-') {
            break;
        }
    }
    if terms.len() == 1 && terms[0].0.is_one() {
        return Ok(terms.pop().expect("one term").1);
    }
    Ok(LieExpr::Sum(terms))
}

fn parse_atom(t: &[char], pos: &mut usize) -> Result<LieExpr, PlError> {
    let err = || PlError::Parse(t.iter().collect());
    match t.get(*pos) {
        Some('[') => {
            *pos += 1;
            let a = parse_sum(t, pos)?;
            if t.get(*pos) != Some(&',') {
                return Err(err());
            }
            *pos += 1;
            let b = parse_sum(t, pos)?;
            if t.get(*pos) != Some(&']') {
                return Err(err());
            }
            *pos += 1;
            Ok(LieExpr::bracket(a, b))
        }
        Some('(') => {
            *pos += 1;
            let a = parse_sum(t, pos)?;
            if t.get(*pos) != Some(&')') {
                return Err(err());
            }
            *pos += 1;
            Ok(a)
        }
        Some('e') => {
            let start = *pos;
            *pos += 1;
            while *pos < t.len() && t[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let name: String = t[start..*pos].iter().collect();
            gamma().index(&name).map(LieExpr::Gen).ok_or_else(err)
        }
        _ => Err(err()),
    }
}

/// Rewrites a bracket expression into basis coordinates of L^PL.
pub fn lie_normal_form(x: &LieExpr, weight_bound: u32) -> Result<PlLieElement, PlError> {
    let w = x.half_weight();
    if w > weight_bound {
        return Err(PlError::WeightExceeded(w, weight_bound));
    }
    Ok(normal_form(x))
}

fn normal_form(x: &LieExpr) -> PlLieElement {
    match x {
        LieExpr::Gen(g) => PlLieElement::basis(PlBasisVector::of_generator(*g)),
        LieExpr::Bracket(a, b) => normal_form(a).bracket(&normal_form(b)),
        LieExpr::Sum(v) => v.iter().fold(PlLieElement::zero(), |acc, (c, e)| acc.add(&normal_form(e).scale(c))),
    }
}

// ---------------------------------------------------------------------------
// Free Lie algebra oracle.

type SparseVec = BTreeMap<Word, BigRational>;

/// Row echelon form over Q keyed by leading (largest) word.
#[derive(Default)]
struct Echelon {
    rows: HashMap<Word, SparseVec>,
}

impl Echelon {
    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut done = SparseVec::new();
        while let Some((lead, c)) = v.pop_last() {
            match self.rows.get(&lead) {
                Some(row) => {
                    for (w, x) in row.iter().rev().skip(1) {
                        let e = v.entry(w.clone()).or_insert_with(BigRational::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            v.remove(w);
                        }
                    }
                }
                None => {
                    done.insert(lead, c);
                }
            }
        }
        done
    }

    /// Inserts v; returns whether the rank grew.
    fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = v;
        while let Some((lead, c)) = v.last_key_value().map(|(w, c)| (w.clone(), c.clone())) {
            match self.rows.get(&lead) {
                Some(row) => {
                    for (w, x) in row {
                        let e = v.entry(w.clone()).or_insert_with(BigRational::zero);
                        *e -= &c * x;
                        if e.is_zero() {
                            v.remove(w);
                        }
                    }
                }
                None => {
                    let inv = c.recip();
                    for x in v.values_mut() {
                        *x *= &inv;
                    }
                    self.rows.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn to_sparse(e: &ShuffleElement) -> SparseVec {
    e.terms.clone()
}

/// Dimensions of L^PL computed from the free Lie algebra on Γ: the degree-n
/// piece of the free Lie algebra has the Lyndon words of length n as basis;
/// the defining ideal is spanned by the relations, the right-normed Lie
/// words of depth two, and their closure under bracketing with generators.
pub struct FreeLieOracle {
    ideal: Vec<Echelon>,
}

/// Relations [e1,e2], [e11,e2], [e1,e22], [e1,e12]-[e2,e12].
fn relation_generators() -> Vec<LieExpr> {
    let g = LieExpr::Gen;
    vec![
        LieExpr::bracket(g(E1), g(E2)),
        LieExpr::bracket(g(E11), g(E2)),
        LieExpr::bracket(g(E1), g(E22)),
        LieExpr::Sum(vec![
            (BigRational::one(), LieExpr::bracket(g(E1), g(E12))),
            (-BigRational::one(), LieExpr::bracket(g(E2), g(E12))),
        ]),
    ]
}

/// Letter sequences of length n with exactly two letters of depth one.
fn depth_two_sequences(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, d: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            if d == 2 {
                out.push(cur.clone());
            }
            return;
        }
        for l in 0..5u8 {
            let nd = d + depth(l);
            if nd <= 2 {
                cur.push(l);
                rec(n, nd, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, 0, &mut cur, &mut out);
    out
}

fn lyndon_count(n: usize, k: usize) -> usize {
    // Witt's formula via Möbius inversion.
    let mu = |m: usize| -> i64 {
        let mut m = m;
        let mut r = 1i64;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                r = -r;
            }
            p += 1;
        }
        if m > 1 {
            r = -r;
        }
        r
    };
    let total: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mu(d) * (k as i64).pow((n / d) as u32)).sum();
    (total / n as i64) as usize
}

impl FreeLieOracle {
    pub fn new(max_degree: usize) -> Self {
        let mut ideal: Vec<Echelon> = vec![Echelon::default(), Echelon::default()];
        for n in 2..=max_degree {
            let mut ech = Echelon::default();
            if n == 2 {
                for r in relation_generators() {
                    ech.insert(to_sparse(&r.expand()));
                }
            }
            for seq in depth_two_sequences(n) {
                ech.insert(to_sparse(&LieExpr::right_normed(&seq).expand()));
            }
            let prev: Vec<SparseVec> = ideal[n - 1].rows.values().cloned().collect();
            for row in prev {
                let x = ShuffleElement::from_terms(gamma(), row);
                for g in 0..5u8 {
                    let gw = ShuffleElement::word(gamma(), Word::letter(g));
                    let gx = gw.concat(&x).expect("same alphabet");
                    let xg = x.concat(&gw).expect("same alphabet");
                    let b = gx.add(&xg.scale(&-BigRational::one())).expect("same alphabet");
                    ech.insert(to_sparse(&b));
                }
            }
            ideal.push(ech);
        }
        FreeLieOracle { ideal }
    }

    pub fn max_degree(&self) -> usize {
        self.ideal.len() - 1
    }

    /// Dimension of the degree-n piece of the free Lie algebra on Γ.
    pub fn free_dim(n: usize) -> usize {
        lyndon_count(n, 5)
    }

    pub fn ideal_dim(&self, n: usize) -> usize {
        self.ideal[n].rank()
    }

    pub fn pl_dim(&self, n: usize) -> usize {
        Self::free_dim(n) - self.ideal_dim(n)
    }

    /// Whether a homogeneous associative element lies in the ideal.
    pub fn ideal_contains(&self, n: usize, x: &ShuffleElement) -> bool {
        self.ideal[n].reduce(to_sparse(x)).is_empty()
    }
}

/// Dimension of the degree-n piece of L^PL by the free-Lie oracle.
pub fn pl_dim(n: usize) -> usize {
    FreeLieOracle::new(n).pl_dim(n)
}

/// Whether f pairs to zero with W·g·W' for every generator g of the ideal
/// and all words W, W' of total half-weight at most `weight_bound`.
pub fn verify_dual(f: &ShuffleElement, weight_bound: u32) -> bool {
    let mut gens: Vec<(usize, ShuffleElement)> =
        relation_generators().iter().map(|r| (2, r.expand())).collect();
    for n in 2..=weight_bound as usize {
        for seq in depth_two_sequences(n) {
            gens.push((n, LieExpr::right_normed(&seq).expand()));
        }
    }
    for (d, g) in &gens {
        // Only (W, W') arising from the support of f can pair nontrivially.
        let mut acc: HashMap<(Word, Word), BigRational> = HashMap::new();
        for (v, c) in &f.terms {
            if v.len() < *d || v.len() > weight_bound as usize {
                continue;
            }
            for a in 0..=v.len() - d {
                let mid = Word(v.0[a..a + d].to_vec());
                let x = g.coefficient(&mid);
                if x.is_zero() {
                    continue;
                }
                let key = (Word(v.0[..a].to_vec()), Word(v.0[a + d..].to_vec()));
                *acc.entry(key).or_insert_with(BigRational::zero) += c * x;
            }
        }
        if acc.values().any(|x| !x.is_zero()) {
            return false;
        }
    }
    true
}

pub fn verify_pl_coordinate(shape: &PlShape, c: PlCoordinate, weight_bound: u32) -> bool {
    verify_dual(&shape.dual(c), weight_bound)
}

/// ⟨f, x⟩ for a word combination x.
pub fn pairing(f: &ShuffleElement, x: &ShuffleElement) -> BigRational {
    crate::shuffle::pair(f, x).expect("same alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q_int;

    #[test]
    fn m05_coordinates() {
        let s = PlShape::m05(4);
        let names: Vec<String> = s.coordinates().into_iter().map(|c| s.name(c)).collect();
        assert_eq!(
            names,
            [
                "e1", "e2", "e11", "e22", "e12", "e11e1", "e22e2", "e12(e1+e2)", "e11e1^2", "e22e2^2",
                "e12(e1+e2)^2", "e11e1^3", "e22e2^3", "e12(e1+e2)^3"
            ]
        );
        for c in s.coordinates() {
            assert_eq!(s.parse(&s.name(c)).unwrap(), c);
        }
        let d = s.dual(s.parse("e12(e1+e2)").unwrap());
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.coefficient(&gamma().word("e12 e1").unwrap()), q_int(1));
    }

    #[test]
    fn bracket_examples() {
        let nf = |s: &str| lie_normal_form(&LieExpr::parse(s).unwrap(), 6).unwrap();
        assert!(nf("[e1,e2]").is_zero());
        assert!(nf("[e2,[e1,[e1,[e1,e11]]]]").is_zero());
        assert!(nf("[e1,e12]-[e2,e12]").is_zero());
        for n in 1..=5u32 {
            let mut a = String::from("e12");
            let mut b = String::from("e12");
            for _ in 0..n {
                a = format!("[e1,{a}]");
                b = format!("[e2,{b}]");
            }
            assert!(nf(&format!("{a}-{b}")).is_zero());
        }
        assert_eq!(nf("[e11,e1]"), PlLieElement::basis(PlBasisVector::Ad11(1)).scale(&q_int(-1)));
        assert_eq!(
            lie_normal_form(&LieExpr::parse("[e1,[e1,e11]]").unwrap(), 2),
            Err(PlError::WeightExceeded(3, 2))
        );
    }

    #[test]
    fn normal_form_is_idempotent_on_basis() {
        for n in 1..=5 {
            for v in PlBasisVector::of_weight(n) {
                assert_eq!(lie_normal_form(&v.expression(), 6).unwrap(), PlLieElement::basis(v));
            }
        }
    }

    #[test]
    fn witt_counts() {
        assert_eq!(FreeLieOracle::free_dim(1), 5);
        assert_eq!(FreeLieOracle::free_dim(2), 10);
        assert_eq!(FreeLieOracle::free_dim(6), 2580);
    }

    #[test]
    fn small_dimensions() {
        let o = FreeLieOracle::new(4);
        assert_eq!((1..=4).map(|n| o.pl_dim(n)).collect::<Vec<_>>(), [5, 3, 3, 3]);
    }

    #[test]
    fn negative_membership() {
        let f = ShuffleElement::word(gamma(), gamma().word("e1 e12").unwrap());
        assert!(!verify_dual(&f, 6));
        let s = PlShape::m05(4);
        assert!(verify_pl_coordinate(&s, PlCoordinate::Letter(E1), 6));
    }
}
