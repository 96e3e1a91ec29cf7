//! Words over graded alphabets, the shuffle Hopf algebra, deconcatenation,
//! the duality pairing and expansion in the Lyndon basis.

use crate::mpoly::{MPoly, Mono, Var};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShuffleError {
    #[error("operands live over different alphabets")]
    AlphabetMismatch,
    #[error("duplicate letter name {0}")]
    DuplicateLetter(String),
    #[error("letter {0} must have half-weight at least 1")]
    ZeroWeight(String),
    #[error("unknown letter {0}")]
    UnknownLetter(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlphabet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl GradedAlphabet {
    pub fn new(letters: &[(&str, u32)]) -> Result<Arc<Self>, ShuffleError> {
        let mut names: Vec<String> = Vec::new();
        let mut weights = Vec::new();
        for &(n, w) in letters {
            if names.iter().any(|m| m == n) {
                return Err(ShuffleError::DuplicateLetter(n.to_string()));
            }
            if w == 0 {
                return Err(ShuffleError::ZeroWeight(n.to_string()));
            }
            names.push(n.to_string());
            weights.push(w);
        }
        Ok(Arc::new(GradedAlphabet { names, weights }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn name(&self, i: u8) -> &str {
        &self.names[i as usize]
    }

    pub fn weight(&self, i: u8) -> u32 {
        self.weights[i as usize]
    }

    /// Parses a word written as space-separated letter names.
    pub fn word(&self, spec: &str) -> Result<Word, ShuffleError> {
        spec.split_whitespace()
            .map(|t| self.index(t).ok_or_else(|| ShuffleError::UnknownLetter(t.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn half_weight(&self, w: &Word) -> u32 {
        w.0.iter().map(|&l| self.weight(l)).sum()
    }

    pub fn render(&self, w: &Word) -> String {
        if w.0.is_empty() {
            return "∅".into();
        }
        w.0.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join("")
    }

    /// All words of half-weight exactly `n`.
    pub fn words_of_weight(&self, n: u32) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), 0u32)];
        while let Some((w, wt)) = stack.pop() {
            if wt == n {
                out.push(Word(w));
                continue;
            }
            for l in 0..self.len() as u8 {
                let nw = wt + self.weight(l);
                if nw <= n {
                    let mut v = w.clone();
                    v.push(l);
                    stack.push((v, nw));
                }
            }
        }
        out.sort();
        out
    }
}

/// A word; letters are indices into an alphabet. Ordering is lexicographic
/// with the alphabet's letter order (a proper prefix is smaller).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }
}

/// Coefficient types usable in shuffle elements.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coeff for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn from_int(n: i64) -> Self {
        MPoly::constant(BigRational::from_integer(n.into()))
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        MPoly::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
}

fn add_into<K: Ord, C: Coeff>(map: &mut BTreeMap<K, C>, k: K, c: C) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Shuffle product of two words, as multiplicities.
pub fn shuffle_words(u: &Word, v: &Word) -> BTreeMap<Word, i64> {
    fn rec(u: &[u8], v: &[u8], prefix: &mut Vec<u8>, out: &mut BTreeMap<Word, i64>) {
        if u.is_empty() || v.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(u);
            w.extend_from_slice(v);
            *out.entry(Word(w)).or_insert(0) += 1;
            return;
        }
        prefix.push(u[0]);
        rec(&u[1..], v, prefix, out);
        prefix.pop();
        prefix.push(v[0]);
        rec(u, &v[1..], prefix, out);
        prefix.pop();
    }
    let mut out = BTreeMap::new();
    rec(&u.0, &v.0, &mut Vec::new(), &mut out);
    out
}

/// Finite linear combination of dual words f_w.
#[derive(Debug, Clone, PartialEq)]
pub struct ShuffleElement<C: Coeff = BigRational> {
    pub alphabet: Arc<GradedAlphabet>,
    pub terms: BTreeMap<Word, C>,
}

impl<C: Coeff> ShuffleElement<C> {
    pub fn zero(alphabet: &Arc<GradedAlphabet>) -> Self {
        ShuffleElement { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn unit(alphabet: &Arc<GradedAlphabet>) -> Self {
        Self::word(alphabet, Word::empty())
    }

    pub fn word(alphabet: &Arc<GradedAlphabet>, w: Word) -> Self {
        let mut e = Self::zero(alphabet);
        e.terms.insert(w, C::from_int(1));
        e
    }

    pub fn from_terms(alphabet: &Arc<GradedAlphabet>, terms: impl IntoIterator<Item = (Word, C)>) -> Self {
        let mut e = Self::zero(alphabet);
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        add_into(&mut self.terms, w, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, o: &Self) -> Result<(), ShuffleError> {
        if Arc::ptr_eq(&self.alphabet, &o.alphabet) || self.alphabet == o.alphabet {
            Ok(())
        } else {
            Err(ShuffleError::AlphabetMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, ShuffleError> {
        self.check(o)?;
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.mul(c));
        }
        out
    }

    pub fn coefficient(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    /// Left concatenation of a word onto every term (f_{e·x}).
    pub fn prepend(&self, head: &Word) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (w, c) in &self.terms {
            out.add_term(head.concat(w), c.clone());
        }
        out
    }

    /// Concatenation product f_u * f_v = f_{uv}, extended bilinearly.
    pub fn concat(&self, o: &Self) -> Result<Self, ShuffleError> {
        self.check(o)?;
        let mut out = Self::zero(&self.alphabet);
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                out.add_term(u.concat(v), a.mul(b));
            }
        }
        Ok(out)
    }

    /// The set of half-weights present.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|w| self.alphabet.half_weight(w)).collect();
        w.sort_unstable();
        w.dedup();
        w
    }
}

/// Shuffle product.
pub fn shuffle<C: Coeff>(u: &ShuffleElement<C>, v: &ShuffleElement<C>) -> Result<ShuffleElement<C>, ShuffleError> {
    u.check(v)?;
    let mut out = ShuffleElement::zero(&u.alphabet);
    for (a, ca) in &u.terms {
        for (b, cb) in &v.terms {
            let c = ca.mul(cb);
            for (w, m) in shuffle_words(a, b) {
                out.add_term(w, c.mul(&C::from_int(m)));
            }
        }
    }
    Ok(out)
}

/// n-fold shuffle power.
pub fn shuffle_power<C: Coeff>(u: &ShuffleElement<C>, n: u32) -> ShuffleElement<C> {
    let mut acc = ShuffleElement::unit(&u.alphabet);
    for _ in 0..n {
        acc = shuffle(&acc, u).expect("same alphabet");
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement<C: Coeff = BigRational> {
    pub alphabet: Arc<GradedAlphabet>,
    pub terms: BTreeMap<(Word, Word), C>,
}

impl<C: Coeff> TensorElement<C> {
    pub fn zero(alphabet: &Arc<GradedAlphabet>) -> Self {
        TensorElement { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: C) {
        add_into(&mut self.terms, (l, r), c);
    }

    /// Componentwise shuffle product (the algebra structure on A ⊗ A).
    pub fn shuffle(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for ((l1, r1), a) in &self.terms {
            for ((l2, r2), b) in &o.terms {
                let c = a.mul(b);
                for (l, ml) in shuffle_words(l1, l2) {
                    for (r, mr) in shuffle_words(r1, r2) {
                        out.add_term(l.clone(), r, c.mul(&C::from_int(ml * mr)));
                    }
                }
            }
        }
        out
    }
}

/// Deconcatenation coproduct.
pub fn deconcat<C: Coeff>(u: &ShuffleElement<C>) -> TensorElement<C> {
    let mut out = TensorElement::zero(&u.alphabet);
    for (w, c) in &u.terms {
        for i in 0..=w.len() {
            out.add_term(Word(w.0[..i].to_vec()), Word(w.0[i..].to_vec()), c.clone());
        }
    }
    out
}

/// (Δ ⊗ id) and (id ⊗ Δ) applied to a tensor, as triple tensors.
pub fn coassociativity_sides<C: Coeff>(t: &TensorElement<C>) -> (BTreeMap<(Word, Word, Word), C>, BTreeMap<(Word, Word, Word), C>) {
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for ((l, r), c) in &t.terms {
        for i in 0..=l.len() {
            add_into(&mut left, (Word(l.0[..i].to_vec()), Word(l.0[i..].to_vec()), r.clone()), c.clone());
        }
        for i in 0..=r.len() {
            add_into(&mut right, (l.clone(), Word(r.0[..i].to_vec()), Word(r.0[i..].to_vec())), c.clone());
        }
    }
    (left, right)
}

/// Duality pairing ⟨f, x⟩ where x is a linear combination of words.
pub fn pair<C: Coeff>(f: &ShuffleElement<C>, x: &ShuffleElement<C>) -> Result<C, ShuffleError> {
    f.check(x)?;
    let mut acc = C::zero();
    for (w, c) in &f.terms {
        if let Some(d) = x.terms.get(w) {
            acc = acc.add(&c.mul(d));
        }
    }
    Ok(acc)
}

pub fn is_lyndon(w: &Word) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    (1..n).all(|i| w.0[..] < w.0[i..])
}

/// Lyndon factorization w = l1 l2 ... lk with l1 >= l2 >= ... >= lk (Duval).
pub fn lyndon_factorization(w: &Word) -> Vec<Word> {
    let s = &w.0;
    let n = s.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            out.push(Word(s[i..i + j - k].to_vec()));
            i += j - k;
        }
    }
    out
}

/// Lyndon words up to a half-weight bound, together with memoised
/// expansions of arbitrary words as polynomials in the Lyndon duals.
/// Variable `i` of the returned polynomials is the i-th Lyndon word.
pub struct LyndonBasis {
    pub alphabet: Arc<GradedAlphabet>,
    pub words: Vec<Word>,
    index: HashMap<Word, Var>,
    memo: Mutex<HashMap<Word, MPoly>>,
}

impl LyndonBasis {
    /// Lyndon words of half-weight at most `bound`, ordered by
    /// (half-weight, length, lexicographic).
    pub fn new(alphabet: &Arc<GradedAlphabet>, bound: u32) -> Self {
        let mut words: Vec<Word> = (1..=bound)
            .flat_map(|n| alphabet.words_of_weight(n))
            .filter(is_lyndon)
            .collect();
        words.sort_by(|a, b| {
            (alphabet.half_weight(a), a.len(), a).cmp(&(alphabet.half_weight(b), b.len(), b))
        });
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as Var)).collect();
        LyndonBasis { alphabet: alphabet.clone(), words, index, memo: Mutex::new(HashMap::new()) }
    }

    pub fn var_of(&self, w: &Word) -> Option<Var> {
        self.index.get(w).copied()
    }

    pub fn name(&self, v: Var) -> String {
        format!("f_{}", self.alphabet.render(&self.words[v as usize]))
    }

    /// The unique polynomial P with P(f_ℓ) = f_w in the shuffle algebra.
    pub fn expand(&self, w: &Word) -> MPoly {
        if let Some(p) = self.memo.lock().unwrap().get(w) {
            return p.clone();
        }
        let p = self.expand_uncached(w);
        self.memo.lock().unwrap().insert(w.clone(), p.clone());
        p
    }

    fn expand_uncached(&self, w: &Word) -> MPoly {
        if w.is_empty() {
            return MPoly::one();
        }
        if let Some(v) = self.var_of(w) {
            return MPoly::var(v);
        }
        assert!(
            !is_lyndon(w),
            "Lyndon word {} exceeds the basis bound",
            self.alphabet.render(w)
        );
        let factors = lyndon_factorization(w);
        // Shuffle of the factors: leading word w with coefficient prod(a_i!),
        // every other word is lexicographically smaller.
        let mut prod: BTreeMap<Word, i64> = BTreeMap::new();
        prod.insert(Word::empty(), 1);
        let mut monomial = Mono::one();
        for f in &factors {
            let mut next = BTreeMap::new();
            for (u, m) in &prod {
                for (x, k) in shuffle_words(u, f) {
                    *next.entry(x).or_insert(0) += m * k;
                }
            }
            prod = next;
            let v = self.var_of(f).expect("Lyndon factor within bound");
            monomial = monomial.mul(&Mono::var(v, 1));
        }
        let alpha = prod.remove(w).expect("leading word present");
        let mut acc = MPoly::monomial(monomial, BigRational::one());
        for (u, beta) in prod {
            if beta == 0 {
                continue;
            }
            assert!(u < *w, "triangularity violated");
            acc = acc.sub(&self.expand(&u).scale(&BigRational::from_integer(beta.into())));
        }
        acc.scale(&BigRational::new(1.into(), alpha.into()))
    }

    /// Rewrites a shuffle element in Lyndon duals.
    pub fn expand_element(&self, e: &ShuffleElement) -> MPoly {
        let mut acc = MPoly::zero();
        for (w, c) in &e.terms {
            acc = acc.add(&self.expand(w).scale(c));
        }
        acc
    }

    /// Maps a polynomial in Lyndon duals back to a shuffle element.
    pub fn realize(&self, p: &MPoly) -> ShuffleElement {
        let mut out = ShuffleElement::zero(&self.alphabet);
        for (m, c) in &p.terms {
            let mut t = ShuffleElement::word(&self.alphabet, Word::empty()).scale(c);
            for &(v, e) in &m.0 {
                assert!(e > 0, "Lyndon polynomials have nonnegative exponents");
                let f = ShuffleElement::word(&self.alphabet, self.words[v as usize].clone());
                for _ in 0..e {
                    t = shuffle(&t, &f).expect("same alphabet");
                }
            }
            out = out.add(&t).expect("same alphabet");
        }
        out
    }
}
