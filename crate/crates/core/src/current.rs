//! Finite real combinations of curve classes: the computable dense part of
//! the space of (Hölder) geodesic currents, with the length functions
//! extended linearly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::format::fmt_sig;
use crate::lengths::{length_vector, LengthVector};
use crate::rep::SurfaceRep;
use crate::word::{conjugacy_class, ConjugacyClass, Word};

/// Anything that can produce the length vector of a class.
pub trait LengthSource {
    fn n(&self) -> usize;
    fn lengths(&self, class: &ConjugacyClass) -> Result<LengthVector>;
}

impl LengthSource for SurfaceRep {
    fn n(&self) -> usize {
        SurfaceRep::n(self)
    }

    fn lengths(&self, class: &ConjugacyClass) -> Result<LengthVector> {
        length_vector(self, class.representative())
    }
}

/// Precomputed lengths, e.g. values already produced by another pipeline.
#[derive(Clone, Debug, Default)]
pub struct LengthTable {
    n: usize,
    table: BTreeMap<ConjugacyClass, LengthVector>,
}

impl LengthTable {
    pub fn new(n: usize) -> Self {
        LengthTable { n, table: BTreeMap::new() }
    }

    pub fn insert(&mut self, class: ConjugacyClass, lengths: LengthVector) {
        self.table.insert(class, lengths);
    }
}

impl LengthSource for LengthTable {
    fn n(&self) -> usize {
        self.n
    }

    fn lengths(&self, class: &ConjugacyClass) -> Result<LengthVector> {
        self.table
            .get(class)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("no lengths recorded for `{class}`")))
    }
}

/// `Σ w_k [γ_k]` with canonical keys and no zero weights.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurrentCombo {
    terms: BTreeMap<ConjugacyClass, f64>,
}

impl CurrentCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(class: ConjugacyClass, weight: f64) -> Self {
        let mut c = Self::new();
        c.add_term(class, weight);
        c
    }

    pub fn from_word(w: &Word, weight: f64) -> Result<Self> {
        Ok(Self::singleton(conjugacy_class(w)?, weight))
    }

    pub fn add_term(&mut self, class: ConjugacyClass, weight: f64) {
        let slot = self.terms.entry(class).or_insert(0.0);
        *slot += weight;
        if *slot == 0.0 {
            self.terms.retain(|_, w| *w != 0.0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConjugacyClass, f64)> {
        self.terms.iter().map(|(c, &w)| (c, w))
    }

    pub fn weight(&self, class: &ConjugacyClass) -> f64 {
        self.terms.get(class).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All weights nonnegative: a measure current rather than only a Hölder one.
    pub fn is_measure_class(&self) -> bool {
        self.terms.values().all(|&w| w >= 0.0)
    }
}

/// `a·α + b·β`, zero weights dropped.
pub fn combo_arith(a: f64, alpha: &CurrentCombo, b: f64, beta: &CurrentCombo) -> CurrentCombo {
    let mut out = CurrentCombo::new();
    for (c, w) in alpha.terms() {
        out.add_term(c.clone(), a * w);
    }
    for (c, w) in beta.terms() {
        out.add_term(c.clone(), b * w);
    }
    out
}

/// Orientation reversal: `[γ] ↦ [γ⁻¹]`, weights kept.
pub fn pullback_r(alpha: &CurrentCombo) -> CurrentCombo {
    let mut out = CurrentCombo::new();
    for (c, w) in alpha.terms() {
        out.add_term(c.inverse(), w);
    }
    out
}

/// The unoriented curve `½[γ] + ½[γ⁻¹]`.
pub fn unoriented_embed(w: &Word) -> Result<CurrentCombo> {
    let class = conjugacy_class(w)?;
    let mut out = CurrentCombo::new();
    out.add_term(class.inverse(), 0.5);
    out.add_term(class, 0.5);
    Ok(out)
}

/// `Σ weight · ℓ_i(class)` for 0-based `i`.
pub fn current_length<S: LengthSource + ?Sized>(src: &S, alpha: &CurrentCombo, i: usize) -> Result<f64> {
    if i >= src.n() {
        return Err(Error::InvalidArgument(format!("index {i} out of range for n = {}", src.n())));
    }
    alpha
        .terms()
        .map(|(c, w)| Ok(w * src.lengths(c)?[i]))
        .sum()
}

/// All `n` lengths of the combination at once.
pub fn current_lengths<S: LengthSource + ?Sized>(src: &S, alpha: &CurrentCombo) -> Result<Vec<f64>> {
    let mut out = vec![0.0; src.n()];
    for (c, w) in alpha.terms() {
        let l = src.lengths(c)?;
        for (acc, x) in out.iter_mut().zip(l.values()) {
            *acc += w * x;
        }
    }
    Ok(out)
}

impl fmt::Display for CurrentCombo {
    /// One `weight word` line per term, in class order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, w) in self.terms() {
            writeln!(f, "{} {}", fmt_sig(w), c)?;
        }
        Ok(())
    }
}

impl FromStr for CurrentCombo {
    type Err = Error;

    /// Lines `weight word`; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = CurrentCombo::new();
        for (lineno, line) in s.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (weight, word) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("line {}: expected `weight word`", lineno + 1)))?;
            let weight: f64 = weight
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad weight `{weight}`", lineno + 1)))?;
            let word: Word = word.parse()?;
            let class = conjugacy_class(&word)
                .map_err(|_| Error::Parse(format!("line {}: identity word has no class", lineno + 1)))?;
            out.add_term(class, weight);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> ConjugacyClass {
        conjugacy_class(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let alpha: CurrentCombo = "1 a1\n-2.5 b1 a2\n".parse().unwrap();
        let beta: CurrentCombo = "3 b2".parse().unwrap();
        assert_eq!(combo_arith(1.0, &alpha, 0.0, &beta), alpha);
        assert!(combo_arith(1.0, &alpha, -1.0, &alpha).is_empty());
        let merged = combo_arith(0.5, &CurrentCombo::singleton(class("a1"), 1.0), 0.5, &"1 b1 a1 B1".parse().unwrap());
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.weight(&class("a1")), 1.0);
    }

    #[test]
    fn pullback_is_involution() {
        let alpha: CurrentCombo = "1 a1\n0.25 a1 b1 b2\n-1 A2".parse().unwrap();
        assert_eq!(pullback_r(&pullback_r(&alpha)), alpha);
        let p = pullback_r(&CurrentCombo::singleton(class("a1"), 1.0));
        assert_eq!(p.weight(&class("A1")), 1.0);
    }

    #[test]
    fn unoriented_weights() {
        let w: Word = "a1 b1".parse().unwrap();
        let u = unoriented_embed(&w).unwrap();
        assert_eq!(u.weight(&class("a1 b1")), 0.5);
        assert_eq!(u.weight(&class("B1 A1")), 0.5);
        assert_eq!(pullback_r(&u), u);
        assert!(unoriented_embed(&Word::identity()).is_err());
    }

    #[test]
    fn text_round_trip() {
        let alpha: CurrentCombo = "# comment\n0.5 b1 a1\n\n2 B2\n".parse().unwrap();
        let text = alpha.to_string();
        assert_eq!(text, "2 B2\n0.5 a1 b1\n");
        assert_eq!(text.parse::<CurrentCombo>().unwrap(), alpha);
        assert!(!combo_arith(1.0, &alpha, -3.0, &"1 a2".parse().unwrap()).is_measure_class());
        assert!("abc".parse::<CurrentCombo>().is_err());
        assert!("1 a1 A1".parse::<CurrentCombo>().is_err());
    }

    #[test]
    fn table_source() {
        let mut t = LengthTable::new(2);
        t.insert(class("a1"), LengthVector::new(vec![1.0, -1.0]));
        let combo = CurrentCombo::singleton(class("a1"), 2.5);
        assert_eq!(current_length(&t, &combo, 0).unwrap(), 2.5);
        assert!(current_length(&t, &CurrentCombo::singleton(class("b1"), 1.0), 0).is_err());
        assert!(current_length(&t, &combo, 2).is_err());
    }
}
