//! Combinatorics of the genus-2 surface group on four generators
//! `a1 b1 a2 b2`.
//!
//! Words are kept freely reduced at all times. Conjugacy classes are
//! canonicalized at the free-group level only: a class is represented by its
//! cyclically reduced, rotation-minimal word. Coincidences coming from the
//! surface relator are resolved numerically by the spectrum code.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const GENERATOR_NAMES: [&str; 4] = ["a1", "b1", "a2", "b2"];

/// One of the eight letters `a1 b1 a2 b2 A1 B1 A2 B2` (upper case = inverse).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    generator: u8,
    inverse: bool,
}

impl Letter {
    pub const ALL: [Letter; 8] = [
        Letter::new_const(0, false),
        Letter::new_const(1, false),
        Letter::new_const(2, false),
        Letter::new_const(3, false),
        Letter::new_const(0, true),
        Letter::new_const(1, true),
        Letter::new_const(2, true),
        Letter::new_const(3, true),
    ];

    const fn new_const(generator: u8, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    /// `generator` is 0-based (`0 = a1`, `1 = b1`, `2 = a2`, `3 = b2`).
    pub fn new(generator: usize, inverse: bool) -> Result<Self> {
        if generator >= 4 {
            return Err(Error::InvalidArgument(format!(
                "generator index {generator} out of range 0..4"
            )));
        }
        Ok(Letter {
            generator: generator as u8,
            inverse,
        })
    }

    pub fn generator(self) -> usize {
        self.generator as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the fixed total order a1 < b1 < a2 < b2 < A1 < B1 < A2 < B2.
    pub fn index(self) -> usize {
        self.generator as usize + if self.inverse { 4 } else { 0 }
    }

    pub fn from_index(index: usize) -> Letter {
        Letter::ALL[index % 8]
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = GENERATOR_NAMES[self.generator as usize];
        if self.inverse {
            write!(f, "{}", name.to_ascii_uppercase())
        } else {
            write!(f, "{name}")
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inverse = s.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        let lower = s.to_ascii_lowercase();
        let generator = GENERATOR_NAMES
            .iter()
            .position(|&g| g == lower)
            .ok_or_else(|| Error::Parse(format!("unknown letter `{s}`")))?;
        // mixed case such as `A1` is fine, `aB` is not a letter anyway
        Ok(Letter {
            generator: generator as u8,
            inverse,
        })
    }
}

/// Iterated cancellation of adjacent inverse pairs, done with a stack so a
/// single pass reaches the fixed point.
pub fn free_reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for letter in raw {
        if out.last() == Some(&letter.inv()) {
            out.pop();
        } else {
            out.push(letter);
        }
    }
    Word(out)
}

/// A freely reduced word. The empty word is the identity element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        free_reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: usize) -> Word {
        free_reduce(std::iter::repeat_n(self.0.iter().copied(), k).flatten())
    }

    /// Strip the conjugating prefix/suffix `u … u⁻¹`.
    pub fn cyclically_reduce(&self) -> Word {
        let l = &self.0;
        let (mut lo, mut hi) = (0, l.len());
        while hi - lo >= 2 && l[lo] == l[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(l[lo..hi].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => self.0.len() == 1 || a != b.inv(),
            _ => true,
        }
    }

    /// Left rotation by `k`: `x_{k+1} … x_n x_1 … x_k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Word(v)
    }

    fn min_rotation(&self) -> Word {
        (0..self.0.len().max(1))
            .map(|k| self.rotate(k))
            .min_by(|a, b| a.0.cmp(&b.0))
            .unwrap_or_default()
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word(vec![l])
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        free_reduce(iter)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Whitespace-separated tokens; the result is freely reduced.
    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>>>()
            .map(free_reduce)
    }
}

/// Free-group conjugacy class, represented by its cyclically reduced,
/// rotation-minimal word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjugacyClass(Word);

impl ConjugacyClass {
    pub fn new(w: &Word) -> Result<Self> {
        let reduced = w.cyclically_reduce();
        if reduced.is_empty() {
            return Err(Error::IdentityWord);
        }
        Ok(ConjugacyClass(reduced.min_rotation()))
    }

    pub fn representative(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn inverse(&self) -> ConjugacyClass {
        ConjugacyClass(self.0.inverse().min_rotation())
    }
}

/// Shorter classes first, then lexicographic in the letter order.
impl Ord for ConjugacyClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0 .0.cmp(&other.0 .0))
    }
}

impl PartialOrd for ConjugacyClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ConjugacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn conjugacy_class(w: &Word) -> Result<ConjugacyClass> {
    ConjugacyClass::new(w)
}

/// Every free-group conjugacy class with a cyclically reduced representative
/// of length `1..=max_len`, each exactly once, in [`ConjugacyClass`] order.
pub fn enumerate_classes(max_len: usize) -> Vec<ConjugacyClass> {
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        extend_rotation_minimal(&mut stack, len, &mut out);
    }
    out
}

fn extend_rotation_minimal(
    prefix: &mut Vec<Letter>,
    len: usize,
    out: &mut Vec<ConjugacyClass>,
) {
    if prefix.len() == len {
        let w = Word(prefix.clone());
        if w.is_cyclically_reduced() && w.min_rotation() == w {
            out.push(ConjugacyClass(w));
        }
        return;
    }
    for l in Letter::ALL {
        // a rotation-minimal word cannot contain a letter smaller than its first
        if let Some(&first) = prefix.first() {
            if l < first {
                continue;
            }
        }
        if prefix.last() == Some(&l.inv()) {
            continue;
        }
        prefix.push(l);
        extend_rotation_minimal(prefix, len, out);
        prefix.pop();
    }
}

/// Visit every freely reduced word of length `0..=max_len` in depth-first
/// order, handing the visitor the word and a per-depth accumulator built by
/// `step` from the parent's accumulator.
pub fn walk_reduced_words<S, F, V>(max_len: usize, root: S, mut step: F, mut visit: V)
where
    F: FnMut(&S, Letter) -> S,
    V: FnMut(&[Letter], &S),
{
    fn go<S, F, V>(prefix: &mut Vec<Letter>, acc: &S, max_len: usize, step: &mut F, visit: &mut V)
    where
        F: FnMut(&S, Letter) -> S,
        V: FnMut(&[Letter], &S),
    {
        visit(prefix, acc);
        if prefix.len() == max_len {
            return;
        }
        for l in Letter::ALL {
            if prefix.last() == Some(&l.inv()) {
                continue;
            }
            let next = step(acc, l);
            prefix.push(l);
            go(prefix, &next, max_len, step, visit);
            prefix.pop();
        }
    }
    let mut prefix = Vec::with_capacity(max_len);
    go(&mut prefix, &root, max_len, &mut step, &mut visit);
}

/// The single relator of the one-relator genus-2 presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    relator: Word,
}

impl Presentation {
    pub const GENUS: usize = 2;

    pub fn new(relator: Word) -> Result<Self> {
        if relator.len() != 8 {
            return Err(Error::InvalidArgument(format!(
                "relator must have length 8, got {}",
                relator.len()
            )));
        }
        if !relator.is_cyclically_reduced() {
            return Err(Error::InvalidArgument(
                "relator must be cyclically reduced".into(),
            ));
        }
        let mut used = [false; 4];
        for l in relator.letters() {
            used[l.generator()] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::InvalidArgument(
                "relator must use all four generators".into(),
            ));
        }
        Ok(Presentation { relator })
    }

    /// `[a1,b1][a2,b2]`.
    pub fn standard() -> Self {
        Presentation::new("a1 b1 A1 B1 a2 b2 A2 B2".parse().expect("static word"))
            .expect("standard relator is valid")
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }

    /// Freely reduced forms of all cyclic rotations of the relator and of its
    /// inverse. These are exactly the length-8 words that are trivial in the
    /// surface group.
    pub fn relator_cyclic_words(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for r in [self.relator.clone(), self.relator.inverse()] {
            for k in 0..r.len() {
                let w = r.rotate(k);
                if !out.contains(&w) {
                    out.push(w);
                }
            }
        }
        out
    }
}
