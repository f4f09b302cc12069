//! Free-group words over `m` generators.
//!
//! A [`Letter`] is a signed generator index, a [`Word`] a finite sequence of
//! letters. The relator universe `B_ℓ` is the set of nonempty cyclically
//! reduced words of length at most `ℓ`; it is counted exactly with big
//! integers and never enumerated except for small oracle checks.
//!
//! Text form: `a..z` are the positive generators `x_1..x_26`, `A..Z` their
//! inverses, so the commutator `[x_1, x_2]` renders as `abAB`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest generator count representable in the letter text format.
pub const MAX_TEXT_GENERATORS: u8 = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?}: expected a-z or A-Z")]
    InvalidLetter(char),
    #[error("letter {letter} uses generator {generator} but only {m} generators are declared")]
    GeneratorOutOfRange { letter: char, generator: u8, m: u8 },
    #[error("word {0} is not freely reduced")]
    NotFreelyReduced(String),
    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),
    #[error("empty relator")]
    EmptyRelator,
    #[error("enumeration of {count} words exceeds the limit of {limit}")]
    ScaleGuard { count: BigUint, limit: u64 },
}

/// A generator `x_g` or its inverse, stored as the signed integer `±g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i8);

impl Letter {
    /// `generator` is 1-based and must lie in `1..=127`.
    pub fn new(generator: u8, inverse: bool) -> Letter {
        assert!(
            (1..=127).contains(&generator),
            "generator index {generator} out of range"
        );
        let g = generator as i8;
        Letter(if inverse { -g } else { g })
    }

    /// Builds a letter from its signed representation `±g`.
    pub fn from_signed(value: i8) -> Letter {
        assert!(value != 0 && value != i8::MIN, "invalid signed letter {value}");
        Letter(value)
    }

    pub fn signed(self) -> i8 {
        self.0
    }

    /// 1-based generator index.
    pub fn generator(self) -> u8 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    #[must_use]
    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Dense index in `0..2m`: `x_g ↦ 2(g−1)`, `x_g⁻¹ ↦ 2(g−1)+1`.
    pub fn index(self) -> usize {
        2 * (self.generator() as usize - 1) + self.is_inverse() as usize
    }

    pub fn from_index(index: usize) -> Letter {
        Letter::new((index / 2 + 1) as u8, index % 2 == 1)
    }

    /// All `2m` letters in dense-index order.
    pub fn all(m: u8) -> impl Iterator<Item = Letter> {
        (0..2 * m as usize).map(Letter::from_index)
    }

    pub fn to_char(self) -> char {
        assert!(
            self.generator() <= MAX_TEXT_GENERATORS,
            "generator {} has no letter form",
            self.generator()
        );
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.generator() - 1) as char
    }

    pub fn from_char(c: char) -> Result<Letter, WordError> {
        match c {
            'a'..='z' => Ok(Letter::new(c as u8 - b'a' + 1, false)),
            'A'..='Z' => Ok(Letter::new(c as u8 - b'A' + 1, true)),
            _ => Err(WordError::InvalidLetter(c)),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator() <= MAX_TEXT_GENERATORS {
            write!(f, "{}", self.to_char())
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite sequence of letters, possibly empty and not necessarily reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    /// The letter at cyclic position `i mod |w|`.
    pub fn cyclic(&self, i: usize) -> Letter {
        self.0[i % self.0.len()]
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_generator(&self) -> u8 {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[1] != p[0].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && (self.0.len() <= 1 || self.0[0] != self.0[self.0.len() - 1].inverse())
    }

    /// Parses a word in letter form, checking generators against `m`.
    pub fn parse_with(s: &str, m: u8) -> Result<Word, WordError> {
        let w: Word = s.parse()?;
        if let Some(l) = w.iter().find(|l| l.generator() > m) {
            return Err(WordError::GeneratorOutOfRange {
                letter: l.to_char(),
                generator: l.generator(),
                m,
            });
        }
        Ok(w)
    }

    /// Parses one relator line. Non-reduced input is rejected unless
    /// `reduce` is set, in which case it is cyclically reduced first.
    pub fn parse_relator(s: &str, m: u8, reduce: bool) -> Result<Word, WordError> {
        let mut w = Word::parse_with(s.trim(), m)?;
        if reduce {
            w = cyclic_reduce(&w);
        } else if !w.is_freely_reduced() {
            return Err(WordError::NotFreelyReduced(w.to_string()));
        } else if !w.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced(w.to_string()));
        }
        if w.is_empty() {
            return Err(WordError::EmptyRelator);
        }
        Ok(w)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        s.chars().map(Letter::from_char).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Stack-based free reduction; the result never contains `x x⁻¹`.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Freely reduces, then strips mutually inverse first/last letters.
pub fn cyclic_reduce(w: &Word) -> Word {
    let r = free_reduce(w);
    let letters = r.letters();
    let (mut lo, mut hi) = (0, letters.len());
    while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    Word(letters[lo..hi].to_vec())
}

pub fn invert(w: &Word) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Cyclic shift starting at index `k mod |w|`; negative `k` counts from the end.
pub fn rotate(w: &Word, k: isize) -> Word {
    if w.is_empty() {
        return Word::empty();
    }
    let n = w.len() as isize;
    let s = k.rem_euclid(n) as usize;
    let mut letters = Vec::with_capacity(w.len());
    letters.extend_from_slice(&w.0[s..]);
    letters.extend_from_slice(&w.0[..s]);
    Word(letters)
}

/// Default cap on the number of words [`enumerate_cyclically_reduced`] will
/// materialise.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 5_000_000;

/// All cyclically reduced words of length exactly `n`, in lexicographic order
/// of dense letter indices.
pub fn enumerate_cyclically_reduced(m: u8, n: usize, limit: u64) -> Result<Vec<Word>, WordError> {
    let bound = freely_reduced_count(m, n);
    if bound > BigUint::from(limit) {
        return Err(WordError::ScaleGuard { count: bound, limit });
    }
    let mut out = Vec::new();
    visit_cyclically_reduced(m, n, |letters| out.push(Word(letters.to_vec())));
    Ok(out)
}

/// Walks every cyclically reduced word of length exactly `n` without
/// materialising the list; same order as [`enumerate_cyclically_reduced`].
pub fn visit_cyclically_reduced(m: u8, n: usize, mut visit: impl FnMut(&[Letter])) {
    if n == 0 || m == 0 {
        return;
    }
    let mut current: Vec<Letter> = Vec::with_capacity(n);
    extend_words(m, n, &mut current, &mut visit);
}

fn extend_words(m: u8, n: usize, current: &mut Vec<Letter>, visit: &mut impl FnMut(&[Letter])) {
    if current.len() == n {
        if n == 1 || current[0] != current[n - 1].inverse() {
            visit(current);
        }
        return;
    }
    for l in Letter::all(m) {
        if current.last().is_some_and(|&p| p == l.inverse()) {
            continue;
        }
        current.push(l);
        extend_words(m, n, current, visit);
        current.pop();
    }
}

/// Number of freely reduced words of length `n`: `2m(2m−1)^{n−1}`.
pub fn freely_reduced_count(m: u8, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    let m = u64::from(m);
    if m == 0 {
        return BigUint::zero();
    }
    BigUint::from(2 * m) * BigUint::from(2 * m - 1).pow(n as u32 - 1)
}

/// Exact number of cyclically reduced words of length `n ≥ 1`:
/// `c_n = (2m−1)^n + 1 + (m−1)(1 + (−1)^n)`.
pub fn count_cyclically_reduced(m: u8, n: usize) -> BigUint {
    assert!(n >= 1, "cyclically reduced words are counted for n >= 1");
    assert!(m >= 1, "at least one generator is required");
    let m = u64::from(m);
    let parity = if n % 2 == 0 { 2 * (m - 1) } else { 0 };
    BigUint::from(2 * m - 1).pow(n as u32) + BigUint::one() + BigUint::from(parity)
}

/// `|B_ℓ| = Σ_{n=1..ℓ} c_n`.
pub fn universe_size(m: u8, ell: usize) -> BigUint {
    (1..=ell).map(|n| count_cyclically_reduced(m, n)).sum()
}

/// The relator universe `B_ℓ`, described by its exact size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorUniverse {
    pub m: u8,
    pub ell: usize,
    pub count: BigUint,
}

impl RelatorUniverse {
    pub fn new(m: u8, ell: usize) -> RelatorUniverse {
        RelatorUniverse { m, ell, count: universe_size(m, ell) }
    }

    /// Size of the length-`n` stratum.
    pub fn stratum(&self, n: usize) -> BigUint {
        count_cyclically_reduced(self.m, n)
    }

    pub fn contains(&self, w: &Word) -> bool {
        !w.is_empty()
            && w.len() <= self.ell
            && w.max_generator() <= self.m
            && w.is_cyclically_reduced()
    }
}
