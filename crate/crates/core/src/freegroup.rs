//! Reduced words in the free group `F_n` and endomorphisms given by
//! generator images.
//!
//! Words are normalized on construction, so structural equality is group
//! equality. Text form: `x1 x2^-1 x1`, with `e` for the empty word.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeGroupError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cannot parse word token {0:?}")]
    Parse(String),
}

/// A generator `x_i` (zero-based `gen`) or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// `x_i`, zero-based.
    pub fn generator(rank: usize, i: usize) -> Result<Self, FreeGroupError> {
        Self::reduce(vec![Letter::new(i, false)], rank)
    }

    /// Free reduction by a single left-to-right stack pass.
    pub fn reduce(letters: Vec<Letter>, rank: usize) -> Result<Self, FreeGroupError> {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if l.gen >= rank {
                return Err(FreeGroupError::IndexOutOfRange {
                    index: l.gen + 1,
                    rank,
                });
            }
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Ok(Word { rank, letters: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, FreeGroupError> {
        if self.rank != other.rank {
            return Err(FreeGroupError::RankMismatch(self.rank, other.rank));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word {
            rank: self.rank,
            letters: out,
        }
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `x_i^k` for zero-based `i`.
    pub fn power(rank: usize, i: usize, k: i64) -> Word {
        let letter = Letter::new(i, k < 0);
        Word {
            rank,
            letters: vec![letter; k.unsigned_abs() as usize],
        }
    }

    /// Exponent sum of the zero-based generator `i`.
    pub fn exponent_sum(&self, i: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == i)
            .map(|l| if l.inverse { -1 } else { 1 })
            .sum()
    }

    /// Splits `self = c · core · c⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let ls = &self.letters;
        let mut k = 0;
        while ls.len() >= 2 * (k + 1) && ls[k].cancels(ls[ls.len() - 1 - k]) {
            k += 1;
        }
        let conj = Word {
            rank: self.rank,
            letters: ls[..k].to_vec(),
        };
        let core = Word {
            rank: self.rank,
            letters: ls[k..ls.len() - k].to_vec(),
        };
        (core, conj)
    }

    /// Whether the word is conjugate to the zero-based generator `x_i`.
    pub fn is_conjugate_to_generator(&self, i: usize) -> bool {
        let (core, _) = self.cyclic_reduce();
        core.letters == [Letter::new(i, false)]
    }

    pub fn parse(s: &str, rank: usize) -> Result<Word, FreeGroupError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "e" {
                continue;
            }
            letters.push(tok.parse::<Letter>()?);
        }
        Self::reduce(letters, rank)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("x{}^-1", l.gen + 1)
                } else {
                    format!("x{}", l.gen + 1)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An endomorphism of `F_n`, determined by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn identity(rank: usize) -> Self {
        Endomorphism {
            rank,
            images: (0..rank)
                .map(|i| Word::generator(rank, i).expect("in range"))
                .collect(),
        }
    }

    pub fn new(images: Vec<Word>) -> Result<Self, FreeGroupError> {
        let rank = images.len();
        if let Some(w) = images.iter().find(|w| w.rank != rank) {
            return Err(FreeGroupError::RankMismatch(w.rank, rank));
        }
        Ok(Endomorphism { rank, images })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i]
    }

    pub fn apply(&self, w: &Word) -> Result<Word, FreeGroupError> {
        if w.rank != self.rank {
            return Err(FreeGroupError::RankMismatch(self.rank, w.rank));
        }
        let mut out = Word::identity(self.rank);
        for l in &w.letters {
            let img = &self.images[l.gen];
            out = if l.inverse {
                out.mul_unchecked(&img.invert())
            } else {
                out.mul_unchecked(img)
            };
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism, FreeGroupError> {
        if self.rank != other.rank {
            return Err(FreeGroupError::RankMismatch(self.rank, other.rank));
        }
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Endomorphism {
            rank: self.rank,
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Endomorphism::identity(self.rank)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "x{} -> {}", i + 1, w)?;
        }
        Ok(())
    }
}

/// The product word `x_1 x_2 ⋯ x_n`.
pub fn product_word(rank: usize) -> Word {
    Word {
        rank,
        letters: (0..rank).map(|i| Letter::new(i, false)).collect(),
    }
}

impl FromStr for Letter {
    type Err = FreeGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        body.strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .map(|k| Letter::new(k - 1, inverse))
            .ok_or_else(|| FreeGroupError::Parse(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, n: usize) -> Word {
        Word::parse(s, n).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w("x1 x1^-1", 2).is_identity());
        assert_eq!(w("x1 x2 x2^-1 x1", 2), w("x1 x1", 2));
        assert_eq!(w("x1 x2 x2^-1 x1", 2).len(), 2);
    }

    #[test]
    fn index_out_of_range() {
        assert_eq!(
            Word::parse("x3", 2),
            Err(FreeGroupError::IndexOutOfRange { index: 3, rank: 2 })
        );
        assert!(matches!(Word::parse("y1", 2), Err(FreeGroupError::Parse(_))));
        assert!(matches!(Word::parse("x0", 2), Err(FreeGroupError::Parse(_))));
    }

    #[test]
    fn multiply_and_invert() {
        let u = w("x1 x2", 2);
        assert_eq!(u.multiply(&Word::identity(2)).unwrap(), u);
        assert_eq!(u.invert(), w("x2^-1 x1^-1", 2));
        assert!(u.multiply(&u.invert()).unwrap().is_identity());
        assert_eq!(
            u.multiply(&Word::identity(3)),
            Err(FreeGroupError::RankMismatch(2, 3))
        );
    }

    #[test]
    fn text_roundtrip() {
        let u = w("x1 x2^-1 x1", 2);
        assert_eq!(u.to_string(), "x1 x2^-1 x1");
        assert_eq!(Word::identity(3).to_string(), "e");
        assert_eq!(w("e", 3), Word::identity(3));
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w("x1 x2 x1", 2).exponent_sum(0), 2);
        assert_eq!(Word::identity(3).exponent_sum(1), 0);
        assert_eq!(w("x2 x1^-1 x2 x1", 2).exponent_sum(0), 0);
    }

    #[test]
    fn cyclic_reduction() {
        let (core, c) = w("x2 x1 x2^-1", 2).cyclic_reduce();
        assert_eq!(core, w("x1", 2));
        assert_eq!(c, w("x2", 2));
        assert!(w("x2 x1 x2^-1", 2).is_conjugate_to_generator(0));
        let (core, c) = w("x1 x2", 2).cyclic_reduce();
        assert_eq!(core, w("x1 x2", 2));
        assert!(c.is_identity());
        assert!(!w("x1 x2", 2).is_conjugate_to_generator(0));
        assert!(!w("x1 x2", 2).is_conjugate_to_generator(1));
        assert!(!Word::identity(2).is_conjugate_to_generator(0));
    }

    #[test]
    fn identity_endomorphism() {
        let id = Endomorphism::identity(3);
        let u = w("x3 x1^-1 x2", 3);
        assert_eq!(id.apply(&u).unwrap(), u);
        assert!(id.is_identity());
    }

    #[test]
    fn conjugation_endomorphism_fixes_own_generator() {
        // α(w) with w = (x1, e): x1 ↦ x1 x1 x1⁻¹ = x1
        let n = 2;
        let x1 = w("x1", n);
        let img1 = x1.multiply(&x1).unwrap().multiply(&x1.invert()).unwrap();
        let e = Endomorphism::new(vec![img1, w("x2", n)]).unwrap();
        assert_eq!(e.apply(&x1).unwrap(), x1);
    }
}
