//! Words over the alphabet `{x, y}`.
//!
//! A word is packed into a single `u64`, one bit per letter (`0 = x`,
//! `1 = y`), with the first letter in the most significant of the `len`
//! occupied bits. Comparing `(len, bits)` therefore orders words by length
//! and then lexicographically with `x < y`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest representable word.
pub const MAX_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }
}

#[inline]
fn mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A monomial of the free algebra on `x` and `y`.
///
/// Field order matters: the derived `Ord` is the canonical term order
/// (length first, then packed value).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };
    pub const X: Word = Word { len: 1, bits: 0 };
    pub const Y: Word = Word { len: 1, bits: 1 };

    /// Builds a word from its packed form. Bits above `len` are ignored.
    pub fn from_bits(bits: u64, len: usize) -> Result<Word> {
        if len > MAX_LEN {
            return Err(Error::WordTooLong(len));
        }
        Ok(Word {
            len: len as u8,
            bits: bits & mask(len as u32),
        })
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Result<Word> {
        let mut w = Word::EMPTY;
        for l in letters {
            if w.len() == MAX_LEN {
                return Err(Error::WordTooLong(MAX_LEN + 1));
            }
            w = w.push(l);
        }
        Ok(w)
    }

    /// `x^a`.
    pub fn x_pow(a: usize) -> Word {
        assert!(a <= MAX_LEN, "word too long");
        Word {
            len: a as u8,
            bits: 0,
        }
    }

    /// `y^a`.
    pub fn y_pow(a: usize) -> Word {
        assert!(a <= MAX_LEN, "word too long");
        Word {
            len: a as u8,
            bits: mask(a as u32),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Total degree.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.len as u32
    }

    /// Number of `y` letters.
    #[inline]
    pub fn depth(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of `xy` factors, i.e. the number of composition entries above 1.
    pub fn height(&self) -> u32 {
        if self.len < 2 {
            return 0;
        }
        // bit i+1 is the letter before bit i
        let x_then_y = !(self.bits >> 1) & self.bits & mask(self.len as u32 - 1);
        x_then_y.count_ones()
    }

    /// Letter at position `i`, counting from the left.
    #[inline]
    pub fn letter(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        if (self.bits >> (self.len() - 1 - i)) & 1 == 0 {
            Letter::X
        } else {
            Letter::Y
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    /// The empty word, or a word starting with `x` and ending with `y`.
    pub fn is_admissible(&self) -> bool {
        self.len == 0 || (self.letter(0) == Letter::X && self.bits & 1 == 1)
    }

    /// Appends a letter on the right.
    pub fn push(&self, l: Letter) -> Word {
        assert!(self.len() < MAX_LEN, "word too long");
        Word {
            len: self.len + 1,
            bits: (self.bits << 1) | l.bit(),
        }
    }

    /// Concatenation `self · other`. Panics if the result exceeds [`MAX_LEN`].
    #[inline]
    pub fn concat(&self, other: &Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_LEN, "word too long");
        let hi = if other.len == 64 { 0 } else { self.bits << other.len };
        Word {
            len: len as u8,
            bits: hi | other.bits,
        }
    }

    /// The first `n` letters.
    #[inline]
    pub fn prefix(&self, n: usize) -> Word {
        debug_assert!(n <= self.len());
        let shift = (self.len() - n) as u32;
        Word {
            len: n as u8,
            bits: if shift >= 64 { 0 } else { self.bits >> shift },
        }
    }

    /// The last `n` letters.
    #[inline]
    pub fn suffix(&self, n: usize) -> Word {
        debug_assert!(n <= self.len());
        Word {
            len: n as u8,
            bits: self.bits & mask(n as u32),
        }
    }

    pub fn reverse(&self) -> Word {
        if self.len == 0 {
            return *self;
        }
        Word {
            len: self.len,
            bits: self.bits.reverse_bits() >> (64 - self.len as u32),
        }
    }

    /// Exchanges `x` and `y` letter by letter.
    pub fn swap_letters(&self) -> Word {
        Word {
            len: self.len,
            bits: !self.bits & mask(self.len as u32),
        }
    }

    /// Length of the leading run of `x` plus one, i.e. `k_1` for an
    /// admissible word. Returns `None` for words that do not start with `x`
    /// or contain no `y`.
    pub fn first_exponent(&self) -> Option<u32> {
        if self.len == 0 || self.bits == 0 || self.letter(0) == Letter::Y {
            return None;
        }
        let leading_x = self.len as u32 - (64 - self.bits.leading_zeros());
        Some(leading_x + 1)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("1");
        }
        for l in self.letters() {
            f.write_str(match l {
                Letter::X => "x",
                Letter::Y => "y",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts a string over `{x, y}`, or `1` for the empty word.
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::EMPTY);
        }
        if s.len() > MAX_LEN {
            return Err(Error::WordTooLong(s.len()));
        }
        s.chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                'y' => Ok(Letter::Y),
                _ => Err(Error::Parse(format!("unexpected letter `{c}` in word `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .and_then(Word::from_letters)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Encodes `(k_1, ..., k_n)` as `x^{k_1-1} y ... x^{k_n-1} y`.
pub fn word_of_composition(ks: &[u32]) -> Result<Word> {
    if ks.is_empty() {
        return Err(Error::EmptyComposition);
    }
    if ks[0] < 2 || ks.contains(&0) {
        return Err(Error::InadmissibleComposition(ks.to_vec()));
    }
    let total: u64 = ks.iter().map(|&k| k as u64).sum();
    if total > MAX_LEN as u64 {
        return Err(Error::WordTooLong(total as usize));
    }
    let mut w = Word::EMPTY;
    for &k in ks {
        w = w.concat(&Word::x_pow(k as usize - 1)).push(Letter::Y);
    }
    Ok(w)
}

/// Inverse of [`word_of_composition`] on admissible words of weight at least 2.
pub fn composition_of_word(w: &Word) -> Result<Vec<u32>> {
    if w.is_empty() || !w.is_admissible() {
        return Err(Error::InadmissibleWord(w.to_string()));
    }
    let mut ks = Vec::with_capacity(w.depth() as usize);
    let mut run = 1;
    for l in w.letters() {
        match l {
            Letter::X => run += 1,
            Letter::Y => {
                ks.push(run);
                run = 1;
            }
        }
    }
    Ok(ks)
}

/// All admissible words of weight `k`, in term order.
///
/// There are `2^{k-2}` of them: `x`, any `k-2` interior letters, `y`. The
/// position of a word in this list is its coordinate index, see
/// [`basis_index`].
pub fn basis(k: u32) -> Result<Vec<Word>> {
    if k < 2 {
        return Err(Error::WeightTooSmall(k, 2));
    }
    if k as usize > MAX_LEN {
        return Err(Error::WordTooLong(k as usize));
    }
    let inner = k - 2;
    let n = 1u64 << inner;
    Ok((0..n)
        .map(|mid| Word::X.concat(&Word { len: inner as u8, bits: mid }).push(Letter::Y))
        .collect())
}

/// Position of an admissible word inside `basis(w.weight())`.
#[inline]
pub fn basis_index(w: &Word) -> Option<usize> {
    if w.len() < 2 || !w.is_admissible() {
        return None;
    }
    Some(((w.bits >> 1) & mask(w.len as u32 - 2)) as usize)
}
