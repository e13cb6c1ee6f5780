//! Finite rational linear combinations of words: elements of `Q<x, y>`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rat::Rat;
use crate::word::Word;

/// A noncommutative polynomial in `x` and `y` with rational coefficients.
///
/// Terms are kept in the canonical term order of [`Word`] and no zero
/// coefficient is ever stored, so structural equality is mathematical
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Word, Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::from(Word::EMPTY)
    }

    pub fn x() -> Poly {
        Poly::from(Word::X)
    }

    pub fn y() -> Poly {
        Poly::from(Word::Y)
    }

    pub fn monomial(w: Word, c: Rat) -> Poly {
        let mut p = Poly::zero();
        p.add_term(w, &c);
        p
    }

    /// Sums the given terms, merging repeated words.
    pub fn from_terms<I: IntoIterator<Item = (Word, Rat)>>(terms: I) -> Poly {
        let mut p = Poly::zero();
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    /// Sum of the given words, each with coefficient 1.
    pub fn sum_of_words<I: IntoIterator<Item = Word>>(words: I) -> Poly {
        let one = Rat::one();
        let mut p = Poly::zero();
        for w in words {
            p.add_term(w, &one);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `c * w`, dropping the entry if it cancels.
    pub fn add_term(&mut self, w: Word, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(*w, &(c * d));
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (w, d) in &other.terms {
            self.add_term(*w, d);
        }
    }

    pub fn sub_assign(&mut self, other: &Poly) {
        for (w, d) in &other.terms {
            self.add_term(*w, &-d);
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(w, d)| (*w, c * d)).collect(),
        }
    }

    /// Largest weight of a stored word, `None` for zero.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Word::weight).max()
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().next().map(Word::weight)
    }

    pub fn is_homogeneous(&self, k: u32) -> bool {
        self.terms.keys().all(|w| w.weight() == k)
    }

    /// Membership in `Q + x Q<x,y> y`.
    pub fn in_h0(&self) -> bool {
        self.terms.keys().all(Word::is_admissible)
    }

    /// The weight-`k` homogeneous component.
    pub fn homogeneous_part(&self, k: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == k)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Drops every word of weight above `k`.
    pub fn truncate(&self, k: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() <= k)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Extends a map on words linearly.
    pub fn map_linear<F: FnMut(&Word) -> Poly>(&self, mut f: F) -> Poly {
        let mut out = Poly::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }

    /// Extends a word-to-word map linearly.
    pub fn map_words<F: FnMut(&Word) -> Word>(&self, mut f: F) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    /// Product truncated to weight at most `k`.
    pub fn mul_truncated(&self, other: &Poly, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.weight() + b.weight() <= k {
                    out.add_term(a.concat(b), &(ca * cb));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Checks the canonical-form invariant: no stored zero coefficient.
    pub fn is_canonical(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero())
    }
}

impl From<Word> for Poly {
    fn from(w: Word) -> Poly {
        Poly::monomial(w, Rat::one())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), &(ca * cb));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if abs.is_one() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
