//! Generators for the relation families: duality, derivation, and the
//! duality relations for sums of fixed weight/depth/height and fixed
//! weight/depth/first exponent.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operators::{one_minus_tau, partial_word};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::word::{basis, Word};

/// Smallest weight any family is generated for.
pub const MIN_WEIGHT: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(1 - tau)(w)` for every admissible `w`.
    Duality,
    /// `∂_n(w)` for every `n >= 1` and admissible `w`.
    Derivation,
    /// Duality of the sum over fixed depth and height.
    DualityHt,
    /// Duality of the sum over fixed depth and first exponent `k_1`.
    DualityK1,
    /// Concatenation of the listed families' generators.
    Union(Vec<Family>),
}

impl Family {
    fn base_name(&self) -> Option<&'static str> {
        match self {
            Family::Duality => Some("duality"),
            Family::Derivation => Some("derivation"),
            Family::DualityHt => Some("duality-ht"),
            Family::DualityK1 => Some("duality-k1"),
            Family::Union(_) => None,
        }
    }

    /// Generators of this family at weight `k`.
    pub fn generate(&self, k: u32) -> Result<Vec<Poly>> {
        match self {
            Family::Duality => duality_all(k),
            Family::Derivation => derivation_all(k),
            Family::DualityHt => duality_ht_sum(k),
            Family::DualityK1 => duality_k1_sum(k),
            Family::Union(parts) => {
                let mut out = Vec::new();
                for f in parts {
                    out.extend(f.generate(k)?);
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Union(parts) => {
                f.write_str("union:")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            other => f.write_str(other.base_name().expect("base family")),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("union:") {
            let parts = rest
                .split(',')
                .map(|p| match p.trim().parse()? {
                    Family::Union(_) => Err(Error::Parse("nested unions are not supported".into())),
                    f => Ok(f),
                })
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(Error::Parse("empty union".into()));
            }
            return Ok(Family::Union(parts));
        }
        match s {
            "duality" => Ok(Family::Duality),
            "derivation" => Ok(Family::Derivation),
            "duality-ht" => Ok(Family::DualityHt),
            "duality-k1" => Ok(Family::DualityK1),
            _ => Err(Error::Parse(format!("unknown family `{s}`"))),
        }
    }
}

/// A family at a fixed weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub weight: u32,
}

impl FamilySpec {
    pub fn new(family: Family, weight: u32) -> Result<FamilySpec> {
        check_weight(weight)?;
        Ok(FamilySpec { family, weight })
    }

    pub fn generate(&self) -> Result<Vec<Poly>> {
        self.family.generate(self.weight)
    }
}

fn check_weight(k: u32) -> Result<()> {
    if k < MIN_WEIGHT {
        return Err(Error::WeightTooSmall(k, MIN_WEIGHT));
    }
    Ok(())
}

/// `[(1 - tau)(w) : w in basis(k)]`, self-dual words giving zero entries.
pub fn duality_all(k: u32) -> Result<Vec<Poly>> {
    check_weight(k)?;
    Ok(basis(k)?
        .into_iter()
        .map(|w| one_minus_tau(&Poly::from(w)))
        .collect())
}

/// `[∂_n(w) : 1 <= n <= k-2, w in basis(k-n)]`.
pub fn derivation_all(k: u32) -> Result<Vec<Poly>> {
    check_weight(k)?;
    let mut out = Vec::new();
    for n in 1..=k - 2 {
        for w in basis(k - n)? {
            out.push(Poly::from_terms(
                partial_word(n, &w)
                    .into_iter()
                    .map(|(t, c)| (t, Rat::from(c))),
            ));
        }
    }
    Ok(out)
}

fn grouped_duality<K: Ord, F: Fn(&Word) -> K>(k: u32, key: F) -> Result<Vec<Poly>> {
    check_weight(k)?;
    let mut groups: BTreeMap<K, Vec<Word>> = BTreeMap::new();
    for w in basis(k)? {
        groups.entry(key(&w)).or_default().push(w);
    }
    Ok(groups
        .into_values()
        .map(|ws| one_minus_tau(&Poly::sum_of_words(ws)))
        .collect())
}

/// `(1 - tau)` of the sum of all weight-`k` words with a given depth and height.
pub fn duality_ht_sum(k: u32) -> Result<Vec<Poly>> {
    grouped_duality(k, |w| (w.depth(), w.height()))
}

/// `(1 - tau)` of the sum of all weight-`k` words with a given depth and `k_1`.
pub fn duality_k1_sum(k: u32) -> Result<Vec<Poly>> {
    grouped_duality(k, |w| (w.depth(), w.first_exponent()))
}

/// Sum of the admissible weight-`k` words of depth `n` with first exponent `m`.
pub fn k1_depth_sum(k: u32, n: u32, m: u32) -> Result<Poly> {
    Ok(Poly::sum_of_words(
        basis(k)?
            .into_iter()
            .filter(|w| w.depth() == n && w.first_exponent() == Some(m)),
    ))
}
