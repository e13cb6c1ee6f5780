//! Double-precision evaluation of multiple zeta values by truncated nested
//! sums, used as a numerical sanity check that relations lie in the kernel
//! of the evaluation map.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::word::{composition_of_word, Word};

/// A truncated value `Σ_{M >= m_1 > ... > m_n > 0}` together with a rigorous
/// bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaApprox {
    pub value: f64,
    pub terms_used: u64,
    pub tail_bound: f64,
}

/// Compensated running sum.
#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `ζ(k_1, ..., k_n)` truncated at `m_1 <= terms`.
///
/// Evaluated innermost-first: `S_n(m) = m^{-k_n}` and
/// `S_j(m) = m^{-k_j} Σ_{m' < m} S_{j+1}(m')`, so the cost is `O(n · terms)`.
pub fn zeta_numeric(ks: &[u32], terms: u64) -> Result<ZetaApprox> {
    if ks.is_empty() {
        return Err(Error::EmptyComposition);
    }
    if ks[0] < 2 || ks.contains(&0) {
        return Err(Error::InadmissibleComposition(ks.to_vec()));
    }
    let depth = ks.len() as u64;
    if terms < depth {
        return Err(Error::InvalidParameters(format!(
            "truncation {terms} is smaller than the depth {depth}"
        )));
    }
    let m_max = terms as usize;
    let inv_pow = |m: usize, k: u32| 1.0 / (m as f64).powi(k as i32);

    let last = *ks.last().expect("non-empty");
    let mut level: Vec<f64> = (0..=m_max).map(|m| if m == 0 { 0.0 } else { inv_pow(m, last) }).collect();
    for &k in ks[..ks.len() - 1].iter().rev() {
        let mut prefix = Kahan::default();
        for (m, slot) in level.iter_mut().enumerate() {
            let inner = prefix.sum;
            prefix.add(*slot);
            *slot = if m == 0 { 0.0 } else { inv_pow(m, k) * inner };
        }
    }
    // smallest terms first
    let mut total = Kahan::default();
    for v in level.iter().rev() {
        total.add(*v);
    }
    Ok(ZetaApprox {
        value: total.sum,
        terms_used: terms,
        tail_bound: tail_bound(ks[0], ks.len() as u32, terms),
    })
}

/// Bound on `Σ_{m > M} m^{-k_1} (1 + ln m)^{n-1}`, which dominates the tail
/// because every inner sum is at most a harmonic number `H_{m-1} <= 1 + ln m`.
///
/// The summand decreases on `[M, ∞)` once `n - 1 < k_1 (1 + ln M)`, so the
/// sum is bounded by the integral, which has the closed form
/// `M^{-c} Σ_{j=0}^{a} a!/j! · L^j / c^{a+1-j}` with `c = k_1 - 1`,
/// `a = n - 1` and `L = 1 + ln M`.
fn tail_bound(k1: u32, depth: u32, terms: u64) -> f64 {
    let m = terms as f64;
    let l = 1.0 + m.ln();
    let a = depth - 1;
    if a as f64 >= k1 as f64 * l {
        return f64::INFINITY;
    }
    let c = (k1 - 1) as f64;
    let mut sum = 0.0;
    // a!/j! built downward from j = a
    let mut fact_ratio = 1.0;
    for j in (0..=a).rev() {
        sum += fact_ratio * l.powi(j as i32) / c.powi((a + 1 - j) as i32);
        fact_ratio *= j as f64;
    }
    sum * m.powf(-c)
}

/// `Z(P)` evaluated numerically, with the accumulated tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
}

/// Memoized evaluations at a fixed truncation.
pub struct ZetaTable {
    terms: u64,
    cache: HashMap<Word, ZetaApprox>,
}

impl ZetaTable {
    pub fn new(terms: u64) -> ZetaTable {
        ZetaTable {
            terms,
            cache: HashMap::new(),
        }
    }

    pub fn get(&mut self, w: &Word) -> Result<ZetaApprox> {
        if let Some(z) = self.cache.get(w) {
            return Ok(*z);
        }
        let z = if w.is_empty() {
            ZetaApprox {
                value: 1.0,
                terms_used: self.terms,
                tail_bound: 0.0,
            }
        } else {
            zeta_numeric(&composition_of_word(w)?, self.terms)?
        };
        self.cache.insert(*w, z);
        Ok(z)
    }

    /// `Σ_w c_w ζ(w)`; the tail bound is `Σ_w |c_w| · tail(w)`.
    pub fn residual(&mut self, p: &Poly) -> Result<Residual> {
        let mut value = Kahan::default();
        let mut bound = 0.0;
        for (w, c) in p.terms() {
            if !w.is_admissible() {
                return Err(Error::InadmissibleWord(w.to_string()));
            }
            let z = self.get(w)?;
            let c = c.to_f64();
            value.add(c * z.value);
            bound += c.abs() * z.tail_bound;
        }
        Ok(Residual {
            value: value.sum,
            tail_bound: bound,
            terms_used: self.terms,
        })
    }
}

/// Numerical value of `Z(P)` truncated at `terms`.
pub fn residual(p: &Poly, terms: u64) -> Result<Residual> {
    ZetaTable::new(terms).residual(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{one_minus_tau, partial};

    const PI2_6: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

    fn p(s: &str) -> Poly {
        Poly::from(s.parse::<Word>().unwrap())
    }

    #[test]
    fn zeta_two() {
        let z = zeta_numeric(&[2], 1_000_000).unwrap();
        let err = PI2_6 - z.value;
        assert!(err > 0.0 && err <= z.tail_bound, "err {err} bound {}", z.tail_bound);
        assert!((z.value - 1.644_934).abs() < 2e-6);
    }

    #[test]
    fn depth_one_is_a_single_sum() {
        let n = 10_000u64;
        for k in 2..6 {
            let direct: f64 = (1..=n).rev().map(|m| 1.0 / (m as f64).powi(k as i32)).sum();
            let z = zeta_numeric(&[k], n).unwrap();
            assert!((z.value - direct).abs() <= 1e-14 * direct);
        }
    }

    #[test]
    fn euler_identity() {
        let z3 = zeta_numeric(&[3], 1_000_000).unwrap();
        let z21 = zeta_numeric(&[2, 1], 1_000_000).unwrap();
        assert!((z3.value - z21.value).abs() < 1e-4);
        let r = residual(&partial(1, &p("xy")).unwrap(), 1_000_000).unwrap();
        assert!(r.value.abs() < 1e-4);
        assert!(r.value.abs() <= r.tail_bound);
    }

    #[test]
    fn small_cases_by_enumeration() {
        // literal nested loops as an independent check
        let n = 60u64;
        let mut brute = 0.0;
        for a in 1..=n {
            for b in 1..a {
                for c in 1..b {
                    brute += 1.0 / ((a * a) as f64 * (b * b * b) as f64 * c as f64);
                }
            }
        }
        let z = zeta_numeric(&[2, 3, 1], n).unwrap();
        assert!((z.value - brute).abs() < 1e-14);
    }

    #[test]
    fn errors_and_edge_cases() {
        assert!(zeta_numeric(&[1, 2], 100).is_err());
        assert!(zeta_numeric(&[], 100).is_err());
        assert!(zeta_numeric(&[2, 1, 1], 2).is_err());
        assert_eq!(residual(&Poly::zero(), 100).unwrap().value, 0.0);
        assert!(residual(&p("yxy"), 100).is_err());
        assert_eq!(residual(&Poly::one(), 100).unwrap().value, 1.0);
    }

    #[test]
    fn monotone_in_truncation() {
        let mut last = 0.0;
        for m in [10u64, 100, 1000, 10_000] {
            let v = zeta_numeric(&[2, 1, 1], m).unwrap().value;
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn duality_zeta_four_within_tail() {
        // zeta(4) = zeta(2,1,1); the truncated depth-3 sum lags by about 1.2e-4
        let r = residual(&one_minus_tau(&p("xxxy")), 1_000_000).unwrap();
        assert!(r.value.abs() <= r.tail_bound, "{r:?}");
        assert!(r.value.abs() < 2e-4, "{r:?}");
    }
}
