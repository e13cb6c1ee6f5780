//! Independent reference implementations: words as strings, dense rational
//! elimination, brute-force enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use mzv_core::linalg::{rank, RelationMatrix};
use mzv_core::operators::{partial, theta};
use mzv_core::relations::{duality_all, Family};
use mzv_core::zeta::{residual, zeta_numeric};
use mzv_core::{Poly, Word};

type SPoly = BTreeMap<String, BigRational>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn all_words(len: usize) -> Vec<String> {
    (0..1u32 << len)
        .map(|b| {
            (0..len)
                .map(|i| if b >> (len - 1 - i) & 1 == 1 { 'y' } else { 'x' })
                .collect()
        })
        .collect()
}

fn to_spoly(p: &Poly) -> SPoly {
    p.terms()
        .map(|(w, c)| {
            let s = if w.is_empty() { String::new() } else { w.to_string() };
            (s, BigRational::new(c.numer().clone(), c.denom().clone()))
        })
        .collect()
}

fn add_into(acc: &mut SPoly, w: String, c: BigRational) {
    let e = acc.entry(w.clone()).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&w);
    }
}

/// `x (x+y)^{n-1} y` expanded letter by letter.
fn letter_image(n: usize) -> Vec<String> {
    all_words(n - 1).into_iter().map(|mid| format!("x{mid}y")).collect()
}

fn d_string(n: usize, p: &SPoly) -> SPoly {
    let mut out = SPoly::new();
    for (w, c) in p {
        for (i, ch) in w.char_indices() {
            let sign = if ch == 'x' { q(1, 1) } else { q(-1, 1) };
            for img in letter_image(n) {
                let t = format!("{}{}{}", &w[..i], img, &w[i + 1..]);
                add_into(&mut out, t, c * &sign);
            }
        }
    }
    out
}

fn lin(parts: &[(BigRational, SPoly)]) -> SPoly {
    let mut out = SPoly::new();
    for (c, p) in parts {
        for (w, v) in p {
            add_into(&mut out, w.clone(), c * v);
        }
    }
    out
}

fn dense_rank(polys: &[Poly]) -> usize {
    let mut cols: BTreeMap<String, usize> = BTreeMap::new();
    let rows: Vec<SPoly> = polys.iter().map(to_spoly).collect();
    for r in &rows {
        for w in r.keys() {
            let n = cols.len();
            cols.entry(w.clone()).or_insert(n);
        }
    }
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); cols.len()];
            for (w, c) in r {
                v[cols[w]] = c.clone();
            }
            v
        })
        .collect();
    let mut r = 0;
    for c in 0..cols.len() {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = &row[c] / &pivot;
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x -= p * &f;
                }
            }
        }
        r += 1;
    }
    r
}

fn self_dual_count(k: usize) -> usize {
    all_words(k)
        .into_iter()
        .filter(|w| w.starts_with('x') && w.ends_with('y'))
        .filter(|w| {
            let dual: String = w.chars().rev().map(|c| if c == 'x' { 'y' } else { 'x' }).collect();
            &dual == w
        })
        .count()
}

#[test]
fn sparse_rank_agrees_with_dense_rank() {
    let families = ["duality", "derivation", "duality-ht", "duality-k1", "union:duality,derivation", "union:derivation,duality-k1"];
    for k in 3..=9 {
        for f in families {
            let polys = f.parse::<Family>().unwrap().generate(k).unwrap();
            let sparse = rank(&RelationMatrix::from_polys(k, &polys).unwrap());
            assert_eq!(sparse, dense_rank(&polys), "{f} at weight {k}");
        }
    }
}

#[test]
fn duality_rank_from_self_dual_words() {
    for k in 3..=12u32 {
        let f = self_dual_count(k as usize);
        let expected = ((1usize << (k - 2)) - f) / 2;
        let m = RelationMatrix::from_polys(k, &duality_all(k).unwrap()).unwrap();
        assert_eq!(rank(&m), expected, "weight {k}");
    }
}

#[test]
fn self_dual_counts_of_small_weights() {
    // xy|xy, xxyy, xyxy
    assert_eq!(self_dual_count(2), 1);
    assert_eq!(self_dual_count(3), 0);
    assert_eq!(self_dual_count(4), 2);
    assert_eq!(self_dual_count(6), 4);
}

#[test]
fn derivations_match_string_expansion() {
    for len in 0..=5 {
        for w in all_words(len) {
            let word: Word = if w.is_empty() { Word::EMPTY } else { w.parse().unwrap() };
            let p = Poly::from(word);
            for n in 1..=4 {
                let expected = d_string(n, &to_spoly(&p));
                assert_eq!(to_spoly(&partial(n as u32, &p).unwrap()), expected, "d{n}({w})");
            }
        }
    }
}

#[test]
fn theta_matches_low_degree_formulas() {
    for len in 0..=4 {
        for w in all_words(len) {
            let word: Word = if w.is_empty() { Word::EMPTY } else { w.parse().unwrap() };
            let p = Poly::from(word);
            let s = to_spoly(&p);
            let d1 = d_string(1, &s);
            let d11 = d_string(1, &d1);
            let d2 = d_string(2, &s);
            let t1 = d1.clone();
            let t2 = lin(&[(q(1, 2), d2.clone()), (q(1, 2), d11.clone())]);
            let t3 = lin(&[
                (q(1, 3), d_string(3, &s)),
                (q(1, 2), d_string(2, &d1)),
                (q(1, 6), d_string(1, &d11)),
            ]);
            assert_eq!(to_spoly(&theta(1, &p)), t1, "{w}");
            assert_eq!(to_spoly(&theta(2, &p)), t2, "{w}");
            assert_eq!(to_spoly(&theta(3, &p)), t3, "{w}");
        }
    }
}

#[test]
fn truncated_sums_against_closed_forms() {
    let pi2 = std::f64::consts::PI.powi(2);
    for (ks, exact) in [(vec![2], pi2 / 6.0), (vec![4], pi2 * pi2 / 90.0), (vec![3, 1], pi2 * pi2 / 360.0)] {
        let z = zeta_numeric(&ks, 200_000).unwrap();
        let err = exact - z.value;
        assert!(err >= 0.0 && err <= z.tail_bound, "{ks:?}: err {err} bound {}", z.tail_bound);
    }
}

#[test]
fn relation_residuals_within_tail_bound() {
    for k in 3..=6 {
        for f in ["duality", "derivation"] {
            for p in f.parse::<Family>().unwrap().generate(k).unwrap() {
                let r = residual(&p, 100_000).unwrap();
                assert!(r.value.abs() <= r.tail_bound, "{p}: {r:?}");
            }
        }
    }
}
