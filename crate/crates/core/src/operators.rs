//! Linear and (anti)automorphic operators on `Q<x, y>`: the duality `tau`,
//! the derivations `∂_n`, the homogeneous parts `θ_l` of
//! `Θ = exp(Σ ∂_n / n)`, and the substitution automorphism `Δ_u` with its
//! inverse.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::word::{Letter, Word, MAX_LEN};

/// Anti-automorphism with `x ↦ y`, `y ↦ x`: reverse each word, then swap letters.
pub fn tau(p: &Poly) -> Poly {
    p.map_words(tau_word)
}

#[inline]
pub fn tau_word(w: &Word) -> Word {
    w.reverse().swap_letters()
}

/// `(1 - tau)(p)`.
pub fn one_minus_tau(p: &Poly) -> Poly {
    p - &tau(p)
}

static LETTER_IMAGES: [OnceLock<Vec<Word>>; MAX_LEN] = [const { OnceLock::new() }; MAX_LEN];

/// The words of `x (x+y)^{n-1} y`, i.e. `∂_n(x)`. Computed once per `n`.
pub fn derivation_letter_image(n: u32) -> &'static [Word] {
    assert!(n >= 1 && (n as usize) < MAX_LEN, "derivation index out of range");
    LETTER_IMAGES[n as usize].get_or_init(|| {
        let inner = n as usize - 1;
        (0..1u64 << inner)
            .map(|mid| {
                Word::X
                    .concat(&Word::from_bits(mid, inner).expect("short word"))
                    .push(Letter::Y)
            })
            .collect()
    })
}

/// `∂_n` on a single word, with integer coefficients.
pub fn partial_word(n: u32, w: &Word) -> BTreeMap<Word, i64> {
    let mut out = BTreeMap::new();
    if n == 0 || w.is_empty() {
        return out;
    }
    let image = derivation_letter_image(n);
    let len = w.len();
    for i in 0..len {
        let sign = match w.letter(i) {
            Letter::X => 1,
            Letter::Y => -1,
        };
        let pre = w.prefix(i);
        let suf = w.suffix(len - i - 1);
        for v in image {
            let t = pre.concat(v).concat(&suf);
            let e = out.entry(t).or_insert(0);
            *e += sign;
            if *e == 0 {
                out.remove(&t);
            }
        }
    }
    out
}

/// The derivation `∂_n` with `∂_n(x) = -∂_n(y) = x (x+y)^{n-1} y`.
pub fn partial(n: u32, p: &Poly) -> Result<Poly> {
    if n == 0 {
        return Err(Error::NonPositiveIndex);
    }
    Ok(partial_unchecked(n, p))
}

fn partial_unchecked(n: u32, p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for (w, c) in p.terms() {
        for (t, k) in partial_word(n, w) {
            out.add_term(t, &(c * &Rat::from(k)));
        }
    }
    out
}

/// `θ_l(p)`, the weight-`l` part of `Θ` applied to `p`.
pub fn theta(l: u32, p: &Poly) -> Poly {
    theta_upto(l, p).pop().expect("non-empty")
}

/// `[θ_0(p), θ_1(p), ..., θ_max(p)]`.
///
/// Since the `∂_n` commute, `θ_l = Σ_λ ∂_{λ_1} ⋯ ∂_{λ_r} / z_λ` over the
/// partitions `λ` of `l`, where `z_λ = Π_j j^{m_j} m_j!`. Partitions are
/// walked depth first with non-increasing parts so each prefix of `∂`
/// applications is computed once.
pub fn theta_upto(max: u32, p: &Poly) -> Vec<Poly> {
    let mut acc = vec![Poly::zero(); max as usize + 1];
    acc[0] = p.clone();
    if max > 0 && !p.is_zero() {
        walk_partitions(p, max, max, 0, 0, 1, &Rat::one(), &mut acc);
    }
    acc
}

#[allow(clippy::too_many_arguments)]
fn walk_partitions(
    current: &Poly,
    max_part: u32,
    budget: u32,
    sum: u32,
    last: u32,
    last_mult: u64,
    z: &Rat,
    acc: &mut [Poly],
) {
    for q in (1..=max_part.min(budget)).rev() {
        let next = partial_unchecked(q, current);
        if next.is_zero() {
            continue;
        }
        let (mult, z_next) = if q == last {
            (last_mult + 1, z * &Rat::from((q as u64 * (last_mult + 1)) as i64))
        } else {
            (1, z * &Rat::from(q as i64))
        };
        let s = sum + q;
        acc[s as usize].add_scaled(&next, &z_next.recip());
        walk_partitions(&next, q, budget - q, s, q, mult, &z_next, acc);
    }
}

/// Element of `Q<x,y>[[u]]`, kept as a finite map from `u`-powers to
/// nonzero polynomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: BTreeMap<u32, Poly>,
}

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly::default()
    }

    /// `p · u^e`.
    pub fn from_poly(p: Poly, e: u32) -> UPoly {
        let mut out = UPoly::zero();
        out.add_poly(e, &p);
        out
    }

    pub fn one() -> UPoly {
        UPoly::from_poly(Poly::one(), 0)
    }

    pub fn coeff(&self, e: u32) -> Poly {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.coeffs.iter().map(|(e, p)| (*e, p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_poly(&mut self, e: u32, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_default();
        entry.add_assign(p);
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let mut out = self.clone();
        for (e, p) in &other.coeffs {
            out.add_poly(*e, p);
        }
        out
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|(e, p)| (*e, -p)).collect(),
        }
    }

    /// Product keeping only terms of word weight `<= k` and `u`-power `<= k`.
    pub fn mul_truncated(&self, other: &UPoly, k: u32) -> UPoly {
        let mut out = UPoly::zero();
        for (ea, pa) in &self.coeffs {
            for (eb, pb) in &other.coeffs {
                let e = ea + eb;
                if e > k {
                    continue;
                }
                out.add_poly(e, &pa.mul_truncated(pb, k));
            }
        }
        out
    }

    pub fn truncate(&self, k: u32) -> UPoly {
        let mut out = UPoly::zero();
        for (e, p) in &self.coeffs {
            if *e <= k {
                out.add_poly(*e, &p.truncate(k));
            }
        }
        out
    }
}

impl std::fmt::Debug for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

/// `Σ_{j=0}^{k} (p u)^j`, truncated at weight and `u`-power `k`.
fn geometric_u(p: &Poly, k: u32) -> UPoly {
    let step = UPoly::from_poly(p.clone(), 1);
    let mut out = UPoly::one();
    let mut power = UPoly::one();
    for _ in 0..k {
        power = power.mul_truncated(&step, k);
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

fn one_minus_xu_minus_yu() -> UPoly {
    let mut out = UPoly::one();
    out.add_poly(1, &-&(&Poly::x() + &Poly::y()));
    out
}

/// Images of `x` and `y` under `Δ_u`:
/// `x ↦ x · 1/(1 - yu)` and `y ↦ (1 - xu - yu) · y · 1/(1 - yu)`.
pub fn delta_u_generators(k: u32) -> (UPoly, UPoly) {
    let g = geometric_u(&Poly::y(), k);
    let x = UPoly::from_poly(Poly::x(), 0).mul_truncated(&g, k);
    let y = one_minus_xu_minus_yu()
        .mul_truncated(&UPoly::from_poly(Poly::y(), 0), k)
        .mul_truncated(&g, k);
    (x, y)
}

/// Images of `x` and `y` under `Δ_u^{-1}`:
/// `x ↦ x · 1/(1 - xu) · (1 - xu - yu)` and `y ↦ 1/(1 - xu) · y`.
pub fn delta_u_inv_generators(k: u32) -> (UPoly, UPoly) {
    let g = geometric_u(&Poly::x(), k);
    let x = UPoly::from_poly(Poly::x(), 0)
        .mul_truncated(&g, k)
        .mul_truncated(&one_minus_xu_minus_yu(), k);
    let y = g.mul_truncated(&UPoly::from_poly(Poly::y(), 0), k);
    (x, y)
}

/// Algebra substitution `x ↦ img_x`, `y ↦ img_y` (`u` fixed), truncated at `k`.
pub fn substitute(p: &UPoly, img_x: &UPoly, img_y: &UPoly, k: u32) -> UPoly {
    let mut out = UPoly::zero();
    for (e, poly) in p.coeffs() {
        for (w, c) in poly.terms() {
            let mut image = UPoly::from_poly(Poly::monomial(Word::EMPTY, c.clone()), e);
            for l in w.letters() {
                let factor = match l {
                    Letter::X => img_x,
                    Letter::Y => img_y,
                };
                image = image.mul_truncated(factor, k);
                if image.is_zero() {
                    break;
                }
            }
            out = out.add(&image);
        }
    }
    out
}

fn check_cutoff(p: &Poly, k: u32) -> Result<()> {
    match p.max_weight() {
        Some(w) if w > k => Err(Error::CutoffTooSmall { cutoff: k, needed: w }),
        _ => Ok(()),
    }
}

/// `Δ_u(p)` truncated at word weight `k` and `u`-power `k`.
pub fn delta_u(p: &Poly, k: u32) -> Result<UPoly> {
    check_cutoff(p, k)?;
    let (gx, gy) = delta_u_generators(k);
    Ok(substitute(&UPoly::from_poly(p.clone(), 0), &gx, &gy, k))
}

/// `Δ_u^{-1}(p)` truncated at word weight `k` and `u`-power `k`.
pub fn delta_u_inv(p: &Poly, k: u32) -> Result<UPoly> {
    check_cutoff(p, k)?;
    let (gx, gy) = delta_u_inv_generators(k);
    Ok(substitute(&UPoly::from_poly(p.clone(), 0), &gx, &gy, k))
}

/// `Δ_u` applied to an element that already depends on `u`.
pub fn delta_u_of(p: &UPoly, k: u32) -> UPoly {
    let (gx, gy) = delta_u_generators(k);
    substitute(p, &gx, &gy, k)
}

/// `Δ_u^{-1}` applied to an element that already depends on `u`.
pub fn delta_u_inv_of(p: &UPoly, k: u32) -> UPoly {
    let (gx, gy) = delta_u_inv_generators(k);
    substitute(p, &gx, &gy, k)
}
