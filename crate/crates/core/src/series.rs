//! Weight-graded truncations of elements of the completion of `Q<x, y>`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::operators::{self, theta_upto};
use crate::poly::Poly;
use crate::rat::Rat;

/// Homogeneous components of weight `0..=cutoff`.
///
/// Every stored part is nonzero and homogeneous of its key weight. Weights
/// above the cutoff are never materialized.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSeries {
    cutoff: u32,
    parts: BTreeMap<u32, Poly>,
}

impl GradedSeries {
    pub fn zero(cutoff: u32) -> GradedSeries {
        GradedSeries {
            cutoff,
            parts: BTreeMap::new(),
        }
    }

    pub fn one(cutoff: u32) -> GradedSeries {
        GradedSeries::from_poly(&Poly::one(), cutoff)
    }

    /// Splits a polynomial into homogeneous parts, dropping weights above `cutoff`.
    pub fn from_poly(p: &Poly, cutoff: u32) -> GradedSeries {
        let mut s = GradedSeries::zero(cutoff);
        for (w, c) in p.terms() {
            if w.weight() <= cutoff {
                s.parts.entry(w.weight()).or_default().add_term(*w, c);
            }
        }
        s.parts.retain(|_, p| !p.is_zero());
        s
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn part(&self, k: u32) -> Poly {
        self.parts.get(&k).cloned().unwrap_or_default()
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.parts.iter().map(|(k, p)| (*k, p))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// All components summed into one polynomial.
    pub fn to_poly(&self) -> Poly {
        let mut out = Poly::zero();
        for p in self.parts.values() {
            out.add_assign(p);
        }
        out
    }

    fn add_part(&mut self, k: u32, p: &Poly) {
        if k > self.cutoff || p.is_zero() {
            return;
        }
        let e = self.parts.entry(k).or_default();
        e.add_assign(p);
        if e.is_zero() {
            self.parts.remove(&k);
        }
    }

    fn check(&self, other: &GradedSeries) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, other.cutoff));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, p) in &other.parts {
            out.add_part(*k, p);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedSeries {
        self.map_parts(|p| -p)
    }

    pub fn scale(&self, c: &Rat) -> GradedSeries {
        self.map_parts(|p| p.scale(c))
    }

    /// Applies a weight-preserving linear map to every component.
    pub fn map_parts<F: FnMut(&Poly) -> Poly>(&self, mut f: F) -> GradedSeries {
        let mut out = GradedSeries::zero(self.cutoff);
        for (k, p) in &self.parts {
            out.add_part(*k, &f(p));
        }
        out
    }

    /// Cauchy product: the weight-`k` part is `Σ_{i+j=k} A_i B_j`.
    pub fn mul(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check(other)?;
        let mut out = GradedSeries::zero(self.cutoff);
        for (i, a) in &self.parts {
            for (j, b) in &other.parts {
                if i + j <= self.cutoff {
                    out.add_part(i + j, &(a * b));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> GradedSeries {
        (0..e).fold(GradedSeries::one(self.cutoff), |acc, _| {
            acc.mul(self).expect("same cutoff")
        })
    }

    /// Component-wise duality `tau`.
    pub fn tau(&self) -> GradedSeries {
        self.map_parts(operators::tau)
    }

    /// `(1 - tau)` component-wise.
    pub fn one_minus_tau(&self) -> GradedSeries {
        self.map_parts(operators::one_minus_tau)
    }

    /// `θ_l` applied to each component; the result is shifted up by `l`.
    pub fn theta(&self, l: u32) -> GradedSeries {
        let mut out = GradedSeries::zero(self.cutoff);
        for (k, p) in &self.parts {
            if k + l <= self.cutoff {
                out.add_part(k + l, &operators::theta(l, p));
            }
        }
        out
    }
}

/// `1 + P + P^2 + ...` truncated at weight `cutoff`.
pub fn geom(p: &Poly, cutoff: u32) -> Result<GradedSeries> {
    if p.min_weight() == Some(0) {
        return Err(Error::ConstantTerm);
    }
    let step = GradedSeries::from_poly(p, cutoff);
    let mut out = GradedSeries::one(cutoff);
    let mut power = GradedSeries::one(cutoff);
    loop {
        power = power.mul(&step)?;
        if power.is_zero() {
            return Ok(out);
        }
        out = out.add(&power)?;
    }
}

/// `Θ(S)`: the weight-`k` part is `Σ_{i+l=k} θ_l(S_i)`.
pub fn apply_theta_series(s: &GradedSeries) -> GradedSeries {
    let mut out = GradedSeries::zero(s.cutoff);
    for (i, p) in &s.parts {
        let thetas = theta_upto(s.cutoff - i, p);
        for (l, t) in thetas.iter().enumerate() {
            out.add_part(i + l as u32, t);
        }
    }
    out
}

/// `(Θ - 1)(S)`.
pub fn apply_theta_minus_one(s: &GradedSeries) -> GradedSeries {
    apply_theta_series(s).sub(s).expect("same cutoff")
}
