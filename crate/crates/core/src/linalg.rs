//! Exact rank and span membership for relations of one weight.
//!
//! Every relation is coordinatized in `basis(k)` and scaled to a primitive
//! integer vector. Rows are then reduced fraction-free against an echelon
//! of primitive pivot rows, pivoting on the first nonzero column; after each
//! elimination step the row is divided by its content. Arithmetic starts in
//! checked `i64` and the whole echelon is promoted to `BigInt` on the first
//! overflow, so results are always exact.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::word::basis_index;

/// Sparse integer vector, sorted by column, no zero entries.
pub type SparseRow<C> = Vec<(u32, C)>;

/// Returned when an elimination runs past its deadline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded;

impl std::fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("time budget exceeded")
    }
}

impl std::error::Error for BudgetExceeded {}

/// Relations of a fixed weight `k` as primitive integer rows over `basis(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    weight: u32,
    rows: Vec<SparseRow<BigInt>>,
}

impl RelationMatrix {
    pub fn new(weight: u32) -> RelationMatrix {
        RelationMatrix {
            weight,
            rows: Vec::new(),
        }
    }

    /// Coordinatizes homogeneous weight-`k` elements of `x Q<x,y> y`.
    pub fn from_polys(weight: u32, polys: &[Poly]) -> Result<RelationMatrix> {
        let mut m = RelationMatrix::new(weight);
        for p in polys {
            m.push(p)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, p: &Poly) -> Result<()> {
        let row = coordinates(self.weight, p)?;
        self.rows.push(row);
        Ok(())
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Dimension of every row, `2^{k-2}`.
    pub fn columns(&self) -> usize {
        1usize << (self.weight.saturating_sub(2))
    }

    pub fn rows(&self) -> &[SparseRow<BigInt>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn union(&self, other: &RelationMatrix) -> Result<RelationMatrix> {
        check_same_weight(self.weight, other.weight)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(RelationMatrix {
            weight: self.weight,
            rows,
        })
    }
}

fn check_same_weight(expected: u32, found: u32) -> Result<()> {
    if expected != found {
        return Err(Error::WeightMismatch { expected, found });
    }
    Ok(())
}

/// Primitive integer coordinate vector of `p` in `basis(weight)`.
pub fn coordinates(weight: u32, p: &Poly) -> Result<SparseRow<BigInt>> {
    let mut lcm = BigInt::one();
    for (w, c) in p.terms() {
        if w.weight() != weight {
            return Err(Error::WeightMismatch {
                expected: weight,
                found: w.weight(),
            });
        }
        if !w.is_admissible() {
            return Err(Error::InadmissibleWord(w.to_string()));
        }
        lcm = lcm.lcm(c.denom());
    }
    let mut row: SparseRow<BigInt> = p
        .terms()
        .map(|(w, c)| {
            let idx = basis_index(w).expect("admissible word of weight >= 2") as u32;
            (idx, c.numer() * (&lcm / c.denom()))
        })
        .collect();
    row.sort_by_key(|(i, _)| *i);
    make_primitive(&mut row);
    Ok(row)
}

/// Integer arithmetic used by the elimination. `None` signals overflow.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn negate(&self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn exact_div(&self, d: &Self) -> Self;
    fn scaled(&self, s: &Self) -> Option<Self>;
    /// `a * s - b * t`.
    fn mul_sub(a: &Self, s: &Self, b: &Self, t: &Self) -> Option<Self>;
    fn is_unit(&self) -> bool;
}

/// Magnitudes are kept below this so negation and `gcd` never overflow.
const SMALL_LIMIT: i64 = i64::MAX / 2;

impl Coeff for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negate(&self) -> Option<i64> {
        self.checked_neg()
    }
    fn gcd(&self, other: &i64) -> i64 {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, d: &i64) -> i64 {
        self / d
    }
    fn scaled(&self, s: &i64) -> Option<i64> {
        let v = self.checked_mul(*s)?;
        (v.abs() < SMALL_LIMIT).then_some(v)
    }
    fn mul_sub(a: &i64, s: &i64, b: &i64, t: &i64) -> Option<i64> {
        let v = a.checked_mul(*s)?.checked_sub(b.checked_mul(*t)?)?;
        (v.abs() < SMALL_LIMIT).then_some(v)
    }
    fn is_unit(&self) -> bool {
        self.abs() == 1
    }
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negate(&self) -> Option<BigInt> {
        Some(-self)
    }
    fn gcd(&self, other: &BigInt) -> BigInt {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, d: &BigInt) -> BigInt {
        self / d
    }
    fn scaled(&self, s: &BigInt) -> Option<BigInt> {
        Some(self * s)
    }
    fn mul_sub(a: &BigInt, s: &BigInt, b: &BigInt, t: &BigInt) -> Option<BigInt> {
        Some(a * s - b * t)
    }
    fn is_unit(&self) -> bool {
        Signed::abs(self).is_one()
    }
}

fn make_primitive<C: Coeff>(row: &mut SparseRow<C>) {
    let Some((_, first)) = row.first() else {
        return;
    };
    let mut g = first.clone();
    for (_, c) in row.iter().skip(1) {
        if g.is_unit() {
            break;
        }
        g = g.gcd(c);
    }
    if g.is_negative() {
        g = g.negate().expect("gcd magnitude is bounded");
    }
    if !g.is_unit() {
        for (_, c) in row.iter_mut() {
            *c = c.exact_div(&g);
        }
    }
}

#[derive(Debug)]
struct Overflow;

/// `row * (p_lead/g) - pivot * (r_lead/g)`, cancelling the leading entry.
fn eliminate<C: Coeff>(row: &SparseRow<C>, pivot: &SparseRow<C>) -> std::result::Result<SparseRow<C>, Overflow> {
    let r_lead = &row[0].1;
    let p_lead = &pivot[0].1;
    let g = r_lead.gcd(p_lead);
    let s = p_lead.exact_div(&g);
    let t = r_lead.exact_div(&g);
    let neg_t = t.negate().ok_or(Overflow)?;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(u32::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(u32::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, row[i - 1].1.scaled(&s))
        } else if cj < ci {
            j += 1;
            (cj, pivot[j - 1].1.scaled(&neg_t))
        } else {
            i += 1;
            j += 1;
            (ci, C::mul_sub(&row[i - 1].1, &s, &pivot[j - 1].1, &t))
        };
        let v = v.ok_or(Overflow)?;
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    make_primitive(&mut out);
    Ok(out)
}

/// Forward-reduced echelon keyed by pivot column.
#[derive(Debug, Clone)]
struct EchelonCore<C> {
    pivots: BTreeMap<u32, SparseRow<C>>,
}

impl<C: Coeff> EchelonCore<C> {
    fn new() -> Self {
        EchelonCore {
            pivots: BTreeMap::new(),
        }
    }

    fn reduce(&self, mut row: SparseRow<C>) -> std::result::Result<SparseRow<C>, Overflow> {
        while let Some((lead, _)) = row.first() {
            match self.pivots.get(lead) {
                Some(p) => row = eliminate(&row, p)?,
                None => break,
            }
        }
        Ok(row)
    }

    fn insert(&mut self, row: SparseRow<C>) -> std::result::Result<bool, Overflow> {
        let mut r = self.reduce(row)?;
        if r.is_empty() {
            return Ok(false);
        }
        if r[0].1.is_negative() {
            for (_, c) in r.iter_mut() {
                *c = c.negate().ok_or(Overflow)?;
            }
        }
        self.pivots.insert(r[0].0, r);
        Ok(true)
    }
}

#[derive(Debug, Clone)]
enum Store {
    Small(EchelonCore<i64>),
    Big(EchelonCore<BigInt>),
}

fn to_small(row: &SparseRow<BigInt>) -> Option<SparseRow<i64>> {
    row.iter()
        .map(|(i, c)| c.to_i64().filter(|v| v.abs() < SMALL_LIMIT).map(|v| (*i, v)))
        .collect()
}

fn to_big(row: &SparseRow<i64>) -> SparseRow<BigInt> {
    row.iter().map(|(i, c)| (*i, BigInt::from(*c))).collect()
}

/// Incremental row echelon form over `Q` for one weight.
///
/// Rank queries and span-membership tests reuse the same echelon, so a
/// family's span is reduced once and then queried many times.
#[derive(Debug, Clone)]
pub struct Echelon {
    weight: u32,
    store: Store,
}

impl Echelon {
    pub fn new(weight: u32) -> Echelon {
        Echelon {
            weight,
            store: Store::Small(EchelonCore::new()),
        }
    }

    /// Echelon of all rows of `m`.
    pub fn from_matrix(m: &RelationMatrix) -> Echelon {
        Echelon::from_matrix_until(m, None).expect("no deadline")
    }

    pub fn from_matrix_until(
        m: &RelationMatrix,
        deadline: Option<Instant>,
    ) -> std::result::Result<Echelon, BudgetExceeded> {
        let mut e = Echelon::new(m.weight);
        e.extend_until(m, deadline)?;
        Ok(e)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn rank(&self) -> usize {
        match &self.store {
            Store::Small(c) => c.pivots.len(),
            Store::Big(c) => c.pivots.len(),
        }
    }

    /// True once the elimination has left the `i64` fast path.
    pub fn is_promoted(&self) -> bool {
        matches!(self.store, Store::Big(_))
    }

    fn promote(&mut self) {
        if let Store::Small(c) = &self.store {
            let pivots = c.pivots.iter().map(|(k, r)| (*k, to_big(r))).collect();
            self.store = Store::Big(EchelonCore { pivots });
        }
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert_row(&mut self, row: &SparseRow<BigInt>) -> bool {
        if let Store::Small(c) = &mut self.store {
            if let Some(small) = to_small(row) {
                if let Ok(added) = c.insert(small) {
                    return added;
                }
            }
            self.promote();
        }
        match &mut self.store {
            Store::Big(c) => c.insert(row.clone()).expect("BigInt never overflows"),
            Store::Small(_) => unreachable!("promoted above"),
        }
    }

    /// Inserts all rows of `m`, sparsest first.
    pub fn extend_until(
        &mut self,
        m: &RelationMatrix,
        deadline: Option<Instant>,
    ) -> std::result::Result<(), BudgetExceeded> {
        check_same_weight(self.weight, m.weight).expect("echelon and matrix weights agree");
        let mut order: Vec<&SparseRow<BigInt>> = m.rows.iter().filter(|r| !r.is_empty()).collect();
        order.sort_by_key(|r| (r.len(), r[0].0));
        for row in order {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Err(BudgetExceeded);
                }
            }
            self.insert_row(row);
        }
        Ok(())
    }

    pub fn extend(&mut self, m: &RelationMatrix) -> Result<()> {
        check_same_weight(self.weight, m.weight)?;
        self.extend_until(m, None).expect("no deadline");
        Ok(())
    }

    /// Whether a homogeneous weight-`k` element lies in the span.
    pub fn contains(&self, v: &Poly) -> Result<bool> {
        if v.is_zero() {
            return Ok(true);
        }
        let row = coordinates(self.weight, v)?;
        self.contains_row(&row)
    }

    fn contains_row(&self, row: &SparseRow<BigInt>) -> Result<bool> {
        if let Store::Small(c) = &self.store {
            if let Some(small) = to_small(row) {
                if let Ok(r) = c.reduce(small) {
                    return Ok(r.is_empty());
                }
            }
            let mut big = self.clone();
            big.promote();
            return big.contains_row(row);
        }
        match &self.store {
            Store::Big(c) => Ok(c.reduce(row.clone()).expect("BigInt never overflows").is_empty()),
            Store::Small(_) => unreachable!(),
        }
    }
}

/// Exact rank over `Q`.
pub fn rank(m: &RelationMatrix) -> usize {
    Echelon::from_matrix(m).rank()
}

/// Whether `v` is a rational combination of the rows of `m`.
pub fn in_span(v: &Poly, m: &RelationMatrix) -> Result<bool> {
    if let Some(w) = v.terms().map(|(w, _)| w.weight()).find(|w| *w != m.weight) {
        return Err(Error::WeightMismatch {
            expected: m.weight,
            found: w,
        });
    }
    Echelon::from_matrix(m).contains(v)
}

/// `rank(A) + rank(B) - rank(A ∪ B)`.
pub fn dim_intersection(a: &RelationMatrix, b: &RelationMatrix) -> Result<usize> {
    check_same_weight(a.weight, b.weight)?;
    let ea = Echelon::from_matrix(a);
    let rb = rank(b);
    let mut union = ea.clone();
    union.extend(b)?;
    Ok(ea.rank() + rb - union.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{derivation_all, duality_all};
    use crate::word::Word;

    fn p(s: &str) -> Poly {
        Poly::from(s.parse::<Word>().unwrap())
    }

    #[test]
    fn empty_rank() {
        assert_eq!(rank(&RelationMatrix::new(5)), 0);
    }

    #[test]
    fn small_spans() {
        let der3 = RelationMatrix::from_polys(3, &derivation_all(3).unwrap()).unwrap();
        assert_eq!(rank(&der3), 1);
        assert!(in_span(&Poly::zero(), &der3).unwrap());
        assert!(in_span(&(&p("xyy") - &p("xxy")), &der3).unwrap());
        assert!(!in_span(&p("xxy"), &der3).unwrap());
        assert!(matches!(
            in_span(&p("xxxy"), &der3),
            Err(Error::WeightMismatch { .. })
        ));
    }

    #[test]
    fn coordinates_are_primitive() {
        let q = Poly::from_terms([
            ("xxy".parse().unwrap(), crate::Rat::new(2, 3)),
            ("xyy".parse().unwrap(), crate::Rat::new(-4, 9)),
        ]);
        let row = coordinates(3, &q).unwrap();
        assert_eq!(row, vec![(0, BigInt::from(3)), (1, BigInt::from(-2))]);
        assert!(coordinates(3, &p("yxy")).is_err());
    }

    #[test]
    fn intersection_examples() {
        let d = RelationMatrix::from_polys(3, &duality_all(3).unwrap()).unwrap();
        let r = RelationMatrix::from_polys(3, &derivation_all(3).unwrap()).unwrap();
        assert_eq!(dim_intersection(&d, &r).unwrap(), 1);
        assert_eq!(dim_intersection(&d, &d).unwrap(), rank(&d));
        let other = RelationMatrix::new(4);
        assert!(dim_intersection(&d, &other).is_err());
    }

    #[test]
    fn promotion_keeps_results_exact() {
        // rows with entries near the i64 limit force promotion
        let big = BigInt::from(i64::MAX / 3);
        let mut m = RelationMatrix::new(4);
        m.rows.push(vec![(0, big.clone()), (1, BigInt::from(1))]);
        m.rows.push(vec![(0, BigInt::from(1)), (1, big.clone())]);
        m.rows.push(vec![(0, big.clone() + 1), (1, big.clone() + 1)]);
        let e = Echelon::from_matrix(&m);
        assert_eq!(e.rank(), 2);
        assert!(e.is_promoted());
    }
}
