//! Executable checks: the two generating-function identities relating
//! `(1 - tau)` to `Θ`, membership of duality elements in the derivation
//! span, the scan over `(1 - tau)(x^{m-1} y (1/(1-x) y)^{n-1})`, and the
//! table of ranks of relation spans.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{BudgetExceeded, Echelon, RelationMatrix};
use crate::operators::one_minus_tau;
use crate::poly::Poly;
use crate::relations::{self, derivation_all, k1_depth_sum, Family};
use crate::series::{apply_theta_minus_one, geom, GradedSeries};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualTerm {
    pub word: String,
    pub coeff: String,
}

/// Outcome of one check. `verdict` is true exactly when the claim holds;
/// for identities `residual_terms` is the nonzero difference of both sides,
/// for membership failures it is the element that was not in the span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub claim: String,
    pub params: BTreeMap<String, u32>,
    pub cutoff: Option<u32>,
    pub verdict: bool,
    pub residual_terms: Vec<ResidualTerm>,
    pub elapsed_ms: u64,
}

impl VerdictReport {
    fn new(claim: &str, params: &[(&str, u32)], cutoff: Option<u32>, witness: &Poly, verdict: bool, start: Instant) -> Self {
        VerdictReport {
            claim: claim.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            cutoff,
            verdict,
            residual_terms: if verdict { Vec::new() } else { residual_terms(witness) },
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }
}

fn residual_terms(p: &Poly) -> Vec<ResidualTerm> {
    p.terms()
        .map(|(w, c)| ResidualTerm {
            word: w.to_string(),
            coeff: c.to_string(),
        })
        .collect()
}

fn word_series(w: Word, k: u32) -> GradedSeries {
    GradedSeries::from_poly(&Poly::from(w), k)
}

fn mul(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    a.mul(b).expect("shared cutoff")
}

fn sub(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    a.sub(b).expect("shared cutoff")
}

fn add(a: &GradedSeries, b: &GradedSeries) -> GradedSeries {
    a.add(b).expect("shared cutoff")
}

/// `(x · 1/(1-y))^e · x y`.
fn x_geom_y_pow_xy(e: u32, k: u32) -> GradedSeries {
    let x_gy = mul(&word_series(Word::X, k), &geom(&Poly::y(), k).expect("no constant term"));
    mul(&x_gy.pow(e), &word_series("xy".parse().expect("literal"), k))
}

/// `1 - 1/(1-x) · y`.
fn one_minus_geom_x_y(k: u32) -> GradedSeries {
    let gx_y = mul(&geom(&Poly::x(), k).expect("no constant term"), &word_series(Word::Y, k));
    sub(&GradedSeries::one(k), &gx_y)
}

/// Difference of the two sides of
/// `(1-τ)(x^m y 1/(1-x) y) = (Θ-1)(x^m y (1 - 1/(1-x) y))
///     - Σ_{i=1}^{m-1} θ_i(x^{m-i} y + (x 1/(1-y))^{m-i} xy - (x 1/(1-y))^{m-i-1} xy)`
/// up to weight `cutoff`.
pub fn theorem_i_residual(m: u32, cutoff: u32) -> Result<GradedSeries> {
    if m == 0 {
        return Err(Error::InvalidParameters("m must be positive".into()));
    }
    if cutoff < m + 2 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            needed: m + 2,
        });
    }
    let k = cutoff;
    let xm_y = word_series(Word::x_pow(m as usize).push(Letter::Y), k);
    let gx = geom(&Poly::x(), k)?;
    let y = word_series(Word::Y, k);

    let lhs = mul(&mul(&xm_y, &gx), &y).one_minus_tau();

    let mut rhs = apply_theta_minus_one(&mul(&xm_y, &one_minus_geom_x_y(k)));
    for i in 1..m {
        let a = word_series(Word::x_pow((m - i) as usize).push(Letter::Y), k);
        let b = x_geom_y_pow_xy(m - i, k);
        let c = x_geom_y_pow_xy(m - i - 1, k);
        let arg = sub(&add(&a, &b), &c);
        rhs = sub(&rhs, &arg.theta(i));
    }
    Ok(sub(&lhs, &rhs))
}

/// `x (1 + x + ... + x^{j-1}) y (1 - 1/(1-x) y)`; zero when `j = 0`.
fn finite_geom_term(j: u32, k: u32) -> GradedSeries {
    let head = Poly::sum_of_words((1..=j as usize).map(|e| Word::x_pow(e).push(Letter::Y)));
    mul(&GradedSeries::from_poly(&head, k), &one_minus_geom_x_y(k))
}

/// Difference of the two sides of
/// `(1-τ)(xy (1/(1-x) y)^{n-1}) = (Θ-1)(x (1-x^{n-1})/(1-x) y (1 - 1/(1-x) y))
///     - Σ_{l=1}^{n-2} θ_l(x (1-x^{n-l-1})/(1-x) y (1 - 1/(1-x) y))`
/// up to weight `cutoff`.
pub fn theorem_ii_residual(n: u32, cutoff: u32) -> Result<GradedSeries> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    if cutoff < n + 1 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            needed: n + 1,
        });
    }
    let k = cutoff;
    let gx_y = mul(&geom(&Poly::x(), k)?, &word_series(Word::Y, k));
    let xy = word_series("xy".parse().expect("literal"), k);
    let lhs = mul(&xy, &gx_y.pow(n - 1)).one_minus_tau();

    let mut rhs = apply_theta_minus_one(&finite_geom_term(n - 1, k));
    for l in 1..n.saturating_sub(1) {
        rhs = sub(&rhs, &finite_geom_term(n - l - 1, k).theta(l));
    }
    Ok(sub(&lhs, &rhs))
}

pub fn verify_theorem_i(m: u32, cutoff: u32) -> Result<VerdictReport> {
    let start = Instant::now();
    let r = theorem_i_residual(m, cutoff)?.to_poly();
    Ok(VerdictReport::new("theorem-i", &[("m", m)], Some(cutoff), &r, r.is_zero(), start))
}

pub fn verify_theorem_ii(n: u32, cutoff: u32) -> Result<VerdictReport> {
    let start = Instant::now();
    let r = theorem_ii_residual(n, cutoff)?.to_poly();
    Ok(VerdictReport::new("theorem-ii", &[("n", n)], Some(cutoff), &r, r.is_zero(), start))
}

/// Echelon forms of the derivation span, built once per weight.
#[derive(Default)]
pub struct DerivationSpans {
    spans: HashMap<u32, Echelon>,
}

impl DerivationSpans {
    pub fn new() -> DerivationSpans {
        DerivationSpans::default()
    }

    /// Builds the spans for several weights in parallel.
    pub fn prepare(&mut self, weights: impl IntoIterator<Item = u32>) -> Result<()> {
        let missing: Vec<u32> = weights
            .into_iter()
            .filter(|k| !self.spans.contains_key(k))
            .collect();
        let built: Vec<(u32, Echelon)> = missing
            .into_par_iter()
            .map(|k| derivation_echelon(k).map(|e| (k, e)))
            .collect::<Result<_>>()?;
        self.spans.extend(built);
        Ok(())
    }

    pub fn get(&mut self, k: u32) -> Result<&Echelon> {
        match self.spans.entry(k) {
            Entry::Occupied(e) => Ok(e.into_mut()),
            Entry::Vacant(v) => Ok(v.insert(derivation_echelon(k)?)),
        }
    }

    /// Membership of a homogeneous weight-`k` element; zero is always a member.
    pub fn contains(&mut self, v: &Poly) -> Result<bool> {
        let Some(k) = v.max_weight() else {
            return Ok(true);
        };
        self.get(k)?.contains(v)
    }
}

fn derivation_echelon(k: u32) -> Result<Echelon> {
    let m = RelationMatrix::from_polys(k, &derivation_all(k)?)?;
    Ok(Echelon::from_matrix(&m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorollaryPart {
    I,
    II,
}

impl std::str::FromStr for CorollaryPart {
    type Err = Error;
    fn from_str(s: &str) -> Result<CorollaryPart> {
        match s {
            "i" | "1" => Ok(CorollaryPart::I),
            "ii" | "2" => Ok(CorollaryPart::II),
            _ => Err(Error::Parse(format!("unknown part `{s}`, expected i or ii"))),
        }
    }
}

/// `(1-τ)(x^s y x^t y)`, for `s >= 1`, `t >= 0`.
pub fn corollary_i_element(s: u32, t: u32) -> Result<Poly> {
    if s == 0 {
        return Err(Error::InvalidParameters("corollary (i) needs s >= 1".into()));
    }
    let w = Word::x_pow(s as usize)
        .push(Letter::Y)
        .concat(&Word::x_pow(t as usize))
        .push(Letter::Y);
    Ok(one_minus_tau(&Poly::from(w)))
}

/// `(1-τ)(Σ x y w)` over words `w` of weight `s-2` and depth `t-1` that are
/// empty or end in `y`, for `s > t >= 1`.
pub fn corollary_ii_element(s: u32, t: u32) -> Result<Poly> {
    if !(s > t && t >= 1) {
        return Err(Error::InvalidParameters("corollary (ii) needs s > t >= 1".into()));
    }
    let len = s - 2;
    let ys = t - 1;
    let tails = (0..1u64 << len)
        .map(|bits| Word::from_bits(bits, len as usize).expect("short word"))
        .filter(|w| w.depth() == ys && (w.is_empty() || w.letter(w.len() - 1) == Letter::Y));
    let xy: Word = "xy".parse().expect("literal");
    Ok(one_minus_tau(&Poly::sum_of_words(tails.map(|w| xy.concat(&w)))))
}

pub fn check_corollary(part: CorollaryPart, s: u32, t: u32, spans: &mut DerivationSpans) -> Result<VerdictReport> {
    let start = Instant::now();
    let (claim, element) = match part {
        CorollaryPart::I => ("corollary-i", corollary_i_element(s, t)?),
        CorollaryPart::II => ("corollary-ii", corollary_ii_element(s, t)?),
    };
    let verdict = spans.contains(&element)?;
    Ok(VerdictReport::new(claim, &[("s", s), ("t", t)], None, &element, verdict, start))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureEntry {
    pub m: u32,
    pub n: u32,
    pub weight: u32,
    pub verdict: bool,
}

/// For every weight `k <= max_weight` and `m, n >= 3`, tests whether
/// `(1-τ)` of the sum of weight-`k` depth-`n` words with `k_1 = m` lies in
/// the derivation span.
pub fn conjecture_scan(max_weight: u32, spans: &mut DerivationSpans) -> Result<Vec<ConjectureEntry>> {
    if max_weight < 6 {
        return Err(Error::WeightTooSmall(max_weight, 6));
    }
    spans.prepare(6..=max_weight)?;
    let mut out = Vec::new();
    for k in 6..=max_weight {
        let span = spans.get(k)?;
        for m in 3..=k - 2 {
            for n in 3..=k + 1 - m {
                let element = one_minus_tau(&k1_depth_sum(k, n, m)?);
                out.push(ConjectureEntry {
                    m,
                    n,
                    weight: k,
                    verdict: span.contains(&element)?,
                });
            }
        }
    }
    Ok(out)
}

/// Row labels of the rank table, in row order.
pub const TABLE_ROWS: [&str; 7] = [
    "duality, sum over fixed weight, depth and height",
    "duality, sum over fixed weight, depth and k1",
    "rows 1 and 2 combined",
    "duality",
    "derivation",
    "duality and derivation combined",
    "intersection of duality and derivation",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub index: u32,
    pub label: String,
    /// One entry per weight; `None` when the cell was skipped.
    pub values: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub weights: Vec<u32>,
    pub rows: Vec<TableRow>,
    pub elapsed_ms: Vec<u64>,
    pub total_elapsed_ms: u64,
}

impl TableReport {
    pub fn value(&self, row: u32, weight: u32) -> Option<usize> {
        let col = self.weights.iter().position(|&w| w == weight)?;
        self.rows.get(row as usize - 1)?.values[col]
    }

    /// Column of seven cells for one weight.
    pub fn column(&self, weight: u32) -> Vec<Option<usize>> {
        (1..=7).map(|r| self.value(r, weight)).collect()
    }

    pub fn has_skipped(&self) -> bool {
        self.rows.iter().any(|r| r.values.iter().any(Option::is_none))
    }

    /// Violated consistency laws, empty when the table is coherent.
    pub fn consistency_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for &k in &self.weights {
            let v = self.column(k);
            let le = |a: usize, b: usize| match (v[a - 1], v[b - 1]) {
                (Some(x), Some(y)) => x <= y,
                _ => true,
            };
            for (a, b) in [(1, 3), (2, 3), (3, 4), (4, 6), (5, 6)] {
                if !le(a, b) {
                    out.push(format!("weight {k}: row {a} exceeds row {b}"));
                }
            }
            if let (Some(r4), Some(r5), Some(r6), Some(r7)) = (v[3], v[4], v[5], v[6]) {
                if r4 + r5 != r6 + r7 {
                    out.push(format!("weight {k}: row 7 differs from row4 + row5 - row6"));
                }
            }
        }
        out
    }
}

fn matrix(family: Family, k: u32) -> Result<RelationMatrix> {
    RelationMatrix::from_polys(k, &family.generate(k)?)
}

fn cell_deadline(budget: Option<Duration>) -> Option<Instant> {
    budget.map(|b| Instant::now() + b)
}

/// Echelon of `base ∪ extra`, starting from `base`'s echelon when it finished.
fn union_echelon(
    base: &std::result::Result<Echelon, BudgetExceeded>,
    base_m: &RelationMatrix,
    extra: &RelationMatrix,
    budget: Option<Duration>,
) -> std::result::Result<Echelon, BudgetExceeded> {
    let deadline = cell_deadline(budget);
    let mut e = match base {
        Ok(e) => e.clone(),
        Err(_) => Echelon::from_matrix_until(base_m, deadline)?,
    };
    e.extend_until(extra, deadline)?;
    Ok(e)
}

fn table_column(k: u32, budget: Option<Duration>) -> Result<[Option<usize>; 7]> {
    let ht = matrix(Family::DualityHt, k)?;
    let k1 = matrix(Family::DualityK1, k)?;
    let dual = matrix(Family::Duality, k)?;
    let der = matrix(Family::Derivation, k)?;

    let e1 = Echelon::from_matrix_until(&ht, cell_deadline(budget));
    let e2 = Echelon::from_matrix_until(&k1, cell_deadline(budget));
    let e3 = union_echelon(&e2, &k1, &ht, budget);
    let e4 = Echelon::from_matrix_until(&dual, cell_deadline(budget));
    let e5 = Echelon::from_matrix_until(&der, cell_deadline(budget));
    let e6 = union_echelon(&e5, &der, &dual, budget);

    let r = |e: &std::result::Result<Echelon, BudgetExceeded>| e.as_ref().ok().map(Echelon::rank);
    let (r4, r5, r6) = (r(&e4), r(&e5), r(&e6));
    let r7 = match (r4, r5, r6) {
        (Some(a), Some(b), Some(c)) => Some(a + b - c),
        _ => None,
    };
    Ok([r(&e1), r(&e2), r(&e3), r4, r5, r6, r7])
}

/// Ranks of all seven relation spans for weights `3..=max_weight`.
///
/// Weights are computed in parallel on the current rayon pool. Each cell
/// gets `budget_per_cell` of wall time; cells that run out are `None`.
pub fn build_table(max_weight: u32, budget_per_cell: Option<Duration>) -> Result<TableReport> {
    if max_weight < relations::MIN_WEIGHT {
        return Err(Error::WeightTooSmall(max_weight, relations::MIN_WEIGHT));
    }
    let start = Instant::now();
    let weights: Vec<u32> = (relations::MIN_WEIGHT..=max_weight).collect();
    // heaviest weights first so they start early
    let mut columns: Vec<(u32, [Option<usize>; 7], u64)> = weights
        .iter()
        .rev()
        .copied()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let t = Instant::now();
            table_column(k, budget_per_cell).map(|c| (k, c, t.elapsed().as_millis() as u64))
        })
        .collect::<Result<_>>()?;
    columns.sort_by_key(|c| c.0);
    let rows = (0..7)
        .map(|r| TableRow {
            index: r as u32 + 1,
            label: TABLE_ROWS[r].to_string(),
            values: columns.iter().map(|c| c.1[r]).collect(),
        })
        .collect();
    Ok(TableReport {
        weights,
        rows,
        elapsed_ms: columns.iter().map(|c| c.2).collect(),
        total_elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
