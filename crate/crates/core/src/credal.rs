//! Per-state credal sets and their one-step upper/lower expectation
//! envelopes.
//!
//! A row describes the set of transition mass functions considered plausible
//! out of one state. Four representations are supported; all of them admit an
//! exact envelope evaluation, so no LP solver is involved anywhere:
//!
//! * `Precise`: a single mass function; the envelope is a dot product.
//! * `Vertices`: a finite list of mass functions; the envelope of their
//!   convex hull is attained at a vertex.
//! * `Intervals`: lower/upper probability bounds per state; the envelope is
//!   computed by greedy allocation, which is exact for this family.
//! * `Vacuous`: the set of all mass functions; the envelope is `max h`.

use crate::error::{Error, Result};
use crate::gamble::max_of;

/// Tolerance for stochasticity checks. Model files carry decimal literals
/// with rounding noise, so sums are only required to hit 1 up to this slack.
pub const MASS_TOL: f64 = 1e-12;

/// Combinatorial guard for interval vertex enumeration.
pub const VERTEX_ENUMERATION_MAX_STATES: usize = 12;

/// The set of transition mass functions out of one state.
#[derive(Clone, Debug, PartialEq)]
pub enum RowCredalSet {
    /// A single mass function.
    Precise(Vec<f64>),
    /// The convex hull of a nonempty finite list of mass functions.
    Vertices(Vec<Vec<f64>>),
    /// All mass functions `p` with `lower <= p <= upper` componentwise.
    Intervals { lower: Vec<f64>, upper: Vec<f64> },
    /// All mass functions on the state space.
    Vacuous,
}

/// Outcome of [`RowCredalSet::validate`]. Non-reachable interval bounds are
/// accepted but flagged: the credal set is still nonempty and the envelope is
/// well defined, the stated bound is just not attained.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowValidation {
    /// States whose lower or upper interval bound cannot be attained by any
    /// mass function in the set. Empty for non-interval rows.
    pub unreachable_bounds: Vec<usize>,
}

impl RowValidation {
    pub fn all_bounds_reachable(&self) -> bool {
        self.unreachable_bounds.is_empty()
    }
}

fn check_mass_function(p: &[f64], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: p.len() });
    }
    for (i, &v) in p.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidRow(format!("mass {v} at index {i} is negative or not finite")));
        }
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > MASS_TOL {
        return Err(Error::InvalidRow(format!("mass function sums to {sum}, not 1")));
    }
    Ok(())
}

impl RowCredalSet {
    /// Checks the structural invariants of the row against a state count `n`.
    pub fn validate(&self, n: usize) -> Result<RowValidation> {
        match self {
            RowCredalSet::Precise(p) => {
                check_mass_function(p, n)?;
                Ok(RowValidation::default())
            }
            RowCredalSet::Vertices(vs) => {
                if vs.is_empty() {
                    return Err(Error::InvalidRow("vertex list is empty".into()));
                }
                for v in vs {
                    check_mass_function(v, n)?;
                }
                Ok(RowValidation::default())
            }
            RowCredalSet::Intervals { lower, upper } => {
                if lower.len() != n || upper.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: lower.len().max(upper.len()),
                    });
                }
                for i in 0..n {
                    let (l, u) = (lower[i], upper[i]);
                    if !l.is_finite() || !u.is_finite() || l < 0.0 || u > 1.0 || l > u {
                        return Err(Error::InvalidRow(format!(
                            "interval [{l}, {u}] at index {i} violates 0 <= l <= u <= 1"
                        )));
                    }
                }
                let sum_l: f64 = lower.iter().sum();
                let sum_u: f64 = upper.iter().sum();
                if sum_l > 1.0 + MASS_TOL {
                    return Err(Error::InvalidRow(format!(
                        "lower bounds sum to {sum_l} > 1; the credal set is empty"
                    )));
                }
                if sum_u < 1.0 - MASS_TOL {
                    return Err(Error::InvalidRow(format!(
                        "upper bounds sum to {sum_u} < 1; the credal set is empty"
                    )));
                }
                // Reachability: l(y) is attainable iff the other states can
                // absorb the remaining mass, and dually for u(y).
                let mut unreachable = Vec::new();
                for y in 0..n {
                    let others_u = sum_u - upper[y];
                    let others_l = sum_l - lower[y];
                    let low_ok = lower[y] + others_u >= 1.0 - MASS_TOL;
                    let up_ok = upper[y] + others_l <= 1.0 + MASS_TOL;
                    if !low_ok || !up_ok {
                        unreachable.push(y);
                    }
                }
                Ok(RowValidation { unreachable_bounds: unreachable })
            }
            RowCredalSet::Vacuous => Ok(RowValidation::default()),
        }
    }

    /// The exact upper expectation `sup { p . h : p in this set }`.
    pub fn upper_expectation(&self, h: &[f64]) -> f64 {
        match self {
            RowCredalSet::Precise(p) => dot(p, h),
            RowCredalSet::Vertices(vs) => vs
                .iter()
                .map(|v| dot(v, h))
                .fold(f64::NEG_INFINITY, f64::max),
            RowCredalSet::Intervals { lower, upper } => interval_upper_expectation(lower, upper, h),
            RowCredalSet::Vacuous => max_of(h),
        }
    }

    /// The exact lower expectation, by conjugacy `-upper(-h)`.
    pub fn lower_expectation(&self, h: &[f64]) -> f64 {
        let neg: Vec<f64> = h.iter().map(|v| -v).collect();
        -self.upper_expectation(&neg)
    }

    /// A vertex list defining the same envelope as this row.
    ///
    /// `Vacuous` turns into the `n` degenerate point masses; `Intervals` are
    /// enumerated (guarded by [`VERTEX_ENUMERATION_MAX_STATES`]).
    pub fn vertices(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        match self {
            RowCredalSet::Precise(p) => Ok(vec![p.clone()]),
            RowCredalSet::Vertices(vs) => Ok(vs.clone()),
            RowCredalSet::Intervals { lower, upper } => interval_row_vertices(lower, upper),
            RowCredalSet::Vacuous => {
                let mut vs = Vec::with_capacity(n);
                for i in 0..n {
                    let mut v = vec![0.0; n];
                    v[i] = 1.0;
                    vs.push(v);
                }
                Ok(vs)
            }
        }
    }

    /// Whether the upper probability of moving to state `j` is strictly
    /// positive. Decided structurally per representation, so the graph
    /// topology never depends on floating-point envelope arithmetic.
    pub(crate) fn edge_positive(&self, j: usize) -> bool {
        match self {
            RowCredalSet::Precise(p) => p[j] > 0.0,
            RowCredalSet::Vertices(vs) => vs.iter().any(|v| v[j] > 0.0),
            RowCredalSet::Intervals { upper, .. } => upper[j] > 0.0,
            RowCredalSet::Vacuous => true,
        }
    }

    /// Whether the lower probability of moving into the set `in_set` is
    /// strictly positive, again decided structurally.
    pub(crate) fn lower_indicator_positive(&self, in_set: &[bool]) -> bool {
        match self {
            RowCredalSet::Precise(p) => p.iter().zip(in_set).any(|(&m, &b)| b && m > 0.0),
            RowCredalSet::Vertices(vs) => vs
                .iter()
                .all(|v| v.iter().zip(in_set).any(|(&m, &b)| b && m > 0.0)),
            RowCredalSet::Intervals { lower, upper } => {
                let in_lower: f64 = lower.iter().zip(in_set).filter(|(_, &b)| b).map(|(l, _)| l).sum();
                let out_upper: f64 = upper.iter().zip(in_set).filter(|(_, &b)| !b).map(|(u, _)| u).sum();
                in_lower > 0.0 || out_upper < 1.0
            }
            RowCredalSet::Vacuous => in_set.iter().all(|&b| b),
        }
    }
}

fn dot(p: &[f64], h: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), h.len());
    p.iter().zip(h).map(|(a, b)| a * b).sum()
}

/// Greedy envelope over an interval row: every state keeps its lower bound,
/// and the leftover mass is handed to states in order of decreasing `h`,
/// capped by their upper bounds. Ties are broken by state index; the optimum
/// value does not depend on the tie break.
fn interval_upper_expectation(lower: &[f64], upper: &[f64], h: &[f64]) -> f64 {
    let n = h.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| h[b].partial_cmp(&h[a]).expect("finite gamble").then(a.cmp(&b)));
    let spent: f64 = lower.iter().sum();
    let mut budget = (1.0 - spent).max(0.0);
    let mut p = lower.to_vec();
    for &i in &order {
        if budget <= 0.0 {
            break;
        }
        let take = (upper[i] - lower[i]).min(budget).max(0.0);
        p[i] += take;
        budget -= take;
    }
    dot(&p, h)
}

/// Enumerates the extreme points of the interval credal set
/// `{ p : lower <= p <= upper, sum p = 1 }`.
///
/// Every extreme point has at most one coordinate strictly between its
/// bounds, so candidates are generated by saturating all but one coordinate
/// at `lower` or `upper` and solving for the residual. Duplicates are removed
/// up to `1e-12` per coordinate.
pub fn interval_row_vertices(lower: &[f64], upper: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = lower.len();
    let row = RowCredalSet::Intervals { lower: lower.to_vec(), upper: upper.to_vec() };
    row.validate(n)?;
    if n > VERTEX_ENUMERATION_MAX_STATES {
        return Err(Error::SizeLimit(format!(
            "interval vertex enumeration supports at most {VERTEX_ENUMERATION_MAX_STATES} states, got {n}"
        )));
    }

    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    let mut candidate = vec![0.0; n];
    for free in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != free).collect();
        for mask in 0u32..(1 << others.len()) {
            let mut sum = 0.0;
            for (bit, &i) in others.iter().enumerate() {
                let v = if mask >> bit & 1 == 1 { upper[i] } else { lower[i] };
                candidate[i] = v;
                sum += v;
            }
            let residual = 1.0 - sum;
            if residual < lower[free] - MASS_TOL || residual > upper[free] + MASS_TOL {
                continue;
            }
            candidate[free] = residual.clamp(lower[free], upper[free]);
            let key: Vec<i64> = candidate.iter().map(|v| (v * 1e12).round() as i64).collect();
            if seen.insert(key) {
                vertices.push(candidate.clone());
            }
        }
    }
    debug_assert!(!vertices.is_empty(), "validated interval sets are nonempty");
    Ok(vertices)
}
