//! Desk-scale brute-force verification of the operator recursions.
//!
//! The recursions in [`crate::operator`] compute envelopes by backward
//! induction. This module recomputes the same quantities from the other end:
//! it enumerates every time-inhomogeneous selection of row vertices (one
//! vertex per state and time step), propagates the state distribution
//! forward for each selection, and extremises over all of them. For the two
//! inferences handled here the vertex selections attain the envelope, so the
//! enumeration is an independent oracle for the recursion results.

use crate::error::{Error, Result};
use crate::gamble::Gamble;
use crate::operator::UpperTransitionOperator;

/// Guard on the number of enumerated strategy profiles.
pub const PROFILE_GUARD: u64 = 10_000_000;

/// Which inference to extremise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// `f(X_k)`, the value of the gamble at the final time.
    Instant,
    /// The running average of `f(X_0), ..., f(X_k)`.
    Average,
}

/// Per-state maxima over all strategy profiles.
pub fn brute_force_upper(
    op: &UpperTransitionOperator,
    f: &Gamble,
    k: usize,
    mode: OracleMode,
) -> Result<Gamble> {
    extremise(op, f, k, mode, true)
}

/// Per-state minima over all strategy profiles; agrees exactly with
/// `-brute_force_upper(-f)`.
pub fn brute_force_lower(
    op: &UpperTransitionOperator,
    f: &Gamble,
    k: usize,
    mode: OracleMode,
) -> Result<Gamble> {
    extremise(op, f, k, mode, false)
}

fn extremise(
    op: &UpperTransitionOperator,
    f: &Gamble,
    k: usize,
    mode: OracleMode,
    maximise: bool,
) -> Result<Gamble> {
    let n = op.len();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    if k == 0 {
        // No transition happens; both inferences reduce to f itself.
        return Ok(f.clone());
    }

    let vertex_rows: Vec<Vec<Vec<f64>>> = op
        .rows()
        .iter()
        .map(|row| row.vertices(n))
        .collect::<Result<_>>()?;

    let per_step: u64 = vertex_rows
        .iter()
        .map(|vs| vs.len() as u64)
        .try_fold(1u64, u64::checked_mul)
        .unwrap_or(u64::MAX);
    let profiles = per_step.checked_pow(k as u32).unwrap_or(u64::MAX);
    if profiles > PROFILE_GUARD {
        return Err(Error::SizeLimit(format!(
            "{profiles} strategy profiles exceed the oracle guard of {PROFILE_GUARD}"
        )));
    }

    // One digit per (time step, state); digit (t, x) selects the vertex used
    // for transitions out of x at time t.
    let mut digits = vec![0usize; k * n];
    let radices: Vec<usize> = (0..k * n).map(|i| vertex_rows[i % n].len()).collect();

    let mut best: Option<Vec<f64>> = None;
    loop {
        let value = evaluate_profile(&vertex_rows, &digits, f.values(), k, mode)?;
        best = Some(match best {
            None => value,
            Some(mut acc) => {
                for (a, v) in acc.iter_mut().zip(&value) {
                    if maximise {
                        *a = a.max(*v);
                    } else {
                        *a = a.min(*v);
                    }
                }
                acc
            }
        });

        // Mixed-radix increment over the profile digits.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return Ok(Gamble::new(best.expect("at least one profile"))
                    .expect("finite expectations"));
            }
            digits[pos] += 1;
            if digits[pos] < radices[pos] {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact expectation of the selected time-inhomogeneous chain, for every
/// initial state at once: row `x` of `dist` is the distribution of `X_t`
/// conditional on `X_0 = x`.
fn evaluate_profile(
    vertex_rows: &[Vec<Vec<f64>>],
    digits: &[usize],
    f: &[f64],
    k: usize,
    mode: OracleMode,
) -> Result<Vec<f64>> {
    let n = f.len();
    let mut dist: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut d = vec![0.0; n];
            d[x] = 1.0;
            d
        })
        .collect();
    // Running sums start at E[f(X_0) | X_0 = x] = f(x).
    let mut acc: Vec<f64> = f.to_vec();

    for t in 0..k {
        let mut next = vec![vec![0.0; n]; n];
        for (start, d) in dist.iter().enumerate() {
            for (x, &mass) in d.iter().enumerate() {
                if mass == 0.0 {
                    continue;
                }
                let vertex = &vertex_rows[x][digits[t * n + x]];
                for (y, &p) in vertex.iter().enumerate() {
                    next[start][y] += mass * p;
                }
            }
        }
        dist = next;
        for (start, d) in dist.iter().enumerate() {
            let total: f64 = d.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidRow(format!(
                    "propagated distribution from state {start} sums to {total} after step {t}"
                )));
            }
            if mode == OracleMode::Average {
                acc[start] += d.iter().zip(f).map(|(m, v)| m * v).sum::<f64>();
            }
        }
    }

    Ok(match mode {
        OracleMode::Instant => dist
            .iter()
            .map(|d| d.iter().zip(f).map(|(m, v)| m * v).sum())
            .collect(),
        OracleMode::Average => {
            let denom = (k + 1) as f64;
            acc.into_iter().map(|v| v / denom).collect()
        }
    })
}
