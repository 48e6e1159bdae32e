//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use imc_core::{Gamble, UpperTransitionOperator};

/// Applies the average map `h -> f + T h` exactly `k` times to `h`.
pub fn average_map_iterate(
    op: &UpperTransitionOperator,
    f: &Gamble,
    h: &Gamble,
    k: usize,
) -> Gamble {
    let mut m = h.clone();
    for _ in 0..k {
        m = f.add(&op.apply_upper(&m).unwrap());
    }
    m
}

/// Componentwise `a <= b + tol`.
pub fn le_within(a: &Gamble, b: &Gamble, tol: f64) -> bool {
    a.values().iter().zip(b.values()).all(|(x, y)| *x <= y + tol)
}
