//! Seeded random model generation for stress tests and fixture hunting.
//!
//! All masses are dyadic rationals `numerator / denom` with a power-of-two
//! denominator, so every mass function sums to exactly 1.0 in double
//! precision and indicator-based identities that hold in exact arithmetic
//! also hold bit-for-bit on sampled models.

use rand::Rng;

use crate::credal::RowCredalSet;
use crate::gamble::{Gamble, StateSpace};
use crate::operator::UpperTransitionOperator;

/// Knobs for the row sampler.
#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    /// Power-of-two denominator for all masses.
    pub denom: u32,
    /// Smallest numerator a nonzero mass may take. Larger values force
    /// faster absorption, which some convergence-rate suites rely on.
    pub min_part: u32,
    /// Cap on the support size of a sampled mass function.
    pub max_support: usize,
    /// Cap on the number of vertices of a vertex-list row.
    pub max_vertices: usize,
    /// Half-width of interval rows, in denominator units.
    pub interval_width: u32,
    /// Relative weights of the row variants.
    pub precise_weight: u32,
    pub vertex_weight: u32,
    pub interval_weight: u32,
    pub vacuous_weight: u32,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            denom: 16,
            min_part: 4,
            max_support: 3,
            max_vertices: 3,
            interval_width: 2,
            precise_weight: 4,
            vertex_weight: 4,
            interval_weight: 3,
            vacuous_weight: 1,
        }
    }
}

impl SamplerConfig {
    /// Fast-absorbing variant: every nonzero mass is exactly 0, 1/2 or 1 and
    /// interval rows are degenerate. The worst staying-mass spectral radius
    /// over such models is below 0.92, which keeps the convergence suites
    /// far from their tolerance cliffs.
    pub fn fast_absorbing() -> Self {
        Self { min_part: 8, interval_width: 0, ..Self::default() }
    }

    /// Only vertex-list rows, as required by the brute-force oracle suites.
    pub fn vertex_only(max_vertices: usize) -> Self {
        Self {
            precise_weight: 0,
            vertex_weight: 1,
            interval_weight: 0,
            vacuous_weight: 0,
            max_vertices,
            ..Self::default()
        }
    }
}

/// A mass function with dyadic entries: numerators summing to `denom`,
/// each nonzero numerator at least `min_part`, support size capped.
pub fn random_mass(n: usize, cfg: &SamplerConfig, rng: &mut impl Rng) -> Vec<f64> {
    let max_support = cfg
        .max_support
        .min(n)
        .min((cfg.denom / cfg.min_part.max(1)) as usize)
        .max(1);
    let support_size = rng.gen_range(1..=max_support);
    let mut support: Vec<usize> = (0..n).collect();
    for i in 0..support_size {
        let j = rng.gen_range(i..n);
        support.swap(i, j);
    }
    let support = &support[..support_size];

    let mut units = vec![cfg.min_part; support_size];
    let mut remaining = cfg.denom - cfg.min_part * support_size as u32;
    for unit in units.iter_mut().take(support_size - 1) {
        let extra = rng.gen_range(0..=remaining);
        *unit += extra;
        remaining -= extra;
    }
    units[support_size - 1] += remaining;

    let mut mass = vec![0.0; n];
    for (&state, &u) in support.iter().zip(&units) {
        mass[state] = f64::from(u) / f64::from(cfg.denom);
    }
    mass
}

/// One random row in any of the four representations, weighted per config.
pub fn random_row(n: usize, cfg: &SamplerConfig, rng: &mut impl Rng) -> RowCredalSet {
    let total = cfg.precise_weight + cfg.vertex_weight + cfg.interval_weight + cfg.vacuous_weight;
    assert!(total > 0, "at least one variant weight must be positive");
    let mut pick = rng.gen_range(0..total);
    if pick < cfg.precise_weight {
        return RowCredalSet::Precise(random_mass(n, cfg, rng));
    }
    pick -= cfg.precise_weight;
    if pick < cfg.vertex_weight {
        let count = rng.gen_range(1..=cfg.max_vertices.max(1));
        return RowCredalSet::Vertices((0..count).map(|_| random_mass(n, cfg, rng)).collect());
    }
    pick -= cfg.vertex_weight;
    if pick < cfg.interval_weight {
        // Perturb a base mass function within its support; the base point
        // stays inside the set, so the row is nonempty by construction.
        let base = random_mass(n, cfg, rng);
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 0..n {
            if base[i] > 0.0 {
                let units = (base[i] * f64::from(cfg.denom)).round() as u32;
                let down = rng.gen_range(0..=cfg.interval_width.min(units));
                let up = rng.gen_range(0..=cfg.interval_width.min(cfg.denom - units));
                lower[i] = f64::from(units - down) / f64::from(cfg.denom);
                upper[i] = f64::from(units + up) / f64::from(cfg.denom);
            }
        }
        return RowCredalSet::Intervals { lower, upper };
    }
    RowCredalSet::Vacuous
}

/// A full random operator over `n` states labelled `x0..`.
pub fn random_operator(n: usize, cfg: &SamplerConfig, rng: &mut impl Rng) -> UpperTransitionOperator {
    let rows = (0..n).map(|_| random_row(n, cfg, rng)).collect();
    UpperTransitionOperator::new(StateSpace::numbered(n), rows)
        .expect("sampled rows satisfy the invariants")
}

/// A gamble with entries uniform in `[lo, hi)`.
pub fn random_gamble(n: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Gamble {
    Gamble::new((0..n).map(|_| rng.gen_range(lo..hi)).collect()).expect("finite entries")
}
