//! The upper transition operator, its conjugate lower operator, and the
//! recursions behind k-step upper expectations and expected time averages.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::credal::RowCredalSet;
use crate::error::{Error, Result};
use crate::gamble::{Gamble, StateSpace};

/// One credal row per state. Applying the operator to a gamble takes the
/// row-wise upper envelope, which is what drives every inference in this
/// crate.
#[derive(Clone, Debug)]
pub struct UpperTransitionOperator {
    space: StateSpace,
    rows: Vec<RowCredalSet>,
}

impl UpperTransitionOperator {
    /// Builds an operator after validating every row against the state count.
    pub fn new(space: StateSpace, rows: Vec<RowCredalSet>) -> Result<Self> {
        if rows.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), got: rows.len() });
        }
        for (i, row) in rows.iter().enumerate() {
            row.validate(space.len()).map_err(|e| match e {
                Error::InvalidRow(reason) => {
                    Error::InvalidRow(format!("state `{}`: {reason}", space.label(i)))
                }
                other => other,
            })?;
        }
        Ok(Self { space, rows })
    }

    /// Builds an operator without validation. Invariants become the caller's
    /// responsibility; [`Self::coherence_selftest`] exists to detect abuse.
    pub fn new_unchecked(space: StateSpace, rows: Vec<RowCredalSet>) -> Self {
        Self { space, rows }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn rows(&self) -> &[RowCredalSet] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_dims(&self, h: &Gamble) -> Result<()> {
        if h.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: h.len() });
        }
        Ok(())
    }

    pub(crate) fn apply_upper_values(&self, h: &[f64]) -> Vec<f64> {
        debug_assert_eq!(h.len(), self.len());
        self.rows.iter().map(|row| row.upper_expectation(h)).collect()
    }

    pub(crate) fn apply_lower_values(&self, h: &[f64]) -> Vec<f64> {
        let neg: Vec<f64> = h.iter().map(|v| -v).collect();
        self.apply_upper_values(&neg).into_iter().map(|v| -v).collect()
    }

    /// One application of the upper operator: `(T h)(x)` is the upper
    /// expectation of `h` under row `x`.
    pub fn apply_upper(&self, h: &Gamble) -> Result<Gamble> {
        self.check_dims(h)?;
        Ok(Gamble::from_values(self.apply_upper_values(h.values())))
    }

    /// The conjugate lower operator `h -> -T(-h)`.
    pub fn apply_lower(&self, h: &Gamble) -> Result<Gamble> {
        self.check_dims(h)?;
        Ok(Gamble::from_values(self.apply_lower_values(h.values())))
    }

    /// `T^k f`, the k-step upper expectation of `f` as a function of the
    /// initial state. `k = 0` returns `f` itself.
    pub fn iterate_upper(&self, f: &Gamble, k: usize) -> Result<Gamble> {
        self.check_dims(f)?;
        let mut h = f.values().to_vec();
        for _ in 0..k {
            h = self.apply_upper_values(&h);
        }
        Ok(Gamble::from_values(h))
    }

    /// `-T^k(-f)`, the k-step lower expectation.
    pub fn iterate_lower(&self, f: &Gamble, k: usize) -> Result<Gamble> {
        Ok(self.iterate_upper(&f.neg(), k)?.neg())
    }

    /// Starts the accumulated-gamble recursion at `m = f`.
    pub fn average_iterator(&self, f: Gamble) -> Result<AverageIterator<'_>> {
        self.check_dims(&f)?;
        Ok(AverageIterator { op: self, m: f.clone(), f, k: 0 })
    }

    /// The k-step upper expected time average: the accumulated gamble after
    /// `k` steps, divided once by `k + 1` at read-out.
    pub fn upper_expected_average(&self, f: &Gamble, k: usize) -> Result<Gamble> {
        self.check_dims(f)?;
        let mut m = f.values().to_vec();
        for _ in 0..k {
            let th = self.apply_upper_values(&m);
            m = f.values().iter().zip(&th).map(|(a, b)| a + b).collect();
        }
        let denom = (k + 1) as f64;
        Ok(Gamble::from_values(m.into_iter().map(|v| v / denom).collect()))
    }

    /// The conjugate k-step lower expected time average.
    pub fn lower_expected_average(&self, f: &Gamble, k: usize) -> Result<Gamble> {
        Ok(self.upper_expected_average(&f.neg(), k)?.neg())
    }

    /// Restricts the average map `h -> f + T h` to a maximal communication
    /// class: gambles on the class are zero-extended, mapped, and read back on
    /// the class. Iterating the restriction from zero reproduces the full
    /// accumulated-gamble recursion on the class.
    pub fn restrict_to_class(&self, f: &Gamble, class: &[usize]) -> Result<ClassRestrictedMap<'_>> {
        self.check_dims(f)?;
        let decomposition = crate::graph::build_upper_graph(self).decompose();
        let mut sorted: Vec<usize> = class.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != class.len() || sorted.iter().any(|&x| x >= self.len()) {
            return Err(Error::NotMaximalClass);
        }
        let is_maximal = decomposition
            .maximal_classes()
            .any(|c| c == sorted.as_slice());
        if !is_maximal {
            return Err(Error::NotMaximalClass);
        }
        Ok(ClassRestrictedMap { op: self, f: f.clone(), class: sorted })
    }

    /// Samples random gamble pairs and measures the worst violation of the
    /// coherence properties C1-C6. A valid operator scores at floating-point
    /// noise level; a corrupted row shows up immediately.
    pub fn coherence_selftest(&self, samples: usize, seed: u64) -> CoherenceReport {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = self.len();
        let mut report = CoherenceReport { samples, ..CoherenceReport::default() };
        for _ in 0..samples {
            let h: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lambda: f64 = rng.gen_range(0.0..2.0);
            let mu: f64 = rng.gen_range(-1.0..1.0);

            let th = self.apply_upper_values(&h);
            let tg = self.apply_upper_values(&g);

            // C1: min h <= T h <= max h.
            let (min_h, max_h) = (crate::gamble::min_of(&h), crate::gamble::max_of(&h));
            for &v in &th {
                report.boundedness = report.boundedness.max(v - max_h).max(min_h - v);
            }

            // C2: T(h + g) <= T h + T g.
            let sum: Vec<f64> = h.iter().zip(&g).map(|(a, b)| a + b).collect();
            for ((v, a), b) in self.apply_upper_values(&sum).iter().zip(&th).zip(&tg) {
                report.sub_additivity = report.sub_additivity.max(v - (a + b));
            }

            // C3: T(lambda h) = lambda T h.
            let scaled: Vec<f64> = h.iter().map(|v| lambda * v).collect();
            for (v, a) in self.apply_upper_values(&scaled).iter().zip(&th) {
                report.homogeneity = report.homogeneity.max((v - lambda * a).abs());
            }

            // C4: T(mu + h) = mu + T h.
            let shifted: Vec<f64> = h.iter().map(|v| mu + v).collect();
            for (v, a) in self.apply_upper_values(&shifted).iter().zip(&th) {
                report.constant_additivity = report.constant_additivity.max((v - (mu + a)).abs());
            }

            // C5: h <= g implies T h <= T g; test with g' = h + |g|.
            let above: Vec<f64> = h.iter().zip(&g).map(|(a, b)| a + b.abs()).collect();
            for (v, a) in self.apply_upper_values(&above).iter().zip(&th) {
                report.monotonicity = report.monotonicity.max(a - v);
            }

            // C6: T h - T g <= T(h - g).
            let diff: Vec<f64> = h.iter().zip(&g).map(|(a, b)| a - b).collect();
            for ((v, a), b) in self.apply_upper_values(&diff).iter().zip(&th).zip(&tg) {
                report.mixed_sub_additivity = report.mixed_sub_additivity.max((a - b) - v);
            }
        }
        report
    }
}

/// The accumulated-gamble recursion `m <- f + T m`, stepped functionally.
/// After `k` steps, `m / (k + 1)` is the k-step upper expected time average.
#[derive(Clone, Debug)]
pub struct AverageIterator<'a> {
    op: &'a UpperTransitionOperator,
    f: Gamble,
    k: usize,
    m: Gamble,
}

impl<'a> AverageIterator<'a> {
    pub fn step(self) -> AverageIterator<'a> {
        let th = self.op.apply_upper_values(self.m.values());
        let m = Gamble::from_values(
            self.f.values().iter().zip(&th).map(|(a, b)| a + b).collect(),
        );
        AverageIterator { op: self.op, f: self.f, k: self.k + 1, m }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The accumulated gamble `m` at the current step count.
    pub fn accumulated(&self) -> &Gamble {
        &self.m
    }

    /// The current upper expected time average `m / (k + 1)`.
    pub fn average(&self) -> Gamble {
        self.m.scale(1.0 / (self.k + 1) as f64)
    }
}

/// The average map confined to a maximal communication class.
#[derive(Clone, Debug)]
pub struct ClassRestrictedMap<'a> {
    op: &'a UpperTransitionOperator,
    f: Gamble,
    class: Vec<usize>,
}

impl ClassRestrictedMap<'_> {
    /// The class states, sorted by index.
    pub fn class(&self) -> &[usize] {
        &self.class
    }

    pub fn dim(&self) -> usize {
        self.class.len()
    }

    /// Applies the restricted map to a gamble living on the class.
    pub fn apply(&self, h_on_class: &[f64]) -> Vec<f64> {
        assert_eq!(h_on_class.len(), self.class.len());
        let mut lifted = vec![0.0; self.op.len()];
        for (&state, &v) in self.class.iter().zip(h_on_class) {
            lifted[state] = v;
        }
        let mapped = self.op.apply_upper_values(&lifted);
        self.class
            .iter()
            .map(|&state| self.f.get(state) + mapped[state])
            .collect()
    }
}

/// Worst observed violation per coherence property; all zero (up to float
/// noise) for a valid operator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CoherenceReport {
    pub samples: usize,
    pub boundedness: f64,
    pub sub_additivity: f64,
    pub homogeneity: f64,
    pub constant_additivity: f64,
    pub monotonicity: f64,
    pub mixed_sub_additivity: f64,
}

impl CoherenceReport {
    pub fn worst_violation(&self) -> f64 {
        self.boundedness
            .max(self.sub_additivity)
            .max(self.homogeneity)
            .max(self.constant_additivity)
            .max(self.monotonicity)
            .max(self.mixed_sub_additivity)
    }
}
