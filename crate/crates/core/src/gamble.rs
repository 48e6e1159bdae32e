//! Finite state spaces, gambles (real-valued functions on states), and the
//! two norms every stopping rule in this crate is built on.

use crate::error::{Error, Result};

/// An ordered finite set of uniquely labelled states.
///
/// States are addressed by dense index everywhere inside the library; labels
/// only appear at the boundaries (model files, reports).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidRow("state space must not be empty".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::UnknownState(format!("duplicate label `{a}`")));
            }
        }
        Ok(Self { labels })
    }

    /// Convenience space with labels `x0, x1, ...`; handy for generated models.
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n.max(1)).map(|i| format!("x{i}"))).expect("labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    /// The indicator gamble of a set of states given by label.
    pub fn indicator<'a, I>(&self, states: I) -> Result<Gamble>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut values = vec![0.0; self.len()];
        for label in states {
            values[self.index(label)?] = 1.0;
        }
        Ok(Gamble { values })
    }
}

/// The indicator gamble of `states` (a subset of the space), 1 on the set and
/// 0 elsewhere.
pub fn indicator<'a, I>(space: &StateSpace, states: I) -> Result<Gamble>
where
    I: IntoIterator<Item = &'a str>,
{
    space.indicator(states)
}

/// Index-based indicator, used internally where no labels are around.
pub fn indicator_of_indices(n: usize, states: &[usize]) -> Gamble {
    let mut values = vec![0.0; n];
    for &i in states {
        values[i] = 1.0;
    }
    Gamble { values }
}

/// A real-valued function on the state space, stored densely by state index.
///
/// Entries are finite by construction, so every max/min below is total.
#[derive(Clone, Debug, PartialEq)]
pub struct Gamble {
    values: Vec<f64>,
}

impl Gamble {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(i));
            }
        }
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    pub(crate) fn from_values(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Hilbert seminorm `max h - min h`; zero exactly on constants.
    pub fn hilbert_seminorm(&self) -> f64 {
        self.max() - self.min()
    }

    /// Supremum norm `max |h(x)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &Gamble) -> Gamble {
        assert_eq!(self.len(), other.len());
        Gamble::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Gamble) -> Gamble {
        assert_eq!(self.len(), other.len());
        Gamble::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Gamble {
        Gamble::from_values(self.values.iter().map(|v| -v).collect())
    }

    pub fn scale(&self, lambda: f64) -> Gamble {
        Gamble::from_values(self.values.iter().map(|v| lambda * v).collect())
    }

    pub fn shift(&self, mu: f64) -> Gamble {
        Gamble::from_values(self.values.iter().map(|v| mu + v).collect())
    }

    /// Zeroes every entry outside `keep`, leaving kept entries bit-identical.
    /// This is the pointwise product with the indicator of `keep`.
    pub fn masked(&self, keep: &[bool]) -> Gamble {
        assert_eq!(self.len(), keep.len());
        Gamble::from_values(
            self.values
                .iter()
                .zip(keep)
                .map(|(v, &k)| if k { *v } else { 0.0 })
                .collect(),
        )
    }
}

pub(crate) fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn min_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

pub(crate) fn hilbert_of(values: &[f64]) -> f64 {
    max_of(values) - min_of(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hilbert_seminorm_basics() {
        let h = Gamble::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(h.hilbert_seminorm(), 2.0);
        let c = Gamble::constant(4, 7.5);
        assert_eq!(c.hilbert_seminorm(), 0.0);
        let f = Gamble::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(f.hilbert_seminorm(), 1.0);
    }

    #[test]
    fn sup_norm_basics() {
        assert_eq!(Gamble::new(vec![-3.0, 2.0]).unwrap().sup_norm(), 3.0);
        assert_eq!(Gamble::zero(3).sup_norm(), 0.0);
        let space = StateSpace::new(["a", "b", "c"]).unwrap();
        assert_eq!(space.indicator(["b"]).unwrap().sup_norm(), 1.0);
    }

    #[test]
    fn indicator_basics() {
        let space = StateSpace::new(["a", "b"]).unwrap();
        assert_eq!(space.indicator(["a", "b"]).unwrap().values(), &[1.0, 1.0]);
        assert_eq!(space.indicator([]).unwrap().values(), &[0.0, 0.0]);
        assert_eq!(space.indicator(["b"]).unwrap().values(), &[0.0, 1.0]);
        assert!(matches!(
            space.indicator(["z"]),
            Err(Error::UnknownState(_))
        ));
    }

    #[test]
    fn gamble_rejects_non_finite() {
        assert!(matches!(
            Gamble::new(vec![0.0, f64::NAN]),
            Err(Error::NonFiniteValue(1))
        ));
        assert!(Gamble::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn state_space_rejects_duplicates() {
        assert!(StateSpace::new(["a", "a"]).is_err());
        assert!(StateSpace::new(Vec::<String>::new()).is_err());
    }

    fn gamble_strategy(n: usize) -> impl Strategy<Value = Gamble> {
        prop::collection::vec(-100.0_f64..100.0, n).prop_map(|v| Gamble::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn hilbert_is_shift_invariant(h in gamble_strategy(5), c in -50.0_f64..50.0) {
            let shifted = h.shift(c);
            prop_assert!((shifted.hilbert_seminorm() - h.hilbert_seminorm()).abs() <= 1e-9);
        }

        #[test]
        fn hilbert_is_positively_homogeneous(h in gamble_strategy(4), lambda in 0.0_f64..10.0) {
            let scaled = h.scale(lambda);
            prop_assert!((scaled.hilbert_seminorm() - lambda * h.hilbert_seminorm()).abs() <= 1e-9);
        }

        #[test]
        fn sup_norm_triangle_inequality(h in gamble_strategy(6), g in gamble_strategy(6)) {
            prop_assert!(h.add(&g).sup_norm() <= h.sup_norm() + g.sup_norm() + 1e-12);
        }
    }
}
