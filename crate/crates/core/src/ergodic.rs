//! Ergodicity classification and certified extraction of limit values.
//!
//! Weak ergodicity (state-independent convergence of upper expected time
//! averages) holds exactly when the operator is top class absorbing;
//! ergodicity (convergence of the k-step upper expectations themselves)
//! additionally needs top class regularity.
//!
//! Limits are extracted with two stopping rules:
//!
//! * k-step expectations contract in the Hilbert seminorm, so iterating until
//!   the seminorm drops below `2 * tol` certifies the midpoint to within
//!   `tol`;
//! * expected time averages are read off the additive drift of the average
//!   map. Once two iterates `p` apart differ by a constant vector the drift
//!   is locked forever (the map is constant-additive), giving the limit with
//!   zero error. A windowed Cesaro estimate covers the rare case where no
//!   lock appears.

use crate::error::{Error, Result};
use crate::gamble::{hilbert_of, max_of, min_of, Gamble};
use crate::graph::{build_upper_graph, tca_from_parts, tcr_from_parts};
use crate::operator::UpperTransitionOperator;

/// Default tolerance for limit extraction.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default iteration budget for limit extraction.
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Two iterates this close (per component, after removing the constant
/// offset) are treated as drift-locked.
const LOCK_TOL: f64 = 1e-12;

/// How a limit value was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Hilbert-seminorm contraction of the k-step iterates.
    SeminormContraction,
    /// Exact additive drift detected over a period `p`.
    PeriodLock,
    /// Windowed Cesaro estimate with an empirical error bound.
    CesaroWindow,
    /// Limit of the average map restricted to one maximal class.
    ClassRestricted,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::SeminormContraction => "seminorm-contraction",
            Method::PeriodLock => "period-lock",
            Method::CesaroWindow => "cesaro-window",
            Method::ClassRestricted => "class-restricted",
        }
    }
}

/// A limit value with its certificate.
#[derive(Clone, Copy, Debug)]
pub struct LimitResult {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: usize,
    pub method: Method,
    /// The lock period when the value came from a detected drift lock.
    pub period: Option<usize>,
    /// False when the iteration budget ran out before `error_bound <= tol`;
    /// the fields then report the best estimate achieved.
    pub converged: bool,
}

/// Outcome of a limit-expectation query.
#[derive(Clone, Copy, Debug)]
pub enum ExpectationLimit {
    Limit(LimitResult),
    /// The operator is not ergodic; k-step upper expectations need not
    /// converge to a state-independent value.
    NotErgodic,
}

/// Outcome of a limit-average query.
#[derive(Clone, Copy, Debug)]
pub enum AverageLimit {
    Limit(LimitResult),
    /// The operator is not top class absorbing, hence not weakly ergodic;
    /// per-class limits remain available via [`class_average_limit`].
    NotWeaklyErgodic,
}

/// Classification of an operator per the accessibility conditions.
#[derive(Clone, Debug)]
pub struct ErgodicityReport {
    pub has_top_class: bool,
    pub top_class: Option<Vec<usize>>,
    pub maximal_classes: Vec<Vec<usize>>,
    /// Period of the top class (0 when undefined), for reporting.
    pub top_class_period: Option<usize>,
    pub tcr: bool,
    pub tca: bool,
    pub ergodic: bool,
    pub weakly_ergodic: bool,
}

/// Decides ergodicity and weak ergodicity: weak ergodicity is exactly top
/// class absorption, and ergodicity requires regularity on top of it.
pub fn classify(op: &UpperTransitionOperator) -> ErgodicityReport {
    let graph = build_upper_graph(op);
    let decomposition = graph.decompose();
    let tcr = tcr_from_parts(&graph, &decomposition);
    let tca = tca_from_parts(op, &decomposition);
    let top_class = decomposition.top_class().map(|c| c.to_vec());
    ErgodicityReport {
        has_top_class: top_class.is_some(),
        top_class_period: top_class.as_deref().map(|c| graph.class_period(c)),
        top_class,
        maximal_classes: decomposition.maximal_classes().map(|c| c.to_vec()).collect(),
        tcr,
        tca,
        ergodic: tcr && tca,
        weakly_ergodic: tca,
    }
}

/// The limit of the k-step upper expectations of `f`, certified by seminorm
/// contraction, or `NotErgodic`.
pub fn limit_upper_expectation(
    op: &UpperTransitionOperator,
    f: &Gamble,
    tol: f64,
    max_iter: usize,
) -> Result<ExpectationLimit> {
    assert!(tol > 0.0, "tolerance must be positive");
    if !classify(op).ergodic {
        return Ok(ExpectationLimit::NotErgodic);
    }
    let mut h = op.iterate_upper(f, 0)?; // validates dimensions
    let mut seminorm = h.hilbert_seminorm();
    let mut k = 0usize;
    loop {
        if seminorm <= 2.0 * tol {
            return Ok(ExpectationLimit::Limit(LimitResult {
                value: (h.max() + h.min()) / 2.0,
                error_bound: seminorm / 2.0,
                iterations: k,
                method: Method::SeminormContraction,
                period: None,
                converged: true,
            }));
        }
        if k >= max_iter {
            return Err(Error::IterationBudgetExceeded {
                budget: max_iter,
                error_bound: seminorm / 2.0,
            });
        }
        h = op.apply_upper(&h)?;
        k += 1;
        let next = h.hilbert_seminorm();
        if next > seminorm + LOCK_TOL {
            return Err(Error::ContractionViolated { step: k, before: seminorm, after: next });
        }
        seminorm = next;
    }
}

/// Conjugate of [`limit_upper_expectation`].
pub fn limit_lower_expectation(
    op: &UpperTransitionOperator,
    f: &Gamble,
    tol: f64,
    max_iter: usize,
) -> Result<ExpectationLimit> {
    Ok(match limit_upper_expectation(op, &f.neg(), tol, max_iter)? {
        ExpectationLimit::Limit(r) => ExpectationLimit::Limit(LimitResult { value: -r.value, ..r }),
        ExpectationLimit::NotErgodic => ExpectationLimit::NotErgodic,
    })
}

/// The limit of the k-step upper expected time averages of `f`, or
/// `NotWeaklyErgodic` when no top class absorbs.
pub fn limit_upper_average(
    op: &UpperTransitionOperator,
    f: &Gamble,
    tol: f64,
    max_iter: usize,
) -> Result<AverageLimit> {
    assert!(tol > 0.0, "tolerance must be positive");
    op.iterate_upper(f, 0)?; // validates dimensions
    if !classify(op).tca {
        return Ok(AverageLimit::NotWeaklyErgodic);
    }
    let n = op.len();
    let f_values = f.values().to_vec();
    let step = |h: &[f64]| -> Vec<f64> {
        let th = op.apply_upper_values(h);
        f_values.iter().zip(&th).map(|(a, b)| a + b).collect()
    };
    let result = detect_drift(step, f.values(), n, tol, max_iter, n.max(1));
    Ok(AverageLimit::Limit(result))
}

/// Conjugate of [`limit_upper_average`].
pub fn limit_lower_average(
    op: &UpperTransitionOperator,
    f: &Gamble,
    tol: f64,
    max_iter: usize,
) -> Result<AverageLimit> {
    Ok(match limit_upper_average(op, &f.neg(), tol, max_iter)? {
        AverageLimit::Limit(r) => AverageLimit::Limit(LimitResult { value: -r.value, ..r }),
        AverageLimit::NotWeaklyErgodic => AverageLimit::NotWeaklyErgodic,
    })
}

/// The limit of the upper expected time average over one maximal
/// communication class. Defined even when the operator is not weakly
/// ergodic: each maximal class carries its own state-independent limit.
pub fn class_average_limit(
    op: &UpperTransitionOperator,
    f: &Gamble,
    class: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<LimitResult> {
    assert!(tol > 0.0, "tolerance must be positive");
    let restricted = op.restrict_to_class(f, class)?;
    let dim = restricted.dim();
    let f_on_class: Vec<f64> = restricted.class().iter().map(|&x| f.get(x)).collect();
    let step = |h: &[f64]| restricted.apply(h);
    let mut result = detect_drift(step, &f_on_class, dim, tol, max_iter, dim.max(1));
    result.method = Method::ClassRestricted;
    Ok(result)
}

/// Runs the drift map from the zero vector and extracts the per-step growth
/// rate. `first` must equal `step(0)`, which is known without applying the
/// operator (the average map sends 0 to `f`).
///
/// `iterations` in the result is the index of the last iterate examined.
fn detect_drift(
    mut step: impl FnMut(&[f64]) -> Vec<f64>,
    first: &[f64],
    dim: usize,
    tol: f64,
    max_iter: usize,
    p_max: usize,
) -> LimitResult {
    let window = 2 * p_max;
    // Retained tail of the trajectory: history[i] is iterate `base + i`.
    let mut history: std::collections::VecDeque<Vec<f64>> =
        std::collections::VecDeque::with_capacity(window + 2);
    history.push_back(vec![0.0; dim]);
    history.push_back(first.to_vec());
    let mut base = 0usize;
    let mut k = 1usize;

    let cesaro = |history: &std::collections::VecDeque<Vec<f64>>, base: usize, k: usize| {
        let h = &history[k - base];
        let scaled: Vec<f64> = h.iter().map(|v| v / k as f64).collect();
        let value = (max_of(&scaled) + min_of(&scaled)) / 2.0;
        let w = window.min(k);
        let past = &history[k - w - base];
        let slope: Vec<f64> = h.iter().zip(past).map(|(a, b)| (a - b) / w as f64).collect();
        (value, hilbert_of(&scaled) / 2.0 + hilbert_of(&slope) / 2.0)
    };

    loop {
        // Drift lock: h_k - h_{k-p} constant pins the rate at c / p, and
        // constant additivity of the map keeps it pinned at every later
        // multiple of p.
        for p in 1..=p_max.min(k) {
            let diff: Vec<f64> = history[k - base]
                .iter()
                .zip(&history[k - p - base])
                .map(|(a, b)| a - b)
                .collect();
            if hilbert_of(&diff) <= LOCK_TOL {
                let c = (max_of(&diff) + min_of(&diff)) / 2.0;
                return LimitResult {
                    value: c / p as f64,
                    error_bound: 0.0,
                    iterations: k,
                    method: Method::PeriodLock,
                    period: Some(p),
                    converged: true,
                };
            }
        }

        if k >= window {
            let (value, error_bound) = cesaro(&history, base, k);
            if error_bound <= tol {
                return LimitResult {
                    value,
                    error_bound,
                    iterations: k,
                    method: Method::CesaroWindow,
                    period: None,
                    converged: true,
                };
            }
        }

        if k >= max_iter {
            let (value, error_bound) = cesaro(&history, base, k);
            return LimitResult {
                value,
                error_bound,
                iterations: k,
                method: Method::CesaroWindow,
                period: None,
                converged: error_bound <= tol,
            };
        }

        let next = step(&history[k - base]);
        history.push_back(next);
        k += 1;
        if history.len() > window + 1 {
            history.pop_front();
            base += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credal::RowCredalSet;
    use crate::gamble::{indicator, StateSpace};

    fn vacuous_then_back() -> UpperTransitionOperator {
        let space = StateSpace::new(["a", "b"]).unwrap();
        UpperTransitionOperator::new(
            space,
            vec![RowCredalSet::Vacuous, RowCredalSet::Precise(vec![1.0, 0.0])],
        )
        .unwrap()
    }

    fn swap_chain() -> UpperTransitionOperator {
        let space = StateSpace::new(["a", "b"]).unwrap();
        UpperTransitionOperator::new(
            space,
            vec![
                RowCredalSet::Precise(vec![0.0, 1.0]),
                RowCredalSet::Precise(vec![1.0, 0.0]),
            ],
        )
        .unwrap()
    }

    fn two_isolated() -> UpperTransitionOperator {
        let space = StateSpace::new(["a", "b"]).unwrap();
        UpperTransitionOperator::new(
            space,
            vec![
                RowCredalSet::Precise(vec![1.0, 0.0]),
                RowCredalSet::Precise(vec![0.0, 1.0]),
            ],
        )
        .unwrap()
    }

    fn non_absorbing_top() -> UpperTransitionOperator {
        let space = StateSpace::new(["a", "c", "d"]).unwrap();
        UpperTransitionOperator::new(
            space,
            vec![
                RowCredalSet::Precise(vec![1.0, 0.0, 0.0]),
                RowCredalSet::Vertices(vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]),
                RowCredalSet::Precise(vec![0.0, 1.0, 0.0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn classify_examples() {
        let r = classify(&swap_chain());
        assert!(r.weakly_ergodic && !r.ergodic);
        assert!(r.tca && !r.tcr);
        assert_eq!(r.top_class_period, Some(2));

        let r = classify(&vacuous_then_back());
        assert!(r.weakly_ergodic && r.ergodic);

        let r = classify(&two_isolated());
        assert!(!r.has_top_class && !r.weakly_ergodic && !r.ergodic);
        assert_eq!(r.maximal_classes.len(), 2);
    }

    #[test]
    fn report_invariants_hold() {
        for op in [swap_chain(), vacuous_then_back(), two_isolated(), non_absorbing_top()] {
            let r = classify(&op);
            assert_eq!(r.weakly_ergodic, r.tca);
            assert_eq!(r.ergodic, r.tcr && r.tca);
            assert!(!r.ergodic || r.weakly_ergodic);
            assert!(!(r.tcr || r.tca) || r.has_top_class);
        }
    }

    #[test]
    fn limit_expectation_absorbs_the_maximum() {
        let op = vacuous_then_back();
        let ind_b = indicator(op.space(), ["b"]).unwrap();
        let ExpectationLimit::Limit(r) =
            limit_upper_expectation(&op, &ind_b, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("ergodic operator");
        };
        assert_eq!(r.value, 1.0);
        assert_eq!(r.error_bound, 0.0);
        assert_eq!(r.iterations, 2);
        assert_eq!(r.method, Method::SeminormContraction);

        let f = Gamble::new(vec![2.0, -1.0]).unwrap();
        let ExpectationLimit::Limit(r) =
            limit_upper_expectation(&op, &f, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("ergodic operator");
        };
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn limit_expectation_constant_is_instant() {
        let op = vacuous_then_back();
        let c = Gamble::constant(2, 3.25);
        let ExpectationLimit::Limit(r) =
            limit_upper_expectation(&op, &c, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("ergodic operator");
        };
        assert_eq!(r.value, 3.25);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn limit_expectation_refuses_non_ergodic() {
        let op = swap_chain();
        let f = Gamble::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            limit_upper_expectation(&op, &f, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap(),
            ExpectationLimit::NotErgodic
        ));
    }

    #[test]
    fn limit_expectation_budget_error() {
        // Slowly mixing precise chain: tiny budget trips the error path.
        let space = StateSpace::new(["a", "b"]).unwrap();
        let op = UpperTransitionOperator::new(
            space,
            vec![
                RowCredalSet::Precise(vec![0.9, 0.1]),
                RowCredalSet::Precise(vec![0.1, 0.9]),
            ],
        )
        .unwrap();
        let f = Gamble::new(vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            limit_upper_expectation(&op, &f, 1e-8, 1),
            Err(Error::IterationBudgetExceeded { .. })
        ));
    }

    #[test]
    fn limit_average_locks_at_half() {
        let op = vacuous_then_back();
        let ind_b = indicator(op.space(), ["b"]).unwrap();
        let AverageLimit::Limit(r) =
            limit_upper_average(&op, &ind_b, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("weakly ergodic");
        };
        assert_eq!(r.value, 0.5);
        assert_eq!(r.error_bound, 0.0);
        assert_eq!(r.method, Method::PeriodLock);
        assert_eq!(r.iterations, 2);
    }

    #[test]
    fn limit_average_of_swap_chain_is_midpoint() {
        let op = swap_chain();
        for (fa, fb) in [(1.0, 0.0), (0.3, -0.7), (2.5, 2.5)] {
            let f = Gamble::new(vec![fa, fb]).unwrap();
            let AverageLimit::Limit(r) =
                limit_upper_average(&op, &f, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
            else {
                panic!("weakly ergodic");
            };
            assert_eq!(r.value, (fa + fb) / 2.0);
            assert_eq!(r.error_bound, 0.0);
            assert_eq!(r.method, Method::PeriodLock);
        }
    }

    #[test]
    fn limit_average_constant_locks_immediately() {
        let op = vacuous_then_back();
        let c = Gamble::constant(2, -4.0);
        let AverageLimit::Limit(r) =
            limit_upper_average(&op, &c, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("weakly ergodic");
        };
        assert_eq!(r.value, -4.0);
        assert_eq!(r.method, Method::PeriodLock);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn limit_average_refuses_without_absorption() {
        let op = non_absorbing_top();
        let f = Gamble::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            limit_upper_average(&op, &f, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap(),
            AverageLimit::NotWeaklyErgodic
        ));
    }

    #[test]
    fn limit_average_budget_returns_flagged_estimate() {
        let op = vacuous_then_back();
        let ind_b = indicator(op.space(), ["b"]).unwrap();
        let AverageLimit::Limit(r) = limit_upper_average(&op, &ind_b, 1e-8, 1).unwrap() else {
            panic!("weakly ergodic");
        };
        assert!(!r.converged);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn lower_limits_by_conjugacy() {
        let op = vacuous_then_back();
        let ind_b = indicator(op.space(), ["b"]).unwrap();
        // The lower chain can avoid b forever by staying in a.
        let AverageLimit::Limit(r) =
            limit_lower_average(&op, &ind_b, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("weakly ergodic");
        };
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, Method::PeriodLock);

        let c = Gamble::constant(2, 1.25);
        let AverageLimit::Limit(r) =
            limit_lower_average(&op, &c, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!("weakly ergodic");
        };
        assert_eq!(r.value, 1.25);

        let swap = swap_chain();
        let f = Gamble::new(vec![1.0, 0.0]).unwrap();
        let AverageLimit::Limit(lower) =
            limit_lower_average(&swap, &f, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!();
        };
        assert_eq!(lower.value, 0.5);
    }

    #[test]
    fn class_limits_exist_without_weak_ergodicity() {
        let op = two_isolated();
        let (c1, c2) = (4.0, -3.0);
        let f = Gamble::new(vec![c1, c2]).unwrap();
        let r1 = class_average_limit(&op, &f, &[0], DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let r2 = class_average_limit(&op, &f, &[1], DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(r1.value, c1);
        assert_eq!(r2.value, c2);
        assert_eq!(r1.method, Method::ClassRestricted);
    }

    #[test]
    fn class_limit_on_full_space_matches_global_limit() {
        let op = swap_chain();
        let f = Gamble::new(vec![1.0, 0.0]).unwrap();
        let class = class_average_limit(&op, &f, &[0, 1], DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let AverageLimit::Limit(global) =
            limit_upper_average(&op, &f, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap()
        else {
            panic!();
        };
        assert_eq!(class.value, global.value);
    }

    #[test]
    fn class_limit_rejects_non_maximal_class() {
        let op = vacuous_then_back();
        let f = Gamble::zero(2);
        assert!(matches!(
            class_average_limit(&op, &f, &[0], DEFAULT_TOL, DEFAULT_MAX_ITER),
            Err(Error::NotMaximalClass)
        ));
    }

    #[test]
    fn class_limit_of_top_class_ignores_outside_values() {
        // Both states feed the absorbing state a; on {a} the average of the
        // indicator of b is identically zero.
        let space = StateSpace::new(["a", "b"]).unwrap();
        let op = UpperTransitionOperator::new(
            space,
            vec![
                RowCredalSet::Precise(vec![1.0, 0.0]),
                RowCredalSet::Precise(vec![1.0, 0.0]),
            ],
        )
        .unwrap();
        let ind_b = indicator(op.space(), ["b"]).unwrap();
        let r = class_average_limit(&op, &ind_b, &[0], DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
