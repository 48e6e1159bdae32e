//! Upper and lower expectations and expected time averages in finite-state
//! imprecise Markov chains.
//!
//! A model assigns to each state a credal set of transition mass functions
//! ([`RowCredalSet`]). Taking row-wise upper envelopes yields the upper
//! transition operator ([`UpperTransitionOperator`]); iterating it computes
//! tight upper bounds on the expectation of a gamble at time `k`, and a
//! closely related recursion computes upper bounds on expected time
//! averages. Conjugate lower bounds come for free by negation.
//!
//! Whether these bounds converge to state-independent limits is decided
//! graph-theoretically on the upper accessibility graph ([`graph`]):
//! expected time averages converge exactly when the top communication class
//! is absorbing, and k-step expectations additionally need the top class to
//! be aperiodic. The [`ergodic`] module classifies operators and extracts
//! limit values with certified stopping rules; [`oracle`] re-derives small
//! instances by brute-force strategy enumeration so that every recursion has
//! an independent cross-check.

pub mod credal;
pub mod ergodic;
pub mod error;
pub mod gamble;
pub mod graph;
pub mod operator;
pub mod oracle;
pub mod random;

pub use credal::{interval_row_vertices, RowCredalSet, RowValidation};
pub use ergodic::{
    class_average_limit, classify, limit_lower_average, limit_lower_expectation,
    limit_upper_average, limit_upper_expectation, AverageLimit, ErgodicityReport,
    ExpectationLimit, LimitResult, Method, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use error::{Error, Result};
pub use gamble::{indicator, Gamble, StateSpace};
pub use graph::{
    absorption_basin, build_upper_graph, is_tca, is_tcr, verify_tcr_by_powers,
    AccessibilityGraph, ClassDecomposition,
};
pub use operator::{
    AverageIterator, ClassRestrictedMap, CoherenceReport, UpperTransitionOperator,
};
pub use oracle::{brute_force_lower, brute_force_upper, OracleMode};
