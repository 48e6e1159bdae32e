//! Implementations of the CLI subcommands. Each returns the full stdout text
//! so the binary stays a thin printing shell and tests can assert on bytes.

use serde::Serialize;

use imc_core::{
    brute_force_upper, build_upper_graph, class_average_limit, classify, AverageLimit, Gamble,
    LimitResult, OracleMode, UpperTransitionOperator,
};

use crate::model::LoadedModel;
use crate::report::{fmt_state_set, fmt_value, yes_no};
use crate::{Bound, CliError, Format};

fn labels_of(model: &LoadedModel, states: &[usize]) -> Vec<String> {
    states
        .iter()
        .map(|&x| model.operator.space().label(x).to_string())
        .collect()
}

#[derive(Serialize)]
struct CheckReport {
    states: Vec<String>,
    classes: Vec<Vec<String>>,
    maximal_classes: Vec<Vec<String>>,
    top_class: Option<Vec<String>>,
    top_class_period: Option<usize>,
    tcr: bool,
    tca: bool,
    weakly_ergodic: bool,
    ergodic: bool,
}

pub fn cmd_check(model: &LoadedModel, format: Format) -> String {
    let op = &model.operator;
    let decomposition = build_upper_graph(op).decompose();
    let report = classify(op);
    let machine = CheckReport {
        states: op.space().labels().to_vec(),
        classes: decomposition
            .classes()
            .iter()
            .map(|c| labels_of(model, c))
            .collect(),
        maximal_classes: report
            .maximal_classes
            .iter()
            .map(|c| labels_of(model, c))
            .collect(),
        top_class: report.top_class.as_ref().map(|c| labels_of(model, c)),
        top_class_period: report.top_class_period,
        tcr: report.tcr,
        tca: report.tca,
        weakly_ergodic: report.weakly_ergodic,
        ergodic: report.ergodic,
    };
    if format == Format::Json {
        let mut out = serde_json::to_string_pretty(&machine).expect("report serializes");
        out.push('\n');
        return out;
    }

    let mut out = String::new();
    out.push_str(&format!("states: {}\n", machine.states.join(", ")));
    let classes: Vec<String> = machine.classes.iter().map(|c| fmt_state_set(c)).collect();
    out.push_str(&format!("communication classes: {}\n", classes.join(" ")));
    let maximal: Vec<String> = machine.maximal_classes.iter().map(|c| fmt_state_set(c)).collect();
    out.push_str(&format!("maximal classes: {}\n", maximal.join(" ")));
    match &machine.top_class {
        Some(top) => {
            out.push_str(&format!("top class: {}\n", fmt_state_set(top)));
            if let Some(p) = machine.top_class_period {
                out.push_str(&format!("top class period: {p}\n"));
            }
        }
        None => out.push_str("top class: none\n"),
    }
    out.push_str(&format!("top class regular (TCR): {}\n", yes_no(machine.tcr)));
    out.push_str(&format!("top class absorbing (TCA): {}\n", yes_no(machine.tca)));
    out.push_str(&format!("weakly ergodic: {}\n", yes_no(machine.weakly_ergodic)));
    out.push_str(&format!("ergodic: {}\n", yes_no(machine.ergodic)));
    out.push_str("---\n");
    out.push_str(&serde_json::to_string(&machine).expect("report serializes"));
    out.push('\n');
    out
}

#[derive(Serialize)]
struct ValueEntry {
    state: String,
    value: f64,
}

#[derive(Serialize)]
struct ExpectReport {
    gamble: String,
    k: usize,
    bound: &'static str,
    values: Vec<ValueEntry>,
}

fn per_state_values(model: &LoadedModel, values: &Gamble, only: Option<usize>) -> Vec<ValueEntry> {
    let space = model.operator.space();
    (0..space.len())
        .filter(|&x| only.is_none_or(|o| o == x))
        .map(|x| ValueEntry { state: space.label(x).to_string(), value: values.get(x) })
        .collect()
}

fn render_values(header: String, entries: &[ValueEntry], format: Format, machine: impl Serialize) -> String {
    if format == Format::Json {
        let mut out = serde_json::to_string_pretty(&machine).expect("report serializes");
        out.push('\n');
        return out;
    }
    let mut out = header;
    out.push('\n');
    for entry in entries {
        out.push_str(&format!("{}: {}\n", entry.state, fmt_value(entry.value)));
    }
    out
}

pub fn cmd_expect(
    model: &LoadedModel,
    gamble_name: &str,
    k: usize,
    bound: Bound,
    state: Option<&str>,
    format: Format,
) -> Result<String, CliError> {
    let f = model.gamble(gamble_name)?;
    let op = &model.operator;
    let values = match bound {
        Bound::Upper => op.iterate_upper(f, k),
        Bound::Lower => op.iterate_lower(f, k),
    }
    .map_err(CliError::Model)?;
    let only = state
        .map(|s| op.space().index(s).map_err(CliError::Model))
        .transpose()?;
    let entries = per_state_values(model, &values, only);
    let report = ExpectReport { gamble: gamble_name.to_string(), k, bound: bound.as_str(), values: entries };
    Ok(render_values(
        format!("{} expectation of `{}` at k = {}", bound.as_str(), gamble_name, k),
        &report.values,
        format,
        &report,
    ))
}

#[derive(Serialize)]
struct LimitReport {
    gamble: String,
    bound: &'static str,
    value: f64,
    error_bound: f64,
    iterations: usize,
    method: &'static str,
    period: Option<usize>,
    converged: bool,
}

#[derive(Serialize)]
struct ClassLimitEntry {
    class: Vec<String>,
    value: f64,
    error_bound: f64,
}

#[derive(Serialize)]
struct NotWeaklyErgodicReport {
    gamble: String,
    bound: &'static str,
    weakly_ergodic: bool,
    class_limits: Vec<ClassLimitEntry>,
}

fn limit_report(gamble: &str, bound: Bound, r: &LimitResult) -> LimitReport {
    LimitReport {
        gamble: gamble.to_string(),
        bound: bound.as_str(),
        value: r.value,
        error_bound: r.error_bound,
        iterations: r.iterations,
        method: r.method.as_str(),
        period: r.period,
        converged: r.converged,
    }
}

fn render_limit(report: &LimitReport, format: Format) -> String {
    if format == Format::Json {
        let mut out = serde_json::to_string_pretty(report).expect("report serializes");
        out.push('\n');
        return out;
    }
    let mut out = format!(
        "{} expected-average limit of `{}`\n",
        report.bound, report.gamble
    );
    out.push_str(&format!("value: {}\n", fmt_value(report.value)));
    out.push_str(&format!("error bound: {}\n", fmt_value(report.error_bound)));
    out.push_str(&format!("iterations: {}\n", report.iterations));
    out.push_str(&format!("method: {}\n", report.method));
    if let Some(p) = report.period {
        out.push_str(&format!("period: {p}\n"));
    }
    out.push_str(&format!("converged: {}\n", yes_no(report.converged)));
    out
}

/// Per-maximal-class limits of the requested bound, via conjugacy for the
/// lower one.
fn class_limits(
    op: &UpperTransitionOperator,
    f: &Gamble,
    bound: Bound,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<(Vec<usize>, LimitResult)>, CliError> {
    let decomposition = build_upper_graph(op).decompose();
    let mut out = Vec::new();
    for class in decomposition.maximal_classes() {
        let mut r = match bound {
            Bound::Upper => class_average_limit(op, f, class, tol, max_iter),
            Bound::Lower => class_average_limit(op, &f.neg(), class, tol, max_iter),
        }
        .map_err(CliError::Model)?;
        if bound == Bound::Lower {
            r.value = -r.value;
        }
        out.push((class.to_vec(), r));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_average(
    model: &LoadedModel,
    gamble_name: &str,
    k: Option<usize>,
    limit: bool,
    bound: Bound,
    tol: f64,
    max_iter: usize,
    format: Format,
) -> Result<String, CliError> {
    let f = model.gamble(gamble_name)?;
    let op = &model.operator;

    if !limit {
        let k = k.ok_or_else(|| CliError::Validation("either --k or --limit is required".into()))?;
        let values = match bound {
            Bound::Upper => op.upper_expected_average(f, k),
            Bound::Lower => op.lower_expected_average(f, k),
        }
        .map_err(CliError::Model)?;
        let entries = per_state_values(model, &values, None);
        let report =
            ExpectReport { gamble: gamble_name.to_string(), k, bound: bound.as_str(), values: entries };
        return Ok(render_values(
            format!("{} expected average of `{}` at k = {}", bound.as_str(), gamble_name, k),
            &report.values,
            format,
            &report,
        ));
    }

    let outcome = match bound {
        Bound::Upper => imc_core::limit_upper_average(op, f, tol, max_iter),
        Bound::Lower => imc_core::limit_lower_average(op, f, tol, max_iter),
    }
    .map_err(CliError::Model)?;

    match outcome {
        AverageLimit::Limit(r) => Ok(render_limit(&limit_report(gamble_name, bound, &r), format)),
        AverageLimit::NotWeaklyErgodic => {
            let per_class = class_limits(op, f, bound, tol, max_iter)?;
            let machine = NotWeaklyErgodicReport {
                gamble: gamble_name.to_string(),
                bound: bound.as_str(),
                weakly_ergodic: false,
                class_limits: per_class
                    .iter()
                    .map(|(class, r)| ClassLimitEntry {
                        class: labels_of(model, class),
                        value: r.value,
                        error_bound: r.error_bound,
                    })
                    .collect(),
            };
            if format == Format::Json {
                let mut out = serde_json::to_string_pretty(&machine).expect("report serializes");
                out.push('\n');
                return Ok(out);
            }
            let mut out = String::from(
                "not weakly ergodic: no absorbing top class, so the expected time average has no state-independent limit\n",
            );
            out.push_str("per-class limits:\n");
            for entry in &machine.class_limits {
                out.push_str(&format!(
                    "{}: {} (error bound {})\n",
                    fmt_state_set(&entry.class),
                    fmt_value(entry.value),
                    fmt_value(entry.error_bound)
                ));
            }
            Ok(out)
        }
    }
}

pub fn cmd_graph(model: &LoadedModel, dot: bool) -> String {
    let graph = build_upper_graph(&model.operator);
    let decomposition = graph.decompose();
    if dot {
        crate::dot::render_dot(&graph, &decomposition)
    } else {
        crate::dot::render_summary(&graph, &decomposition)
    }
}

#[derive(Serialize)]
struct OracleEntry {
    state: String,
    oracle: f64,
    recursion: f64,
    gap: f64,
}

#[derive(Serialize)]
struct OracleReport {
    gamble: String,
    k: usize,
    mode: &'static str,
    entries: Vec<OracleEntry>,
    max_gap: f64,
}

pub fn cmd_oracle(
    model: &LoadedModel,
    gamble_name: &str,
    k: usize,
    mode: OracleMode,
    format: Format,
) -> Result<String, CliError> {
    let f = model.gamble(gamble_name)?;
    let op = &model.operator;
    let oracle = brute_force_upper(op, f, k, mode).map_err(CliError::Model)?;
    let recursion = match mode {
        OracleMode::Instant => op.iterate_upper(f, k),
        OracleMode::Average => op.upper_expected_average(f, k),
    }
    .map_err(CliError::Model)?;

    let space = op.space();
    let entries: Vec<OracleEntry> = (0..space.len())
        .map(|x| OracleEntry {
            state: space.label(x).to_string(),
            oracle: oracle.get(x),
            recursion: recursion.get(x),
            gap: (oracle.get(x) - recursion.get(x)).abs(),
        })
        .collect();
    let max_gap = entries.iter().fold(0.0_f64, |m, e| m.max(e.gap));
    let mode_name = match mode {
        OracleMode::Instant => "instant",
        OracleMode::Average => "average",
    };
    let report =
        OracleReport { gamble: gamble_name.to_string(), k, mode: mode_name, entries, max_gap };

    if format == Format::Json {
        let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
        out.push('\n');
        return Ok(out);
    }
    let mut out = format!(
        "brute-force oracle vs recursion: {} of `{}` at k = {}\n",
        mode_name, gamble_name, k
    );
    for e in &report.entries {
        out.push_str(&format!(
            "{}: oracle={} recursion={} gap={}\n",
            e.state,
            fmt_value(e.oracle),
            fmt_value(e.recursion),
            fmt_value(e.gap)
        ));
    }
    out.push_str(&format!("max gap: {}\n", fmt_value(report.max_gap)));
    Ok(out)
}
