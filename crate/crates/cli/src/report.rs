//! Deterministic report formatting. All floats in text reports go through
//! [`fmt_value`] (12 significant digits, trailing zeros trimmed), so
//! identical invocations produce byte-identical output.

/// Significant digits used in text reports.
pub const REPORT_SIG_DIGITS: usize = 12;

/// Formats `x` with [`REPORT_SIG_DIGITS`] significant digits in plain
/// decimal notation, trimming trailing zeros.
pub fn fmt_value(x: f64) -> String {
    fmt_sig(x, REPORT_SIG_DIGITS)
}

pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
    let mut out = format!("{x:.decimals$}");
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    out
}

/// `{a, b}` notation for state sets.
pub fn fmt_state_set(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(", "))
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_is_plain_and_trimmed() {
        assert_eq!(fmt_value(0.0), "0");
        assert_eq!(fmt_value(0.5), "0.5");
        assert_eq!(fmt_value(1.0), "1");
        assert_eq!(fmt_value(-2.25), "-2.25");
        assert_eq!(fmt_value(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_value(1234.5), "1234.5");
        assert_eq!(fmt_value(1e-13), "0.0000000000001");
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(123456789.123456, 12), "123456789.123");
        assert_eq!(fmt_sig(0.001234567891234, 12), "0.00123456789123");
    }
}
