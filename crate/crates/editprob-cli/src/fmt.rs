//! Number formatting for command output: fixed significant digits in plain
//! decimal notation, so scores are comparable by eye and stable across runs.

/// Formats `v` with `sig` significant digits, plain decimal (no exponent).
/// Non-finite values print as Rust displays them (`inf`, `-inf`, `NaN`).
pub fn format_sig(v: f64, sig: usize) -> String {
    debug_assert!(sig >= 1);
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return format!("{:.*}", sig, 0.0);
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}
