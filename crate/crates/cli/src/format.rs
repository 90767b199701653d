//! Locale-independent, byte-stable text formatting for CSV output.

/// Format a value with 12 significant digits in scientific notation.
/// Divergences become "inf"/"-inf" and undefined values "nan", matching
/// the documented CSV conventions.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x == f64::INFINITY {
        return "inf".into();
    }
    if x == f64::NEG_INFINITY {
        return "-inf".into();
    }
    // normalize -0.0 so reruns are byte-identical regardless of sign noise
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}
