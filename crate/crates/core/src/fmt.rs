//! Shortest round-trip decimal rendering for `f64`.

/// Shortest decimal string that parses back to exactly `x`.
///
/// Plain notation for magnitudes in `[1e-5, 1e16)`, exponent notation
/// otherwise. Zero renders as `0` and `-0`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
