//! Principal branch of the Lambert W function, `W·e^W = x`, for real
//! `x ≥ −1/e`.

use std::f64::consts::E;

use crate::error::{domain, Error, Result};

/// `−1/e` rounded to nearest; sits a hair below the true branch point.
const BRANCH_POINT: f64 = -1.0 / E;
const BRANCH_TOLERANCE: f64 = 1e-15;
const MAX_ITERATIONS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WResult {
    pub value: f64,
    pub iterations: usize,
    /// `|W·e^W − x| / |x|` (zero at `x = 0`).
    pub residual: f64,
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        return f64::from_bits(1);
    }
    f64::from_bits(a.to_bits() + 1) - a
}

fn relative_residual(w: f64, x: f64) -> f64 {
    if x == 0.0 {
        return (w * w.exp()).abs();
    }
    ((w * w.exp() - x) / x).abs()
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.25 {
        // expansion about the branch point in p = √(2(ex+1))
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0))
    } else if x <= 0.25 {
        x * (1.0 + x * (-1.0 + x * (1.5 + x * (-8.0 / 3.0))))
    } else if x < E {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    } else {
        let l = x.ln();
        l - l.ln()
    }
}

/// `W₀(x)` by Halley iteration on `w·e^w − x`.
///
/// Arguments down to `−1/e − 1e−15` are clamped onto the branch point.
pub fn lambert_w0(x: f64) -> Result<WResult> {
    if x.is_nan() {
        return Err(domain("lambert_w0", x, "NaN"));
    }
    if x < BRANCH_POINT - BRANCH_TOLERANCE {
        return Err(domain("lambert_w0", x, "below -1/e"));
    }
    if x <= BRANCH_POINT {
        return Ok(WResult {
            value: -1.0,
            iterations: 0,
            residual: relative_residual(-1.0, x),
        });
    }
    if x == 0.0 {
        return Ok(WResult {
            value: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    if x == f64::INFINITY {
        return Ok(WResult {
            value: f64::INFINITY,
            iterations: 0,
            residual: 0.0,
        });
    }
    if x > 1e300 {
        let value = w_of_exp_large(x.ln())?;
        return Ok(WResult {
            value,
            iterations: 0,
            residual: relative_residual(value, x),
        });
    }

    let mut w = initial_guess(x);
    for it in 1..=MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= f64::EPSILON * x.abs() {
            return Ok(WResult {
                value: w,
                iterations: it - 1,
                residual: relative_residual(w, x),
            });
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = if denom == 0.0 || !denom.is_finite() {
            0.0
        } else {
            f / denom
        };
        let next = (w - step).max(-1.0);
        let moved = (next - w).abs();
        w = next;
        if moved <= 2.0 * ulp(w) {
            return Ok(WResult {
                value: w,
                iterations: it,
                residual: relative_residual(w, x),
            });
        }
    }
    Err(Error::IterationLimit {
        what: "lambert_w0",
        iterations: MAX_ITERATIONS,
    })
}

/// `W₀(e^L)`, usable when `e^L` itself overflows.
pub fn lambert_w0_exp(log_x: f64) -> Result<f64> {
    if log_x.is_nan() {
        return Err(domain("lambert_w0_exp", log_x, "NaN"));
    }
    if log_x < 690.0 {
        return lambert_w0(log_x.exp()).map(|r| r.value);
    }
    w_of_exp_large(log_x)
}

/// Newton on `w + ln w − L` for large `L`.
fn w_of_exp_large(log_x: f64) -> Result<f64> {
    if log_x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let mut w = log_x - log_x.ln();
    for _ in 0..MAX_ITERATIONS {
        let g = w + w.ln() - log_x;
        let step = g / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 2.0 * ulp(w) {
            return Ok(w);
        }
    }
    Err(Error::IterationLimit {
        what: "lambert_w0_exp",
        iterations: MAX_ITERATIONS,
    })
}

/// Partial sum of `Σ_{n≥1} (−n)^{n−1}/n! · xⁿ` with `terms` terms.
pub fn lambert_w0_series(x: f64, terms: usize) -> Result<f64> {
    if !(x.abs() < 1.0 / E) {
        return Err(domain("lambert_w0_series", x, "outside radius 1/e"));
    }
    if terms == 0 {
        return Err(domain("lambert_w0_series", 0.0, "need at least one term"));
    }
    // t_n = t_{n-1} · (−x) · (n/(n−1))^{n−2}
    let mut term = x;
    let mut sum = x;
    for n in 2..=terms {
        let nf = n as f64;
        term *= -x * (nf / (nf - 1.0)).powi(n as i32 - 2);
        sum += term;
    }
    Ok(sum)
}

/// `dW/dx = W / (x (1 + W))`.
pub fn lambert_w0_derivative(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Singular {
            what: "lambert_w0_derivative",
            value: x,
        });
    }
    if x <= BRANCH_POINT {
        if x >= BRANCH_POINT - BRANCH_TOLERANCE {
            return Err(Error::Singular {
                what: "lambert_w0_derivative",
                value: x,
            });
        }
        return Err(domain("lambert_w0_derivative", x, "below -1/e"));
    }
    let w = lambert_w0(x)?.value;
    Ok(w / (x * (1.0 + w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection on `w·e^w − x` over `[lo, hi]`.
    fn bisect_w(x: f64, mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > 1e-16 * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if mid * mid.exp() < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn exact_points() {
        assert_eq!(lambert_w0(0.0).unwrap().value, 0.0);
        let w_e = lambert_w0(E).unwrap().value;
        assert!((w_e - 1.0).abs() <= 2.0 * f64::EPSILON, "{w_e}");
        assert_eq!(lambert_w0(BRANCH_POINT).unwrap().value, -1.0);
    }

    #[test]
    fn omega_constant_against_bisection() {
        let oracle = bisect_w(1.0, 0.0, 1.0);
        assert!((oracle - 0.5671432904097838).abs() < 1e-15);
        let r = lambert_w0(1.0).unwrap();
        assert!((r.value - oracle).abs() < 1e-15);
        assert!(r.residual < 1e-15);
        assert!(r.iterations <= 10);
    }

    #[test]
    fn domain_and_clamp() {
        assert!(lambert_w0(-0.4).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
        let clamped = lambert_w0(BRANCH_POINT - 5e-16).unwrap();
        assert_eq!(clamped.value, -1.0);
        assert!(lambert_w0(BRANCH_POINT - 1e-14).is_err());
    }

    #[test]
    fn near_branch_point() {
        let x = BRANCH_POINT + 1e-10;
        let w = lambert_w0(x).unwrap();
        assert!(w.value > -1.0 && w.value < -0.99);
        let oracle = bisect_w(x, -1.0, -0.9);
        assert!((w.value - oracle).abs() < 1e-7, "{} vs {oracle}", w.value);
    }

    #[test]
    fn huge_arguments() {
        let w = lambert_w0(1e305).unwrap().value;
        assert!(((w + w.ln()) - 1e305f64.ln()).abs() < 1e-12);
        let via_log = lambert_w0_exp(2000.0).unwrap();
        assert!((via_log + via_log.ln() - 2000.0).abs() < 1e-12);
        let small = lambert_w0_exp(1.0).unwrap();
        assert!((small - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_values() {
        assert_eq!(lambert_w0_series(0.0, 5).unwrap(), 0.0);
        assert_eq!(lambert_w0_series(0.1, 1).unwrap(), 0.1);
        // truncation after 30 terms is 9.47e-12 (alternating tail)
        let w = lambert_w0(0.2).unwrap().value;
        let s = lambert_w0_series(0.2, 30).unwrap();
        assert!((s - w).abs() < 1e-11);
        assert!((s - w).abs() > 9e-12);
        assert!((lambert_w0_series(0.2, 40).unwrap() - w).abs() < 1e-13);
        assert!(lambert_w0_series(0.4, 10).is_err());
        assert!(lambert_w0_series(-1.0 / E, 10).is_err());
    }

    #[test]
    fn derivative_values() {
        let d = lambert_w0_derivative(E).unwrap();
        assert!((d - 0.18393972058572117).abs() < 1e-15);
        let omega = bisect_w(1.0, 0.0, 1.0);
        let d1 = lambert_w0_derivative(1.0).unwrap();
        assert!((d1 - omega / (1.0 + omega)).abs() < 1e-15);
        assert!((d1 - 0.3618962566348892).abs() < 1e-15);
        assert!(matches!(
            lambert_w0_derivative(0.0),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            lambert_w0_derivative(BRANCH_POINT),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn derivative_finite_difference_at_five() {
        let h = 1e-6;
        let fd =
            (lambert_w0(5.0 + h).unwrap().value - lambert_w0(5.0 - h).unwrap().value) / (2.0 * h);
        assert!((fd - lambert_w0_derivative(5.0).unwrap()).abs() < 1e-8);
    }
}
