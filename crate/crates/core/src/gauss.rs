//! The standard normal CDF `N`, its density, and a safeguarded Newton
//! inverse used as the accuracy oracle for everything else.

use crate::approx::{approx_eval, ApproxKind};
use crate::error::{domain, Error, Result};
use crate::poly::cached_poly;
use crate::FRAC_1_SQRT_2PI;

/// Switch from the central series to the tail continued fraction at
/// `x²/2 = 1.5`.
const SERIES_LIMIT: f64 = 1.7320508075688772;
const CF_MAX_TERMS: usize = 500;
const NEWTON_MAX_ITERATIONS: usize = 100;
const LEFT_BRACKET: f64 = -40.0;

/// `e^{−x²/2}` with `x²` split into an exactly representable high part and
/// a small correction, so large `|x|` does not amplify the rounding of `x²`.
pub(crate) fn exp_neg_half_sq(x: f64) -> f64 {
    let hi = f64::from_bits(x.to_bits() & 0xFFFF_FFFF_F800_0000);
    let lo = x - hi;
    let head = -0.5 * (hi * hi);
    let tail = -(hi * lo + 0.5 * lo * lo);
    head.exp() * tail.exp()
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * exp_neg_half_sq(x)
}

/// `N(x) − 1/2` for `|x| < √3` from the positive-term expansion
/// `φ(x)·Σ x^{2n+1}/(2n+1)!!`.
fn central(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 1.0;
    loop {
        k += 2.0;
        term *= x2 / k;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    normal_pdf(x) * sum
}

/// `1 − N(x)` for `x ≥ √3` from the Legendre continued fraction of
/// `Γ(1/2, x²/2)`, evaluated with the modified Lentz method.
fn upper_tail_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let y = 0.5 * x * x;
    let mut b = y + 0.5;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..CF_MAX_TERMS {
        let fi = i as f64;
        let an = -fi * (fi - 0.5);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            break;
        }
    }
    normal_pdf(x) * (0.5 * x * h)
}

/// `1 − N(x)`, accurate to about 1e−14 relative while it stays normal.
pub fn normal_sf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x < 0.0 {
        return normal_cdf(-x);
    }
    if x < SERIES_LIMIT {
        0.5 - central(x)
    } else {
        upper_tail_cf(x)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    if x.abs() < SERIES_LIMIT {
        return 0.5 + central(x);
    }
    if x < 0.0 {
        upper_tail_cf(-x)
    } else {
        1.0 - upper_tail_cf(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbitResult {
    pub value: f64,
    /// `N(value) − p`.
    pub residual: f64,
    pub iterations: usize,
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    f64::from_bits(a.to_bits() + 1) - a
}

/// Newton step for `ln N(x) = ln q`, given `n = N(x)`.
///
/// Solving in log space keeps the contraction factor near `1/(2|x|)` in the
/// lower tail, where plain Newton on `N` overshoots.
pub(crate) fn log_newton_step(x: f64, n: f64, q: f64) -> f64 {
    let pdf = normal_pdf(x);
    if n == 0.0 || pdf == 0.0 {
        return f64::NAN;
    }
    -((n - q) / q).ln_1p() * (n / pdf)
}

/// Solves `N(x) = q` for `q ∈ (0, 1/2)`; returns `(x, iterations)`.
fn lower_inverse(q: f64) -> Result<(f64, usize)> {
    let mut lo = LEFT_BRACKET;
    let mut hi = 0.0;
    let mut x = approx_eval(ApproxKind::G2, q)?;
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    for it in 1..=NEWTON_MAX_ITERATIONS {
        let n = normal_cdf(x);
        let f = n - q;
        if f == 0.0 {
            return Ok((x, it));
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let step = log_newton_step(x, n, q);
        let mut next = x + step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - x).abs();
        x = next;
        if moved <= 2.0 * ulp(x) || hi - lo <= 2.0 * ulp(lo) {
            return Ok((x, it));
        }
    }
    Err(Error::IterationLimit {
        what: "probit_reference",
        iterations: NEWTON_MAX_ITERATIONS,
    })
}

/// Reference inverse `S(p)` by safeguarded Newton on `N(x) = p`.
///
/// Upper-half arguments are reflected through `q = 1 − p` (exact for
/// `p ≥ 1/2`) so the iteration always runs in the lower tail where `N` has
/// full relative precision.
pub fn probit_reference(p: f64) -> Result<ProbitResult> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(
            "probit_reference",
            p,
            "probability must lie in (0, 1)",
        ));
    }
    if p == 0.5 {
        return Ok(ProbitResult {
            value: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    if p > 0.5 {
        let q = 1.0 - p;
        let (x, iterations) = lower_inverse(q)?;
        Ok(ProbitResult {
            value: -x,
            residual: q - normal_cdf(x),
            iterations,
        })
    } else {
        let (x, iterations) = lower_inverse(p)?;
        Ok(ProbitResult {
            value: x,
            residual: normal_cdf(x) - p,
            iterations,
        })
    }
}

/// `S(p)` from the reference inverse.
pub(crate) fn probit(p: f64) -> Result<f64> {
    probit_reference(p).map(|r| r.value)
}

/// `S′ = √(2π)·e^{S²/2} = 1/φ(S)`.
pub(crate) fn s_prime_at(s: f64) -> f64 {
    1.0 / normal_pdf(s)
}

/// `S⁽ⁿ⁾(p) = P_{n−1}(S)·(S′)ⁿ`.
pub fn s_derivative_n(p: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(domain("s_derivative_n", 0.0, "order must be at least 1"));
    }
    let s = probit(p)?;
    let sp = s_prime_at(s);
    Ok(cached_poly(n - 1).eval(s) * sp.powi(n as i32))
}
