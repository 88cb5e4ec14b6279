//! Antiderivatives of `S`, the negative-index polynomials, moments of `S`
//! on `[0, 1]`, and the exponential generating function of `P_k`.

use crate::error::{domain, Result};
use crate::gauss::{normal_cdf, normal_pdf, probit, s_prime_at};
use crate::poly::cached_poly;
use crate::{FRAC_1_SQRT_2PI, SQRT_PI};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const MOMENT_MAX_ORDER: usize = 20;
const QUAD_HALF_WIDTH: f64 = 12.0;
const QUAD_INTERVALS: usize = 1_000_000;
const P_MINUS_3_GUARD: f64 = 25.0;

fn check_probability(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(domain(what, x, "probability must lie in (0, 1)"))
    }
}

/// `S⁽⁻¹⁾(x) = −φ(S(x))` and `S⁽⁻²⁾(x) = −N(√2·S(x))/(2√π)`; both vanish
/// at `x = 0`.
pub fn s_antiderivative(order: u8, x: f64) -> Result<f64> {
    check_probability("s_antiderivative", x)?;
    let s = probit(x)?;
    match order {
        1 => Ok(-normal_pdf(s)),
        2 => Ok(-normal_cdf(SQRT_2 * s) / (2.0 * SQRT_PI)),
        _ => Err(domain(
            "s_antiderivative",
            order as f64,
            "order must be 1 or 2",
        )),
    }
}

/// Closed forms `P_{−1}(x) = x`, `P_{−2}(x) = −1`,
/// `P_{−3}(x) = −√π·e^{x²}·N(√2·x)`.
pub fn p_negative_eval(n: i32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("p_negative_eval", x, "argument must be finite"));
    }
    match n {
        -1 => Ok(x),
        -2 => Ok(-1.0),
        -3 => {
            if x.abs() > P_MINUS_3_GUARD {
                return Err(domain("p_negative_eval", x, "|x| > 25 overflows e^{x^2}"));
            }
            Ok(-SQRT_PI * (x * x).exp() * normal_cdf(SQRT_2 * x))
        }
        _ => Err(domain(
            "p_negative_eval",
            n as f64,
            "index must be -1, -2 or -3",
        )),
    }
}

/// `|S⁽ⁿ⁾(x) − P_{n−1}(S)·(S′)ⁿ|` for `n ∈ {0, −1, −2}`.
pub fn negative_derivative_relation_check(n: i32, x: f64) -> Result<f64> {
    check_probability("negative_derivative_relation_check", x)?;
    let s = probit(x)?;
    let lhs = match n {
        0 => s,
        -1 => s_antiderivative(1, x)?,
        -2 => s_antiderivative(2, x)?,
        _ => {
            return Err(domain(
                "negative_derivative_relation_check",
                n as f64,
                "order must be 0, -1 or -2",
            ))
        }
    };
    let rhs = p_negative_eval(n - 1, s)? * s_prime_at(s).powi(n);
    Ok((lhs - rhs).abs())
}

/// `|S(−2√π·S⁽⁻²⁾(x)) − √2·S(x)|`.
pub fn corollary_identity_check(x: f64) -> Result<f64> {
    check_probability("corollary_identity_check", x)?;
    let inner = -2.0 * SQRT_PI * s_antiderivative(2, x)?;
    if !(inner > 0.0 && inner < 1.0) {
        return Err(domain(
            "corollary_identity_check",
            x,
            "inner argument leaves (0, 1)",
        ));
    }
    Ok((probit(inner)? - SQRT_2 * probit(x)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentResult {
    pub n: usize,
    /// Gaussian moment: `(n−1)!!` for even `n`, zero for odd.
    pub closed_form: f64,
    /// `∫ zⁿ φ(z) dz` over `|z| ≤ 12` by composite Simpson.
    pub quadrature: f64,
    /// The product `Π_{i=1}^{k} (2i+1)` for `n = 2k`, zero for odd `n`.
    pub paper_formula: f64,
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Composite Simpson rule with `intervals` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(
        intervals >= 2 && intervals.is_multiple_of(2),
        "Simpson needs an even interval count"
    );
    let h = (b - a) / intervals as f64;
    let mut acc = CompensatedSum::default();
    acc.add(f(a));
    acc.add(f(b));
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(a + h * i as f64));
    }
    acc.total() * h / 3.0
}

pub fn moment(n: usize) -> Result<MomentResult> {
    if n > MOMENT_MAX_ORDER {
        return Err(domain(
            "moment",
            n as f64,
            "order above 20 is ill-conditioned",
        ));
    }
    let (closed_form, paper_formula) = if n % 2 == 1 {
        (0.0, 0.0)
    } else {
        let k = n / 2;
        let double_fact: f64 = (1..k).map(|i| (2 * i + 1) as f64).product();
        let printed: f64 = (1..=k).map(|i| (2 * i + 1) as f64).product();
        (double_fact, printed)
    };
    let quadrature = simpson(
        |z| z.powi(n as i32) * FRAC_1_SQRT_2PI * (-0.5 * z * z).exp(),
        -QUAD_HALF_WIDTH,
        QUAD_HALF_WIDTH,
        QUAD_INTERVALS,
    );
    Ok(MomentResult {
        n,
        closed_form,
        quadrature,
        paper_formula,
    })
}

/// `(Σ_{k≤k_max} P_k(x)·t^k/k!, e^{½S²[N(x)+tφ(x)] − x²/2})`.
pub fn generating_function_check(x: f64, t: f64, k_max: usize) -> Result<(f64, f64)> {
    if !(x.abs() <= 2.0) {
        return Err(domain("generating_function_check", x, "need |x| <= 2"));
    }
    if !(t.abs() <= 0.5) {
        return Err(domain("generating_function_check", t, "need |t| <= 0.5"));
    }
    let arg = normal_cdf(x) + t * normal_pdf(x);
    if !(arg > 0.0 && arg < 1.0) {
        return Err(domain(
            "generating_function_check",
            arg,
            "N(x) + t N'(x) leaves (0, 1)",
        ));
    }
    let s = probit(arg)?;
    let reference = (0.5 * (s - x) * (s + x)).exp();
    let mut partial = 0.0;
    let mut scale = 1.0;
    for k in 0..=k_max {
        if k > 0 {
            scale *= t / k as f64;
        }
        partial += cached_poly(k).eval(x) * scale;
    }
    Ok((partial, reference))
}
