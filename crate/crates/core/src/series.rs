//! Central Taylor series of `S` about `1/2` and the hybrid evaluator.
//!
//! `S(x) = Σ_k t_k·u^{2k+1}` with `u = x − 1/2` and
//! `t_k = (2π)^{(2k+1)/2}·C_{2k+1}/(2k+1)!`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::approx::{approx_eval, ApproxKind};
use crate::error::{domain, Result};
use crate::gauss::{log_newton_step, normal_cdf};
use crate::poly::series_coeff_c;
use crate::SQRT_2PI;

/// Floating evaluation knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Maximum number of series terms summed.
    pub term_cap: usize,
    /// Summation stops once the next summand drops below this fraction of
    /// the partial sum.
    pub term_tolerance: f64,
    /// Newton stops once `|N(x) − q| ≤ newton_tolerance·q`.
    pub newton_tolerance: f64,
    pub newton_cap: usize,
    /// Series is used for `|p − 1/2| ≤ switch_radius`.
    pub switch_radius: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            term_cap: 120,
            term_tolerance: 1e-17,
            newton_tolerance: 1e-15,
            newton_cap: 8,
            switch_radius: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTerms {
    /// `t_k` for `k = 0..=k_max`.
    pub terms: Vec<f64>,
    /// Number of exact coefficients `C_1, C_3, …` the factors came from.
    pub generated_from: usize,
}

/// Correctly rounded `num/den` for positive integers.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    debug_assert!(num.is_positive() && den.is_positive());
    const KEEP: i64 = 66;
    let shift = KEEP + den.bits() as i64 - num.bits() as i64;
    let (q, r) = if shift >= 0 {
        let n = num << shift as usize;
        (&n / den, &n % den)
    } else {
        let d = den << (-shift) as usize;
        (num / &d, num % &d)
    };
    let sticky = !r.is_zero();
    let extra = q.bits() as i64 - 53;
    debug_assert!(extra > 1);
    let mut mantissa = &q >> extra as usize;
    let rem = &q - (&mantissa << extra as usize);
    let half = BigInt::one() << (extra - 1) as usize;
    let round_up = rem > half || (rem == half && (sticky || mantissa.bit(0)));
    if round_up {
        mantissa += 1;
    }
    let m = mantissa.to_f64().expect("fits in 54 bits");
    m * 2f64.powi((extra - shift) as i32)
}

/// Factors `t_0 … t_{k_max}`; `C_{2k+1}/(2k+1)!` is rounded once, then
/// scaled by `(√2π)^{2k+1}`.
pub fn taylor_terms(k_max: usize) -> SeriesTerms {
    let n_max = 2 * k_max + 1;
    let table = series_coeff_c(n_max);
    let mut factorial = BigInt::one();
    let mut sqrt_2pi_pow = 1.0;
    let mut terms = Vec::with_capacity(k_max + 1);
    for n in 1..=n_max {
        factorial *= n;
        sqrt_2pi_pow *= SQRT_2PI;
        if n % 2 == 1 {
            let c = table.get(n).expect("table covers n_max");
            terms.push(ratio_to_f64(c, &factorial) * sqrt_2pi_pow);
        }
    }
    SeriesTerms {
        terms,
        generated_from: k_max + 1,
    }
}

fn default_terms() -> &'static SeriesTerms {
    static TERMS: OnceLock<SeriesTerms> = OnceLock::new();
    TERMS.get_or_init(|| taylor_terms(EvalConfig::default().term_cap - 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the first summand left out (or the last one added when
    /// the cap was hit).
    pub last_term: f64,
}

pub fn s_series(x: f64, config: &EvalConfig) -> Result<SeriesEval> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("s_series", x, "probability must lie in (0, 1)"));
    }
    let u = x - 0.5;
    if u.abs() > config.switch_radius {
        return Err(domain("s_series", x, "outside the series switch radius"));
    }
    if u == 0.0 {
        return Ok(SeriesEval {
            value: 0.0,
            terms_used: 0,
            last_term: 0.0,
        });
    }
    let owned;
    let table = if config.term_cap <= default_terms().terms.len() {
        default_terms()
    } else {
        owned = taylor_terms(config.term_cap - 1);
        &owned
    };
    let u2 = u * u;
    let mut power = u;
    let mut sum = 0.0;
    let mut last_term = 0.0;
    let mut terms_used = 0;
    for &t in table.terms.iter().take(config.term_cap) {
        let summand = t * power;
        last_term = summand.abs();
        if terms_used > 0 && last_term < config.term_tolerance * sum.abs() {
            break;
        }
        sum += summand;
        terms_used += 1;
        power *= u2;
    }
    Ok(SeriesEval {
        value: sum,
        terms_used,
        last_term,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HybridRoute {
    Series,
    Newton { steps: usize },
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    f64::from_bits(a.to_bits() + 1) - a
}

/// Lower half `q < 1/2`.
fn hybrid_lower(q: f64, config: &EvalConfig) -> Result<(f64, HybridRoute)> {
    if 0.5 - q <= config.switch_radius {
        return Ok((s_series(q, config)?.value, HybridRoute::Series));
    }
    let mut x = approx_eval(ApproxKind::G2, q)?;
    let mut steps = 0;
    while steps < config.newton_cap {
        let n = normal_cdf(x);
        let f = n - q;
        if f.abs() <= config.newton_tolerance * q {
            break;
        }
        let step = log_newton_step(x, n, q);
        x += step;
        steps += 1;
        // quadratic convergence: the error left after a step of size δ is
        // about δ²/(2|x|), so once δ² is below an ulp the iterate is final
        if step * step <= ulp(x) {
            break;
        }
    }
    Ok((x, HybridRoute::Newton { steps }))
}

/// `S(p)` with the route taken.
pub fn probit_hybrid_traced(p: f64, config: &EvalConfig) -> Result<(f64, HybridRoute)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("probit_hybrid", p, "probability must lie in (0, 1)"));
    }
    if p == 0.5 {
        return Ok((0.0, HybridRoute::Series));
    }
    if p > 0.5 {
        let (x, route) = hybrid_lower(1.0 - p, config)?;
        Ok((-x, route))
    } else {
        hybrid_lower(p, config)
    }
}

/// Production inverse: central series near `1/2`, Lambert-W seed plus
/// Newton polish elsewhere.
pub fn probit_hybrid(p: f64, config: &EvalConfig) -> Result<f64> {
    probit_hybrid_traced(p, config).map(|(x, _)| x)
}
