//! Self-verification report over the library's identities.
//!
//! Each check measures one quantity over a fixed grid and compares it with
//! its bound. [`run_all`] is what the `verify` subcommand prints.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::approx::{approx_eval, error_scan, g_ode_residual, ApproxKind};
use crate::calculus::{
    corollary_identity_check, generating_function_check, moment,
    negative_derivative_relation_check, s_antiderivative,
};
use crate::error::Result;
use crate::gauss::{normal_cdf, probit_reference, s_derivative_n};
use crate::golden::{parse_c_table, parse_p_table, C_TABLE, P_TABLE};
use crate::lambertw::{lambert_w0, lambert_w0_derivative, lambert_w0_series};
use crate::nested::pn_via_nested;
use crate::poly::{
    c_via_derivative_recurrence, coeffs_via_matrices, poly_next_triple_sum, poly_sequence,
    series_coeff_c,
};
use crate::series::{probit_hybrid, s_series, EvalConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub module: &'static str,
    pub name: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<13} {:<44} measured={:<12.4e} bound={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.module,
            self.name,
            self.measured,
            self.bound
        )
    }
}

/// `measured ≤ bound`.
fn at_most(module: &'static str, name: &'static str, measured: f64, bound: f64) -> CheckOutcome {
    CheckOutcome {
        module,
        name,
        measured,
        bound,
        passed: measured <= bound,
    }
}

/// `measured < bound`.
fn below(module: &'static str, name: &'static str, measured: f64, bound: f64) -> CheckOutcome {
    CheckOutcome {
        module,
        name,
        measured,
        bound,
        passed: measured < bound,
    }
}

fn mismatches(module: &'static str, name: &'static str, count: usize) -> CheckOutcome {
    at_most(module, name, count as f64, 0.0)
}

/// Distance between `a` and `b` in units of the spacing at the larger
/// magnitude.
pub fn ulp_distance(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        return 0.0;
    }
    let ulp = f64::from_bits(scale.to_bits() + 1) - scale;
    (a - b).abs() / ulp
}

/// `points` uniform interior points `i/(points+1)`.
pub fn interior_grid(points: usize) -> Vec<f64> {
    (1..=points)
        .map(|i| i as f64 / (points + 1) as f64)
        .collect()
}

/// Log-spaced points from `lo` to `hi` (both > 0), `per_decade` per decade.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    let n = ((b - a) * per_decade as f64).round().max(1.0) as usize;
    (0..=n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / n as f64))
        .collect()
}

/// Pairs `(p, 1 − p)` with `p ≥ 1/2` so that `1 − p` is exact and
/// `1 − (1 − p) = p`.
pub fn complement_pairs(grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter()
        .map(|&p| if p >= 0.5 { p } else { 1.0 - p })
        .map(|p| (p, 1.0 - p))
        .collect()
}

/// Probabilities covering `[1e−12, 1 − 1e−12]`: log-spaced tails plus a
/// uniform middle.
pub fn probability_grid() -> Vec<f64> {
    let tail = log_grid(1e-12, 1e-2, 10);
    let mut out: Vec<f64> = tail.clone();
    out.extend((1..100).map(|i| i as f64 / 100.0));
    out.extend(tail.iter().map(|&t| 1.0 - t));
    out
}

fn polys_checks() -> Result<Vec<CheckOutcome>> {
    const M: &str = "bigint-polys";
    let seq = poly_sequence(25);
    let mut route = 0;
    let mut recurrence = 0;
    let mut parity = 0;
    let mut leading = 0;
    let mut fact = BigInt::one();
    for n in 0..=25usize {
        if n > 0 {
            fact *= n;
        }
        let coeffs: Vec<BigInt> = (0..=n).map(|k| seq[n].coeff(k)).collect();
        if coeffs_via_matrices(n) != coeffs {
            route += 1;
        }
        if n >= 1 && poly_next_triple_sum(&seq[..n])? != seq[n] {
            route += 1;
        }
        for (k, c) in coeffs.iter().enumerate() {
            if (k + n) % 2 == 1 && !c.is_zero() {
                parity += 1;
            }
            if n >= 1 {
                let prev = &seq[n - 1];
                let lower = if k >= 1 {
                    prev.coeff(k - 1)
                } else {
                    BigInt::zero()
                };
                let want = BigInt::from(n) * lower + BigInt::from(k + 1) * prev.coeff(k + 1);
                if &want != c {
                    recurrence += 1;
                }
            }
        }
        if seq[n].coeff(n) != fact {
            leading += 1;
        }
    }
    let via_p = series_coeff_c(41);
    let via_d = c_via_derivative_recurrence(41);
    let c_routes = via_p
        .values()
        .iter()
        .zip(via_d.values())
        .filter(|(a, b)| a != b)
        .count()
        + via_p
            .values()
            .iter()
            .step_by(2)
            .filter(|c| !c.is_zero())
            .count();
    let mut golden = 0;
    let c_rows = parse_c_table(C_TABLE)?;
    golden += c_rows
        .iter()
        .filter(|(n, c)| via_p.get(*n) != Some(c))
        .count();
    golden += 21 - c_rows.len().min(21);
    for (n, coeffs) in parse_p_table(P_TABLE)? {
        let want: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
        for produced in [
            (0..=n).map(|k| seq[n].coeff(k)).collect::<Vec<_>>(),
            coeffs_via_matrices(n),
            {
                let p = pn_via_nested(n)?;
                (0..=n).map(|k| p.coeff(k)).collect()
            },
        ] {
            let got: Vec<String> = produced.iter().map(ToString::to_string).collect();
            if got != want {
                golden += 1;
            }
        }
    }
    Ok(vec![
        mismatches(M, "route agreement n<=25", route),
        mismatches(M, "coefficient recurrence n<=25", recurrence),
        mismatches(M, "parity n<=25", parity),
        mismatches(M, "leading coefficient n!", leading),
        mismatches(M, "C routes agree n<=41", c_routes),
        mismatches(M, "published golden tables", golden),
    ])
}

fn nested_checks() -> Result<Vec<CheckOutcome>> {
    let seq = poly_sequence(15);
    let mut bad = 0;
    for (n, p) in seq.iter().enumerate() {
        if &pn_via_nested(n)? != p {
            bad += 1;
        }
    }
    Ok(vec![mismatches(
        "nested-deriv",
        "nested route equals P_n, n<=15",
        bad,
    )])
}

fn lambertw_checks() -> Result<Vec<CheckOutcome>> {
    const M: &str = "lambertw";
    let grid = log_grid(1e-3, 1e12, 20);
    let mut residual = 0.0f64;
    let mut monotone = 0;
    let mut prev = f64::NEG_INFINITY;
    for &x in &grid {
        let w = lambert_w0(x)?.value;
        residual = residual.max(((w * w.exp() - x) / x).abs());
        if w <= prev {
            monotone += 1;
        }
        prev = w;
    }
    let mut series = 0.0f64;
    for i in 0..40 {
        let x = -0.25 + 0.5 * i as f64 / 39.0;
        series = series.max((lambert_w0_series(x, 60)? - lambert_w0(x)?.value).abs());
    }
    let mut deriv = 0.0f64;
    for x in [0.5, 1.0, 2.0, 10.0, 100.0] {
        let h = 1e-6 * x;
        let fd = (lambert_w0(x + h)?.value - lambert_w0(x - h)?.value) / (2.0 * h);
        let d = lambert_w0_derivative(x)?;
        deriv = deriv.max(((fd - d) / d).abs());
    }
    Ok(vec![
        at_most(M, "defining-equation residual (relative)", residual, 1e-14),
        at_most(M, "series vs iteration on [-0.25, 0.25]", series, 1e-12),
        mismatches(M, "strictly increasing on log grid", monotone),
        at_most(M, "derivative vs finite difference", deriv, 1e-7),
    ])
}

fn gauss_checks() -> Result<Vec<CheckOutcome>> {
    const M: &str = "gauss-ref";
    let grid = probability_grid();
    let mut rt_p = 0.0f64;
    for &p in &grid {
        let s = probit_reference(p)?.value;
        rt_p = rt_p.max((normal_cdf(s) - p).abs() / p.max(1.0 - p).max(1e-2));
    }
    let mut rt_x = 0.0f64;
    let mut rt_x_lower = 0.0f64;
    for i in 0..=140 {
        let x = -7.0 + 0.1 * i as f64;
        let back = probit_reference(normal_cdf(x))?.value;
        let err = (back - x).abs() / x.abs().max(1.0);
        rt_x = rt_x.max(err);
        if x <= 0.0 {
            rt_x_lower = rt_x_lower.max(err);
        }
    }
    let mut sym = 0.0f64;
    for (p, q) in complement_pairs(&grid) {
        sym = sym.max(ulp_distance(
            probit_reference(p)?.value,
            -probit_reference(q)?.value,
        ));
    }
    let h = 1e-6;
    let mut ode = 0.0f64;
    let mut consistency = 0.0f64;
    for i in 0..=16 {
        let p = 0.1 + 0.05 * i as f64;
        let fd = (s_derivative_n(p + h, 1)? - s_derivative_n(p - h, 1)?) / (2.0 * h);
        let s = probit_reference(p)?.value;
        let sp = s_derivative_n(p, 1)?;
        let rhs = s * sp * sp;
        ode = ode.max((fd - rhs).abs() / rhs.abs().max(sp * sp));
        if (0.2..=0.8).contains(&p) {
            for n in 2..=4 {
                let fd =
                    (s_derivative_n(p + h, n - 1)? - s_derivative_n(p - h, n - 1)?) / (2.0 * h);
                let d = s_derivative_n(p, n)?;
                consistency = consistency.max((fd - d).abs() / d.abs().max(sp.powi(n as i32)));
            }
        }
    }
    Ok(vec![
        at_most(M, "|N(S(p)) - p| / max(p, 1-p, 1e-2)", rt_p, 1e-13),
        at_most(M, "|S(N(x)) - x| / max(1, |x|), x in [-7, 7]", rt_x, 1e-11),
        at_most(
            M,
            "|S(N(x)) - x| / max(1, |x|), x in [-7, 0]",
            rt_x_lower,
            1e-11,
        ),
        at_most(M, "S(1-p) = -S(p) (ulps)", sym, 1.0),
        at_most(M, "ODE S'' = S S'^2 (finite difference)", ode, 1e-4),
        at_most(M, "derivative consistency n<=4", consistency, 1e-5),
    ])
}

fn series_checks() -> Result<Vec<CheckOutcome>> {
    const M: &str = "series-eval";
    let cfg = EvalConfig::default();
    let series_cfg = EvalConfig {
        term_cap: 61,
        ..cfg
    };
    let mut series = 0.0f64;
    for i in 0..=100 {
        let x = 0.25 + 0.5 * i as f64 / 100.0;
        series = series.max((s_series(x, &series_cfg)?.value - probit_reference(x)?.value).abs());
    }
    let grid = interior_grid(9999);
    let mut hybrid = 0.0f64;
    for &p in &grid {
        let s = probit_reference(p)?.value;
        hybrid = hybrid.max((probit_hybrid(p, &cfg)? - s).abs() / (1.0 + s.abs()));
    }
    let mut odd = 0.0f64;
    for (p, q) in complement_pairs(&grid) {
        odd = odd.max(ulp_distance(
            probit_hybrid(p, &cfg)?,
            -probit_hybrid(q, &cfg)?,
        ));
    }
    let mut round_trip = 0.0f64;
    let mut all = grid.clone();
    let tail = log_grid(1e-12, 1e-4, 10);
    all.extend(tail.iter().copied());
    all.extend(tail.iter().map(|t| 1.0 - t));
    for &p in &all {
        let s = probit_hybrid(p, &cfg)?;
        round_trip = round_trip.max((normal_cdf(s) - p).abs() / p.max(1.0 - p).max(1e-2));
    }
    Ok(vec![
        at_most(M, "series vs reference, |u|<=0.25, 61 terms", series, 1e-12),
        at_most(M, "hybrid vs reference / (1+|S|)", hybrid, 1e-12),
        at_most(M, "hybrid oddness (ulps)", odd, 1.0),
        at_most(
            M,
            "hybrid round trip / max(p, 1-p, 1e-2)",
            round_trip,
            1e-13,
        ),
    ])
}

fn approx_checks() -> Result<Vec<CheckOutcome>> {
    const M: &str = "approx";
    let scan = error_scan(9999, 0.001, 0.999)?;
    let prob = scan.max_probability_error();
    let mut anti = 0.0f64;
    let mut mirror = 0.0f64;
    for (p, q) in complement_pairs(&interior_grid(999)) {
        for kind in [ApproxKind::G2, ApproxKind::G3] {
            anti = anti.max(ulp_distance(approx_eval(kind, p)?, -approx_eval(kind, q)?));
        }
        mirror = mirror.max(ulp_distance(
            approx_eval(ApproxKind::G1, p)?,
            -approx_eval(ApproxKind::G0, q)?,
        ));
    }
    let mut tail_increases = 0;
    let mut prev = f64::INFINITY;
    for k in 2..=10 {
        let x = 10f64.powi(-k);
        let s = probit_reference(x)?.value;
        let rel = ((approx_eval(ApproxKind::G0, x)? - s) / s).abs();
        if rel >= prev {
            tail_increases += 1;
        }
        prev = rel;
    }
    let mut ode = 0.0f64;
    for i in 0..=29 {
        let x = 0.01 + 0.01 * i as f64;
        ode = ode.max(g_ode_residual(ApproxKind::G0, x)?);
        ode = ode.max(g_ode_residual(ApproxKind::G1, 1.0 - x)?);
    }
    Ok(vec![
        below(
            M,
            "max |g3 - S| on [0.001, 0.999]",
            scan.max_error[3],
            0.0023,
        ),
        CheckOutcome {
            module: M,
            name: "max |g2 - S| exceeds max |g3 - S|",
            measured: scan.max_error[2],
            bound: scan.max_error[3],
            passed: scan.max_error[2] > scan.max_error[3],
        },
        below(M, "max |N(g3) - x| on [0.001, 0.999]", prob[3], 0.0023),
        at_most(M, "g2, g3 antisymmetry (ulps)", anti, 2.0),
        at_most(M, "g1(x) = -g0(1-x) (ulps)", mirror, 2.0),
        mismatches(M, "g0 tail relative error decreasing", tail_increases),
        at_most(M, "g0/g1 corrected ODE residual", ode, 1e-4),
    ])
}

fn calculus_checks() -> Result<Vec<CheckOutcome>> {
    const M: &str = "calculus";
    let h = 1e-6;
    let mut anti = 0.0f64;
    for i in 0..=12 {
        let x = 0.2 + 0.05 * i as f64;
        let d2 = (s_antiderivative(2, x + h)? - s_antiderivative(2, x - h)?) / (2.0 * h);
        let a1 = s_antiderivative(1, x)?;
        anti = anti.max(((d2 - a1) / a1).abs());
        let d1 = (s_antiderivative(1, x + h)? - s_antiderivative(1, x - h)?) / (2.0 * h);
        let s = probit_reference(x)?.value;
        anti = anti.max((d1 - s).abs() / s.abs().max(1e-2));
    }
    let mut moments = 0.0f64;
    for n in 0..=12 {
        let m = moment(n)?;
        moments = moments.max((m.quadrature - m.closed_form).abs());
    }
    let mut gf_err = 0.0f64;
    let mut gf_increases = 0;
    for x in [-1.0, 0.0, 1.0] {
        for t in [-0.2, -0.1, 0.1, 0.2] {
            let mut prev = f64::INFINITY;
            for k in [5, 10, 15, 20] {
                let (partial, reference) = generating_function_check(x, t, k)?;
                let err = (partial - reference).abs();
                if err > prev {
                    gf_increases += 1;
                }
                prev = err;
            }
            let (partial, reference) = generating_function_check(x, t, 25)?;
            gf_err = gf_err.max((partial - reference).abs());
        }
    }
    let grid = interior_grid(17);
    let mut relation = 0.0f64;
    let mut corollary = 0.0f64;
    for &x in &grid {
        for n in [0, -1, -2] {
            let lhs = match n {
                0 => probit_reference(x)?.value,
                _ => s_antiderivative((-n) as u8, x)?,
            };
            relation = relation.max(negative_derivative_relation_check(n, x)? / (1.0 + lhs.abs()));
        }
        corollary = corollary.max(corollary_identity_check(x)?);
    }
    Ok(vec![
        at_most(M, "antiderivative finite differences", anti, 1e-5),
        at_most(
            M,
            "moments n<=12: |quadrature - closed form|",
            moments,
            1e-9,
        ),
        at_most(M, "generating function, k_max=25", gf_err, 1e-10),
        mismatches(M, "generating function error nonincreasing", gf_increases),
        at_most(M, "S^(n) = P_(n-1)(S) S'^n, n=0,-1,-2", relation, 1e-12),
        at_most(M, "S(-2 sqrt(pi) S^(-2)) = sqrt(2) S", corollary, 1e-9),
    ])
}

/// Runs every module's checks in a fixed order.
pub fn run_all() -> Result<Vec<CheckOutcome>> {
    let mut out = polys_checks()?;
    out.extend(nested_checks()?);
    out.extend(lambertw_checks()?);
    out.extend(gauss_checks()?);
    out.extend(series_checks()?);
    out.extend(approx_checks()?);
    out.extend(calculus_checks()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(interior_grid(3), vec![0.25, 0.5, 0.75]);
        let g = log_grid(1e-3, 1e3, 1);
        assert_eq!(g.len(), 7);
        assert!((g[6] - 1e3).abs() < 1e-9);
        for (p, q) in complement_pairs(&[0.1, 0.7, 0.333]) {
            assert!(p >= 0.5);
            assert_eq!(1.0 - q, p);
        }
    }

    #[test]
    fn ulp_distance_basics() {
        assert_eq!(ulp_distance(1.0, 1.0), 0.0);
        assert_eq!(ulp_distance(1.0, 1.0 + f64::EPSILON), 1.0);
        assert_eq!(ulp_distance(0.0, 0.0), 0.0);
    }

    #[test]
    fn fast_sections_pass() {
        for c in polys_checks()
            .unwrap()
            .into_iter()
            .chain(nested_checks().unwrap())
            .chain(lambertw_checks().unwrap())
        {
            assert!(c.passed, "{c}");
        }
    }
}
