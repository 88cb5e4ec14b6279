//! Lambert-W asymptotic approximations to `S`:
//!
//! * `g0(x) = −√W(1/(2πx²))` (left endpoint),
//! * `g1(x) = √W(1/(2π(x−1)²))` (right endpoint),
//! * `g2(x) = (2x−1)·√W(1/(2πx²(x−1)²))`,
//! * `g3(x) = Q(x)·√W(1/(2πx²(x−1)²))` with the cubic `Q` below.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Result};
use crate::gauss::{normal_cdf, probit_reference};
use crate::lambertw::lambert_w0_exp;
use crate::SQRT_2PI;

const LN_2PI: f64 = 1.8378770664093453;
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxKind {
    G0,
    G1,
    G2,
    G3,
}

impl ApproxKind {
    pub const ALL: [ApproxKind; 4] = [
        ApproxKind::G0,
        ApproxKind::G1,
        ApproxKind::G2,
        ApproxKind::G3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ApproxKind::G0 => "g0",
            ApproxKind::G1 => "g1",
            ApproxKind::G2 => "g2",
            ApproxKind::G3 => "g3",
        }
    }
}

impl fmt::Display for ApproxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ApproxKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "g0" => Ok(ApproxKind::G0),
            "g1" => Ok(ApproxKind::G1),
            "g2" => Ok(ApproxKind::G2),
            "g3" => Ok(ApproxKind::G3),
            other => Err(format!("unknown approximation {other:?}")),
        }
    }
}

/// `Q(x) = −1 + (6−2√2π)x + (−12+6√2π)x² + (8−4√2π)x³`.
///
/// About `x = 1/2` the same cubic reads `√2π·v + (8−4√2π)·v³` with
/// `v = x − 1/2`; that odd form is what [`QPoly::eval`] uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPoly {
    /// Monomial coefficients, constant term first.
    pub coeffs: [f64; 4],
}

impl QPoly {
    pub const fn new() -> Self {
        QPoly {
            coeffs: [
                -1.0,
                6.0 - 2.0 * SQRT_2PI,
                -12.0 + 6.0 * SQRT_2PI,
                8.0 - 4.0 * SQRT_2PI,
            ],
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let v = x - 0.5;
        v * (SQRT_2PI + (8.0 - 4.0 * SQRT_2PI) * v * v)
    }

    /// Horner on the monomial coefficients.
    pub fn eval_monomial(&self, x: f64) -> f64 {
        let [c0, c1, c2, c3] = self.coeffs;
        c0 + x * (c1 + x * (c2 + x * c3))
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let [_, c1, c2, c3] = self.coeffs;
        c1 + x * (2.0 * c2 + 3.0 * c3 * x)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        let [_, _, c2, c3] = self.coeffs;
        2.0 * c2 + 6.0 * c3 * x
    }
}

impl Default for QPoly {
    fn default() -> Self {
        Self::new()
    }
}

pub fn q_eval(x: f64) -> f64 {
    QPoly::new().eval(x)
}

/// `√W(e^L)` for `L = −ln(2π) − 2 ln m`, i.e. `√W(1/(2π m²))`.
fn sqrt_w_inv_2pi_sq(m: f64) -> Result<f64> {
    let arg = 1.0 / (2.0 * std::f64::consts::PI * m * m);
    let w = if arg.is_finite() {
        crate::lambertw::lambert_w0(arg)?.value
    } else {
        lambert_w0_exp(-LN_2PI - 2.0 * m.ln())?
    };
    Ok(w.sqrt())
}

/// `(min(x, 1−x), max(x, 1−x))`, so mirrored arguments see identical
/// floating-point operands.
fn ordered_pair(x: f64) -> (f64, f64) {
    if x <= 0.5 {
        (x, 1.0 - x)
    } else {
        (1.0 - x, x)
    }
}

pub fn approx_eval(kind: ApproxKind, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain("approx_eval", x, "probability must lie in (0, 1)"));
    }
    match kind {
        ApproxKind::G0 => Ok(-sqrt_w_inv_2pi_sq(x)?),
        ApproxKind::G1 => Ok(sqrt_w_inv_2pi_sq(1.0 - x)?),
        ApproxKind::G2 | ApproxKind::G3 => {
            if x == 0.5 {
                return Ok(0.0);
            }
            let (a, b) = ordered_pair(x);
            let root = sqrt_w_inv_2pi_sq(a * b)?;
            let factor = match kind {
                ApproxKind::G2 => 2.0 * x - 1.0,
                _ => q_eval(x),
            };
            Ok(factor * root)
        }
    }
}

/// One grid point of an error scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorScanRow {
    pub x: f64,
    pub s_ref: f64,
    pub g: [f64; 4],
    pub e: [f64; 4],
}

impl ErrorScanRow {
    pub fn at(x: f64) -> Result<Self> {
        let s_ref = probit_reference(x)?.value;
        let mut g = [0.0; 4];
        for (slot, kind) in g.iter_mut().zip(ApproxKind::ALL) {
            *slot = approx_eval(kind, x)?;
        }
        Ok(ErrorScanRow {
            x,
            s_ref,
            g,
            e: g.map(|gi| (gi - s_ref).abs()),
        })
    }

    pub const CSV_HEADER: &'static str = "x,s_ref,g0,g1,g2,g3,e0,e1,e2,e3";

    pub fn to_csv(&self) -> String {
        use crate::fmt::fmt_f64;
        let mut fields = vec![fmt_f64(self.x), fmt_f64(self.s_ref)];
        fields.extend(self.g.iter().map(|&v| fmt_f64(v)));
        fields.extend(self.e.iter().map(|&v| fmt_f64(v)));
        fields.join(",")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorScan {
    pub rows: Vec<ErrorScanRow>,
    /// Per-approximation maximum of `e_i` over the grid.
    pub max_error: [f64; 4],
}

impl ErrorScan {
    /// Maximum of `|N(g_i(x)) − x|` over the grid, the error measured in
    /// probability rather than in quantile.
    pub fn max_probability_error(&self) -> [f64; 4] {
        let mut out = [0.0f64; 4];
        for row in &self.rows {
            for (slot, &g) in out.iter_mut().zip(&row.g) {
                *slot = slot.max((normal_cdf(g) - row.x).abs());
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(ErrorScanRow::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv());
            out.push('\n');
        }
        out
    }
}

/// Uniform grid of `grid_points` points on `[x_min, x_max]`.
pub fn uniform_grid(grid_points: usize, x_min: f64, x_max: f64) -> Vec<f64> {
    if grid_points == 1 {
        return vec![x_min];
    }
    let step = (x_max - x_min) / (grid_points - 1) as f64;
    (0..grid_points)
        .map(|i| {
            if i == grid_points - 1 {
                x_max
            } else {
                x_min + step * i as f64
            }
        })
        .collect()
}

pub fn error_scan(grid_points: usize, x_min: f64, x_max: f64) -> Result<ErrorScan> {
    if grid_points < 1 {
        return Err(domain("error_scan", 0.0, "need at least one grid point"));
    }
    if !(x_min > 0.0 && x_min < 1.0) {
        return Err(domain(
            "error_scan",
            x_min,
            "lower bound must lie in (0, 1)",
        ));
    }
    if !(x_max > 0.0 && x_max < 1.0) {
        return Err(domain(
            "error_scan",
            x_max,
            "upper bound must lie in (0, 1)",
        ));
    }
    if grid_points > 1 && !(x_min < x_max) {
        return Err(domain(
            "error_scan",
            x_max,
            "upper bound must exceed lower bound",
        ));
    }
    scan_points(&uniform_grid(grid_points, x_min, x_max))
}

/// Error scan over arbitrary interior points.
pub fn scan_points(points: &[f64]) -> Result<ErrorScan> {
    let rows = points
        .iter()
        .map(|&x| ErrorScanRow::at(x))
        .collect::<Result<Vec<_>>>()?;
    let mut max_error = [0.0f64; 4];
    for row in &rows {
        for (m, &e) in max_error.iter_mut().zip(&row.e) {
            *m = m.max(e);
        }
    }
    Ok(ErrorScan { rows, max_error })
}

/// Relative residual of `g″ = g(g′)²[1 + 2/(g²(1+g²))]` for `g0` (on
/// `x ≤ 0.3`) or `g1` (on `x ≥ 0.7`), derivatives by central differences.
pub fn g_ode_residual(kind: ApproxKind, x: f64) -> Result<f64> {
    let ok = match kind {
        ApproxKind::G0 => (2.0 * FD_STEP..=0.3).contains(&x),
        ApproxKind::G1 => (0.7..=1.0 - 2.0 * FD_STEP).contains(&x),
        _ => {
            return Err(domain(
                "g_ode_residual",
                x,
                "only g0 and g1 satisfy the ODE",
            ))
        }
    };
    if !ok {
        return Err(domain("g_ode_residual", x, "outside the asymptotic side"));
    }
    let g = |t: f64| approx_eval(kind, t);
    let (lo, mid, hi) = (g(x - FD_STEP)?, g(x)?, g(x + FD_STEP)?);
    let d1 = (hi - lo) / (2.0 * FD_STEP);
    let d2 = (hi - 2.0 * mid + lo) / (FD_STEP * FD_STEP);
    let g2 = mid * mid;
    let rhs = mid * d1 * d1 * (1.0 + 2.0 / (g2 * (1.0 + g2)));
    Ok(((d2 - rhs) / d2).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambertw::lambert_w0;

    fn ulps(a: f64, b: f64) -> f64 {
        let scale = a.abs().max(b.abs());
        if scale == 0.0 {
            return 0.0;
        }
        (a - b).abs() / (f64::EPSILON * scale)
    }

    #[test]
    fn q_constraints() {
        let q = QPoly::new();
        assert_eq!(q_eval(0.0), -1.0);
        assert!(q_eval(0.5).abs() <= 2.0 * f64::EPSILON);
        assert!((q.derivative(0.5) - SQRT_2PI).abs() <= 4.0 * f64::EPSILON * SQRT_2PI);
        assert!(q.second_derivative(0.5).abs() <= 1e-14);
        assert!((q_eval(1.0) - 1.0).abs() <= 2.0 * f64::EPSILON);
        assert!((q.eval_monomial(1.0) - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn q_forms_agree() {
        let q = QPoly::new();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((q.eval(x) - q.eval_monomial(x)).abs() < 1e-15, "x={x}");
        }
    }

    #[test]
    fn centre_values() {
        assert_eq!(approx_eval(ApproxKind::G2, 0.5).unwrap(), 0.0);
        assert_eq!(approx_eval(ApproxKind::G3, 0.5).unwrap(), 0.0);
        let g0 = approx_eval(ApproxKind::G0, 0.5).unwrap();
        // 1/(2π·(1/2)²) = 2/π
        let want = lambert_w0(2.0 / std::f64::consts::PI).unwrap().value.sqrt();
        assert!((g0 + want).abs() < 1e-15);
    }

    #[test]
    fn g3_near_975_in_probability() {
        let g3 = approx_eval(ApproxKind::G3, 0.975).unwrap();
        assert!((normal_cdf(g3) - 0.975).abs() < 0.0023);
        assert!(g3 > 1.9);
    }

    #[test]
    fn signs() {
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!(approx_eval(ApproxKind::G0, x).unwrap() <= 0.0);
            assert!(approx_eval(ApproxKind::G1, x).unwrap() >= 0.0);
            let s = (x - 0.5).signum();
            if x != 0.5 {
                assert_eq!(approx_eval(ApproxKind::G2, x).unwrap().signum(), s);
                assert_eq!(approx_eval(ApproxKind::G3, x).unwrap().signum(), s);
            }
        }
    }

    #[test]
    fn domain_errors() {
        for x in [0.0, 1.0, -1.0, f64::NAN] {
            assert!(approx_eval(ApproxKind::G2, x).is_err());
        }
        assert!(error_scan(10, 0.5, 0.2).is_err());
        assert!(error_scan(10, 0.0, 0.2).is_err());
        assert!(g_ode_residual(ApproxKind::G0, 0.5).is_err());
        assert!(g_ode_residual(ApproxKind::G2, 0.1).is_err());
    }

    #[test]
    fn tiny_arguments_use_log_route() {
        let g = approx_eval(ApproxKind::G0, 1e-200).unwrap();
        let s = probit_reference(1e-200).unwrap().value;
        assert!(((g - s) / s).abs() < 1e-3);
        assert!(approx_eval(ApproxKind::G2, 1e-300).unwrap().is_finite());
    }

    #[test]
    fn mirror_and_antisymmetry() {
        for i in 0..=500 {
            let p = 0.5 + i as f64 * 0.000998;
            let q = 1.0 - p;
            let g1 = approx_eval(ApproxKind::G1, p).unwrap();
            let g0 = approx_eval(ApproxKind::G0, q).unwrap();
            assert!(ulps(g1, -g0) <= 2.0);
            for kind in [ApproxKind::G2, ApproxKind::G3] {
                let a = approx_eval(kind, p).unwrap();
                let b = approx_eval(kind, q).unwrap();
                assert!(ulps(a, -b) <= 2.0, "{kind} p={p}");
            }
        }
    }

    #[test]
    fn single_point_scan() {
        let scan = error_scan(1, 0.5, 0.5).unwrap();
        let row = scan.rows[0];
        assert_eq!(row.e[2], 0.0);
        assert_eq!(row.e[3], 0.0);
        assert_eq!(row.e[0], row.e[1]);
        let want = lambert_w0(2.0 / std::f64::consts::PI).unwrap().value.sqrt();
        assert!((row.e[0] - want).abs() < 1e-15);
    }

    #[test]
    fn scan_rows_recompute_errors() {
        let scan = error_scan(11, 0.01, 0.99).unwrap();
        assert_eq!(scan.rows.len(), 11);
        assert_eq!(scan.rows[10].x, 0.99);
        for row in &scan.rows {
            for i in 0..4 {
                assert_eq!(row.e[i], (row.g[i] - row.s_ref).abs());
            }
        }
        let csv = scan.to_csv();
        assert!(csv.starts_with("x,s_ref,g0,g1,g2,g3,e0,e1,e2,e3\n"));
        assert_eq!(csv.lines().count(), 12);
    }

    #[test]
    fn ode_residual_examples() {
        assert!(g_ode_residual(ApproxKind::G0, 0.05).unwrap() <= 1e-4);
        assert!(g_ode_residual(ApproxKind::G1, 0.95).unwrap() <= 1e-4);
        assert!(g_ode_residual(ApproxKind::G0, 0.01).unwrap() <= 1e-4);
    }

    #[test]
    fn kind_parsing() {
        for k in ApproxKind::ALL {
            assert_eq!(k.name().parse::<ApproxKind>().unwrap(), k);
        }
        assert!("g4".parse::<ApproxKind>().is_err());
    }
}
