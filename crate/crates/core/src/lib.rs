//! Exact and floating-point machinery for the inverse of the standard
//! normal CDF, `S = N⁻¹`.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] generates the integer polynomials `P_n` (with
//!   `S⁽ⁿ⁾ = P_{n-1}(S)·(S′)ⁿ`) and the Taylor coefficients `C_n` by several
//!   independent exact routes.
//! * [`nested`] implements the nested derivative operator on terms
//!   `p(x)·e^{q(x)}` with rational coefficients.
//! * [`lambertw`] evaluates the principal branch of Lambert W.
//! * [`gauss`] provides `N`, its density, and a safeguarded Newton inverse
//!   that serves as the accuracy oracle.
//! * [`series`] evaluates `S` from its central Taylor series and combines it
//!   with the asymptotic seeds into a production evaluator.
//! * [`approx`] holds the Lambert-W approximations `g0..g3` and their error
//!   scans.
//! * [`calculus`] covers antiderivatives, negative-index polynomials,
//!   moments and the generating function.
//! * [`verify`] bundles the identity checks into a pass/fail report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod calculus;
mod error;
pub mod fmt;
pub mod gauss;
pub mod golden;
pub mod lambertw;
pub mod nested;
pub mod poly;
pub mod series;
pub mod verify;

pub use approx::{
    approx_eval, error_scan, g_ode_residual, q_eval, ApproxKind, ErrorScan, ErrorScanRow, QPoly,
};
pub use calculus::{
    corollary_identity_check, generating_function_check, moment,
    negative_derivative_relation_check, p_negative_eval, s_antiderivative, MomentResult,
};
pub use error::{Error, Result};
pub use gauss::{
    normal_cdf, normal_pdf, normal_sf, probit_reference, s_derivative_n, ProbitResult,
};
pub use lambertw::{lambert_w0, lambert_w0_derivative, lambert_w0_series, WResult};
pub use nested::{nested_derivative, pn_via_nested, ExpPolyTerm, RatPolynomial};
pub use poly::{
    c_via_derivative_recurrence, coeffs_via_matrices, poly_eval, poly_next, poly_next_triple_sum,
    poly_sequence, series_coeff_c, transfer_matrix, CoeffTable, IntPolynomial, TransferMatrix,
};
pub use series::{probit_hybrid, s_series, taylor_terms, EvalConfig, SeriesEval, SeriesTerms};

/// `√(2π)`, correctly rounded.
pub const SQRT_2PI: f64 = 2.5066282746310007;
/// `1/√(2π)`, correctly rounded.
pub const FRAC_1_SQRT_2PI: f64 = 0.3989422804014327;
/// `√π`, correctly rounded.
pub const SQRT_PI: f64 = 1.772453850905516;
