//! Nested derivative operator on single terms `p(x)·e^{q(x)}`.
//!
//! `𝔇⁽⁰⁾[f] = 1` and `𝔇⁽ⁿ⁾[f] = (f · 𝔇⁽ⁿ⁻¹⁾[f])′`. Terms of the form
//! `p·e^q` are closed under both product and differentiation, so the
//! operator never leaves the representation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Polynomial with exact rational coefficients, trimmed of trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RatPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Converts to an integer polynomial, failing on the first coefficient
    /// with a nontrivial denominator.
    pub fn to_int_polynomial(&self) -> Result<IntPolynomial> {
        let ints = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(index, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegerCoefficient {
                        index,
                        coeff: c.to_string(),
                    })
                }
            })
            .collect::<Result<Vec<BigInt>>>()?;
        Ok(IntPolynomial::new(ints))
    }
}

/// The term `p(x)·e^{q(x)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpPolyTerm {
    pub p: RatPolynomial,
    pub q: RatPolynomial,
}

impl ExpPolyTerm {
    pub fn new(p: RatPolynomial, q: RatPolynomial) -> Self {
        ExpPolyTerm { p, q }
    }

    pub fn one() -> Self {
        ExpPolyTerm::new(
            RatPolynomial::constant(BigRational::one()),
            RatPolynomial::zero(),
        )
    }

    /// Pure polynomial `p` (exponent zero).
    pub fn poly(p: RatPolynomial) -> Self {
        ExpPolyTerm::new(p, RatPolynomial::zero())
    }

    /// `e^{q(x)}`.
    pub fn exp(q: RatPolynomial) -> Self {
        ExpPolyTerm::new(RatPolynomial::constant(BigRational::one()), q)
    }

    /// `(p′ + p·q′)·e^q`.
    pub fn derivative(&self) -> Self {
        let p = self.p.derivative().add(&self.p.mul(&self.q.derivative()));
        ExpPolyTerm::new(p, self.q.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExpPolyTerm::new(self.p.mul(&other.p), self.q.add(&other.q))
    }
}

/// `𝔇⁽ⁿ⁾[f]`.
pub fn nested_derivative(f: &ExpPolyTerm, n: usize) -> ExpPolyTerm {
    (0..n).fold(ExpPolyTerm::one(), |acc, _| f.mul(&acc).derivative())
}

/// `P_n` as `e^{-n x²/2}·𝔇⁽ⁿ⁾[e^{x²/2}]`.
pub fn pn_via_nested(n: usize) -> Result<IntPolynomial> {
    let half = BigRational::new(1.into(), 2.into());
    let gauss = ExpPolyTerm::exp(RatPolynomial::monomial(half.clone(), 2));
    let d = nested_derivative(&gauss, n);
    let expected_q = RatPolynomial::monomial(half * BigRational::from_integer(n.into()), 2);
    debug_assert_eq!(d.q, expected_q, "exponent must be n·x²/2");
    d.p.to_int_polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly_sequence;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn factorial(n: usize) -> BigRational {
        BigRational::from_integer((1..=n).map(BigInt::from).product())
    }

    #[test]
    fn nested_of_x_is_one() {
        let f = ExpPolyTerm::poly(RatPolynomial::from_ints(&[0, 1]));
        for n in 1..=8 {
            assert_eq!(nested_derivative(&f, n), ExpPolyTerm::one(), "n={n}");
        }
    }

    #[test]
    fn nested_of_x_squared() {
        let f = ExpPolyTerm::poly(RatPolynomial::from_ints(&[0, 0, 1]));
        for n in 0..=8 {
            let want = ExpPolyTerm::poly(RatPolynomial::monomial(factorial(n + 1), n));
            assert_eq!(nested_derivative(&f, n), want, "n={n}");
        }
    }

    #[test]
    fn nested_of_exponential() {
        for a in [rat(1, 1), rat(2, 1), rat(-1, 1), rat(3, 2)] {
            let f = ExpPolyTerm::exp(RatPolynomial::monomial(a.clone(), 1));
            for n in 0..=8 {
                let nr = BigRational::from_integer(n.into());
                let coef = factorial(n) * num_traits::pow(a.clone(), n);
                let want = ExpPolyTerm::new(
                    RatPolynomial::constant(coef),
                    RatPolynomial::monomial(a.clone() * nr, 1),
                );
                assert_eq!(nested_derivative(&f, n), want, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn exponent_scales_with_order() {
        let q = RatPolynomial::new(vec![rat(1, 3), rat(-2, 5), rat(1, 2)]);
        let f = ExpPolyTerm::new(RatPolynomial::from_ints(&[1, 1]), q.clone());
        for n in 0..=6 {
            let d = nested_derivative(&f, n);
            assert_eq!(d.q, q.scale(&BigRational::from_integer(n.into())));
        }
    }

    #[test]
    fn pn_small_cases() {
        assert_eq!(pn_via_nested(0).unwrap(), IntPolynomial::one());
        assert_eq!(
            pn_via_nested(2).unwrap(),
            IntPolynomial::from_i64s(&[1, 0, 2])
        );
        assert_eq!(
            pn_via_nested(5).unwrap(),
            IntPolynomial::from_i64s(&[0, 127, 0, 326, 0, 120])
        );
    }

    #[test]
    fn pn_matches_recurrence_through_15() {
        let seq = poly_sequence(15);
        for (n, p) in seq.iter().enumerate() {
            assert_eq!(&pn_via_nested(n).unwrap(), p, "n={n}");
        }
    }

    #[test]
    fn non_integer_coefficient_is_reported() {
        let p = RatPolynomial::new(vec![rat(1, 1), rat(1, 2)]);
        assert_eq!(
            p.to_int_polynomial(),
            Err(Error::NonIntegerCoefficient {
                index: 1,
                coeff: "1/2".into()
            })
        );
    }

    #[test]
    fn rationals_stay_reduced() {
        let p = RatPolynomial::new(vec![rat(2, 4), rat(3, 9)]);
        let prod = p.mul(&p);
        for c in prod.coeffs() {
            assert_eq!(
                num_integer::Integer::gcd(c.numer(), c.denom()),
                BigInt::one()
            );
        }
    }
}
