//! Integer polynomials `P_n` and the Taylor coefficients `C_n`.
//!
//! `P_0 = 1`, `P_n = P′_{n-1} + n·x·P_{n-1}`, and `C_n = P_{n-1}(0)`.
//! Besides the defining recurrence, `P_n` is produced from products of the
//! rectangular transfer matrices and from the cubic (triple-sum) recurrence;
//! `C_n` is produced a second time from the Leibniz-expanded ODE evaluated at
//! the centre. Everything is exact.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense polynomial with arbitrary-precision integer coefficients.
///
/// Index `k` holds the coefficient of `x^k`. The highest stored coefficient
/// is nonzero; the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        IntPolynomial {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self::new(coeffs)
    }

    /// `k·x·self`.
    fn mul_x_scaled(&self, k: &BigInt) -> Self {
        if self.is_zero() || k.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().map(|c| c * k));
        IntPolynomial { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Horner evaluation in binary64; each coefficient is rounded once.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + bigint_to_f64(c))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str("x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Horner evaluation of `p` at `x`.
pub fn poly_eval(p: &IntPolynomial, x: f64) -> f64 {
    p.eval(x)
}

/// One step of `P_n = P′_{n-1} + n·x·P_{n-1}`.
pub fn poly_next(p: &IntPolynomial, n: usize) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            found: p.degree().unwrap_or(0),
        });
    }
    match p.degree() {
        Some(d) if d == n - 1 => {}
        d => {
            return Err(Error::DegreeMismatch {
                expected: n - 1,
                found: d.unwrap_or(0),
            })
        }
    }
    Ok(p.derivative().add(&p.mul_x_scaled(&BigInt::from(n))))
}

/// `P_0 … P_{n_max}` from the defining recurrence.
pub fn poly_sequence(n_max: usize) -> Vec<IntPolynomial> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(IntPolynomial::one());
    for n in 1..=n_max {
        let next = poly_next(&out[n - 1], n).expect("degree tracks index");
        out.push(next);
    }
    out
}

const CACHED_POLYS: usize = 64;

/// `P_n` for `n < 64` from a sequence built once; computed on demand beyond.
pub fn cached_poly(n: usize) -> std::borrow::Cow<'static, IntPolynomial> {
    static CACHE: OnceLock<Vec<IntPolynomial>> = OnceLock::new();
    if n < CACHED_POLYS {
        let cache = CACHE.get_or_init(|| poly_sequence(CACHED_POLYS - 1));
        std::borrow::Cow::Borrowed(&cache[n])
    } else {
        std::borrow::Cow::Owned(poly_sequence(n).pop().expect("non-empty"))
    }
}

/// The `(n+1) × n` matrix `A⁽ⁿ⁾` with `A⁽ⁿ⁾ Q^{n-1} = Q^n`.
///
/// With 1-based indices, entry `(i, j)` is `i` on the superdiagonal
/// (`j = i+1`), `n` on the subdiagonal (`j = i-1`) and zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl TransferMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Entry at zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.rows[row][col]
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n, "vector length must equal column count");
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

pub fn transfer_matrix(n: usize) -> Result<TransferMatrix> {
    if n < 1 {
        return Err(Error::Domain {
            what: "transfer_matrix",
            value: n as f64,
            reason: "order must be at least 1",
        });
    }
    let mut rows = vec![vec![BigInt::zero(); n]; n + 1];
    for (r, row) in rows.iter_mut().enumerate() {
        let i = r + 1;
        // superdiagonal: column i+1, i.e. zero-based column i
        if i < n {
            row[i] = BigInt::from(i);
        }
        // subdiagonal: column i-1, zero-based i-2
        if i >= 2 {
            row[i - 2] = BigInt::from(n);
        }
    }
    Ok(TransferMatrix { n, rows })
}

fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|c| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .map(|(x, brow)| x * &brow[c])
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Coefficient vector `Q^n = A⁽ⁿ⁾A⁽ⁿ⁻¹⁾⋯A⁽¹⁾`, multiplied left to right as
/// matrices. The result has length `n+1`.
pub fn coeffs_via_matrices(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut acc = transfer_matrix(n).expect("n >= 1").rows;
    for k in (1..n).rev() {
        acc = matmul(&acc, &transfer_matrix(k).expect("k >= 1").rows);
    }
    acc.into_iter()
        .map(|mut row| {
            debug_assert_eq!(row.len(), 1);
            row.pop().expect("single column")
        })
        .collect()
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `P_{n+1}` from `P_0 … P_n` through the cubic recurrence
/// `P_{n+1} = Σ_i Σ_j C(n,i) C(i,j) P_{n-i-1} P_{i-j} P_j`, with `P_{-1} = x`.
pub fn poly_next_triple_sum(prefix: &[IntPolynomial]) -> Result<IntPolynomial> {
    if prefix.is_empty() {
        return Err(Error::IncompletePrefix {
            expected: 1,
            found: 0,
        });
    }
    for (k, p) in prefix.iter().enumerate() {
        if p.degree() != Some(k) {
            return Err(Error::DegreeMismatch {
                expected: k,
                found: p.degree().unwrap_or(0),
            });
        }
    }
    let n = prefix.len() - 1;
    let minus_one = IntPolynomial::x();
    let row_n = binomial_row(n);
    let mut acc = IntPolynomial::zero();
    for i in 0..=n {
        let outer = if i == n {
            &minus_one
        } else {
            &prefix[n - i - 1]
        };
        let row_i = binomial_row(i);
        let mut inner = IntPolynomial::zero();
        for j in 0..=i {
            let term = prefix[i - j].mul(&prefix[j]).scale(&row_i[j]);
            inner = inner.add(&term);
        }
        acc = acc.add(&outer.mul(&inner).scale(&row_n[i]));
    }
    Ok(acc)
}

/// `C_0 … C_{n_max}`, with `C_n` the `n`-th derivative of `S` at `1/2`
/// divided by `(2π)^{n/2}`. Even entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    values: Vec<BigInt>,
}

impl CoeffTable {
    fn from_values(values: Vec<BigInt>) -> Self {
        CoeffTable { values }
    }

    /// Largest index stored.
    pub fn max_index(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    /// `(n, C_n)` for odd `n`, ascending.
    pub fn odd_entries(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.values.iter().enumerate().skip(1).step_by(2)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// `C_n = P_{n-1}(0)` for `n ≤ n_max` (and `C_0 = S(1/2) = 0`).
pub fn series_coeff_c(n_max: usize) -> CoeffTable {
    let mut values = vec![BigInt::zero()];
    if n_max >= 1 {
        values.extend(poly_sequence(n_max - 1).into_iter().map(|p| p.coeff(0)));
    }
    CoeffTable::from_values(values)
}

/// `C_n` from the Leibniz expansion of `S″ = S·(S′)²` at `x = 1/2`:
/// `C_{m+2} = Σ_i Σ_j C(m,i) C(i,j) C_{m-i} C_{i-j+1} C_{j+1}`, seeded with
/// `C_0 = 0`, `C_1 = 1`.
pub fn c_via_derivative_recurrence(n_max: usize) -> CoeffTable {
    let mut c = vec![BigInt::zero(), BigInt::one()];
    for m in 0..n_max.saturating_sub(1) {
        let row_m = binomial_row(m);
        let mut total = BigInt::zero();
        for i in 0..=m {
            if c[m - i].is_zero() {
                continue;
            }
            let row_i = binomial_row(i);
            let mut inner = BigInt::zero();
            for j in 0..=i {
                inner += &row_i[j] * &c[i - j + 1] * &c[j + 1];
            }
            total += &row_m[i] * &c[m - i] * inner;
        }
        c.push(total);
    }
    c.truncate(n_max + 1);
    CoeffTable::from_values(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(coeffs)
    }

    #[test]
    fn poly_next_small_cases() {
        assert_eq!(poly_next(&IntPolynomial::one(), 1).unwrap(), p(&[0, 1]));
        assert_eq!(poly_next(&p(&[0, 1]), 2).unwrap(), p(&[1, 0, 2]));
    }

    #[test]
    fn poly_next_p10_from_p9() {
        let p9 = p(&[0, 243649, 0, 2080644, 0, 3890484, 0, 2239344, 0, 362880]);
        let p10 = poly_next(&p9, 10).unwrap();
        assert_eq!(
            p10,
            p(&[243649, 0, 8678422, 0, 40258860, 0, 54580248, 0, 25659360, 0, 3628800])
        );
    }

    #[test]
    fn poly_next_rejects_degree_mismatch() {
        assert_eq!(
            poly_next(&p(&[1, 0, 2]), 2),
            Err(Error::DegreeMismatch {
                expected: 1,
                found: 2
            })
        );
        assert!(poly_next(&IntPolynomial::one(), 0).is_err());
        assert!(poly_next(&IntPolynomial::zero(), 1).is_err());
    }

    #[test]
    fn sequence_prefixes() {
        assert_eq!(poly_sequence(0), vec![IntPolynomial::one()]);
        assert_eq!(
            poly_sequence(3),
            vec![p(&[1]), p(&[0, 1]), p(&[1, 0, 2]), p(&[0, 7, 0, 6])]
        );
        assert_eq!(
            poly_sequence(8)[8],
            p(&[4369, 0, 102164, 0, 290292, 0, 212976, 0, 40320])
        );
    }

    #[test]
    fn transfer_matrix_shapes() {
        let a1 = transfer_matrix(1).unwrap();
        assert_eq!(a1.rows(), &[vec![BigInt::from(0)], vec![BigInt::from(1)]]);
        let as_i64 = |m: &TransferMatrix| -> Vec<Vec<i64>> {
            m.rows()
                .iter()
                .map(|r| r.iter().map(|c| c.to_i64().unwrap()).collect())
                .collect()
        };
        assert_eq!(
            as_i64(&transfer_matrix(2).unwrap()),
            vec![vec![0, 1], vec![2, 0], vec![0, 2]]
        );
        assert_eq!(
            as_i64(&transfer_matrix(3).unwrap()),
            vec![vec![0, 1, 0], vec![3, 0, 2], vec![0, 3, 0], vec![0, 0, 3]]
        );
        assert!(transfer_matrix(0).is_err());
    }

    #[test]
    fn matrix_route_small() {
        let ints = |v: Vec<BigInt>| {
            v.into_iter()
                .map(|c| c.to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(ints(coeffs_via_matrices(0)), vec![1]);
        assert_eq!(ints(coeffs_via_matrices(1)), vec![0, 1]);
        assert_eq!(ints(coeffs_via_matrices(2)), vec![1, 0, 2]);
        assert_eq!(ints(coeffs_via_matrices(3)), vec![0, 7, 0, 6]);
    }

    #[test]
    fn apply_matches_recurrence_step() {
        let p4 = poly_sequence(4);
        let a5 = transfer_matrix(5).unwrap();
        let q4: Vec<BigInt> = (0..5).map(|k| p4[4].coeff(k)).collect();
        assert_eq!(
            IntPolynomial::new(a5.apply(&q4)),
            poly_next(&p4[4], 5).unwrap()
        );
    }

    #[test]
    fn triple_sum_small() {
        let seq = poly_sequence(4);
        assert_eq!(poly_next_triple_sum(&seq[..1]).unwrap(), p(&[0, 1]));
        assert_eq!(poly_next_triple_sum(&seq[..2]).unwrap(), p(&[1, 0, 2]));
        assert_eq!(
            poly_next_triple_sum(&seq[..5]).unwrap(),
            p(&[0, 127, 0, 326, 0, 120])
        );
    }

    #[test]
    fn triple_sum_rejects_bad_prefix() {
        assert!(matches!(
            poly_next_triple_sum(&[]),
            Err(Error::IncompletePrefix { .. })
        ));
        let seq = poly_sequence(3);
        assert!(matches!(
            poly_next_triple_sum(&seq[1..]),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn c_table_heads() {
        let t = series_coeff_c(11);
        let got: Vec<(usize, i64)> = t
            .odd_entries()
            .map(|(n, c)| (n, c.to_i64().unwrap()))
            .collect();
        assert_eq!(
            got,
            vec![(1, 1), (3, 1), (5, 7), (7, 127), (9, 4369), (11, 243649)]
        );
        assert!(t.values().iter().step_by(2).all(Zero::is_zero));
    }

    #[test]
    fn derivative_route_heads() {
        let t = c_via_derivative_recurrence(5);
        assert_eq!(t.get(2), Some(&BigInt::zero()));
        assert_eq!(t.get(3), Some(&BigInt::one()));
        assert_eq!(t.get(5), Some(&BigInt::from(7)));
        assert_eq!(t.max_index(), 5);
        assert_eq!(c_via_derivative_recurrence(1).max_index(), 1);
    }

    #[test]
    fn c41_exact() {
        let c41 = "53789884101606550209324949796685518122943569";
        assert_eq!(series_coeff_c(41).get(41).unwrap().to_string(), c41);
        assert_eq!(
            c_via_derivative_recurrence(41).get(41).unwrap().to_string(),
            c41
        );
    }

    #[test]
    fn horner_values() {
        let seq = poly_sequence(3);
        assert_eq!(poly_eval(&seq[2], 0.0), 1.0);
        assert_eq!(poly_eval(&seq[1], 3.5), 3.5);
        assert_eq!(poly_eval(&seq[3], 1.0), 13.0);
        assert_eq!(poly_eval(&IntPolynomial::zero(), 2.0), 0.0);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[0, 7, 0, 6]).to_string(), "7x + 6x^3");
        assert_eq!(p(&[-1, 1]).to_string(), "-1 + x");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn cached_matches_fresh() {
        assert_eq!(*cached_poly(10), poly_sequence(10)[10]);
        assert_eq!(*cached_poly(70), poly_sequence(70)[70]);
    }
}
