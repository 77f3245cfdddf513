//! Dense exact linear algebra over the rationals.
//!
//! Everything here is exact: determinants use fraction-free (Bareiss)
//! elimination on a denominator-cleared integer copy of the matrix and
//! characteristic polynomials use the division-free Berkowitz recurrence.
//! The recurrence is generic over any commutative ring, so the block
//! reduction code reuses it for complex matrices.

mod poly;
mod spectrum;

pub use poly::Polynomial;
pub use spectrum::{verify_spectrum, Inertia, Spectrum, SpectrumCheck};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
    symmetric: bool,
}

// The symmetric flag is a cached property, not part of the value.
impl PartialEq for ExactMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for ExactMatrix {}

impl std::hash::Hash for ExactMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.rows, self.cols, &self.entries).hash(state);
    }
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
            symmetric: false,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
            symmetric: false,
        }
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == cols),
            "ragged integer rows"
        );
        Self::from_fn(rows.len(), cols, |i, j| int(rows[i].as_ref()[j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| BigRational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| BigRational::one())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        self.entries[i * self.cols + j] = value;
        self.symmetric = false;
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Whether the matrix carries a validated symmetry flag.
    pub fn symmetric_flag(&self) -> bool {
        self.symmetric
    }

    /// Validates symmetry and sets the flag.
    pub fn into_symmetric(mut self) -> Result<Self> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        self.symmetric = true;
        Ok(self)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone());
        t.symmetric = self.symmetric;
        t
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
            symmetric: self.symmetric,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
            symmetric: self.symmetric && other.symmetric,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
            symmetric: self.symmetric && other.symmetric,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(BigRational::zero(), |acc, k| {
                acc + self.get(i, k) * other.get(k, j)
            })
        }))
    }

    /// `self - lambda * I`.
    pub fn shifted(&self, lambda: &BigRational) -> Result<Self> {
        self.require_square()?;
        let mut out = self.clone();
        for i in 0..self.rows {
            out.entries[i * self.cols + i] -= lambda;
        }
        out.symmetric = self.symmetric;
        Ok(out)
    }

    /// The submatrix with row `row` and column `col` deleted.
    pub fn minor(&self, row: usize, col: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != col).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.submatrix(perm, perm)
    }

    pub fn block_diagonal(blocks: &[ExactMatrix]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.entries[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(rational_to_f64).collect())
            .collect()
    }

    pub fn determinant(&self) -> Result<BigRational> {
        determinant(self)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn char_poly(&self) -> Result<Polynomial> {
        char_poly(self)
    }

    /// Integer matrix `d * self` together with the common denominator `d`.
    pub fn cleared(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let d = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|e| e.numer() * (&d / e.denom()))
                    .collect()
            })
            .collect();
        (rows, d)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix{}x{} ", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Shorthand for an integer-valued rational.
pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
}

/// `base^exp` for a possibly negative exponent.
pub fn rational_pow(base: &BigRational, exp: i64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Exact determinant via Bareiss elimination on the denominator-cleared matrix.
pub fn determinant(m: &ExactMatrix) -> Result<BigRational> {
    m.require_square()?;
    let (rows, d) = m.cleared();
    let det = bareiss_determinant(rows);
    let scale = num_traits::pow(d, m.rows);
    Ok(BigRational::new(det, scale))
}

/// Fraction-free determinant of an integer matrix. Consumes the rows.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Exact rank over the rationals (fraction-free echelon form).
pub fn rank(m: &ExactMatrix) -> usize {
    let (mut a, _) = m.cleared();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Exact characteristic polynomial `det(tI - m)`.
pub fn char_poly(m: &ExactMatrix) -> Result<Polynomial> {
    m.require_square()?;
    let n = m.rows;
    let (rows, d) = m.cleared();
    // chi_m(t) = d^-n chi_{dm}(d t)
    let scaled = berkowitz(&rows);
    let mut d_pow = BigInt::one();
    let d_n = num_traits::pow(d.clone(), n);
    let mut coeffs = Vec::with_capacity(n + 1);
    for c in scaled {
        coeffs.push(BigRational::new(c * &d_pow, d_n.clone()));
        d_pow *= &d;
    }
    Ok(Polynomial::new(coeffs))
}

/// Berkowitz's division-free recurrence for `det(tI - A)` over a
/// commutative ring. Returns coefficients lowest degree first.
pub fn berkowitz<T>(a: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let n = a.len();
    if n == 0 {
        return vec![T::one()];
    }
    // highest degree first while iterating
    let mut current = vec![T::one(), -a[0][0].clone()];
    for r in 1..n {
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(T::one());
        toeplitz.push(-a[r][r].clone());
        let mut v: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for step in 0..r {
            let rv = (0..r).fold(T::zero(), |acc, j| acc + a[r][j].clone() * v[j].clone());
            toeplitz.push(-rv);
            if step + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).fold(T::zero(), |acc, j| acc + a[i][j].clone() * v[j].clone()))
                    .collect();
            }
        }
        let next: Vec<T> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r)).fold(T::zero(), |acc, j| {
                    acc + toeplitz[i - j].clone() * current[j].clone()
                })
            })
            .collect();
        current = next;
    }
    current.reverse();
    current
}

/// Sign of a rational: `1`, `-1` or `0`.
pub(crate) fn sign(q: &BigRational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Rational Gaussian elimination; independent of the Bareiss paths.
    fn naive_det_and_rank(m: &ExactMatrix) -> (BigRational, usize) {
        let mut a: Vec<Vec<BigRational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        let (rows, cols) = (m.rows(), m.cols());
        let mut det = BigRational::one();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                det = BigRational::zero();
                continue;
            };
            if p != r {
                a.swap(p, r);
                det = -det;
            }
            det *= a[r][c].clone();
            for i in r + 1..rows {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
            r += 1;
            if r == rows {
                break;
            }
        }
        if r < rows.min(cols) || rows != cols {
            det = BigRational::zero();
        }
        (det, r)
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..=4, 1i64..=3), r * c).prop_map(move |v| {
                ExactMatrix::new(r, c, v.into_iter().map(|(n, d)| ratio(n, d)).collect()).unwrap()
            })
        })
    }

    fn arb_rational_square(max: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec((-4i64..=4, 1i64..=3), n * n).prop_map(move |v| {
                ExactMatrix::new(n, n, v.into_iter().map(|(a, b)| ratio(a, b)).collect()).unwrap()
            })
        })
    }

    fn arb_square(max: usize) -> impl Strategy<Value = ExactMatrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(-5i64..=5, n * n).prop_map(move |v| {
                ExactMatrix::new(n, n, v.into_iter().map(int).collect()).unwrap()
            })
        })
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&ExactMatrix::identity(3)).unwrap(), int(1));
        let j_plus_i = ExactMatrix::ones(3, 3)
            .checked_add(&ExactMatrix::identity(3))
            .unwrap();
        assert_eq!(determinant(&j_plus_i).unwrap(), int(4));
        assert_eq!(determinant(&ExactMatrix::zeros(0, 0)).unwrap(), int(1));
        let m = ExactMatrix::from_int_rows(&[[0, 1], [1, 0]]);
        assert_eq!(determinant(&m).unwrap(), int(-1));
        let half = ExactMatrix::identity(2).scale(&ratio(1, 2));
        assert_eq!(determinant(&half).unwrap(), ratio(1, 4));
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = ExactMatrix::zeros(2, 3);
        assert_eq!(determinant(&m), Err(Error::NotSquare { rows: 2, cols: 3 }));
        assert!(char_poly(&m).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ExactMatrix::ones(3, 3)), 1);
        assert_eq!(rank(&ExactMatrix::identity(4)), 4);
        assert_eq!(rank(&ExactMatrix::zeros(2, 5)), 0);
        let lap_k4 = ExactMatrix::from_int_rows(&[
            [3, -1, -1, -1],
            [-1, 3, -1, -1],
            [-1, -1, 3, -1],
            [-1, -1, -1, 3],
        ]);
        assert_eq!(rank(&lap_k4), 3);
    }

    #[test]
    fn char_poly_examples() {
        // (t-1)^2
        let p = char_poly(&ExactMatrix::identity(2)).unwrap();
        assert_eq!(p.coeffs(), &[int(1), int(-2), int(1)]);
        // t(t-2)
        let p = char_poly(&ExactMatrix::ones(2, 2)).unwrap();
        assert_eq!(p.coeffs(), &[int(0), int(-2), int(1)]);
        // J - I on 3 vertices: (t-2)(t+1)^2 = t^3 - 3t - 2
        let h = ExactMatrix::from_int_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let p = char_poly(&h).unwrap();
        assert_eq!(p.coeffs(), &[int(-2), int(-3), int(0), int(1)]);
    }

    #[test]
    fn berkowitz_on_empty_and_scalar() {
        let empty: Vec<Vec<BigInt>> = vec![];
        assert_eq!(berkowitz(&empty), vec![BigInt::one()]);
        let one = vec![vec![BigInt::from(7)]];
        assert_eq!(berkowitz(&one), vec![BigInt::from(-7), BigInt::one()]);
    }

    #[test]
    fn symmetric_flag_is_validated() {
        let m = ExactMatrix::from_int_rows(&[[1, 2], [3, 4]]);
        assert_eq!(m.clone().into_symmetric(), Err(Error::NotSymmetric));
        let s = ExactMatrix::from_int_rows(&[[1, 2], [2, 4]])
            .into_symmetric()
            .unwrap();
        assert!(s.symmetric_flag());
    }

    proptest! {
        #[test]
        fn det_matches_char_poly_constant(m in arb_square(6)) {
            let n = m.rows();
            let det = determinant(&m).unwrap();
            let p = char_poly(&m).unwrap();
            let c0 = p.coeff(0);
            let expected = if n % 2 == 0 { c0 } else { -c0 };
            prop_assert_eq!(det, expected);
            prop_assert!(p.is_monic());
            prop_assert_eq!(p.degree(), Some(n));
        }

        #[test]
        fn det_and_rank_match_naive_elimination(m in arb_matrix(6)) {
            let (naive_det, naive_rank) = naive_det_and_rank(&m);
            prop_assert_eq!(rank(&m), naive_rank);
            if m.is_square() {
                prop_assert_eq!(determinant(&m).unwrap(), naive_det);
            }
        }

        #[test]
        fn block_diagonal_det_is_product(a in arb_square(4), b in arb_square(4)) {
            let bd = ExactMatrix::block_diagonal(&[a.clone(), b.clone()]);
            prop_assert_eq!(
                determinant(&bd).unwrap(),
                determinant(&a).unwrap() * determinant(&b).unwrap()
            );
        }

        #[test]
        fn char_poly_of_rational_matrix_has_trace_coefficient(m in arb_rational_square(5)) {
            let p = char_poly(&m).unwrap();
            let n = m.rows();
            prop_assert_eq!(p.coeff(n - 1), -m.trace());
        }
    }
}
