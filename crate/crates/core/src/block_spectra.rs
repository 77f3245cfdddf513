//! Circulant block matrices, their reduced matrices, `M(A, λ, d)` block
//! matrices, the orbit-block form of the complete-graph Hessian and the
//! closed-form spectra of complete and complete bipartite graphs.
//!
//! Complex arithmetic appears only in the reduction identity checks; every
//! spectrum and determinant is exact.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{build_graph, EdgeId, GraphSpec};
use crate::linalg::{
    berkowitz, char_poly, int, rational_pow, rational_to_f64, ExactMatrix, Polynomial, Spectrum,
};

/// Tolerance for comparing a floating-point polynomial with an exact one.
///
/// A coefficient passes when
/// `|approx - exact| <= relative * |exact| + absolute * max(1, max_j |exact_j|)`.
/// The floor is scaled by the largest coefficient because coefficients that
/// vanish exactly come out of a product of complex polynomials with a
/// rounding error proportional to the size of the others.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            relative: 1e-8,
            absolute: 1e-10,
        }
    }
}

/// `z_{n,k} = (1, ζ^k, ζ^{2k}, ..., ζ^{(n-1)k})` with `ζ = e^{2πi/n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootVector {
    n: usize,
    k: usize,
    entries: Vec<Complex64>,
}

impl RootVector {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("root vector of order 0".into()));
        }
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, bound: n });
        }
        // reduce jk mod n before scaling so large powers stay accurate
        let entries = (0..n)
            .map(|j| Complex64::from_polar(1.0, TAU * ((j * k) % n) as f64 / n as f64))
            .collect();
        Ok(Self { n, k, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `row · z`.
    pub fn dot(&self, row: &[BigRational]) -> Complex64 {
        debug_assert_eq!(row.len(), self.n);
        row.iter()
            .zip(&self.entries)
            .map(|(a, z)| z * rational_to_f64(a))
            .sum()
    }
}

/// Eigenvalue `first_row · z_{n,k}` of the circulant with the given first
/// row, where `n = first_row.len()`.
pub fn cyclic_eigenvalue(first_row: &[BigRational], k: usize) -> Result<Complex64> {
    Ok(RootVector::new(first_row.len(), k)?.dot(first_row))
}

/// Circulant matrix with entry `(r, c) = first_row[(c - r) mod n]`.
pub fn circulant(first_row: &[BigRational]) -> ExactMatrix {
    let n = first_row.len();
    ExactMatrix::from_fn(n, n, |r, c| first_row[(c + n - r) % n].clone())
}

/// First row of the `rows × cols` block at `(r0, c0)` when every row is the
/// previous one shifted right by one position (cyclically, period `cols`).
fn circulant_first_row(
    m: &ExactMatrix,
    r0: usize,
    c0: usize,
    rows: usize,
    cols: usize,
) -> Option<Vec<BigRational>> {
    let first: Vec<BigRational> = (0..cols).map(|c| m.get(r0, c0 + c).clone()).collect();
    let ok = (0..rows)
        .all(|r| (0..cols).all(|c| *m.get(r0 + r, c0 + c) == first[(c + cols - r % cols) % cols]));
    ok.then_some(first)
}

fn check_row_len(row: &[BigRational], expected: usize) -> Result<()> {
    if row.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: row.len(),
        });
    }
    Ok(())
}

/// `l × l` grid of `n × n` circulant blocks, stored by first rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicBlockSpec {
    l: usize,
    n: usize,
    /// Row-major, `l * l` first rows of length `n`.
    blocks: Vec<Vec<BigRational>>,
}

impl CyclicBlockSpec {
    pub fn new(l: usize, n: usize, blocks: Vec<Vec<BigRational>>) -> Result<Self> {
        if l == 0 || n == 0 {
            return Err(Error::InvalidBlockStructure("empty block grid".into()));
        }
        if blocks.len() != l * l {
            return Err(Error::DimensionMismatch {
                expected: l * l,
                found: blocks.len(),
            });
        }
        for b in &blocks {
            check_row_len(b, n)?;
        }
        Ok(Self { l, n, blocks })
    }

    /// Reads the block structure off an assembled matrix.
    pub fn from_matrix(m: &ExactMatrix, l: usize, n: usize) -> Result<Self> {
        if m.rows() != l * n || m.cols() != l * n {
            return Err(Error::InvalidBlockStructure(format!(
                "{}x{} matrix is not a {l}x{l} grid of {n}x{n} blocks",
                m.rows(),
                m.cols()
            )));
        }
        let mut blocks = Vec::with_capacity(l * l);
        for i in 0..l {
            for j in 0..l {
                let row = circulant_first_row(m, i * n, j * n, n, n).ok_or_else(|| {
                    Error::InvalidBlockStructure(format!("block ({i}, {j}) is not circulant"))
                })?;
                blocks.push(row);
            }
        }
        Self::new(l, n, blocks)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.l * self.n
    }

    pub fn block(&self, i: usize, j: usize) -> &[BigRational] {
        &self.blocks[i * self.l + j]
    }

    pub fn assemble(&self) -> ExactMatrix {
        let n = self.n;
        ExactMatrix::from_fn(self.dimension(), self.dimension(), |r, c| {
            self.block(r / n, c / n)[(c % n + n - r % n) % n].clone()
        })
    }
}

/// `C̄_k` with entries `(C^{ij})^{(1)} · z_{n,k}`.
pub fn reduce_cyclic_blocks(spec: &CyclicBlockSpec, k: usize) -> Result<DMatrix<Complex64>> {
    let z = RootVector::new(spec.n, k)?;
    Ok(DMatrix::from_fn(spec.l, spec.l, |i, j| {
        z.dot(spec.block(i, j))
    }))
}

/// Block matrix with block sizes `(2n, ..., 2n, n)`: the leading blocks are
/// `2n × 2n` circulants, the last block column is `(X_i; X_i)`, the last
/// block row is `(Y_j Y_j)` and the corner is an `n × n` circulant, where
/// `X_i`, `Y_j` are `n × n` circulants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedBlockSpec {
    l: usize,
    half: usize,
    /// Row-major `(l-1)^2` first rows of length `2n`.
    square: Vec<Vec<BigRational>>,
    x: Vec<Vec<BigRational>>,
    y: Vec<Vec<BigRational>>,
    corner: Vec<BigRational>,
}

impl MixedBlockSpec {
    pub fn new(
        l: usize,
        half: usize,
        square: Vec<Vec<BigRational>>,
        x: Vec<Vec<BigRational>>,
        y: Vec<Vec<BigRational>>,
        corner: Vec<BigRational>,
    ) -> Result<Self> {
        if l == 0 || half == 0 {
            return Err(Error::InvalidBlockStructure("empty block grid".into()));
        }
        let inner = l - 1;
        for (what, len, expected) in [
            ("square blocks", square.len(), inner * inner),
            ("column blocks", x.len(), inner),
            ("row blocks", y.len(), inner),
        ] {
            if len != expected {
                return Err(Error::InvalidBlockStructure(format!(
                    "expected {expected} {what}, found {len}"
                )));
            }
        }
        for row in &square {
            check_row_len(row, 2 * half)?;
        }
        for row in x.iter().chain(&y) {
            check_row_len(row, half)?;
        }
        check_row_len(&corner, half)?;
        Ok(Self {
            l,
            half,
            square,
            x,
            y,
            corner,
        })
    }

    /// Reads the structure off an assembled matrix, validating the
    /// circulant blocks and the doubled last block row and column.
    pub fn from_matrix(m: &ExactMatrix, l: usize, half: usize) -> Result<Self> {
        let size = (2 * l).saturating_sub(1) * half;
        if l == 0 || m.rows() != size || m.cols() != size {
            return Err(Error::InvalidBlockStructure(format!(
                "{}x{} matrix does not have block sizes (2*{half}, ..., {half}) with {l} blocks",
                m.rows(),
                m.cols()
            )));
        }
        let h = half;
        let last = (l - 1) * 2 * h;
        let bad = |what: String| Error::InvalidBlockStructure(what);
        let mut square = Vec::new();
        for i in 0..l - 1 {
            for j in 0..l - 1 {
                square.push(
                    circulant_first_row(m, i * 2 * h, j * 2 * h, 2 * h, 2 * h)
                        .ok_or_else(|| bad(format!("block ({i}, {j}) is not circulant")))?,
                );
            }
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..l - 1 {
            let top = circulant_first_row(m, i * 2 * h, last, h, h);
            let bottom = circulant_first_row(m, i * 2 * h + h, last, h, h);
            match (top, bottom) {
                (Some(t), Some(b)) if t == b => x.push(t),
                _ => return Err(bad(format!("block ({i}, last) is not a doubled circulant"))),
            }
            let left = circulant_first_row(m, last, i * 2 * h, h, h);
            let right = circulant_first_row(m, last, i * 2 * h + h, h, h);
            match (left, right) {
                (Some(a), Some(b)) if a == b => y.push(a),
                _ => return Err(bad(format!("block (last, {i}) is not a doubled circulant"))),
            }
        }
        let corner = circulant_first_row(m, last, last, h, h)
            .ok_or_else(|| bad("corner block is not circulant".into()))?;
        Self::new(l, half, square, x, y, corner)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// The block size `n` of the corner; leading blocks have size `2n`.
    pub fn half(&self) -> usize {
        self.half
    }

    pub fn dimension(&self) -> usize {
        (2 * self.l - 1) * self.half
    }

    fn block_size(&self, i: usize) -> usize {
        if i + 1 == self.l {
            self.half
        } else {
            2 * self.half
        }
    }

    /// First row of block `(i, j)`; for the last block row this is `Y_j`'s
    /// first row written twice.
    pub fn first_row(&self, i: usize, j: usize) -> Vec<BigRational> {
        let inner = self.l - 1;
        match (i == inner, j == inner) {
            (false, false) => self.square[i * inner + j].clone(),
            (false, true) => self.x[i].clone(),
            (true, false) => [self.y[j].as_slice(), self.y[j].as_slice()].concat(),
            (true, true) => self.corner.clone(),
        }
    }

    pub fn assemble(&self) -> ExactMatrix {
        let h = self.half;
        let locate = |r: usize| {
            let b = (r / (2 * h)).min(self.l - 1);
            (b, r - b * 2 * h)
        };
        let rows: Vec<Vec<Vec<BigRational>>> = (0..self.l)
            .map(|i| (0..self.l).map(|j| self.first_row(i, j)).collect())
            .collect();
        ExactMatrix::from_fn(self.dimension(), self.dimension(), |r, c| {
            let (bi, lr) = locate(r);
            let (bj, lc) = locate(c);
            let row = &rows[bi][bj];
            // each block is a circulant of period = its column count, except
            // the doubled row blocks whose period is `half`
            let period = if bi + 1 == self.l && bj + 1 < self.l {
                h
            } else {
                self.block_size(bj)
            };
            row[(lc % period + period - lr % period) % period].clone()
        })
    }
}

/// `D̄_k` for `0 <= k < 2n`: leading columns use `z_{2n,k}`; the last
/// column uses `z_{n,k/2}` for even `k` and vanishes for odd `k`.
pub fn reduce_mixed_blocks(spec: &MixedBlockSpec, k: usize) -> Result<DMatrix<Complex64>> {
    let h = spec.half;
    let z_full = RootVector::new(2 * h, k)?;
    let z_half = (k % 2 == 0)
        .then(|| RootVector::new(h, k / 2))
        .transpose()?;
    let l = spec.l;
    Ok(DMatrix::from_fn(l, l, |i, j| {
        let row = spec.first_row(i, j);
        if j + 1 < l {
            z_full.dot(&row)
        } else {
            z_half.as_ref().map_or(Complex64::zero(), |z| z.dot(&row))
        }
    }))
}

/// Characteristic polynomial of a complex matrix, lowest degree first.
pub fn complex_char_poly(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let rows: Vec<Vec<Complex64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    berkowitz(&rows)
}

fn complex_poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Outcome of comparing a floating-point product of characteristic
/// polynomials against the exact characteristic polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub dimension: usize,
    /// Largest `|approx - exact| / |exact|` over nonzero exact coefficients.
    pub max_relative_error: f64,
    /// Largest `|approx|` over coefficients that are exactly zero.
    pub max_absolute_error_at_zero: f64,
    pub passed: bool,
}

/// Compares `approx` (lowest degree first) with `exact` coefficientwise.
pub fn compare_coefficients(
    approx: &[Complex64],
    exact: &Polynomial,
    tol: Tolerance,
) -> IdentityCheck {
    let exact_f: Vec<f64> = exact.coeffs().iter().map(rational_to_f64).collect();
    let len = approx.len().max(exact_f.len());
    let mut max_rel: f64 = 0.0;
    let mut max_abs: f64 = 0.0;
    let floor = tol.absolute * exact_f.iter().fold(1.0f64, |acc, e| acc.max(e.abs()));
    let mut passed = true;
    for i in 0..len {
        let a = approx.get(i).copied().unwrap_or_default();
        let e = exact_f.get(i).copied().unwrap_or(0.0);
        let err = (a - e).norm();
        if e == 0.0 {
            max_abs = max_abs.max(err);
        } else {
            max_rel = max_rel.max(err / e.abs());
        }
        // NaN must fail too.
        if err.is_nan() || err > tol.relative * e.abs() + floor {
            passed = false;
        }
    }
    IdentityCheck {
        dimension: exact.degree().unwrap_or(0),
        max_relative_error: max_rel,
        max_absolute_error_at_zero: max_abs,
        passed,
    }
}

/// `χ_C = prod_k χ_{C̄_k}`.
pub fn check_cyclic_identity(spec: &CyclicBlockSpec, tol: Tolerance) -> Result<IdentityCheck> {
    let exact = char_poly(&spec.assemble())?;
    let mut product = vec![Complex64::one()];
    for k in 0..spec.n {
        product = complex_poly_mul(
            &product,
            &complex_char_poly(&reduce_cyclic_blocks(spec, k)?),
        );
    }
    Ok(compare_coefficients(&product, &exact, tol))
}

/// `χ_D · t^n = prod_{k < 2n} χ_{D̄_k}`.
pub fn check_mixed_identity(spec: &MixedBlockSpec, tol: Tolerance) -> Result<IdentityCheck> {
    let chi = char_poly(&spec.assemble())?;
    let shifted = &chi * &Polynomial::linear_factor(&BigRational::zero()).pow(spec.half);
    let mut product = vec![Complex64::one()];
    for k in 0..2 * spec.half {
        product = complex_poly_mul(&product, &complex_char_poly(&reduce_mixed_blocks(spec, k)?));
    }
    let mut check = compare_coefficients(&product, &shifted, tol);
    check.dimension = spec.dimension();
    Ok(check)
}

/// `M(A, λ, d) = (a_ij J_{d_i d_j}) + diag(λ_i I_{d_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredMSpec {
    a: ExactMatrix,
    lambda: Vec<BigRational>,
    d: Vec<usize>,
}

impl StructuredMSpec {
    pub fn new(a: ExactMatrix, lambda: Vec<BigRational>, d: Vec<usize>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let l = a.rows();
        if l == 0 {
            return Err(Error::InvalidBlockStructure("empty block grid".into()));
        }
        for len in [lambda.len(), d.len()] {
            if len != l {
                return Err(Error::DimensionMismatch {
                    expected: l,
                    found: len,
                });
            }
        }
        if d.contains(&0) {
            return Err(Error::InvalidBlockStructure(
                "block sizes must be positive".into(),
            ));
        }
        Ok(Self { a, lambda, d })
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn lambda(&self) -> &[BigRational] {
        &self.lambda
    }

    pub fn d(&self) -> &[usize] {
        &self.d
    }

    /// `δ = Σ d_i`.
    pub fn delta(&self) -> usize {
        self.d.iter().sum()
    }

    pub fn assemble(&self) -> ExactMatrix {
        let block_of: Vec<usize> = self
            .d
            .iter()
            .enumerate()
            .flat_map(|(i, &di)| std::iter::repeat(i).take(di))
            .collect();
        ExactMatrix::from_fn(self.delta(), self.delta(), |r, c| {
            let (i, j) = (block_of[r], block_of[c]);
            let mut v = self.a.get(i, j).clone();
            if r == c {
                v += &self.lambda[i];
            }
            v
        })
    }

    /// `M̄ = diag(d) A + diag(λ)`.
    pub fn reduced(&self) -> ExactMatrix {
        let l = self.d.len();
        ExactMatrix::from_fn(l, l, |i, j| {
            let mut v = self.a.get(i, j) * BigRational::from_integer(BigInt::from(self.d[i]));
            if i == j {
                v += &self.lambda[i];
            }
            v
        })
    }

    /// `χ_{M̄}(t) · prod (t - λ_i)^{d_i - 1}`.
    pub fn predicted_char_poly(&self) -> Result<Polynomial> {
        let mut p = char_poly(&self.reduced())?;
        for (lam, &di) in self.lambda.iter().zip(&self.d) {
            p = &p * &Polynomial::linear_factor(lam).pow(di - 1);
        }
        Ok(p)
    }
}

/// `χ_M = χ_{M̄} · prod (t - λ_i)^{d_i - 1}`, exactly.
pub fn check_structured_identity(spec: &StructuredMSpec) -> Result<bool> {
    Ok(char_poly(&spec.assemble())? == spec.predicted_char_poly()?)
}

/// Spectrum of `M(A, λ, d)`: the rational eigenvalues of `M̄`, plus `λ_i`
/// with multiplicity `d_i - 1`. Whatever part of `χ_{M̄}` does not split
/// over the rationals is returned as `residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredSpectrum {
    pub spectrum: Spectrum,
    pub residual: Polynomial,
}

impl StructuredSpectrum {
    pub fn is_split(&self) -> bool {
        self.residual.degree() == Some(0)
    }
}

pub fn structured_m_spectrum(spec: &StructuredMSpec) -> Result<StructuredSpectrum> {
    let (roots, residual) = char_poly(&spec.reduced())?.rational_roots();
    let extra = spec
        .lambda
        .iter()
        .zip(&spec.d)
        .map(|(lam, &di)| (lam.clone(), di - 1));
    Ok(StructuredSpectrum {
        spectrum: Spectrum::new(roots.into_iter().chain(extra)),
        residual,
    })
}

/// Block form of the all-ones Hessian of `K_n` under the rotation `v -> v + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitStructure {
    Cyclic(CyclicBlockSpec),
    Mixed(MixedBlockSpec),
}

impl OrbitStructure {
    pub fn assemble(&self) -> ExactMatrix {
        match self {
            Self::Cyclic(s) => s.assemble(),
            Self::Mixed(s) => s.assemble(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitBlocks {
    pub n: usize,
    pub structure: OrbitStructure,
    /// `n^{n-4}`; the block matrix times this is the Hessian.
    pub scale: BigRational,
    /// `edge_order[p]` is the lexicographic edge id of the `p`-th edge in
    /// orbit order.
    pub edge_order: Vec<EdgeId>,
}

impl OrbitBlocks {
    /// The Hessian in orbit order.
    pub fn assemble_scaled(&self) -> ExactMatrix {
        self.structure.assemble().scale(&self.scale)
    }
}

/// Orbit-block form of the all-ones Hessian of `K_n`.
///
/// Orbits are generated by `e_i = {0, i}` for `1 <= i <= n/2`, listed as
/// `σ^k e_i`. For odd `n` every orbit has `n` edges; for even `n` the
/// diameter orbit `{0, n/2}` has `n/2`. Entries are 0 on the diagonal, 3
/// for edges sharing a vertex and 4 for disjoint edges.
pub fn orbit_blocks_complete(n: usize) -> Result<OrbitBlocks> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "orbit blocks need n >= 3, got {n}"
        )));
    }
    let g = build_graph(&GraphSpec::Complete(n))?;
    let id_of = |(a, b): (usize, usize)| {
        let (u, v) = (a.min(b), a.max(b));
        g.edges()
            .iter()
            .find(|e| e.u == u && e.v == v)
            .expect("edge of K_n")
            .id
    };
    let orbit = |i: usize, k: usize| (k % n, (k + i) % n);
    let a = |e: (usize, usize), f: (usize, usize)| {
        let same = (e.0 == f.0 && e.1 == f.1) || (e.0 == f.1 && e.1 == f.0);
        let share = e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1;
        int(if same {
            0
        } else if share {
            3
        } else {
            4
        })
    };
    let row = |i: usize, j: usize, len: usize| -> Vec<BigRational> {
        (0..len).map(|c| a(orbit(i, 0), orbit(j, c))).collect()
    };
    let l = n / 2;
    let (structure, edge_order) = if n % 2 == 1 {
        let blocks = (1..=l)
            .flat_map(|i| (1..=l).map(move |j| (i, j)))
            .map(|(i, j)| row(i, j, n))
            .collect();
        let order = (1..=l)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .map(|(i, k)| id_of(orbit(i, k)))
            .collect();
        (
            OrbitStructure::Cyclic(CyclicBlockSpec::new(l, n, blocks)?),
            order,
        )
    } else {
        let h = l;
        let square = (1..l)
            .flat_map(|i| (1..l).map(move |j| (i, j)))
            .map(|(i, j)| row(i, j, n))
            .collect();
        let x = (1..l).map(|i| row(i, l, h)).collect();
        let y = (1..l).map(|j| row(l, j, h)).collect();
        let corner = row(l, l, h);
        let order = (1..l)
            .flat_map(|i| (0..n).map(move |k| (i, k)))
            .chain((0..h).map(|k| (l, k)))
            .map(|(i, k)| id_of(orbit(i, k)))
            .collect();
        (
            OrbitStructure::Mixed(MixedBlockSpec::new(l, h, square, x, y, corner)?),
            order,
        )
    };
    Ok(OrbitBlocks {
        n,
        structure,
        scale: rational_pow(&int(n as i64), n as i64 - 4),
        edge_order,
    })
}

/// Number of singular values above `relative * σ_max`.
pub fn numeric_rank(m: &DMatrix<Complex64>, relative: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > relative * max).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub k: usize,
    pub rank: usize,
    /// Whether only the leading `(l-1) × (l-1)` block was examined.
    pub restricted: bool,
}

/// Numeric rank of `C̄_k + 2I` (odd `n`) or `D̄_k + 2I` (even `n`) for
/// `1 <= k < n`, taken on the unscaled orbit blocks.
///
/// For even `n` and odd `k` the last row and column of `D̄_k` vanish, so
/// `D̄_k + 2I` has a lone 2 in the corner; only the leading block is
/// examined there.
pub fn rank_one_checks(n: usize, relative: f64) -> Result<Vec<RankCheck>> {
    let blocks = orbit_blocks_complete(n)?;
    let shift = |m: DMatrix<Complex64>| {
        let size = m.nrows();
        m + DMatrix::<Complex64>::identity(size, size) * Complex64::new(2.0, 0.0)
    };
    (1..n)
        .map(|k| match &blocks.structure {
            OrbitStructure::Cyclic(spec) => Ok(RankCheck {
                k,
                rank: numeric_rank(&shift(reduce_cyclic_blocks(spec, k)?), relative),
                restricted: false,
            }),
            OrbitStructure::Mixed(spec) => {
                let mut m = shift(reduce_mixed_blocks(spec, k)?);
                let restricted = k % 2 == 1;
                if restricted {
                    let inner = spec.l() - 1;
                    m = m.view((0, 0), (inner, inner)).into_owned();
                }
                Ok(RankCheck {
                    k,
                    rank: numeric_rank(&m, relative),
                    restricted,
                })
            }
        })
        .collect()
}

/// Closed-form spectrum of the all-ones Hessian of `K_n` and its
/// determinant, both from the product formula and from the spectrum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnClosedForm {
    pub n: usize,
    pub spectrum: Spectrum,
    pub formula_det: BigRational,
    pub product_det: BigRational,
}

impl KnClosedForm {
    pub fn agrees(&self) -> bool {
        self.formula_det == self.product_det
    }
}

fn binom2(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

fn signed_unit(exp: i64) -> BigRational {
    if exp.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

pub fn closed_form_kn(n: usize) -> Result<KnClosedForm> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "closed form needs n >= 3, got {n}"
        )));
    }
    let q = int(n as i64);
    let ni = n as i64;
    let pow = |e: i64| rational_pow(&q, e);
    let c = binom2(n);
    let spectrum = Spectrum::new([
        (int(-2) * pow(ni - 4), c - n),
        (-pow(ni - 3), n - 1),
        (int(2 * (ni - 2)) * pow(ni - 3), 1),
    ]);
    let ci = c as i64;
    let formula_det = signed_unit(ci - 1)
        * rational_pow(&int(2), ci - ni + 1)
        * pow(ni + ci * (ni - 4))
        * int(ni - 2);
    Ok(KnClosedForm {
        n,
        product_det: spectrum.product(),
        spectrum,
        formula_det,
    })
}

/// Closed-form spectrum of the all-ones Hessian of `K_{m,n}` together with
/// the published determinant formula and the spectrum product. The two
/// determinants are reported separately because they do not always agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmnClosedForm {
    pub m: usize,
    pub n: usize,
    pub spectrum: Spectrum,
    pub formula_det: BigRational,
    pub product_det: BigRational,
}

impl KmnClosedForm {
    pub fn agrees(&self) -> bool {
        self.formula_det == self.product_det
    }
}

pub fn closed_form_kmn(m: usize, n: usize) -> Result<KmnClosedForm> {
    if m == 0 || n == 0 || m + n < 3 {
        return Err(Error::InvalidParameter(format!(
            "closed form needs m, n >= 1 and m + n >= 3, got ({m}, {n})"
        )));
    }
    let (mi, ni) = (m as i64, n as i64);
    let (qm, qn) = (int(mi), int(ni));
    let mp = |e: i64| rational_pow(&qm, e);
    let np = |e: i64| rational_pow(&qn, e);
    let spectrum = Spectrum::new([
        (int(-2) * mp(ni - 2) * np(mi - 2), (m - 1) * (n - 1)),
        (-(mp(ni - 2) * np(mi - 1)), n - 1),
        (-(mp(ni - 1) * np(mi - 2)), m - 1),
        (
            mp(ni - 2) * np(mi - 2) * int((mi + ni - 1) * (mi + ni - 2)),
            1,
        ),
    ]);
    let formula_det = signed_unit(mi * ni - 1)
        * rational_pow(&int(2), (mi - 1) * (ni - 1))
        * mp((mi * ni - mi - 1) * (ni - 1))
        * np((mi * ni - ni - 1) * (mi - 1))
        * int((mi + ni - 1) * (mi + ni - 2));
    Ok(KmnClosedForm {
        m,
        n,
        product_det: spectrum.product(),
        spectrum,
        formula_det,
    })
}

fn random_row<R: Rng + ?Sized>(rng: &mut R, len: usize, bound: i64) -> Vec<BigRational> {
    (0..len)
        .map(|_| int(rng.random_range(-bound..=bound)))
        .collect()
}

/// Integer `CyclicBlockSpec` with `1 <= l <= max_l`, `1 <= n <= max_n` and
/// entries in `[-bound, bound]`.
pub fn random_cyclic_spec<R: Rng + ?Sized>(
    rng: &mut R,
    max_l: usize,
    max_n: usize,
    bound: i64,
) -> CyclicBlockSpec {
    let l = rng.random_range(1..=max_l);
    let n = rng.random_range(1..=max_n);
    let blocks = (0..l * l).map(|_| random_row(rng, n, bound)).collect();
    CyclicBlockSpec::new(l, n, blocks).expect("well-formed random spec")
}

/// Integer `MixedBlockSpec` with `1 <= l <= max_l` and corner size
/// `1 <= half <= max_half`.
pub fn random_mixed_spec<R: Rng + ?Sized>(
    rng: &mut R,
    max_l: usize,
    max_half: usize,
    bound: i64,
) -> MixedBlockSpec {
    let l = rng.random_range(1..=max_l);
    let h = rng.random_range(1..=max_half);
    let inner = l - 1;
    let square = (0..inner * inner)
        .map(|_| random_row(rng, 2 * h, bound))
        .collect();
    let x = (0..inner).map(|_| random_row(rng, h, bound)).collect();
    let y = (0..inner).map(|_| random_row(rng, h, bound)).collect();
    let corner = random_row(rng, h, bound);
    MixedBlockSpec::new(l, h, square, x, y, corner).expect("well-formed random spec")
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    BigRational::new(
        BigInt::from(rng.random_range(-bound..=bound)),
        BigInt::from(rng.random_range(1..=3i64)),
    )
}

/// Rational `StructuredMSpec` with `1 <= l <= max_l` and block sizes
/// `1 <= d_i <= max_d`.
pub fn random_structured_spec<R: Rng + ?Sized>(
    rng: &mut R,
    max_l: usize,
    max_d: usize,
    bound: i64,
) -> StructuredMSpec {
    let l = rng.random_range(1..=max_l);
    let entries = (0..l * l).map(|_| random_rational(rng, bound)).collect();
    let a = ExactMatrix::new(l, l, entries).expect("square");
    let lambda = (0..l).map(|_| random_rational(rng, bound)).collect();
    let d = (0..l).map(|_| rng.random_range(1..=max_d)).collect();
    StructuredMSpec::new(a, lambda, d).expect("well-formed random spec")
}
