//! Dense complex linear algebra.
//!
//! Everything here is row-major and dense. Operator dimensions are capped at
//! [`MAX_DIM`]; the largest systems handled through dense storage are 12
//! qubits.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::{c64, Mat, Side};
use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest operator dimension accepted by the dense routines.
pub const MAX_DIM: usize = 4096;

/// Max-norm tolerance for self-adjointness.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance on the trace and on negative eigenvalues of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

pub type C64 = Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionTooLarge { dim, max: MAX_DIM })
    } else {
        Ok(())
    }
}

/// A dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is not `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * n + i] = c(v, 0.0);
        }
        m
    }

    /// The rank-one projector `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.scale(c(k, 0.0))
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance `max_ij |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance to the conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Matrix product. Panics on inner-dimension mismatch.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![C64::new(0.0, 0.0); n * p];
        for i in 0..n {
            let out_row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self { rows: n, cols: p, data: out }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `<u|M|v>`.
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.matvec(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    fn to_faer(&self) -> Mat<c64> {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            let z = self[(i, j)];
            c64::new(z.re, z.im)
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Serialized as a list of rows, each entry a `[re, im]` pair.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(de::Error::custom("ragged matrix rows"));
        }
        let data = rows.into_iter().flatten().map(|[re, im]| c(re, im)).collect();
        Ok(ComplexMatrix { rows: n, cols: m, data })
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let oc = ac * bc;
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.data[i * ac + j];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..br {
                let row = (i * br + k) * oc + j * bc;
                for l in 0..bc {
                    out.data[row + l] = aij * b.data[k * bc + l];
                }
            }
        }
    }
    out
}

/// A square, self-adjoint matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows, cols: matrix.cols });
        }
        check_dim(matrix.rows)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    /// Wraps `matrix` after replacing it by `(M + M†)/2`. Still rejects
    /// anything further than `HERMITIAN_TOL` from self-adjoint.
    pub fn new_symmetrized(matrix: ComplexMatrix) -> Result<Self> {
        let op = Self::new(matrix)?;
        let sym = (&op.matrix + &op.matrix.adjoint()).scale_real(0.5);
        Ok(Self { matrix: sym })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermitian_deviation() <= HERMITIAN_TOL);
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self { matrix: ComplexMatrix::from_real_diagonal(diag) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(Self { matrix: &self.matrix + &other.matrix })
    }

    pub fn scale(&self, k: f64) -> Self {
        Self { matrix: self.matrix.scale_real(k) }
    }

    /// `tr(self · other)`; real for two Hermitian operators.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.matrix[(i, k)] * other.matrix[(k, i)];
            }
        }
        acc.re
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { matrix: kron(&self.matrix, &other.matrix) }
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let spec = hermitian_eigendecomposition(self, 1e-9)?;
        Ok(*spec.eigenvalues.last().expect("nonempty operator"))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        let spec = hermitian_eigendecomposition(self, 1e-9)?;
        Ok(spec.eigenvalues[0])
    }
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity. Positivity needs a full
    /// eigendecomposition.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(matrix)?;
        let trace = op.trace();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace { trace });
        }
        let min_eigenvalue = op.min_eigenvalue()?;
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { op })
    }

    pub(crate) fn from_operator_unchecked(op: HermitianOperator) -> Self {
        Self { op }
    }

    /// `|ψ><ψ|` for a vector of unit norm.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { op: HermitianOperator::from_matrix_unchecked(ComplexMatrix::outer(amplitudes)) })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { op: HermitianOperator::identity(dim).scale(1.0 / dim as f64) })
    }

    /// Convex combination `Σ w_i ρ_i`. Weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptySubset)?.1;
        let dim = first.dim();
        let mut total = 0.0;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: rho.dim() });
            }
            if !(0.0..=1.0).contains(w) {
                return Err(Error::ProbabilityOutOfRange(*w));
            }
            total += w;
            acc = &acc + &rho.matrix().scale_real(*w);
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace { trace: total });
        }
        Ok(Self { op: HermitianOperator::from_matrix_unchecked(acc) })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { op: self.op.kron(&other.op) }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn as_operator(&self) -> &HermitianOperator {
        &self.op
    }

    /// `tr(ρ A)`.
    pub fn expectation(&self, a: &HermitianOperator) -> Result<f64> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: a.dim() });
        }
        Ok(self.op.hs_inner(a))
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        hermitian_eigendecomposition(&self.op, 1e-9)
    }
}

/// Eigenvalues in descending order with the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|l| v[(i, l)] * v[(j, l)].conj() * self.eigenvalues[l]).sum()
        })
    }

    /// `max |V†V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        v.adjoint().matmul(v).max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    /// The matrix of `<ψ_l|A|ψ_l'>` in the eigenbasis.
    pub fn transform(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        v.adjoint().matmul(&a.matmul(v))
    }
}

/// Self-adjoint eigendecomposition.
///
/// Backed by faer's tridiagonal divide-and-conquer solver, which is
/// deterministic for identical input. The reconstruction residual and column
/// orthonormality are both checked against `tol` before returning, and a
/// non-finite result counts as a failure.
pub fn hermitian_eigendecomposition(h: &HermitianOperator, tol: f64) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let scale = h.matrix.max_abs().max(1.0);
    let eig = h
        .matrix
        .to_faer()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenNonConvergence { residual: f64::NAN })?;
    let values: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let vectors = eig.U();

    // faer returns ascending order.
    let eigenvalues = values.iter().rev().copied().collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| {
        let z = vectors[(i, n - 1 - j)];
        c(z.re, z.im)
    });
    let spec = SpectralDecomposition { eigenvalues, eigenvectors };

    let residual = spec.reconstruct().max_abs_diff(&h.matrix) / scale;
    let ortho = spec.orthonormality_error();
    if !(residual <= tol && ortho <= tol) {
        return Err(Error::EigenNonConvergence { residual: residual.max(ortho) });
    }
    Ok(spec)
}

/// Pads `op` with identities so that it acts on `site` of `num_sites`
/// subsystems of dimension `local_dim`. Site 0 is the leftmost factor.
pub fn embed_at_site(
    op: &HermitianOperator,
    site: usize,
    num_sites: usize,
    local_dim: usize,
) -> Result<HermitianOperator> {
    if site >= num_sites {
        return Err(Error::SiteOutOfRange { site, num_sites });
    }
    if op.dim() != local_dim {
        return Err(Error::DimensionMismatch { expected: local_dim, found: op.dim() });
    }
    let total = checked_pow(local_dim, num_sites)?;
    let left = local_dim.pow(site as u32);
    let right = local_dim.pow((num_sites - site - 1) as u32);
    let mut out = ComplexMatrix::zeros(total, total);
    let local = op.matrix();
    for l in 0..left {
        for a in 0..local_dim {
            for b in 0..local_dim {
                let v = local[(a, b)];
                if v.re == 0.0 && v.im == 0.0 {
                    continue;
                }
                let row0 = (l * local_dim + a) * right;
                let col0 = (l * local_dim + b) * right;
                for r in 0..right {
                    out[(row0 + r, col0 + r)] = v;
                }
            }
        }
    }
    Ok(HermitianOperator::from_matrix_unchecked(out))
}

/// `base^exp`, rejecting results above [`MAX_DIM`].
pub fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: acc, max: MAX_DIM });
        }
    }
    Ok(acc)
}

/// Number of sites `N` with `local_dim^N == dim`.
pub fn num_sites_for(dim: usize, local_dim: usize) -> Result<usize> {
    if local_dim < 2 {
        return Err(Error::InvalidLocalDimension(local_dim));
    }
    let mut acc = 1usize;
    let mut n = 0usize;
    while acc < dim {
        acc *= local_dim;
        n += 1;
    }
    if acc != dim || n == 0 {
        return Err(Error::NotAPower { dim, local_dim });
    }
    Ok(n)
}

pub(crate) fn validate_subset(subset: &[usize], num_sites: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut seen = vec![false; num_sites];
    for &s in subset {
        if s >= num_sites {
            return Err(Error::SiteOutOfRange { site: s, num_sites });
        }
        if seen[s] {
            return Err(Error::DuplicateSite { site: s });
        }
        seen[s] = true;
    }
    Ok(())
}

/// Reduced state on the sites in `keep`. The kept factors appear in
/// ascending site order regardless of the order of `keep`.
pub fn partial_trace(
    rho: &DensityMatrix,
    keep: &[usize],
    num_sites: usize,
    local_dim: usize,
) -> Result<DensityMatrix> {
    validate_subset(keep, num_sites)?;
    let total = checked_pow(local_dim, num_sites)?;
    if rho.dim() != total {
        return Err(Error::DimensionMismatch { expected: total, found: rho.dim() });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    let traced: Vec<usize> = (0..num_sites).filter(|s| !kept.contains(s)).collect();

    // Stride of each site in the full computational-basis index.
    let stride = |site: usize| local_dim.pow((num_sites - site - 1) as u32);
    let offsets = |sites: &[usize]| -> Vec<usize> {
        let count = local_dim.pow(sites.len() as u32);
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for &s in sites.iter().rev() {
                    off += (idx % local_dim) * stride(s);
                    idx /= local_dim;
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    let m = rho.matrix();
    let out_dim = kept_off.len();
    let out = ComplexMatrix::from_fn(out_dim, out_dim, |i, j| {
        traced_off.iter().map(|&t| m[(kept_off[i] + t, kept_off[j] + t)]).sum()
    });
    Ok(DensityMatrix::from_operator_unchecked(HermitianOperator::from_matrix_unchecked(out)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_diagonal() {
        let k = kron(&pauli_z(), &ComplexMatrix::identity(2));
        assert_eq!(k, ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_flips_basis_state() {
        let xx = kron(&pauli_x(), &pauli_x());
        let ket00 = [c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)];
        let out = xx.matvec(&ket00);
        assert_eq!(out, vec![c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
    }

    #[test]
    fn embed_matches_kron() {
        let z = HermitianOperator::new(pauli_z()).unwrap();
        let e = embed_at_site(&z, 0, 2, 2).unwrap();
        assert_eq!(e.matrix(), &kron(&pauli_z(), &ComplexMatrix::identity(2)));
        let e1 = embed_at_site(&z, 1, 3, 2).unwrap();
        let expected = kron(&kron(&ComplexMatrix::identity(2), &pauli_z()), &ComplexMatrix::identity(2));
        assert_eq!(e1.matrix(), &expected);
    }

    #[test]
    fn embed_identity_and_trace() {
        let id = HermitianOperator::identity(2);
        for site in 0..4 {
            assert_eq!(embed_at_site(&id, site, 4, 2).unwrap().matrix(), &ComplexMatrix::identity(16));
        }
        let x = HermitianOperator::new(pauli_x()).unwrap();
        assert_eq!(embed_at_site(&x, 1, 3, 2).unwrap().trace(), 0.0);
    }

    #[test]
    fn embed_errors() {
        let x = HermitianOperator::new(pauli_x()).unwrap();
        assert!(matches!(embed_at_site(&x, 3, 3, 2), Err(Error::SiteOutOfRange { .. })));
        assert!(matches!(embed_at_site(&x, 0, 3, 3), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(embed_at_site(&x, 0, 13, 2), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn eigen_diagonal_sorted() {
        let h = HermitianOperator::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let s = hermitian_eigendecomposition(&h, 1e-12).unwrap();
        for (a, b) in s.eigenvalues.iter().zip([3.0, 2.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_pauli_x() {
        let h = HermitianOperator::new(pauli_x()).unwrap();
        let s = hermitian_eigendecomposition(&h, 1e-12).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-14);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvector of +1 is (|0>+|1>)/√2 up to a phase.
        let v0 = [s.eigenvectors[(0, 0)], s.eigenvectors[(1, 0)]];
        let overlap = (v0[0] * r + v0[1] * r).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn not_hermitian_rejected() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            HermitianOperator::new(ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::identity(2)),
            Err(Error::InvalidTrace { .. })
        ));
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPositive { .. })));
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn partial_trace_bell_is_maximally_mixed() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(r, 0.), c(0., 0.), c(0., 0.), c(r, 0.)];
        let rho = DensityMatrix::from_pure(&bell).unwrap();
        let red = partial_trace(&rho, &[0], 2, 2).unwrap();
        assert!(red.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_product() {
        let a = DensityMatrix::new(ComplexMatrix::from_vec(
            2,
            2,
            vec![c(0.7, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.)],
        ))
        .unwrap();
        let b = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.4, 0.6])).unwrap();
        let ab = a.kron(&b);
        assert!(partial_trace(&ab, &[0], 2, 2).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(partial_trace(&ab, &[1], 2, 2).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_pure_product() {
        let mut v = vec![c(0., 0.); 8];
        v[0] = c(1., 0.);
        let rho = DensityMatrix::from_pure(&v).unwrap();
        let red = partial_trace(&rho, &[1, 2], 3, 2).unwrap();
        let mut e = ComplexMatrix::zeros(4, 4);
        e[(0, 0)] = c(1., 0.);
        assert_eq!(red.matrix(), &e);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(matches!(partial_trace(&rho, &[], 2, 2), Err(Error::EmptySubset)));
        assert!(matches!(partial_trace(&rho, &[0], 3, 2), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(partial_trace(&rho, &[0, 0], 2, 2), Err(Error::DuplicateSite { .. })));
    }

    #[test]
    fn num_sites_inverse_of_pow() {
        assert_eq!(num_sites_for(64, 2).unwrap(), 6);
        assert_eq!(num_sites_for(27, 3).unwrap(), 3);
        assert!(num_sites_for(12, 2).is_err());
        assert!(num_sites_for(1, 2).is_err());
    }

    #[test]
    fn json_layout_is_rows_of_pairs() {
        let m = ComplexMatrix::from_vec(1, 2, vec![c(1.0, -2.0), c(0.5, 0.0)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[1.0,-2.0],[0.5,0.0]]]");
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
