//! Complete sets of mutually unbiased measurements (MUMs) built from an
//! orthonormal basis of traceless Hermitian operators.
//!
//! The `d² − 1` basis operators are laid out on a grid with `d − 1` outcome
//! columns and `d + 1` measurement rows. The flat index of `F_{n,b}` is
//! `b·(d − 1) + n` (zero-based), i.e. consecutive operators fill one
//! measurement before moving on to the next.
//!
//! From the grid, each measurement `b` gets `d` operators
//!
//! ```text
//! F_n^(b) = F^(b) − (d + √d) F_{n,b}     for n < d − 1
//! F_{d−1}^(b) = (1 + √d) F^(b)           with F^(b) = Σ_n F_{n,b}
//! ```
//!
//! and effects `P_n^(b) = 𝕀/d + t F_n^(b)`, whose efficiency parameter is
//! `κ = 1/d + t²(1 + √d)²(d − 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, HermitianOperator};

/// Tolerance for the defining identities of a MUM set.
pub const MUM_TOL: f64 = 1e-10;

/// Absolute tolerance on `t` for the positivity bisection.
pub const T_BISECTION_TOL: f64 = 1e-10;

/// Orthonormal traceless Hermitian basis (local orthogonal observables
/// without the identity component).
#[derive(Clone, Debug)]
pub struct LooBasis {
    dim: usize,
    operators: Vec<HermitianOperator>,
}

impl LooBasis {
    /// Accepts a user-supplied basis after checking tracelessness and
    /// Hilbert–Schmidt orthonormality.
    pub fn new(dim: usize, operators: Vec<HermitianOperator>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidLocalDimension(dim));
        }
        let expected = dim * dim - 1;
        if operators.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: operators.len() });
        }
        for op in &operators {
            if op.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: op.dim() });
            }
            if op.trace().abs() > 1e-12 {
                return Err(Error::NotOrthonormal { deviation: op.trace().abs() });
            }
        }
        let basis = Self { dim, operators };
        let err = basis.gram_error();
        if err > MUM_TOL {
            return Err(Error::NotOrthonormal { deviation: err });
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[HermitianOperator] {
        &self.operators
    }

    /// `max_jk |tr(F_j F_k) − δ_jk|`.
    pub fn gram_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (j, a) in self.operators.iter().enumerate() {
            for (k, b) in self.operators.iter().enumerate().skip(j) {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((a.hs_inner(b) - target).abs());
            }
        }
        worst
    }

    /// Grid element `F_{n,b}` (zero-based `n < d−1`, `b < d+1`).
    pub fn grid(&self, n: usize, b: usize) -> &HermitianOperator {
        &self.operators[b * (self.dim - 1) + n]
    }
}

/// Generalized Gell-Mann basis normalized to `tr(F_j F_k) = δ_jk`.
///
/// Order: all symmetric off-diagonal operators for pairs `j < k`
/// (lexicographic), then the antisymmetric ones in the same order, then the
/// `d − 1` diagonal ones. For `d = 2` this is `σ_x, σ_y, σ_z` over `√2`.
pub fn build_gell_mann_basis(d: usize) -> Result<LooBasis> {
    if d < 2 {
        return Err(Error::InvalidLocalDimension(d));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut ops = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = c(r, 0.0);
        m[(k, j)] = c(r, 0.0);
        ops.push(HermitianOperator::from_matrix_unchecked(m));
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = c(0.0, -r);
        m[(k, j)] = c(0.0, r);
        ops.push(HermitianOperator::from_matrix_unchecked(m));
    }
    for m in 1..d {
        let norm = ((m * (m + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(m) {
            *v = 1.0 / norm;
        }
        diag[m] = -(m as f64) / norm;
        ops.push(HermitianOperator::from_real_diagonal(&diag));
    }
    Ok(LooBasis { dim: d, operators: ops })
}

/// `κ = 1/d + t²(1 + √d)²(d − 1)`.
pub fn kappa_of_t(d: usize, t: f64) -> f64 {
    let df = d as f64;
    let a = 1.0 + df.sqrt();
    1.0 / df + t * t * a * a * (df - 1.0)
}

/// Positive root of [`kappa_of_t`] for `1/d < κ ≤ 1`.
pub fn t_of_kappa(d: usize, kappa: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidLocalDimension(d));
    }
    let df = d as f64;
    if !(kappa > 1.0 / df && kappa <= 1.0 + 1e-12) {
        return Err(Error::KappaOutOfRange { kappa, d });
    }
    let a = 1.0 + df.sqrt();
    Ok(((kappa.min(1.0) - 1.0 / df) / (df - 1.0)).sqrt() / a)
}

/// A complete set of `d + 1` MUMs with `d` outcomes each.
#[derive(Clone, Debug)]
pub struct MumSet {
    dim: usize,
    t: f64,
    kappa: f64,
    /// `effects[b][n] = P_n^(b)`.
    effects: Vec<Vec<HermitianOperator>>,
    /// `f_ops[b][n] = F_n^(b)`.
    f_ops: Vec<Vec<HermitianOperator>>,
}

/// The `F_n^(b)` grid for a basis.
fn f_operators(basis: &LooBasis) -> Vec<Vec<HermitianOperator>> {
    let d = basis.dim;
    let sd = (d as f64).sqrt();
    (0..=d)
        .map(|b| {
            let mut total = ComplexMatrix::zeros(d, d);
            for n in 0..d - 1 {
                total = &total + basis.grid(n, b).matrix();
            }
            let mut row: Vec<HermitianOperator> = (0..d - 1)
                .map(|n| {
                    let m = &total - &basis.grid(n, b).matrix().scale_real(d as f64 + sd);
                    HermitianOperator::from_matrix_unchecked(m)
                })
                .collect();
            row.push(HermitianOperator::from_matrix_unchecked(total.scale_real(1.0 + sd)));
            row
        })
        .collect()
}

fn effect(d: usize, t: f64, f: &HermitianOperator) -> HermitianOperator {
    let m = &ComplexMatrix::identity(d).scale_real(1.0 / d as f64) + &f.matrix().scale_real(t);
    HermitianOperator::from_matrix_unchecked(m)
}

/// Smallest eigenvalue over all effects at parameter `t`, with its `(b, n)`.
fn min_effect_eigenvalue(d: usize, t: f64, f_ops: &[Vec<HermitianOperator>]) -> Result<(f64, usize, usize)> {
    let mut worst = (f64::INFINITY, 0, 0);
    for (b, row) in f_ops.iter().enumerate() {
        for (n, f) in row.iter().enumerate() {
            let e = effect(d, t, f).min_eigenvalue()?;
            if e < worst.0 {
                worst = (e, b, n);
            }
        }
    }
    Ok(worst)
}

/// MUM set from the generalized Gell-Mann basis.
pub fn build_mum_set(d: usize, t: f64) -> Result<MumSet> {
    build_mum_set_with_basis(&build_gell_mann_basis(d)?, t)
}

/// MUM set from an arbitrary orthonormal traceless basis.
pub fn build_mum_set_with_basis(basis: &LooBasis, t: f64) -> Result<MumSet> {
    let d = basis.dim;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidT(t));
    }
    let kappa = kappa_of_t(d, t);
    if kappa > 1.0 + 1e-12 {
        return Err(Error::KappaOutOfRange { kappa, d });
    }
    let kappa = kappa.min(1.0);
    let f_ops = f_operators(basis);
    let (min_eigenvalue, b, n) = min_effect_eigenvalue(d, t, &f_ops)?;
    if min_eigenvalue < -MUM_TOL {
        return Err(Error::EffectNotPositive { b, n, min_eigenvalue });
    }
    let effects = f_ops
        .iter()
        .map(|row| row.iter().map(|f| effect(d, t, f)).collect())
        .collect();
    Ok(MumSet { dim: d, t, kappa, effects, f_ops })
}

/// Largest `t` keeping every Gell-Mann effect positive semidefinite.
pub fn max_positive_t(d: usize) -> Result<f64> {
    max_positive_t_for_basis(&build_gell_mann_basis(d)?)
}

/// Bisection on the smallest effect eigenvalue. The bracket starts at the
/// `t` where `κ` reaches 1, beyond which no MUM set exists.
pub fn max_positive_t_for_basis(basis: &LooBasis) -> Result<f64> {
    let d = basis.dim;
    let f_ops = f_operators(basis);
    // Rounding slack only; anything below it counts as a negative eigenvalue.
    let feasible = |t: f64| -> Result<bool> { Ok(min_effect_eigenvalue(d, t, &f_ops)?.0 >= -1e-14) };
    let hi_cap = t_of_kappa(d, 1.0)?;
    if feasible(hi_cap)? {
        return Ok(hi_cap);
    }
    let (mut lo, mut hi) = (0.0, hi_cap);
    while hi - lo > T_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// MUM set at a given `κ`, converting to `t` first.
pub fn mum_from_kappa(d: usize, kappa: f64) -> Result<MumSet> {
    let mut set = build_mum_set(d, t_of_kappa(d, kappa)?)?;
    set.kappa = kappa;
    Ok(set)
}

/// MUM set at the largest positive `t`. When that lands within `1e-9` of
/// `κ = 1` the exact MUB value is used.
pub fn default_mum(d: usize) -> Result<MumSet> {
    let t = max_positive_t(d)?;
    if (kappa_of_t(d, t) - 1.0).abs() <= 1e-9 {
        mum_from_kappa(d, 1.0)
    } else {
        build_mum_set(d, t)
    }
}

impl MumSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn num_measurements(&self) -> usize {
        self.dim + 1
    }

    /// `P_n^(b)`.
    pub fn effect(&self, b: usize, n: usize) -> Result<&HermitianOperator> {
        self.effects
            .get(b)
            .ok_or(Error::IndexOutOfRange { what: "measurement", index: b, len: self.dim + 1 })?
            .get(n)
            .ok_or(Error::IndexOutOfRange { what: "outcome", index: n, len: self.dim })
    }

    /// `F_n^(b)`.
    pub fn f_op(&self, b: usize, n: usize) -> Result<&HermitianOperator> {
        self.effect(b, n)?;
        Ok(&self.f_ops[b][n])
    }

    /// All `(b, n)` pairs in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..=self.dim).flat_map(move |b| (0..self.dim).map(move |n| (b, n)))
    }

    pub fn effects(&self) -> &[Vec<HermitianOperator>] {
        &self.effects
    }

    pub fn parameters(&self) -> MumParameters {
        MumParameters { d: self.dim, t: self.t, kappa: self.kappa }
    }

    /// `max_b |Σ_n P_n^(b) − 𝕀|`.
    pub fn completeness_residual(&self) -> f64 {
        let id = ComplexMatrix::identity(self.dim);
        self.effects
            .iter()
            .map(|row| {
                let sum = row.iter().fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, p| &acc + p.matrix());
                sum.max_abs_diff(&id)
            })
            .fold(0.0, f64::max)
    }

    /// `max_b |Σ_n F_n^(b)|`.
    pub fn f_sum_residual(&self) -> f64 {
        self.f_ops
            .iter()
            .map(|row| {
                row.iter()
                    .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, f| &acc + f.matrix())
                    .max_abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the trace conditions
    /// `tr P = 1` and
    /// `tr(P_n^(b) P_n'^(b')) = δδ'κ + (1−δ)δ'(1−κ)/(d−1) + (1−δ')/d`.
    pub fn trace_condition_residual(&self) -> f64 {
        let d = self.dim as f64;
        let mut worst = 0.0f64;
        for (b, n) in self.indices() {
            let p = &self.effects[b][n];
            worst = worst.max((p.trace() - 1.0).abs());
            for (b2, n2) in self.indices() {
                let q = &self.effects[b2][n2];
                let target = if b != b2 {
                    1.0 / d
                } else if n == n2 {
                    self.kappa
                } else {
                    (1.0 - self.kappa) / (d - 1.0)
                };
                worst = worst.max((p.hs_inner(q) - target).abs());
            }
        }
        worst
    }

    /// Smallest eigenvalue over all effects.
    pub fn min_effect_eigenvalue(&self) -> Result<f64> {
        Ok(min_effect_eigenvalue(self.dim, self.t, &self.f_ops)?.0)
    }

    pub fn to_document(&self) -> MumDocument {
        MumDocument {
            d: self.dim,
            t: self.t,
            kappa: self.kappa,
            effects: self
                .effects
                .iter()
                .map(|row| row.iter().map(|p| p.matrix().clone()).collect())
                .collect(),
        }
    }
}

/// `‖Σ_b Σ_n (P_n^(b))² − (d+1)κ𝕀‖_max`.
pub fn check_sum_squares(mum: &MumSet) -> f64 {
    let d = mum.dim;
    let mut sum = ComplexMatrix::zeros(d, d);
    for row in &mum.effects {
        for p in row {
            sum = &sum + &p.matrix().matmul(p.matrix());
        }
    }
    let target = ComplexMatrix::identity(d).scale_real((d as f64 + 1.0) * mum.kappa);
    sum.max_abs_diff(&target)
}

/// The parameters identifying a Gell-Mann MUM set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MumParameters {
    pub d: usize,
    pub t: f64,
    pub kappa: f64,
}

/// JSON form of a [`MumSet`]: `effects[b][n]` is a row-major matrix of
/// `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct MumDocument {
    pub d: usize,
    pub t: f64,
    pub kappa: f64,
    pub effects: Vec<Vec<ComplexMatrix>>,
}
