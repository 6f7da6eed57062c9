//! Generalized Wigner–Yanase skew information.
//!
//! For `s ≤ 0` the power mean `f_s(a, b) = ((a^s + b^s)/2)^(1/s)` (with the
//! limits `f_0 = √(ab)` and `f_−∞ = min`) defines
//!
//! ```text
//! I^s(ρ, A) = Σ_{l≠l'} [λ_l − f_s(λ_l, λ_l')] |<ψ_l|A|ψ_l'>|²
//! ```
//!
//! over the spectral decomposition `ρ = Σ λ_l |ψ_l><ψ_l|`. `s = 0` is the
//! Wigner–Yanase skew information and `s = −1` is the quantum Fisher
//! information in the convention `F = tr(ρL²)/4`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, HermitianOperator, SpectralDecomposition};

/// Eigenvalues at or below this are treated as exactly zero.
pub const ZERO_CUTOFF: f64 = 1e-12;

/// Order parameter of the power mean: a finite `s ≤ 0` or `−∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SParameter(f64);

impl SParameter {
    pub const WIGNER_YANASE: SParameter = SParameter(0.0);
    pub const FISHER: SParameter = SParameter(-1.0);
    pub const NEG_INFINITY: SParameter = SParameter(f64::NEG_INFINITY);

    pub fn finite(value: f64) -> Result<Self> {
        if !value.is_finite() || value > 0.0 {
            return Err(Error::InvalidSParameter(value.to_string()));
        }
        // Normalize -0.0.
        Ok(SParameter(if value == 0.0 { 0.0 } else { value }))
    }

    pub fn is_neg_infinity(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The numeric value, `-inf` for the min-mean limit.
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for SParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg_infinity() {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for SParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" | "-infinity" => Ok(Self::NEG_INFINITY),
            other => {
                let v: f64 = other.parse().map_err(|_| Error::InvalidSParameter(other.to_owned()))?;
                Self::finite(v)
            }
        }
    }
}

impl Serialize for SParameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `f_s(a, b)` for nonnegative `a`, `b`.
pub fn generalized_mean(s: SParameter, a: f64, b: f64) -> Result<f64> {
    if a < 0.0 || a.is_nan() {
        return Err(Error::NegativeInput(a));
    }
    if b < 0.0 || b.is_nan() {
        return Err(Error::NegativeInput(b));
    }
    Ok(mean(s, a, b))
}

/// Unchecked `f_s`. Written as `m · ((1 + (M/m)^s)/2)^(1/s)` with `m = min`,
/// `M = max`, evaluated through `ln_1p`/`exp_m1` so that no power of a small
/// eigenvalue is ever formed and `f_s(a, a) = a` exactly.
#[inline]
pub(crate) fn mean(s: SParameter, a: f64, b: f64) -> f64 {
    if a <= ZERO_CUTOFF || b <= ZERO_CUTOFF {
        return 0.0;
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if s.is_neg_infinity() {
        lo
    } else if s.0 == 0.0 {
        (a * b).sqrt()
    } else if lo == hi {
        lo
    } else {
        let q_minus_one = (s.0 * (hi / lo).ln()).exp_m1();
        lo * ((0.5 * q_minus_one).ln_1p() / s.0).exp()
    }
}

/// `V(ρ, A) = tr(ρA²) − tr(ρA)²`.
pub fn variance(rho: &DensityMatrix, a: &HermitianOperator) -> Result<f64> {
    let mean = rho.expectation(a)?;
    let a2 = a.matrix().matmul(a.matrix());
    let second = rho.as_operator().hs_inner(&HermitianOperator::from_matrix_unchecked(a2));
    Ok(second - mean * mean)
}

/// Pair weights `λ_l − f_s(λ_l, λ_l')` for one spectrum, reusable across
/// observables.
#[derive(Clone, Debug)]
pub struct SkewWeights {
    dim: usize,
    weights: Vec<f64>,
}

impl SkewWeights {
    pub fn new(spectrum: &SpectralDecomposition, s: SParameter) -> Self {
        let lambdas: Vec<f64> = spectrum
            .eigenvalues
            .iter()
            .map(|&l| if l <= ZERO_CUTOFF { 0.0 } else { l })
            .collect();
        let dim = lambdas.len();
        let mut weights = vec![0.0; dim * dim];
        for (l, &a) in lambdas.iter().enumerate() {
            for (m, &b) in lambdas.iter().enumerate() {
                if l != m {
                    weights[l * dim + m] = a - mean(s, a, b);
                }
            }
        }
        Self { dim, weights }
    }

    /// `Σ_{l≠l'} w_ll' |M_ll'|²` for `M` already expressed in the eigenbasis.
    /// Summed row by row in index order.
    pub fn contract(&self, in_eigenbasis: &ComplexMatrix) -> f64 {
        assert_eq!(in_eigenbasis.rows(), self.dim);
        let mut total = 0.0;
        for l in 0..self.dim {
            let row = in_eigenbasis.row(l);
            let w = &self.weights[l * self.dim..(l + 1) * self.dim];
            total += row.iter().zip(w).map(|(z, w)| w * z.norm_sqr()).sum::<f64>();
        }
        total
    }
}

/// `I^s` from a precomputed spectral decomposition.
pub fn skew_information_from_spectrum(
    spectrum: &SpectralDecomposition,
    a: &HermitianOperator,
    s: SParameter,
) -> Result<f64> {
    if a.dim() != spectrum.dim() {
        return Err(Error::DimensionMismatch { expected: spectrum.dim(), found: a.dim() });
    }
    Ok(SkewWeights::new(spectrum, s).contract(&spectrum.transform(a.matrix())))
}

/// `I^s(ρ, A)`.
pub fn skew_information(rho: &DensityMatrix, a: &HermitianOperator, s: SParameter) -> Result<f64> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: a.dim() });
    }
    skew_information_from_spectrum(&rho.spectral()?, a, s)
}

/// Spectrum of `p|ψ><ψ| + (1−p)𝕀/D`: one eigenvalue `λ_top` on `ψ` and a
/// `(D−1)`-fold `λ_rest`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsotropicSpectrum {
    pub lambda_top: f64,
    pub lambda_rest: f64,
    pub multiplicity: usize,
}

impl IsotropicSpectrum {
    pub fn from_noise(p: f64, total_dim: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let rest = (1.0 - p) / total_dim as f64;
        Ok(Self { lambda_top: p + rest, lambda_rest: rest, multiplicity: total_dim - 1 })
    }
}

/// An isotropic spectrum paired with the variance of one observable in the
/// top eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsotropicFamilySpectrum {
    pub lambda_top: f64,
    pub lambda_rest: f64,
    pub multiplicity: usize,
    pub pure_variance: f64,
}

impl IsotropicFamilySpectrum {
    pub fn new(spectrum: IsotropicSpectrum, pure_variance: f64) -> Self {
        Self {
            lambda_top: spectrum.lambda_top,
            lambda_rest: spectrum.lambda_rest,
            multiplicity: spectrum.multiplicity,
            pure_variance,
        }
    }
}

/// `I^s` on a rank-one-plus-isotropic state.
///
/// Only the top/rest pairs contribute: their `|A_ll'|²` sum to the pure-state
/// variance in either direction, and all rest/rest pairs are degenerate.
pub fn isotropic_closed_form(spec: &IsotropicFamilySpectrum, s: SParameter) -> f64 {
    let (top, rest) = (spec.lambda_top, spec.lambda_rest);
    let top_c = if top <= ZERO_CUTOFF { 0.0 } else { top };
    let rest_c = if rest <= ZERO_CUTOFF { 0.0 } else { rest };
    (top_c + rest_c - 2.0 * mean(s, top_c, rest_c)) * spec.pure_variance
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn s(v: f64) -> SParameter {
        SParameter::finite(v).unwrap()
    }

    #[test]
    fn mean_special_cases() {
        assert!((generalized_mean(SParameter::WIGNER_YANASE, 4.0, 9.0).unwrap() - 6.0).abs() < 1e-15);
        assert_eq!(generalized_mean(SParameter::NEG_INFINITY, 2.0, 3.0).unwrap(), 2.0);
        for sp in [s(0.0), s(-0.5), s(-1.0), s(-80.0), SParameter::NEG_INFINITY] {
            assert_eq!(generalized_mean(sp, 0.3, 0.0).unwrap(), 0.0);
            assert_eq!(generalized_mean(sp, 0.0, 0.3).unwrap(), 0.0);
            assert_eq!(generalized_mean(sp, 0.37, 0.37).unwrap(), 0.37);
            let ab = generalized_mean(sp, 0.2, 0.7).unwrap();
            let ba = generalized_mean(sp, 0.7, 0.2).unwrap();
            assert_eq!(ab, ba);
        }
        assert!(generalized_mean(s(-1.0), -0.1, 0.2).is_err());
    }

    #[test]
    fn mean_matches_direct_power_formula() {
        for &(a, b) in &[(0.2f64, 0.7f64), (0.01, 0.9), (0.5, 0.5000001)] {
            for sv in [-0.3, -1.0, -2.0, -7.5] {
                let direct: f64 = ((a.powf(sv) + b.powf(sv)) / 2.0).powf(1.0 / sv);
                let ours = generalized_mean(s(sv), a, b).unwrap();
                assert!((direct - ours).abs() < 1e-14, "s={sv} a={a} b={b}");
            }
            // Harmonic mean at s = -1.
            let h = 2.0 * a * b / (a + b);
            assert!((generalized_mean(s(-1.0), a, b).unwrap() - h).abs() < 1e-15);
        }
    }

    #[test]
    fn mean_limits() {
        let (a, b) = (0.13, 0.61);
        let near_zero = generalized_mean(s(-1e-9), a, b).unwrap();
        assert!((near_zero - (a * b).sqrt()).abs() < 1e-9);
        let very_negative = generalized_mean(s(-1e4), a, b).unwrap();
        assert!((very_negative - a).abs() < 1e-3 * a);
        // No overflow on tiny inputs with very negative s.
        let tiny = generalized_mean(s(-500.0), 1e-10, 3e-10).unwrap();
        assert!((1e-10..3e-10).contains(&tiny));
    }

    #[test]
    fn s_parameter_parsing() {
        assert_eq!("-inf".parse::<SParameter>().unwrap(), SParameter::NEG_INFINITY);
        assert_eq!("0".parse::<SParameter>().unwrap(), SParameter::WIGNER_YANASE);
        assert_eq!("-1".parse::<SParameter>().unwrap(), SParameter::FISHER);
        assert_eq!("-0.5".parse::<SParameter>().unwrap().value(), -0.5);
        assert!("0.5".parse::<SParameter>().is_err());
        assert!("abc".parse::<SParameter>().is_err());
        assert!("nan".parse::<SParameter>().is_err());
        assert_eq!(SParameter::NEG_INFINITY.to_string(), "-inf");
        assert_eq!(serde_json::to_string(&SParameter::FISHER).unwrap(), "\"-1\"");
    }

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]))
            .unwrap()
    }

    #[test]
    fn variance_examples() {
        let zero = DensityMatrix::from_pure(&[c(1., 0.), c(0., 0.)]).unwrap();
        let z = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        assert!(variance(&zero, &z).unwrap().abs() < 1e-15);
        assert!((variance(&zero, &pauli_x()).unwrap() - 1.0).abs() < 1e-15);
        let a = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 4.0]);
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let expected = (1.0 + 4.0 + 16.0) / 3.0 - (7.0f64 / 3.0).powi(2);
        assert!((variance(&mixed, &a).unwrap() - expected).abs() < 1e-14);
        assert!(variance(&mixed, &pauli_x()).is_err());
    }

    #[test]
    fn maximally_mixed_has_no_skew() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        for sp in [s(0.0), s(-1.0), SParameter::NEG_INFINITY] {
            assert!(skew_information(&rho, &pauli_x(), sp).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn pure_state_skew_is_variance() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus_i = DensityMatrix::from_pure(&[c(r, 0.), c(0., r)]).unwrap();
        let v = variance(&plus_i, &pauli_x()).unwrap();
        for sp in [s(0.0), s(-1.0), s(-3.0), SParameter::NEG_INFINITY] {
            let i = skew_information(&plus_i, &pauli_x(), sp).unwrap();
            assert!((i - v).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_closed_form_checks() {
        // ρ = diag(a, 1−a), A = σ_x: |A_01|² = 1, so
        // I^s = (a − f) + (1 − a − f) = 1 − 2 f_s(a, 1−a).
        let a = 0.8;
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[a, 1.0 - a])).unwrap();
        let wy = skew_information(&rho, &pauli_x(), s(0.0)).unwrap();
        assert!((wy - (1.0 - 2.0 * (a * (1.0 - a)).sqrt())).abs() < 1e-14);
        let min = skew_information(&rho, &pauli_x(), SParameter::NEG_INFINITY).unwrap();
        assert!((min - (1.0 - 2.0 * (1.0 - a))).abs() < 1e-14);
    }

    #[test]
    fn isotropic_specializations() {
        let spec = IsotropicFamilySpectrum::new(IsotropicSpectrum::from_noise(0.6, 8).unwrap(), 2.5);
        let (t, r, v) = (spec.lambda_top, spec.lambda_rest, spec.pure_variance);
        let inf = isotropic_closed_form(&spec, SParameter::NEG_INFINITY);
        assert!((inf - (t - r) * v).abs() < 1e-14);
        assert!((inf - 0.6 * v).abs() < 1e-14);
        let wy = isotropic_closed_form(&spec, s(0.0));
        assert!((wy - (t.sqrt() - r.sqrt()).powi(2) * v).abs() < 1e-14);
        let qfi = isotropic_closed_form(&spec, s(-1.0));
        assert!((qfi - (t - r).powi(2) / (t + r) * v).abs() < 1e-14);
        let mixed = IsotropicFamilySpectrum::new(IsotropicSpectrum::from_noise(0.0, 8).unwrap(), 2.5);
        assert_eq!(isotropic_closed_form(&mixed, s(-0.5)), 0.0);
        let pure = IsotropicFamilySpectrum::new(IsotropicSpectrum::from_noise(1.0, 8).unwrap(), 2.5);
        assert_eq!(isotropic_closed_form(&pure, s(0.0)), 2.5);
        assert!(IsotropicSpectrum::from_noise(1.5, 8).is_err());
    }
}
