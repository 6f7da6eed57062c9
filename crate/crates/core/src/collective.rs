//! Collective MUM observables `P_Γ = Σ_{i∈Γ} 𝕀 ⊗ … ⊗ P_n^(b) ⊗ … ⊗ 𝕀` and
//! the criterion left-hand side `Σ_b Σ_n I^s(ρ, P_{N,n}^(b))`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    checked_pow, embed_at_site, kron, num_sites_for, validate_subset, ComplexMatrix, DensityMatrix,
    HermitianOperator, C64,
};
use crate::mum::MumSet;
use crate::skew::{isotropic_closed_form, variance, IsotropicFamilySpectrum, SParameter, SkewWeights};
use crate::states::{spectrum_of, PureState, StateFamily};

/// Slack for the numerical checks of the operator and subset bounds.
pub const BOUND_SLACK: f64 = 1e-9;

/// One local effect summed over a subset of sites.
#[derive(Clone, Debug)]
pub struct CollectiveObservable {
    num_sites: usize,
    local_dim: usize,
    site_subset: Vec<usize>,
    b: usize,
    n: usize,
    local_effect: HermitianOperator,
}

impl CollectiveObservable {
    pub fn new(mum: &MumSet, site_subset: &[usize], b: usize, n: usize, num_sites: usize) -> Result<Self> {
        validate_subset(site_subset, num_sites)?;
        checked_pow(mum.dim(), num_sites)?;
        Ok(Self {
            num_sites,
            local_dim: mum.dim(),
            site_subset: site_subset.to_vec(),
            b,
            n,
            local_effect: mum.effect(b, n)?.clone(),
        })
    }

    pub fn mum_indices(&self) -> (usize, usize) {
        (self.b, self.n)
    }

    pub fn site_subset(&self) -> &[usize] {
        &self.site_subset
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.num_sites as u32)
    }

    /// Dense `Σ_{i∈Γ} embed(P, i)`.
    pub fn materialize(&self) -> Result<HermitianOperator> {
        let dim = self.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for &site in &self.site_subset {
            let e = embed_at_site(&self.local_effect, site, self.num_sites, self.local_dim)?;
            acc = &acc + e.matrix();
        }
        HermitianOperator::new(acc)
    }

    /// Applies the observable to a state vector without materializing it.
    pub fn apply(&self, psi: &[C64]) -> Result<Vec<C64>> {
        let dim = self.dim();
        if psi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: psi.len() });
        }
        let d = self.local_dim;
        let p = self.local_effect.matrix();
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for &site in &self.site_subset {
            let right = d.pow((self.num_sites - site - 1) as u32);
            let block = d * right;
            for base in (0..dim).step_by(block) {
                for r in 0..right {
                    for a in 0..d {
                        let mut acc = C64::new(0.0, 0.0);
                        for bb in 0..d {
                            acc += p[(a, bb)] * psi[base + bb * right + r];
                        }
                        out[base + a * right + r] += acc;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `P_{Γ,n}^(b)` as a dense operator on `num_sites` subsystems.
pub fn collective_operator(
    mum: &MumSet,
    gamma: &[usize],
    b: usize,
    n: usize,
    num_sites: usize,
) -> Result<HermitianOperator> {
    CollectiveObservable::new(mum, gamma, b, n, num_sites)?.materialize()
}

fn all_sites(num_sites: usize) -> Vec<usize> {
    (0..num_sites).collect()
}

fn check_state_dim(dim: usize, mum: &MumSet, num_sites: usize) -> Result<()> {
    let expected = checked_pow(mum.dim(), num_sites)?;
    if dim != expected {
        return Err(Error::DimensionMismatch { expected, found: dim });
    }
    Ok(())
}

/// Per-`(b, n)` skew information values in lexicographic order.
pub fn skew_terms(rho: &DensityMatrix, mum: &MumSet, s: SParameter, num_sites: usize) -> Result<Vec<f64>> {
    check_state_dim(rho.dim(), mum, num_sites)?;
    let spectrum = rho.spectral()?;
    let weights = SkewWeights::new(&spectrum, s);
    let sites = all_sites(num_sites);
    let indices: Vec<(usize, usize)> = mum.indices().collect();
    indices
        .par_iter()
        .map(|&(b, n)| {
            let obs = CollectiveObservable::new(mum, &sites, b, n, num_sites)?;
            // A·V column by column through the structured apply, then V†(AV).
            let v = &spectrum.eigenvectors;
            let dim = v.rows();
            let mut av = ComplexMatrix::zeros(dim, dim);
            for col in 0..dim {
                let column: Vec<C64> = (0..dim).map(|i| v[(i, col)]).collect();
                for (i, z) in obs.apply(&column)?.into_iter().enumerate() {
                    av[(i, col)] = z;
                }
            }
            Ok(weights.contract(&v.adjoint().matmul(&av)))
        })
        .collect()
}

/// `Σ_b Σ_n I^s(ρ, P_{N,n}^(b))` with one spectral decomposition of `ρ`.
/// Terms are summed in lexicographic `(b, n)` order.
pub fn lhs_sum(rho: &DensityMatrix, mum: &MumSet, s: SParameter, num_sites: usize) -> Result<f64> {
    Ok(skew_terms(rho, mum, s, num_sites)?.iter().sum())
}

/// `Σ_b Σ_n V(ρ, P_{N,n}^(b))`, an upper bound on [`lhs_sum`] for every `s`.
pub fn variance_sum(rho: &DensityMatrix, mum: &MumSet, num_sites: usize) -> Result<f64> {
    check_state_dim(rho.dim(), mum, num_sites)?;
    let sites = all_sites(num_sites);
    let mut total = 0.0;
    for (b, n) in mum.indices() {
        total += variance(rho, &collective_operator(mum, &sites, b, n, num_sites)?)?;
    }
    Ok(total)
}

/// Variances `V(ψ, P_{N,n}^(b))` of a pure state, lexicographic in `(b, n)`.
pub fn pure_variances(psi: &PureState, mum: &MumSet) -> Result<Vec<f64>> {
    let num_sites = num_sites_for(psi.dim(), mum.dim())?;
    let sites = all_sites(num_sites);
    let amps = psi.amplitudes();
    mum.indices()
        .map(|(b, n)| {
            let obs = CollectiveObservable::new(mum, &sites, b, n, num_sites)?;
            let a_psi = obs.apply(amps)?;
            let mean: f64 = amps.iter().zip(&a_psi).map(|(x, y)| (x.conj() * y).re).sum();
            let second: f64 = a_psi.iter().map(|z| z.norm_sqr()).sum();
            Ok(second - mean * mean)
        })
        .collect()
}

/// Criterion left-hand side on `ρ(p) = p|ψ><ψ| + (1−p)𝕀/D`, evaluated
/// through the isotropic closed form. The pure-state variances are computed
/// once, so evaluating many `p` is cheap.
#[derive(Clone, Debug)]
pub struct IsotropicLhs {
    total_dim: usize,
    num_sites: usize,
    variances: Vec<f64>,
}

impl IsotropicLhs {
    pub fn new(family: &StateFamily, mum: &MumSet) -> Result<Self> {
        let num_sites = num_sites_for(family.total_dim(), mum.dim())?;
        Ok(Self { total_dim: family.total_dim(), num_sites, variances: pure_variances(family.base(), mum)? })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// `Σ_b Σ_n V(ψ, P_{N,n}^(b))`, the value at `p = 1`.
    pub fn variance_sum(&self) -> f64 {
        self.variances.iter().sum()
    }

    pub fn evaluate(&self, p: f64, s: SParameter) -> Result<f64> {
        let spectrum = crate::skew::IsotropicSpectrum::from_noise(p, self.total_dim)?;
        Ok(self
            .variances
            .iter()
            .map(|&v| isotropic_closed_form(&IsotropicFamilySpectrum::new(spectrum, v), s))
            .sum())
    }
}

/// [`lhs_sum`] on an isotropic family via the closed form.
pub fn lhs_sum_isotropic(family: &StateFamily, p: f64, mum: &MumSet, s: SParameter) -> Result<f64> {
    spectrum_of(family, p)?;
    IsotropicLhs::new(family, mum)?.evaluate(p, s)
}

/// Largest eigenvalue of `Σ_b Σ_n P_n^(b) ⊗ P_n^(b)` and the bound `1 + κ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CrossTermCheck {
    pub max_eigenvalue: f64,
    pub bound: f64,
}

impl CrossTermCheck {
    pub fn holds(&self) -> bool {
        self.max_eigenvalue <= self.bound + 1e-10
    }
}

/// Two-site cross-term operator bound.
pub fn verify_prop31(mum: &MumSet) -> Result<CrossTermCheck> {
    let d = mum.dim();
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for (b, n) in mum.indices() {
        let p = mum.effect(b, n)?.matrix();
        acc = &acc + &kron(p, p);
    }
    let op = HermitianOperator::new_symmetrized(acc)?;
    Ok(CrossTermCheck { max_eigenvalue: op.max_eigenvalue()?, bound: 1.0 + mum.kappa() })
}

/// `♯Γ²(κ − 1/d) + ♯Γ(dκ − 1)`.
pub fn subset_bound(gamma_size: usize, d: usize, kappa: f64) -> f64 {
    let g = gamma_size as f64;
    let df = d as f64;
    g * g * (kappa - 1.0 / df) + g * (df * kappa - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubsetCheck {
    pub lhs: f64,
    pub bound: f64,
}

/// Subset bound on a reduced state `ρ_Γ` of `gamma_size` sites. Returns
/// [`Error::BoundViolated`] if `lhs > bound + 1e-9`.
pub fn verify_prop32(
    rho_gamma: &DensityMatrix,
    mum: &MumSet,
    gamma_size: usize,
    s: SParameter,
) -> Result<SubsetCheck> {
    let lhs = lhs_sum(rho_gamma, mum, s, gamma_size)?;
    let bound = subset_bound(gamma_size, mum.dim(), mum.kappa());
    if lhs > bound + BOUND_SLACK {
        return Err(Error::BoundViolated { lhs, bound });
    }
    Ok(SubsetCheck { lhs, bound })
}
