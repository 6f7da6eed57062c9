//! Closed-form bounds for k-separable and k-producible states and the
//! resulting detection verdicts.
//!
//! With `S = Σ_b Σ_n I^s(ρ, P_{N,n}^(b))`:
//!
//! * k-separable states satisfy `S ≤ N(dκ−1) + [(N−k+1)² + k − 1](κ − 1/d)`;
//! * k-producible states satisfy `S ≤ (κ − 1/d)·max Σ♯(Γ_i)² + N(dκ−1)`
//!   where the maximum over blocks of size at most `k` is `p·k² + (N−pk)²`,
//!   `p = ⌊N/k⌋`.
//!
//! A violation of the first certifies k-nonseparability; a violation of the
//! second certifies (k+1)-partite entanglement.

use std::fmt;

use serde::Serialize;

use crate::collective::lhs_sum;
use crate::error::{Error, Result};
use crate::linalg::{num_sites_for, DensityMatrix};
use crate::mum::{MumParameters, MumSet};
use crate::skew::SParameter;

/// A left-hand side must exceed the bound by more than this to count as a
/// violation.
pub const VERDICT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CriterionKind {
    KSeparability,
    KProducibility,
}

impl CriterionKind {
    pub fn min_k(self) -> usize {
        match self {
            CriterionKind::KSeparability => 2,
            CriterionKind::KProducibility => 1,
        }
    }

    pub fn bound(self, num_sites: usize, d: usize, kappa: f64, k: usize) -> Result<f64> {
        match self {
            CriterionKind::KSeparability => ksep_bound(num_sites, d, kappa, k),
            CriterionKind::KProducibility => kprod_bound(num_sites, d, kappa, k),
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriterionKind::KSeparability => "ksep",
            CriterionKind::KProducibility => "kprod",
        })
    }
}

fn check_kappa(d: usize, kappa: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidLocalDimension(d));
    }
    if !(kappa > 1.0 / d as f64 && kappa <= 1.0) {
        return Err(Error::KappaOutOfRange { kappa, d });
    }
    Ok(())
}

fn check_k(k: usize, min: usize, max: usize) -> Result<()> {
    if k < min || k > max {
        return Err(Error::KOutOfRange { k, min, max });
    }
    Ok(())
}

/// Bound satisfied by every k-separable state, `2 ≤ k ≤ N`.
pub fn ksep_bound(num_sites: usize, d: usize, kappa: f64, k: usize) -> Result<f64> {
    check_kappa(d, kappa)?;
    check_k(k, 2, num_sites)?;
    let (n, kf, df) = (num_sites as f64, k as f64, d as f64);
    let largest = n - kf + 1.0;
    Ok(n * (df * kappa - 1.0) + (largest * largest + kf - 1.0) * (kappa - 1.0 / df))
}

/// Bound satisfied by every k-producible state, `1 ≤ k ≤ N`.
pub fn kprod_bound(num_sites: usize, d: usize, kappa: f64, k: usize) -> Result<f64> {
    check_kappa(d, kappa)?;
    check_k(k, 1, num_sites)?;
    let (n, kf, df) = (num_sites as f64, k as f64, d as f64);
    let p = (num_sites / k) as f64;
    let squares = if num_sites.is_multiple_of(k) {
        n * kf
    } else {
        n * n + p * p * kf * kf + p * kf * kf - 2.0 * p * kf * n
    };
    Ok(squares * (kappa - 1.0 / df) + n * (df * kappa - 1.0))
}

/// Outcome of comparing a left-hand side against a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `lhs > bound + VERDICT_TOL`.
    Violated,
    /// `lhs` at or below the bound, up to floating-point rounding.
    Satisfied,
    /// `lhs` above the bound but within `VERDICT_TOL`.
    InconclusiveAtTolerance,
}

impl Verdict {
    pub fn classify(lhs: f64, bound: f64) -> Self {
        let rounding = 64.0 * f64::EPSILON * bound.abs().max(1.0);
        if lhs > bound + VERDICT_TOL {
            Verdict::Violated
        } else if lhs > bound + rounding {
            Verdict::InconclusiveAtTolerance
        } else {
            Verdict::Satisfied
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Violated => "violated",
            Verdict::Satisfied => "satisfied",
            Verdict::InconclusiveAtTolerance => "inconclusive-at-tolerance",
        })
    }
}

/// A single criterion evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub criterion_kind: CriterionKind,
    #[serde(rename = "N")]
    pub num_sites: usize,
    pub d: usize,
    pub kappa: f64,
    pub t: f64,
    pub s: SParameter,
    pub k: usize,
    pub lhs: f64,
    pub bound: f64,
    pub violated: bool,
    pub verdict: Verdict,
    pub margin: f64,
    /// What a violation certifies, or `None` when not violated.
    pub conclusion: Option<String>,
}

impl CriterionReport {
    /// Builds the report from an already computed left-hand side.
    pub fn from_lhs(
        lhs: f64,
        num_sites: usize,
        mum: &MumParameters,
        s: SParameter,
        k: usize,
        kind: CriterionKind,
    ) -> Result<Self> {
        let bound = kind.bound(num_sites, mum.d, mum.kappa, k)?;
        let verdict = Verdict::classify(lhs, bound);
        let violated = verdict == Verdict::Violated;
        let conclusion = violated.then(|| match kind {
            CriterionKind::KSeparability => format!("state is {k}-nonseparable"),
            CriterionKind::KProducibility => format!("state contains {}-partite entanglement", k + 1),
        });
        Ok(Self {
            criterion_kind: kind,
            num_sites,
            d: mum.d,
            kappa: mum.kappa,
            t: mum.t,
            s,
            k,
            lhs,
            bound,
            violated,
            verdict,
            margin: lhs - bound,
            conclusion,
        })
    }
}

/// Evaluates one criterion on a dense state.
pub fn evaluate_criterion(
    rho: &DensityMatrix,
    mum: &MumSet,
    s: SParameter,
    k: usize,
    kind: CriterionKind,
) -> Result<CriterionReport> {
    let num_sites = num_sites_for(rho.dim(), mum.dim())?;
    kind.bound(num_sites, mum.dim(), mum.kappa(), k)?;
    let lhs = lhs_sum(rho, mum, s, num_sites)?;
    CriterionReport::from_lhs(lhs, num_sites, &mum.parameters(), s, k, kind)
}

/// One row of a depth certificate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DepthStep {
    pub k: usize,
    pub bound: f64,
    pub violated: bool,
}

/// Smallest `k` whose producibility bound holds, with the bounds checked on
/// the way. Every `k' < depth` is violated, so the state holds at least
/// `depth`-partite entanglement.
#[derive(Clone, Debug, Serialize)]
pub struct DepthCertificate {
    pub depth: usize,
    pub lhs: f64,
    pub steps: Vec<DepthStep>,
}

/// Depth certificate from a known left-hand side.
pub fn depth_from_lhs(lhs: f64, num_sites: usize, d: usize, kappa: f64) -> Result<DepthCertificate> {
    let mut steps = Vec::new();
    for k in 1..=num_sites {
        let bound = kprod_bound(num_sites, d, kappa, k)?;
        let violated = Verdict::classify(lhs, bound) == Verdict::Violated;
        steps.push(DepthStep { k, bound, violated });
        if !violated {
            return Ok(DepthCertificate { depth: k, lhs, steps });
        }
    }
    // kprod_bound(N) is the largest attainable value; reaching here means the
    // left-hand side exceeded every bound.
    Err(Error::BoundViolated { lhs, bound: steps.last().map_or(f64::NAN, |s| s.bound) })
}

pub fn depth_certificate(rho: &DensityMatrix, mum: &MumSet, s: SParameter) -> Result<DepthCertificate> {
    let num_sites = num_sites_for(rho.dim(), mum.dim())?;
    let lhs = lhs_sum(rho, mum, s, num_sites)?;
    depth_from_lhs(lhs, num_sites, mum.dim(), mum.kappa())
}

/// Smallest `k` such that the k-producibility bound is not violated.
pub fn certified_depth(rho: &DensityMatrix, mum: &MumSet, s: SParameter) -> Result<usize> {
    Ok(depth_certificate(rho, mum, s)?.depth)
}
