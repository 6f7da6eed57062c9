//! Noise thresholds: the smallest `p` at which `ρ(p) = p|ψ><ψ| + (1−p)𝕀/D`
//! starts violating a criterion.

use serde::Serialize;

use crate::collective::IsotropicLhs;
use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::mum::MumSet;
use crate::skew::SParameter;
use crate::states::StateFamily;

/// Points on `[0, 1]` used for the monotonicity check.
pub const MONOTONE_GRID: usize = 64;

/// Bisection cap.
pub const MAX_ITERATIONS: usize = 200;

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThresholdStatus {
    /// Violated for every `p` in `(p_star, 1]`.
    Solved { p_star: f64 },
    /// Not violated even by the pure state.
    NotDetectable,
    /// Violated already by the maximally mixed state. Indicates a bug.
    AlwaysViolated,
}

impl ThresholdStatus {
    pub fn p_star(&self) -> Option<f64> {
        match *self {
            ThresholdStatus::Solved { p_star } => Some(p_star),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdResult {
    pub family: String,
    pub s: SParameter,
    pub criterion_kind: CriterionKind,
    pub k: usize,
    pub kappa: f64,
    pub bound: f64,
    pub status: ThresholdStatus,
    pub iterations: usize,
    /// `|lhs(p_star) − bound|` when solved, zero otherwise.
    pub residual: f64,
}

/// Threshold solver for one family and MUM set. The pure-state variances are
/// computed once and shared by every `(s, kind, k)` query.
#[derive(Clone, Debug)]
pub struct ThresholdSolver {
    family: String,
    kappa: f64,
    d: usize,
    lhs: IsotropicLhs,
}

impl ThresholdSolver {
    pub fn new(family: &StateFamily, mum: &MumSet) -> Result<Self> {
        Ok(Self {
            family: family.description().to_owned(),
            kappa: mum.kappa(),
            d: mum.dim(),
            lhs: IsotropicLhs::new(family, mum)?,
        })
    }

    pub fn lhs(&self) -> &IsotropicLhs {
        &self.lhs
    }

    pub fn solve(&self, s: SParameter, kind: CriterionKind, k: usize, tol: f64) -> Result<ThresholdResult> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidTolerance(tol));
        }
        let bound = kind.bound(self.lhs.num_sites(), self.d, self.kappa, k)?;
        let g = |p: f64| -> Result<f64> { Ok(self.lhs.evaluate(p, s)? - bound) };

        let grid: Vec<(f64, f64)> = (0..MONOTONE_GRID)
            .map(|i| {
                let p = i as f64 / (MONOTONE_GRID - 1) as f64;
                g(p).map(|v| (p, v))
            })
            .collect::<Result<_>>()?;
        let slack = 1e-12 * bound.abs().max(1.0);
        if grid.windows(2).any(|w| w[1].1 < w[0].1 - slack) {
            return Err(Error::NotMonotone { grid });
        }

        let mut result = ThresholdResult {
            family: self.family.clone(),
            s,
            criterion_kind: kind,
            k,
            kappa: self.kappa,
            bound,
            status: ThresholdStatus::NotDetectable,
            iterations: 0,
            residual: 0.0,
        };
        if grid[MONOTONE_GRID - 1].1 <= 0.0 {
            return Ok(result);
        }
        if grid[0].1 > 0.0 {
            result.status = ThresholdStatus::AlwaysViolated;
            return Ok(result);
        }

        let target = tol * bound.abs();
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut mid = 0.5;
        let mut value = g(mid)?;
        let mut iterations = 1;
        while value.abs() > target && iterations < MAX_ITERATIONS && hi - lo > f64::EPSILON {
            if value > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            mid = 0.5 * (lo + hi);
            value = g(mid)?;
            iterations += 1;
        }
        result.status = ThresholdStatus::Solved { p_star: mid };
        result.iterations = iterations;
        result.residual = value.abs();
        Ok(result)
    }
}

/// Solves for the noise threshold of one criterion on an isotropic family.
pub fn threshold_solve(
    family: &StateFamily,
    mum: &MumSet,
    s: SParameter,
    kind: CriterionKind,
    k: usize,
    tol: f64,
) -> Result<ThresholdResult> {
    ThresholdSolver::new(family, mum)?.solve(s, kind, k, tol)
}
