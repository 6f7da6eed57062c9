//! Random states and observables for property checks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, checked_pow, ComplexMatrix, DensityMatrix, HermitianOperator, C64};
use crate::error::Result;
use crate::states::PureState;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    PureState::normalized(v).expect("nonzero gaussian vector")
}

/// `G G† / tr(G G†)` for a `dim × rank` Ginibre matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, rank.max(1), |_, _| gaussian(rng));
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    let sym = (&w + &w.adjoint()).scale_real(0.5 / tr);
    DensityMatrix::from_operator_unchecked(HermitianOperator::from_matrix_unchecked(sym))
}

/// GUE-like Hermitian matrix with unit-variance entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    HermitianOperator::from_matrix_unchecked((&g + &g.adjoint()).scale_real(0.5))
}

/// Haar-random unitary by Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random partition of `0..num_sites` into exactly `k` nonempty blocks.
pub fn random_partition<R: Rng + ?Sized>(num_sites: usize, k: usize, rng: &mut R) -> Vec<Vec<usize>> {
    assert!(1 <= k && k <= num_sites);
    let mut sites: Vec<usize> = (0..num_sites).collect();
    for i in (1..num_sites).rev() {
        sites.swap(i, rng.random_range(0..=i));
    }
    let mut blocks: Vec<Vec<usize>> = sites[..k].iter().map(|&s| vec![s]).collect();
    for &s in &sites[k..] {
        let b = rng.random_range(0..k);
        blocks[b].push(s);
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks
}

/// Product of independent random pure states, one per block of `partition`,
/// laid out on their sites.
pub fn random_partition_product<R: Rng + ?Sized>(
    partition: &[Vec<usize>],
    num_sites: usize,
    local_dim: usize,
    rng: &mut R,
) -> Result<PureState> {
    let dim = checked_pow(local_dim, num_sites)?;
    let factors: Vec<PureState> = partition
        .iter()
        .map(|block| Ok(random_pure_state(checked_pow(local_dim, block.len())?, rng)))
        .collect::<Result<_>>()?;
    let amplitudes = (0..dim)
        .map(|index| {
            let digit = |site: usize| (index / local_dim.pow((num_sites - site - 1) as u32)) % local_dim;
            partition
                .iter()
                .zip(&factors)
                .map(|(block, f)| {
                    let local = block.iter().fold(0, |acc, &s| acc * local_dim + digit(s));
                    f.amplitudes()[local]
                })
                .product()
        })
        .collect();
    PureState::normalized(amplitudes)
}

/// Mixture of `terms` pure states, each a product across its own random
/// partition into exactly `k` blocks.
pub fn random_k_separable<R: Rng + ?Sized>(
    num_sites: usize,
    k: usize,
    local_dim: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let states = (0..terms)
        .map(|_| random_partition_product(&random_partition(num_sites, k, rng), num_sites, local_dim, rng)?.density())
        .collect::<Result<Vec<_>>>()?;
    let parts: Vec<(f64, &DensityMatrix)> = weights.iter().copied().zip(&states).collect();
    DensityMatrix::mixture(&parts)
}
