use kpartite_core::collective::{lhs_sum, lhs_sum_isotropic, variance_sum};
use kpartite_core::criteria::{kprod_bound, ksep_bound, CriterionKind};
use kpartite_core::linalg::{
    embed_at_site, hermitian_eigendecomposition, partial_trace, ComplexMatrix, DensityMatrix, HermitianOperator,
    SpectralDecomposition, C64,
};
use kpartite_core::mum::{kappa_of_t, max_positive_t, mum_from_kappa, MumSet};
use kpartite_core::sampling::{random_density_matrix, random_hermitian, random_pure_state, random_unitary};
use kpartite_core::skew::{skew_information, skew_information_from_spectrum, variance, SParameter};
use kpartite_core::states::{ghz, isotropic_mixture, spectrum_of, w_state, PureState, StateFamily};
use kpartite_core::threshold::{ThresholdSolver, ThresholdStatus};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const S_CHAIN: [f64; 3] = [0.0, -1.0, -2.0];

fn s_values() -> Vec<SParameter> {
    let mut v: Vec<SParameter> = S_CHAIN.iter().map(|&x| SParameter::finite(x).unwrap()).collect();
    v.push(SParameter::NEG_INFINITY);
    v
}

fn mub() -> MumSet {
    mum_from_kappa(2, 1.0).unwrap()
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `Σ_{l,m} 2(λ_l − λ_m)² / (λ_l + λ_m) |A_lm|²` in the eigenbasis of `ρ`.
fn qfi_oracle(rho: &DensityMatrix, a: &HermitianOperator) -> f64 {
    let spec = rho.spectral().unwrap();
    let m = spec.transform(a.matrix());
    let lam = &spec.eigenvalues;
    let mut total = 0.0;
    for l in 0..lam.len() {
        for k in 0..lam.len() {
            let sum = lam[l] + lam[k];
            if sum > 1e-14 {
                total += 2.0 * (lam[l] - lam[k]).powi(2) / sum * m[(l, k)].norm_sqr();
            }
        }
    }
    total
}

/// `tr(ρA²) − tr(√ρ A √ρ A)`.
fn wigner_yanase_oracle(rho: &DensityMatrix, a: &HermitianOperator) -> f64 {
    let spec = rho.spectral().unwrap();
    let roots: Vec<f64> = spec.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let v = &spec.eigenvectors;
    let sqrt_rho = v.matmul(&ComplexMatrix::from_real_diagonal(&roots)).matmul(&v.adjoint());
    let am = a.matrix();
    let first = rho.matrix().matmul(&am.matmul(am)).trace().re;
    let second = sqrt_rho.matmul(am).matmul(&sqrt_rho).matmul(am).trace().re;
    first - second
}

fn permute_sites(psi: &PureState, perm: &[usize]) -> PureState {
    let n = perm.len();
    let amps = psi.amplitudes();
    let mut out = vec![C64::new(0.0, 0.0); amps.len()];
    for (index, &z) in amps.iter().enumerate() {
        let mut target = 0usize;
        for (site, &to) in perm.iter().enumerate() {
            let bit = (index >> (n - 1 - site)) & 1;
            target |= bit << (n - 1 - to);
        }
        out[target] = z;
    }
    PureState::new(out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), dim in 1usize..=64) {
        let h = random_hermitian(dim, &mut rng(seed));
        let spec = hermitian_eigendecomposition(&h, 1e-9).unwrap();
        prop_assert!(spec.reconstruct().max_abs_diff(h.matrix()) <= 1e-9 * h.matrix().max_abs().max(1.0));
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_is_deterministic(seed in any::<u64>(), dim in 2usize..=16) {
        let h = random_hermitian(dim, &mut rng(seed));
        let a = hermitian_eigendecomposition(&h, 1e-9).unwrap();
        let b = hermitian_eigendecomposition(&h, 1e-9).unwrap();
        prop_assert_eq!(a.eigenvalues, b.eigenvalues);
        prop_assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn partial_trace_keeps_trace_and_positivity(
        seed in any::<u64>(),
        num_sites in 2usize..=4,
        rank in 1usize..=4,
        mask in 1u32..15,
    ) {
        let mut r = rng(seed);
        let rho = random_density_matrix(1 << num_sites, rank, &mut r);
        let keep: Vec<usize> = (0..num_sites).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!keep.is_empty());
        let red = partial_trace(&rho, &keep, num_sites, 2).unwrap();
        prop_assert!((red.as_operator().trace() - 1.0).abs() <= 1e-10);
        prop_assert!(red.as_operator().min_eigenvalue().unwrap() >= -1e-10);
    }

    #[test]
    fn embedding_is_additive(seed in any::<u64>(), d in 2usize..=3, num_sites in 1usize..=3, site_pick in 0usize..3) {
        let site = site_pick % num_sites;
        let mut r = rng(seed);
        let a = random_hermitian(d, &mut r);
        let b = random_hermitian(d, &mut r);
        let lhs = embed_at_site(&a.add(&b).unwrap(), site, num_sites, d).unwrap();
        let rhs = embed_at_site(&a, site, num_sites, d).unwrap().add(&embed_at_site(&b, site, num_sites, d).unwrap()).unwrap();
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) <= 1e-12);
    }

    #[test]
    fn skew_information_is_monotone_in_s(seed in any::<u64>(), dim in 2usize..=8, rank in 1usize..=8) {
        let mut r = rng(seed);
        let rho = random_density_matrix(dim, rank, &mut r);
        let a = random_hermitian(dim, &mut r);
        let values: Vec<f64> = s_values().into_iter().map(|s| skew_information(&rho, &a, s).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-9, "{:?}", values);
        }
        prop_assert!(values[0] >= -1e-9);
        prop_assert!(*values.last().unwrap() <= variance(&rho, &a).unwrap() + 1e-9);
    }

    #[test]
    fn fisher_matches_quantum_fisher_information(seed in any::<u64>(), rank in 1usize..=4) {
        let mut r = rng(seed);
        let rho = random_density_matrix(4, rank, &mut r);
        let a = random_hermitian(4, &mut r);
        let skew = skew_information(&rho, &a, SParameter::FISHER).unwrap();
        prop_assert!((skew - qfi_oracle(&rho, &a) / 4.0).abs() <= 1e-9);
    }

    #[test]
    fn wigner_yanase_matches_commutator_form(seed in any::<u64>(), dim in 2usize..=6) {
        let mut r = rng(seed);
        let rho = random_density_matrix(dim, dim, &mut r);
        let a = random_hermitian(dim, &mut r);
        let skew = skew_information(&rho, &a, SParameter::WIGNER_YANASE).unwrap();
        prop_assert!((skew - wigner_yanase_oracle(&rho, &a)).abs() <= 1e-9);
    }

    #[test]
    fn pure_states_saturate_variance(seed in any::<u64>(), dim in 2usize..=8) {
        let mut r = rng(seed);
        let rho = random_pure_state(dim, &mut r).density().unwrap();
        let a = random_hermitian(dim, &mut r);
        let v = variance(&rho, &a).unwrap();
        for s in s_values() {
            prop_assert!((skew_information(&rho, &a, s).unwrap() - v).abs() <= 1e-9);
        }
    }

    // Convexity needs an operator-monotone mean, i.e. s in [-1, 0].
    #[test]
    fn skew_information_is_convex(seed in any::<u64>(), dim in 2usize..=6, lambda in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let r1 = random_density_matrix(dim, r.random_range(1..=dim), &mut r);
        let r2 = random_density_matrix(dim, r.random_range(1..=dim), &mut r);
        let a = random_hermitian(dim, &mut r);
        let mix = DensityMatrix::mixture(&[(lambda, &r1), (1.0 - lambda, &r2)]).unwrap();
        for s in [0.0, -0.5, -1.0].map(|x| SParameter::finite(x).unwrap()) {
            let lhs = skew_information(&mix, &a, s).unwrap();
            let rhs = lambda * skew_information(&r1, &a, s).unwrap()
                + (1.0 - lambda) * skew_information(&r2, &a, s).unwrap();
            prop_assert!(lhs <= rhs + 1e-9, "s={} {} > {}", s, lhs, rhs);
        }
    }

    #[test]
    fn skew_information_is_additive(seed in any::<u64>(), factors in 2usize..=3) {
        let mut r = rng(seed);
        let dims: Vec<usize> = (0..factors).map(|_| r.random_range(2..=3)).collect();
        let states: Vec<DensityMatrix> = dims.iter().map(|&d| random_density_matrix(d, d, &mut r)).collect();
        let ops: Vec<HermitianOperator> = dims.iter().map(|&d| random_hermitian(d, &mut r)).collect();
        let total_dim: usize = dims.iter().product();

        let mut rho = states[0].clone();
        for st in &states[1..] {
            rho = rho.kron(st);
        }
        // Σ_i 𝕀 ⊗ … ⊗ A_i ⊗ … ⊗ 𝕀
        let mut sum = HermitianOperator::from_real_diagonal(&vec![0.0; total_dim]);
        for (i, op) in ops.iter().enumerate() {
            let mut term = HermitianOperator::identity(1);
            for (j, &d) in dims.iter().enumerate() {
                let factor = if i == j { op.clone() } else { HermitianOperator::identity(d) };
                term = term.kron(&factor);
            }
            sum = sum.add(&term).unwrap();
        }
        for s in s_values() {
            let whole = skew_information(&rho, &sum, s).unwrap();
            let parts: f64 = states.iter().zip(&ops).map(|(st, op)| skew_information(st, op, s).unwrap()).sum();
            prop_assert!((whole - parts).abs() <= 1e-9, "s={} {} vs {}", s, whole, parts);
        }
    }

    #[test]
    fn degenerate_block_rotation_is_invisible(seed in any::<u64>(), block in 2usize..=4, rest in 1usize..=3) {
        let mut r = rng(seed);
        let dim = block + rest;
        let mut lambdas = vec![0.6 / block as f64; block];
        lambdas.extend(std::iter::repeat_n(0.4 / rest as f64, rest));
        let u = random_unitary(dim, &mut r);
        let w_block = random_unitary(block, &mut r);
        let w = ComplexMatrix::from_fn(dim, dim, |i, j| {
            if i < block && j < block {
                w_block[(i, j)]
            } else if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let original = SpectralDecomposition { eigenvalues: lambdas.clone(), eigenvectors: u.clone() };
        let rotated = SpectralDecomposition { eigenvalues: lambdas, eigenvectors: u.matmul(&w) };
        prop_assert!(original.reconstruct().max_abs_diff(&rotated.reconstruct()) <= 1e-12);
        let a = random_hermitian(dim, &mut r);
        for s in s_values() {
            let x = skew_information_from_spectrum(&original, &a, s).unwrap();
            let y = skew_information_from_spectrum(&rotated, &a, s).unwrap();
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }
}

fn qubit(rx: f64, rz: f64) -> DensityMatrix {
    let m = ComplexMatrix::from_vec(
        2,
        2,
        vec![
            C64::new((1.0 + rz) / 2.0, 0.0),
            C64::new(rx / 2.0, 0.0),
            C64::new(rx / 2.0, 0.0),
            C64::new((1.0 - rz) / 2.0, 0.0),
        ],
    );
    DensityMatrix::new(m).unwrap()
}

// With the min mean, I(ρ, σ_z) = |r_⊥|² / |r| on a qubit, which is not convex
// in the Bloch vector.
#[test]
fn min_mean_is_not_convex() {
    let sigma_z = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
    let (r1, r2) = (qubit(0.5, 0.5), qubit(0.5, -0.5));
    let mix = DensityMatrix::mixture(&[(0.5, &r1), (0.5, &r2)]).unwrap();
    let s = SParameter::NEG_INFINITY;
    let ends = skew_information(&r1, &sigma_z, s).unwrap();
    assert!((ends - 0.25 / 0.5f64.sqrt()).abs() < 1e-12);
    assert!((skew_information(&mix, &sigma_z, s).unwrap() - 0.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lhs_is_additive_on_products(seed in any::<u64>(), n1 in 1usize..=2, n2 in 1usize..=2) {
        let mut r = rng(seed);
        let mum = mub();
        let a = random_pure_state(1 << n1, &mut r);
        let b = random_pure_state(1 << n2, &mut r);
        let joint = a.tensor(&b).density().unwrap();
        for s in [SParameter::WIGNER_YANASE, SParameter::FISHER, SParameter::NEG_INFINITY] {
            let whole = lhs_sum(&joint, &mum, s, n1 + n2).unwrap();
            let parts = lhs_sum(&a.density().unwrap(), &mum, s, n1).unwrap()
                + lhs_sum(&b.density().unwrap(), &mum, s, n2).unwrap();
            prop_assert!((whole - parts).abs() <= 1e-8);
        }
    }

    #[test]
    fn lhs_is_permutation_invariant(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let mum = mub();
        let psi = random_pure_state(8, &mut r);
        let mut perm = vec![0, 1, 2];
        for i in (1..3).rev() {
            perm.swap(i, r.random_range(0..=i));
        }
        let noisy = |st: &PureState| isotropic_mixture(&StateFamily::new(st.clone(), "random"), p).unwrap();
        let permuted = permute_sites(&psi, &perm);
        for s in [SParameter::WIGNER_YANASE, SParameter::FISHER, SParameter::NEG_INFINITY] {
            let x = lhs_sum(&noisy(&psi), &mum, s, 3).unwrap();
            let y = lhs_sum(&noisy(&permuted), &mum, s, 3).unwrap();
            prop_assert!((x - y).abs() <= 1e-8);
        }
    }

    #[test]
    fn lhs_is_capped_by_variance(seed in any::<u64>(), num_sites in 1usize..=3, rank in 1usize..=8) {
        let mut r = rng(seed);
        let mum = mub();
        let rho = random_density_matrix(1 << num_sites, rank, &mut r);
        let cap = variance_sum(&rho, &mum, num_sites).unwrap();
        for s in s_values() {
            prop_assert!(lhs_sum(&rho, &mum, s, num_sites).unwrap() <= cap + 1e-9);
        }
    }

    #[test]
    fn kappa_increases_with_t(d in 2usize..=5, steps in 4usize..=32) {
        let t_max = max_positive_t(d).unwrap();
        let kappas: Vec<f64> = (1..=steps).map(|i| kappa_of_t(d, t_max * i as f64 / steps as f64)).collect();
        prop_assert!(kappas.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn bounds_are_monotone_in_k() {
    for num_sites in 1..=12 {
        for d in 2..=4 {
            for kappa in [1.0 / d as f64 + 0.05, 0.5 + 0.5 / d as f64, 1.0] {
                let ksep: Vec<f64> = (2..=num_sites).map(|k| ksep_bound(num_sites, d, kappa, k).unwrap()).collect();
                if num_sites >= 3 {
                    assert!(ksep.windows(2).all(|w| w[0] > w[1]), "N={num_sites} d={d} κ={kappa}: {ksep:?}");
                }
                let kprod: Vec<f64> = (1..=num_sites).map(|k| kprod_bound(num_sites, d, kappa, k).unwrap()).collect();
                assert!(kprod.windows(2).all(|w| w[0] <= w[1]), "N={num_sites} d={d} κ={kappa}: {kprod:?}");
            }
        }
    }
}

#[test]
fn spectrum_matches_eigendecomposition() {
    for n in 2..=8 {
        for family in [StateFamily::new(ghz(n).unwrap(), "ghz"), StateFamily::new(w_state(n).unwrap(), "w")] {
            for p in [0.0, 0.25, 0.8, 1.0] {
                let iso = spectrum_of(&family, p).unwrap();
                let dense = isotropic_mixture(&family, p).unwrap().spectral().unwrap();
                assert!((dense.eigenvalues[0] - iso.lambda_top).abs() <= 1e-10);
                assert!(dense.eigenvalues[1..].iter().all(|&l| (l - iso.lambda_rest).abs() <= 1e-10));
                assert_eq!(iso.multiplicity, family.total_dim() - 1);
            }
        }
    }
}

#[test]
fn closed_form_matches_dense_on_small_families() {
    let mum = mub();
    for n in 2..=5 {
        for family in [StateFamily::new(ghz(n).unwrap(), "ghz"), StateFamily::new(w_state(n).unwrap(), "w")] {
            for p in [0.0, 0.45, 1.0] {
                let rho = isotropic_mixture(&family, p).unwrap();
                for s in s_values() {
                    let dense = lhs_sum(&rho, &mum, s, n).unwrap();
                    let closed = lhs_sum_isotropic(&family, p, &mum, s).unwrap();
                    assert!((dense - closed).abs() <= 1e-8, "n={n} p={p} s={s}: {dense} vs {closed}");
                }
            }
        }
    }
}

fn families() -> Vec<StateFamily> {
    vec![
        StateFamily::new(ghz(6).unwrap(), "ghz:6"),
        StateFamily::new(w_state(6).unwrap(), "w:6"),
        StateFamily::new(ghz(11).unwrap(), "ghz:11"),
    ]
}

#[test]
fn thresholds_are_stable_under_tolerance_halving() {
    let mum = mub();
    for family in families() {
        let solver = ThresholdSolver::new(&family, &mum).unwrap();
        let n = solver.lhs().num_sites();
        for s in s_values() {
            for (kind, ks) in [(CriterionKind::KSeparability, 2..=n), (CriterionKind::KProducibility, 1..=n - 1)] {
                for k in ks {
                    for tol in [1e-4, 1e-6, 1e-8] {
                        let a = solver.solve(s, kind, k, tol).unwrap().status;
                        let b = solver.solve(s, kind, k, tol / 2.0).unwrap().status;
                        match (a.p_star(), b.p_star()) {
                            (Some(x), Some(y)) => assert!((x - y).abs() <= 10.0 * tol, "{x} vs {y}"),
                            _ => assert_eq!(a, b),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn thresholds_are_ordered_in_s() {
    let mum = mub();
    for family in families() {
        let solver = ThresholdSolver::new(&family, &mum).unwrap();
        let n = solver.lhs().num_sites();
        for (kind, ks) in [(CriterionKind::KSeparability, 2..=n), (CriterionKind::KProducibility, 1..=n - 1)] {
            for k in ks {
                let p: Vec<Option<f64>> = [SParameter::WIGNER_YANASE, SParameter::FISHER, SParameter::NEG_INFINITY]
                    .into_iter()
                    .map(|s| solver.solve(s, kind, k, 1e-10).unwrap().status.p_star())
                    .collect();
                if let [Some(a), Some(b), Some(c)] = p[..] {
                    assert!(a >= b - 1e-8 && b >= c - 1e-8, "{kind} k={k}: {a} {b} {c}");
                }
            }
        }
    }
}

#[test]
fn min_mean_threshold_is_linear() {
    let mum = mub();
    for family in families() {
        let solver = ThresholdSolver::new(&family, &mum).unwrap();
        let n = solver.lhs().num_sites();
        let v = solver.lhs().variance_sum();
        for (kind, ks) in [(CriterionKind::KSeparability, 2..=n), (CriterionKind::KProducibility, 1..=n - 1)] {
            for k in ks {
                let r = solver.solve(SParameter::NEG_INFINITY, kind, k, 1e-12).unwrap();
                match r.status {
                    ThresholdStatus::Solved { p_star } => assert!((p_star - r.bound / v).abs() <= 1e-9),
                    ThresholdStatus::NotDetectable => assert!(r.bound >= v),
                    ThresholdStatus::AlwaysViolated => panic!("maximally mixed state violates {kind} k={k}"),
                }
            }
        }
    }
}
