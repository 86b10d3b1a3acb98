//! Property checks shared by the proptest suite and the acceptance runner.

#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fgauss::fidelity::gaussian_fidelity;
use fgauss::gaussian::{
    assemble, canonical_block_diagonalize, ground_state, make_coupling, mode_occupations, random_gaussian_correlation,
    random_orthogonal, reduce, CorrelationMatrix, GroundStateOptions,
};
use fgauss::models::{ModelKind, ModelSpec};
use fgauss::observables::{boundary_effect_function, entropy_of_block};
use fgauss::oracle::majorana_monomials;

pub type PropResult = Result<(), TestCaseError>;

pub fn random_state(n: usize, pure: bool, seed: u64) -> CorrelationMatrix {
    random_gaussian_correlation(n, pure, seed)
}

pub fn random_coupling(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(2 * n, 2 * n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
    &m - m.transpose()
}

pub fn fidelity_symmetric(n: usize, pa: bool, pb: bool, seed: u64) -> PropResult {
    let a = random_state(n, pa, seed);
    let b = random_state(n, pb, seed ^ 0x9e37_79b9);
    let fab = gaussian_fidelity(&a, &b).unwrap().value;
    let fba = gaussian_fidelity(&b, &a).unwrap().value;
    prop_assert!((fab - fba).abs() <= 1e-10, "F(a,b) = {fab}, F(b,a) = {fba}");
    Ok(())
}

pub fn fidelity_in_range(n: usize, pa: bool, pb: bool, seed: u64) -> PropResult {
    let a = random_state(n, pa, seed);
    let b = random_state(n, pb, seed.wrapping_add(17));
    let f = gaussian_fidelity(&a, &b).unwrap();
    prop_assert!((0.0..=1.0).contains(&f.value));
    prop_assert!((f.value + f.infidelity - 1.0).abs() <= 1e-12);
    let same = gaussian_fidelity(&a, &a).unwrap().value;
    prop_assert!((same - 1.0).abs() <= 1e-10, "F(a,a) = {same}");
    Ok(())
}

pub fn fidelity_orthogonal_covariance(n: usize, pa: bool, pb: bool, seed: u64) -> PropResult {
    let a = random_state(n, pa, seed);
    let b = random_state(n, pb, seed.wrapping_mul(3).wrapping_add(1));
    let q = random_orthogonal(2 * n, &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(99)));
    let f = gaussian_fidelity(&a, &b).unwrap().value;
    let g = gaussian_fidelity(&a.rotated(&q), &b.rotated(&q)).unwrap().value;
    prop_assert!((f - g).abs() <= 1e-9, "{f} vs {g}");
    Ok(())
}

pub fn fidelity_product_structure(n1: usize, n2: usize, seed: u64) -> PropResult {
    let (a, b) = (random_state(n1, false, seed), random_state(n1, false, seed + 1));
    let (c, d) = (random_state(n2, false, seed + 2), random_state(n2, true, seed + 3));
    let f1 = gaussian_fidelity(&a, &b).unwrap().value;
    let f2 = gaussian_fidelity(&c, &d).unwrap().value;
    let f = gaussian_fidelity(&a.direct_sum(&c), &b.direct_sum(&d)).unwrap().value;
    prop_assert!((f - f1 * f2).abs() <= 1e-9, "{f} vs {}", f1 * f2);
    Ok(())
}

pub fn correlation_invariants(n: usize, pure: bool, seed: u64) -> PropResult {
    let g = random_state(n, pure, seed);
    let m = g.matrix();
    prop_assert!((m + m.transpose()).amax() == 0.0);
    let dec = canonical_block_diagonalize(m).unwrap();
    let r = &dec.rotation;
    let orth = (r.transpose() * r - DMatrix::identity(2 * n, 2 * n)).amax();
    prop_assert!(orth <= 1e-10, "R^T R - I = {orth}");
    let rec = (dec.reconstruct() - m).amax();
    prop_assert!(rec <= 1e-9, "reconstruction error {rec}");
    let nus = mode_occupations(&g).unwrap();
    prop_assert!(nus.iter().all(|nu| (0.0..=1.0).contains(nu)));
    prop_assert!(nus.windows(2).all(|w| w[0] >= w[1]));
    if pure {
        let sq = (m * m + DMatrix::identity(2 * n, 2 * n)).amax();
        prop_assert!(sq <= 1e-10, "Γ² + I = {sq}");
    }
    let q = random_orthogonal(2 * n, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5555));
    let rotated = mode_occupations(&g.rotated(&q)).unwrap();
    for (x, y) in nus.iter().zip(&rotated) {
        prop_assert!((x - y).abs() <= 1e-9);
    }
    Ok(())
}

pub fn ground_state_invariants(n: usize, seed: u64) -> PropResult {
    let a = make_coupling(&random_coupling(n, seed)).unwrap();
    let gs = match ground_state(&a, &GroundStateOptions::default()) {
        Ok(gs) => gs,
        Err(_) => return Ok(()),
    };
    let g = gs.correlation.matrix();
    prop_assert!((g * g + DMatrix::identity(2 * n, 2 * n)).amax() <= 1e-8);
    let energy = -0.25 * (a.matrix() * g).trace();
    let expected = -0.5 * gs.energies.iter().sum::<f64>();
    prop_assert!((energy - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
    Ok(())
}

pub fn entropy_additive(n1: usize, n2: usize, seed: u64) -> PropResult {
    let a = random_state(n1, false, seed);
    let b = random_state(n2, false, seed + 5);
    let s = entropy_of_block(&a.direct_sum(&b)).unwrap();
    let sa = entropy_of_block(&a).unwrap();
    let sb = entropy_of_block(&b).unwrap();
    prop_assert!(s >= -1e-12 && sa >= -1e-12 && sb >= -1e-12);
    prop_assert!((s - sa - sb).abs() <= 1e-9);
    Ok(())
}

pub fn entropy_complementary(n: usize, k: usize, seed: u64) -> PropResult {
    let k = 1 + k % (n - 1);
    let g = random_state(n, true, seed);
    let left = entropy_of_block(&reduce(&g, 1, k).unwrap()).unwrap();
    let right = entropy_of_block(&reduce(&g, k + 1, n).unwrap()).unwrap();
    prop_assert!((left - right).abs() <= 1e-7, "{left} vs {right}");
    Ok(())
}

/// Any product of distinct Majoranas, taken in index order, is traceless.
pub fn majorana_products_traceless(n: usize, mask: u32) -> PropResult {
    let cs = majorana_monomials(n).unwrap();
    let bits = 2 * n;
    let mask = mask & ((1u32 << bits) - 1);
    if mask == 0 {
        return Ok(());
    }
    let mut prod = fgauss::oracle::Monomial::identity(1 << n);
    for (j, c) in cs.iter().enumerate() {
        if mask & (1 << j) != 0 {
            prod = prod.mul(c);
        }
    }
    prop_assert!(prod.trace().norm() <= 1e-10);
    Ok(())
}

pub fn bef_in_unit_interval(ising: bool, n: usize, h: f64) -> PropResult {
    let kind = if ising { ModelKind::Ising } else { ModelKind::Xy };
    let spec = ModelSpec::new(kind, n, h);
    if let Ok(s) = boundary_effect_function(&spec, (n - 1) / 2) {
        prop_assert!(s.points().iter().all(|p| (0.0..=1.0).contains(&p.1)));
    }
    Ok(())
}

pub fn assemble_round_trip(n: usize, seed: u64) -> PropResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_orthogonal(2 * n, &mut rng);
    let lambdas: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let g = CorrelationMatrix::new(&assemble(&r, &lambdas)).unwrap();
    let mut want = lambdas.clone();
    want.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let got = mode_occupations(&g).unwrap();
    for (x, y) in got.iter().zip(&want) {
        prop_assert!((x - y).abs() <= 1e-12);
    }
    Ok(())
}
