//! Seeded equivalence suites comparing the Gaussian formalism against the
//! dense oracle.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fidelity::{gaussian_fidelity_with, FidelityOptions};
use crate::gaussian::{assemble, ground_state_correlation, random_orthogonal, reduce, CorrelationMatrix};
use crate::models::{build, ModelKind, ModelSpec};
use crate::observables::{boundary_effect_function_with, entropy_of_block, BefOptions};
use crate::oracle::{
    dense_boundary_effect, dense_correlation_matrix, dense_entropy, dense_fidelity, dense_gaussian_state,
    dense_ground_state, dense_hamiltonian, dense_partial_trace, dense_spectrum, dense_spin_hamiltonian, DenseState,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    fn new(name: &'static str, deviations: &[f64], tolerance: f64) -> Self {
        let max_deviation =
            deviations.iter().cloned().fold(0.0, |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) });
        SuiteReport { name, cases: deviations.len(), max_deviation, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

pub const FIELDS: [f64; 6] = [0.0, 0.5, 0.8, 1.0, 1.2, 2.0];
pub const BEF_FIELDS: [f64; 3] = [0.5, 0.8, 1.2];

/// `(R, λ)` with `λ_j = ±1` for pure states and uniform in `[-1, 1]` otherwise.
pub fn random_canonical_pair(n: usize, pure: bool, rng: &mut ChaCha8Rng) -> (DMatrix<f64>, Vec<f64>) {
    let r = random_orthogonal(2 * n, rng);
    let lambdas = (0..n)
        .map(|_| {
            if pure {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            } else {
                rng.random_range(-1.0..=1.0)
            }
        })
        .collect();
    (r, lambdas)
}

fn gaussian_and_dense(n: usize, pure: bool, rng: &mut ChaCha8Rng) -> Result<(CorrelationMatrix, DenseState)> {
    let (r, l) = random_canonical_pair(n, pure, rng);
    let g = CorrelationMatrix::new(&assemble(&r, &l))?;
    Ok((g, dense_gaussian_state(&r, &l)?))
}

fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

/// Fidelity of random pairs (cycling through n = 1..=5 and pure/pure,
/// pure/mixed, mixed/mixed) against the dense Uhlmann fidelity.
pub fn fidelity_suite(seed: u64, pairs: usize, opts: &FidelityOptions, tol: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut devs = Vec::with_capacity(pairs);
    for i in 0..pairs {
        let n = 1 + i % 5;
        let (pa, pb) = [(true, true), (true, false), (false, false)][(i / 5) % 3];
        let (ga, ra) = gaussian_and_dense(n, pa, &mut rng)?;
        let (gb, rb) = gaussian_and_dense(n, pb, &mut rng)?;
        let f = gaussian_fidelity_with(&ga, &gb, opts)?.value;
        devs.push((f - dense_fidelity(&ra, &rb)?).abs());
    }
    Ok(SuiteReport::new("fidelity", &devs, tol))
}

/// Leading-block reduction against the dense partial trace.
pub fn reduction_suite(seed: u64, cases: usize, tol: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut devs = Vec::with_capacity(cases);
    for i in 0..cases {
        let n = 1 + i % 5;
        let m = rng.random_range(1..=n);
        let (g, rho) = gaussian_and_dense(n, i % 2 == 0, &mut rng)?;
        let dense = dense_correlation_matrix(&dense_partial_trace(&rho, m)?)?;
        devs.push(max_abs(reduce(&g, 1, m)?.matrix(), dense.matrix()));
    }
    Ok(SuiteReport::new("reduction", &devs, tol))
}

/// Dense state built from `(R, λ)` reproduces `R ⊕λJ R^T`.
pub fn state_suite(seed: u64, cases: usize, tol: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut devs = Vec::with_capacity(cases);
    for i in 0..cases {
        let (g, rho) = gaussian_and_dense(1 + i % 5, false, &mut rng)?;
        devs.push(max_abs(g.matrix(), dense_correlation_matrix(&rho)?.matrix()));
    }
    Ok(SuiteReport::new("state", &devs, tol))
}

/// Block entropy against the dense von Neumann entropy.
pub fn entropy_suite(seed: u64, cases: usize, tol: f64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut devs = Vec::with_capacity(cases);
    for i in 0..cases {
        let n = 1 + i % 5;
        let m = rng.random_range(1..=n);
        let (g, rho) = gaussian_and_dense(n, i % 2 == 0, &mut rng)?;
        let s = entropy_of_block(&reduce(&g, 1, m)?)?;
        devs.push((s - dense_entropy(&dense_partial_trace(&rho, m)?)).abs());
    }
    Ok(SuiteReport::new("entropy", &devs, tol))
}

fn model_grid(sizes: impl Iterator<Item = usize> + Clone, fields: &[f64]) -> Vec<ModelSpec> {
    let mut out = Vec::new();
    for kind in [ModelKind::Ising, ModelKind::Xy] {
        for n in sizes.clone() {
            for &h in fields {
                out.push(ModelSpec::new(kind, n, h));
            }
        }
    }
    out
}

/// Spectrum of the quadratic form (plus the recorded constant) against
/// the spin Hamiltonian, n = 2..=5.
pub fn spectrum_suite(tol: f64) -> Result<SuiteReport> {
    let mut devs = Vec::new();
    for spec in model_grid(2..=5, &FIELDS) {
        let model = build(&spec)?;
        let quad = dense_spectrum(&dense_hamiltonian(&model.coupling)?);
        let spin = dense_spectrum(&dense_spin_hamiltonian(&spec)?);
        devs.push(quad.iter().zip(&spin).map(|(a, b)| (a + model.constant - b).abs()).fold(0.0, f64::max));
    }
    Ok(SuiteReport::new("spectrum", &devs, tol))
}

/// Ground-state correlations of the spin chains against the Gaussian
/// ground state, n = 2..=5, for the gapped fields.
pub fn ground_state_suite(tol: f64) -> Result<SuiteReport> {
    let mut devs = Vec::new();
    for spec in model_grid(2..=5, &[0.5, 0.8, 1.2, 2.0]) {
        let Ok(g) = ground_state_correlation(&build(&spec)?.coupling) else { continue };
        let dense = dense_correlation_matrix(&dense_ground_state(&dense_spin_hamiltonian(&spec)?)?)?;
        devs.push(max_abs(g.matrix(), dense.matrix()));
    }
    Ok(SuiteReport::new("ground-state", &devs, tol))
}

/// Boundary effect function against exact diagonalization, n = 3, 4.
pub fn bef_suite(opts: &BefOptions, tol: f64) -> Result<SuiteReport> {
    let mut devs = Vec::new();
    for spec in model_grid(3..=4, &BEF_FIELDS) {
        let r_max = (spec.n - 1) / 2;
        let gauss = boundary_effect_function_with(&spec, r_max, opts)?;
        let dense = dense_boundary_effect(&spec, r_max)?;
        for (p, d) in gauss.points().iter().zip(&dense) {
            devs.push((p.1 - d).abs());
        }
    }
    Ok(SuiteReport::new("bef", &devs, tol))
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fidelity: FidelityOptions,
    /// Overrides every suite tolerance when set.
    pub tolerance: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 20240607, fidelity: FidelityOptions::default(), tolerance: None }
    }
}

/// All suites with their default tolerances.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    let tol = |default: f64| opts.tolerance.unwrap_or(default);
    let bef_opts = BefOptions { fidelity: opts.fidelity, ..Default::default() };
    Ok(vec![
        fidelity_suite(opts.seed, 200, &opts.fidelity, tol(1e-8))?,
        reduction_suite(opts.seed, 50, tol(1e-10))?,
        state_suite(opts.seed, 50, tol(1e-10))?,
        entropy_suite(opts.seed, 50, tol(1e-8))?,
        spectrum_suite(tol(1e-10))?,
        ground_state_suite(tol(1e-8))?,
        bef_suite(&bef_opts, tol(1e-7))?,
    ])
}
