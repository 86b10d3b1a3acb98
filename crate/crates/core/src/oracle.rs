//! Dense 2^n-dimensional reference implementation used to check the
//! Gaussian formalism on small chains.
//!
//! Basis states are bit strings with site 1 as the most significant bit;
//! bit 0 is spin up (`σᶻ = +1`), which is the occupied state of `f = σ⁻`.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::gaussian::{CorrelationMatrix, CouplingMatrix};
use crate::models::{ModelKind, ModelSpec};

pub type C64 = Complex<f64>;
pub type DenseOperator = DMatrix<C64>;

pub const MAX_MODES: usize = 7;
const TOL_STATE: f64 = 1e-10;

const I: C64 = Complex { re: 0.0, im: 1.0 };
const ONE: C64 = Complex { re: 1.0, im: 0.0 };

/// Operator with exactly one nonzero entry per column: `|x> -> phase[x] |target[x]>`.
#[derive(Clone, Debug)]
pub struct Monomial {
    target: Vec<usize>,
    phase: Vec<C64>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Monomial { target: (0..dim).collect(), phase: vec![ONE; dim] }
    }

    /// `self · other` (apply `other` first).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let target = other.target.iter().map(|&y| self.target[y]).collect();
        let phase = other.target.iter().zip(&other.phase).map(|(&y, &p)| self.phase[y] * p).collect();
        Monomial { target, phase }
    }

    pub fn add_to(&self, m: &mut DenseOperator, coeff: C64) {
        for (x, (&y, &p)) in self.target.iter().zip(&self.phase).enumerate() {
            m[(y, x)] += coeff * p;
        }
    }

    pub fn to_dense(&self) -> DenseOperator {
        let dim = self.target.len();
        let mut m = DMatrix::zeros(dim, dim);
        self.add_to(&mut m, ONE);
        m
    }

    pub fn trace(&self) -> C64 {
        self.target.iter().zip(&self.phase).enumerate().filter(|(x, (&y, _))| *x == y).map(|(_, (_, &p))| p).sum()
    }

    /// `Tr(ρ · self)`.
    fn expectation(&self, rho: &DenseOperator) -> C64 {
        self.target.iter().zip(&self.phase).enumerate().map(|(x, (&y, &p))| rho[(x, y)] * p).sum()
    }
}

fn check_modes(n: usize) -> Result<()> {
    if n > MAX_MODES {
        return Err(Error::TooLarge(n));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

fn pauli_on(n: usize, site: usize, p: Pauli) -> Monomial {
    let dim = 1usize << n;
    let bit = 1usize << (n - 1 - site);
    let mut target = vec![0; dim];
    let mut phase = vec![ONE; dim];
    for x in 0..dim {
        let down = x & bit != 0;
        match p {
            Pauli::X => target[x] = x ^ bit,
            Pauli::Y => {
                target[x] = x ^ bit;
                phase[x] = if down { -I } else { I };
            }
            Pauli::Z => {
                target[x] = x;
                phase[x] = if down { -ONE } else { ONE };
            }
        }
    }
    Monomial { target, phase }
}

/// Jordan-Wigner Majoranas as monomials: `c_{2j-1} = Z..Z X_j`, `c_{2j} = -Z..Z Y_j`.
pub fn majorana_monomials(n: usize) -> Result<Vec<Monomial>> {
    check_modes(n)?;
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(2 * n);
    let mut string = Monomial::identity(dim);
    for j in 0..n {
        out.push(string.mul(&pauli_on(n, j, Pauli::X)));
        let mut y = string.mul(&pauli_on(n, j, Pauli::Y));
        for p in &mut y.phase {
            *p = -*p;
        }
        out.push(y);
        string = string.mul(&pauli_on(n, j, Pauli::Z));
    }
    Ok(out)
}

pub fn majorana_matrices(n: usize) -> Result<Vec<DenseOperator>> {
    Ok(majorana_monomials(n)?.iter().map(Monomial::to_dense).collect())
}

/// `(i/4) Σ_jk A_jk c_j c_k`.
pub fn dense_hamiltonian(a: &CouplingMatrix) -> Result<DenseOperator> {
    let n = a.modes();
    let cs = majorana_monomials(n)?;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    let m = a.matrix();
    for j in 0..2 * n {
        for k in 0..2 * n {
            if m[(j, k)] != 0.0 {
                cs[j].mul(&cs[k]).add_to(&mut h, I * (0.25 * m[(j, k)]));
            }
        }
    }
    Ok(h)
}

/// Spin-chain Hamiltonian built directly from Pauli matrices.
pub fn dense_spin_hamiltonian(spec: &ModelSpec) -> Result<DenseOperator> {
    let n = spec.n;
    check_modes(n)?;
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    let hc = C64::new(spec.h, 0.0);
    for j in 0..n {
        let z = pauli_on(n, j, Pauli::Z);
        match spec.kind {
            ModelKind::Ising => z.add_to(&mut h, -hc),
            ModelKind::Xy => z.add_to(&mut h, hc),
        }
    }
    for j in 0..n.saturating_sub(1) {
        let xx = pauli_on(n, j, Pauli::X).mul(&pauli_on(n, j + 1, Pauli::X));
        match spec.kind {
            ModelKind::Ising => xx.add_to(&mut h, -ONE),
            ModelKind::Xy => {
                xx.add_to(&mut h, ONE);
                pauli_on(n, j, Pauli::Y).mul(&pauli_on(n, j + 1, Pauli::Y)).add_to(&mut h, ONE);
            }
        }
    }
    Ok(h)
}

/// Hermitian, unit-trace, positive semidefinite density matrix.
#[derive(Clone, Debug)]
pub struct DenseState(DenseOperator);

impl DenseState {
    pub fn new(rho: DenseOperator) -> Result<Self> {
        let dim = rho.nrows();
        if rho.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::NotSquare { rows: rho.nrows(), cols: rho.ncols() });
        }
        let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > TOL_STATE {
            return Err(Error::NumericalFailure(format!("state not Hermitian ({herm:e})")));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > TOL_STATE {
            return Err(Error::NumericalFailure(format!("state trace {tr}")));
        }
        let min = hermitian_eigenvalues(&rho).iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -TOL_STATE {
            return Err(Error::NumericalFailure(format!("negative eigenvalue {min:e}")));
        }
        Ok(DenseState(rho))
    }

    pub fn operator(&self) -> &DenseOperator {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.nrows().trailing_zeros() as usize
    }
}

fn hermitian_eigenvalues(m: &DenseOperator) -> Vec<f64> {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    sym.symmetric_eigenvalues().iter().cloned().collect()
}

/// `2^{-n} ∏_j (I + i λ_j c̃_{2j-1} c̃_{2j})` with `c̃ = R^T c`.
pub fn dense_gaussian_state(r: &DMatrix<f64>, lambdas: &[f64]) -> Result<DenseState> {
    let n = lambdas.len();
    check_modes(n)?;
    if r.nrows() != 2 * n || r.ncols() != 2 * n {
        return Err(Error::DimensionMismatch(r.nrows(), 2 * n));
    }
    if let Some(&bad) = lambdas.iter().find(|l| !(-1.0..=1.0).contains(*l)) {
        return Err(Error::InvalidLambda(bad));
    }
    let cs = majorana_monomials(n)?;
    let dim = 1usize << n;
    let mut rho = DMatrix::<C64>::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
    for (j, &lam) in lambdas.iter().enumerate() {
        let mut f = DMatrix::<C64>::identity(dim, dim);
        for l in 0..2 * n {
            for m in 0..2 * n {
                let w = r[(l, 2 * j)] * r[(m, 2 * j + 1)];
                if l != m && w != 0.0 {
                    cs[l].mul(&cs[m]).add_to(&mut f, I * (lam * w));
                }
            }
        }
        rho *= f;
    }
    DenseState::new((&rho + rho.adjoint()) * C64::new(0.5, 0.0))
}

/// Projector onto the lowest eigenvector; errors if the gap is below 1e-10.
pub fn dense_ground_state(h: &DenseOperator) -> Result<DenseState> {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let (e0, e1) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    if e1 - e0 <= 1e-10 {
        return Err(Error::DegenerateGroundState { modes: vec![0], energies: vec![e1 - e0] });
    }
    let v = eig.eigenvectors.column(order[0]);
    DenseState::new(v * v.adjoint())
}

/// Reduced state on sites `1..=keep`.
pub fn dense_partial_trace(rho: &DenseState, keep: usize) -> Result<DenseState> {
    let n = rho.modes();
    if keep == 0 || keep > n {
        return Err(Error::UnsupportedRange);
    }
    let rest = 1usize << (n - keep);
    let dim = 1usize << keep;
    let m = rho.operator();
    let out = DMatrix::from_fn(dim, dim, |i, j| (0..rest).map(|k| m[(i * rest + k, j * rest + k)]).sum());
    DenseState::new(out)
}

fn psd_sqrt(m: &DenseOperator) -> DenseOperator {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut d = eig.eigenvectors.clone();
    for (j, &w) in eig.eigenvalues.iter().enumerate() {
        // eigenvalues at roundoff level carry no information and would only
        // contribute their own square roots
        let s = if w > 1e-13 { w.sqrt() } else { 0.0 };
        let mut c = d.column_mut(j);
        c *= C64::new(s, 0.0);
    }
    d * eig.eigenvectors.adjoint()
}

/// `Tr sqrt(√ρ σ √ρ)`, evaluated as the trace norm `‖√ρ √σ‖₁` (the singular
/// values of `√ρ√σ` are the eigenvalues of `sqrt(√ρ σ √ρ)`).
pub fn dense_fidelity(rho: &DenseState, sigma: &DenseState) -> Result<f64> {
    if rho.0.nrows() != sigma.0.nrows() {
        return Err(Error::DimensionMismatch(rho.0.nrows(), sigma.0.nrows()));
    }
    let p = psd_sqrt(&rho.0) * psd_sqrt(&sigma.0);
    let s = p.singular_values();
    Ok(s.iter().sum::<f64>().clamp(0.0, 1.0 + 1e-10))
}

/// `Γ_jk = (i/2) Tr(ρ [c_j, c_k])`.
pub fn dense_correlation_matrix(rho: &DenseState) -> Result<CorrelationMatrix> {
    let n = rho.modes();
    let cs = majorana_monomials(n)?;
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    let mut residue = 0.0f64;
    for j in 0..2 * n {
        for k in j + 1..2 * n {
            // [c_j, c_k] = 2 c_j c_k for j != k
            let v = I * cs[j].mul(&cs[k]).expectation(&rho.0);
            residue = residue.max(v.im.abs());
            g[(j, k)] = v.re;
            g[(k, j)] = -v.re;
        }
    }
    if residue > TOL_STATE {
        return Err(Error::NonRealResult(residue));
    }
    Ok(CorrelationMatrix::from_skew_unchecked(g))
}

/// Von Neumann entropy in nats.
pub fn dense_entropy(rho: &DenseState) -> f64 {
    hermitian_eigenvalues(&rho.0)
        .iter()
        .map(|&p| {
            let p = p.clamp(0.0, 1.0);
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum()
}

/// Sorted eigenvalues of a Hermitian operator.
pub fn dense_spectrum(h: &DenseOperator) -> Vec<f64> {
    let mut e = hermitian_eigenvalues(h);
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

/// Boundary effect function from exact diagonalization of chains of `n` and
/// `n + 1` sites.
pub fn dense_boundary_effect(spec: &ModelSpec, r_max: usize) -> Result<Vec<f64>> {
    let n = spec.n;
    let big = spec.with_sites(n + 1);
    let rho = dense_ground_state(&dense_spin_hamiltonian(spec)?)?;
    let sigma = dense_ground_state(&dense_spin_hamiltonian(&big)?)?;
    (1..=r_max)
        .map(|r| {
            let a = dense_partial_trace(&rho, n - r)?;
            let b = dense_partial_trace(&sigma, n - r)?;
            Ok((1.0 - dense_fidelity(&a, &b)?).max(0.0).sqrt())
        })
        .collect()
}
