//! Majorana coupling and correlation matrices, their canonical block form,
//! ground and thermal states, and subsystem reduction.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance used when checking skew symmetry of raw input.
pub const TOL_SKEW: f64 = 1e-9;
/// Block values of a correlation matrix may exceed 1 by this much.
pub const TOL_SPEC: f64 = 1e-10;
/// Quasiparticle energies below this are treated as zero modes.
pub const TOL_GAP: f64 = 1e-10;

fn check_square_even(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(m.nrows()));
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite(i, j));
            }
        }
    }
    Ok(())
}

/// Largest |m + m^T| entry.
pub fn skew_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    worst
}

/// Antisymmetrizes and mirrors so that `m[(j,i)] == -m[(i,j)]` bitwise.
pub fn exact_skew(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] - m[(j, i)]);
            out[(i, j)] = v;
            out[(j, i)] = -v;
        }
    }
    out
}

fn validated_skew(raw: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square_even(raw)?;
    let asymmetry = skew_defect(raw);
    if asymmetry > TOL_SKEW {
        return Err(Error::NotSkewSymmetric { asymmetry });
    }
    Ok(exact_skew(raw))
}

/// Real skew-symmetric coefficient matrix `A` of `H = (i/4) c^T A c`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix(DMatrix<f64>);

impl CouplingMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Caller guarantees exact skew symmetry and even dimension.
    pub(crate) fn from_skew_unchecked(m: DMatrix<f64>) -> Self {
        CouplingMatrix(m)
    }
}

/// Validates and antisymmetrizes a raw matrix.
pub fn make_coupling(raw: &DMatrix<f64>) -> Result<CouplingMatrix> {
    validated_skew(raw).map(CouplingMatrix)
}

/// Majorana correlation matrix `Γ_jk = (i/2) Tr(ρ [c_j, c_k])`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix(DMatrix<f64>);

impl CorrelationMatrix {
    /// Validates skew symmetry and the spectral bound `ν ≤ 1 + TOL_SPEC`.
    pub fn new(raw: &DMatrix<f64>) -> Result<Self> {
        let m = validated_skew(raw)?;
        let g = CorrelationMatrix(m);
        mode_occupations(&g)?;
        Ok(g)
    }

    /// Wraps a matrix already known to be a valid, exactly skew correlation matrix.
    pub fn from_skew_unchecked(m: DMatrix<f64>) -> Self {
        CorrelationMatrix(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Correlation matrix of the direct sum (tensor product) of two states.
    pub fn direct_sum(&self, other: &CorrelationMatrix) -> CorrelationMatrix {
        let (a, b) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.0);
        m.view_mut((a, a), (b, b)).copy_from(&other.0);
        CorrelationMatrix(m)
    }

    /// `Q Γ Q^T` for an orthogonal `Q`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> CorrelationMatrix {
        CorrelationMatrix(exact_skew(&(q * &self.0 * q.transpose())))
    }
}

/// `R` orthogonal and `v ≥ 0` with `A = R [⊕ (0, v_j; -v_j, 0)] R^T`.
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub rotation: DMatrix<f64>,
    pub block_values: Vec<f64>,
}

/// `⊕_j (0, v_j; -v_j, 0)`.
pub fn block_matrix(values: &[f64]) -> DMatrix<f64> {
    let n = values.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (j, &v) in values.iter().enumerate() {
        m[(2 * j, 2 * j + 1)] = v;
        m[(2 * j + 1, 2 * j)] = -v;
    }
    m
}

/// `R [⊕ (0, v_j; -v_j, 0)] R^T`, computed column-pair-wise.
pub fn assemble(rotation: &DMatrix<f64>, values: &[f64]) -> DMatrix<f64> {
    let dim = rotation.nrows();
    let n = values.len();
    let mut odd = DMatrix::zeros(dim, n);
    let mut even = DMatrix::zeros(dim, n);
    for (j, &v) in values.iter().enumerate() {
        odd.set_column(j, &(rotation.column(2 * j) * v));
        even.set_column(j, &rotation.column(2 * j + 1));
    }
    let p = &odd * even.transpose();
    exact_skew(&(&p - p.transpose()))
}

impl CanonicalDecomposition {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        assemble(&self.rotation, &self.block_values)
    }

    pub fn modes(&self) -> usize {
        self.block_values.len()
    }
}

/// Orthogonal reduction to canonical block form.
///
/// The matrix is first brought to skew-tridiagonal form by a Householder
/// Hessenberg reduction `A = Q T Q^T`, whose canonical form follows from
/// the symmetric tridiagonal eigenproblem of the same off-diagonal.
pub fn canonical_block_diagonalize(a: &DMatrix<f64>) -> Result<CanonicalDecomposition> {
    check_square_even(a)?;
    let dim = a.nrows();
    let (q, t) = nalgebra::linalg::Hessenberg::new(a.clone()).unpack();
    let e: Vec<f64> = (0..dim - 1).map(|k| 0.5 * (t[(k, k + 1)] - t[(k + 1, k)])).collect();
    let (w, block_values) = crate::spectral::skew_tridiagonal_canonical(&e)?;
    let rotation = q * w;
    Ok(CanonicalDecomposition { rotation, block_values })
}

/// Sign of the Pfaffian (`0` when a pivot vanishes exactly) and `ln|Pf|`.
///
/// Parlett-Reid elimination with partial pivoting. For banded couplings with
/// exact small-integer structure the vanishing of the Pfaffian is detected
/// exactly, and tridiagonal inputs reproduce the product formula bitwise.
pub fn pfaffian_sign(a: &DMatrix<f64>) -> Result<(i8, f64)> {
    check_square_even(a)?;
    let n = a.nrows();
    let mut m = a.clone();
    let mut sign: i8 = 1;
    let mut log_abs = 0.0;
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = m[(k + 1, k)].abs();
        for i in k + 2..n {
            if m[(i, k)].abs() > best {
                best = m[(i, k)].abs();
                kp = i;
            }
        }
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            sign = -sign;
        }
        let piv = m[(k, k + 1)];
        if piv == 0.0 {
            return Ok((0, f64::NEG_INFINITY));
        }
        if piv < 0.0 {
            sign = -sign;
        }
        log_abs += piv.abs().ln();
        if k + 2 < n {
            let tau: Vec<f64> = (k + 2..n).map(|j| m[(k, j)] / piv).collect();
            let col: Vec<f64> = (k + 2..n).map(|i| m[(i, k + 1)]).collect();
            for (jj, j) in (k + 2..n).enumerate() {
                for (ii, i) in (k + 2..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    Ok((sign, log_abs))
}

fn det_sign(m: &DMatrix<f64>) -> f64 {
    let d = m.clone().lu().determinant();
    if d < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// How ground states treat quasiparticle energies below `tol_gap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZeroModePolicy {
    /// Refuse with [`Error::DegenerateGroundState`].
    #[default]
    Strict,
    /// Zero-temperature limit of the thermal state: a single unresolved
    /// block takes the occupation fixed by the sign of `Pf(A)`; blocks whose
    /// energy is exactly zero (vanishing Pfaffian) or that are jointly
    /// degenerate are left maximally mixed.
    ZeroTemperature,
}

#[derive(Clone, Copy, Debug)]
pub struct GroundStateOptions {
    pub tol_gap: f64,
    pub policy: ZeroModePolicy,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        GroundStateOptions { tol_gap: TOL_GAP, policy: ZeroModePolicy::Strict }
    }
}

/// What happened to a block below `tol_gap`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZeroModeResolution {
    /// Occupation fixed from the Pfaffian sign; the state stays pure.
    ParityFixed,
    /// Left maximally mixed.
    Mixed,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub correlation: CorrelationMatrix,
    /// Quasiparticle energies, descending.
    pub energies: Vec<f64>,
    /// Block values of the returned state in the energy eigenbasis.
    pub occupations: Vec<f64>,
    pub zero_modes: Vec<(usize, ZeroModeResolution)>,
}

impl GroundState {
    pub fn is_pure(&self) -> bool {
        self.zero_modes.iter().all(|&(_, r)| r == ZeroModeResolution::ParityFixed)
    }
}

/// Ground state with explicit zero-mode handling.
pub fn ground_state(a: &CouplingMatrix, opts: &GroundStateOptions) -> Result<GroundState> {
    let dec = canonical_block_diagonalize(a.matrix())?;
    let zero: Vec<usize> = (0..dec.modes()).filter(|&j| dec.block_values[j] < opts.tol_gap).collect();
    let mut g = vec![-1.0; dec.modes()];
    let mut zero_modes = Vec::new();
    if !zero.is_empty() {
        match opts.policy {
            ZeroModePolicy::Strict => {
                return Err(Error::DegenerateGroundState {
                    energies: zero.iter().map(|&j| dec.block_values[j]).collect(),
                    modes: zero,
                })
            }
            ZeroModePolicy::ZeroTemperature => {
                let pf = if zero.len() == 1 { pfaffian_sign(a.matrix())?.0 } else { 0 };
                if pf != 0 {
                    // Pf(A) = det(R) * prod(signed energies); the block with the
                    // unresolved energy carries sign pf * det(R), and the ground
                    // state occupies it opposite to that sign.
                    let j = zero[0];
                    g[j] = -(pf as f64) * det_sign(&dec.rotation);
                    zero_modes.push((j, ZeroModeResolution::ParityFixed));
                } else {
                    for &j in &zero {
                        g[j] = 0.0;
                        zero_modes.push((j, ZeroModeResolution::Mixed));
                    }
                }
            }
        }
    }
    let correlation = CorrelationMatrix(assemble(&dec.rotation, &g));
    Ok(GroundState { correlation, energies: dec.block_values, occupations: g, zero_modes })
}

/// Pure ground state of `(i/4) c^T A c`; errors on any energy below `TOL_GAP`.
pub fn ground_state_correlation(a: &CouplingMatrix) -> Result<CorrelationMatrix> {
    ground_state(a, &GroundStateOptions::default()).map(|g| g.correlation)
}

/// `Γ = R [⊕ (0, tanh(ε_j/2); -tanh(ε_j/2), 0)] R^T` for the state `∝ exp((i/4) c^T A c)`.
pub fn thermal_correlation(a: &CouplingMatrix) -> Result<CorrelationMatrix> {
    let dec = canonical_block_diagonalize(a.matrix())?;
    let lambdas: Vec<f64> = dec.block_values.iter().map(|e| (0.5 * e).tanh()).collect();
    Ok(CorrelationMatrix(assemble(&dec.rotation, &lambdas)))
}

/// Principal submatrix over sites `first..=last` (1-based).
pub fn reduce(g: &CorrelationMatrix, first_site: usize, last_site: usize) -> Result<CorrelationMatrix> {
    let n = g.modes();
    if first_site < 1 || first_site > last_site || last_site > n {
        return Err(Error::RangeOutOfBounds { first: first_site, last: last_site, n });
    }
    let start = 2 * (first_site - 1);
    let len = 2 * (last_site - first_site + 1);
    Ok(CorrelationMatrix(g.0.view((start, start), (len, len)).into_owned()))
}

/// Block values `ν_j ∈ [0, 1]` of a correlation matrix, descending.
pub fn mode_occupations(g: &CorrelationMatrix) -> Result<Vec<f64>> {
    let dec = canonical_block_diagonalize(g.matrix())?;
    occupations_from_values(dec.block_values)
}

pub(crate) fn occupations_from_values(mut nus: Vec<f64>) -> Result<Vec<f64>> {
    for nu in &mut nus {
        if *nu > 1.0 + TOL_SPEC {
            return Err(Error::SpectrumOutOfRange { nu: *nu });
        }
        *nu = nu.clamp(0.0, 1.0);
    }
    Ok(nus)
}

/// Haar-distributed orthogonal matrix from a seeded generator.
pub fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            let mut c = q.column_mut(j);
            c.neg_mut();
        }
    }
    q
}

/// Seeded random Gaussian state: pure when `pure`, otherwise with block
/// values drawn uniformly from `[0, 1]`.
pub fn random_gaussian_correlation(n: usize, pure: bool, seed: u64) -> CorrelationMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_orthogonal(2 * n, &mut rng);
    let lambdas: Vec<f64> = (0..n).map(|_| if pure { 1.0 } else { rng.random::<f64>() }).collect();
    CorrelationMatrix(assemble(&r, &lambdas))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    fn random_skew(dim: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        exact_skew(&m)
    }

    #[test]
    fn make_coupling_cases() {
        let z = make_coupling(&DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(z.matrix(), &DMatrix::zeros(2, 2));
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, -3.0, 0.0]);
        assert_eq!(make_coupling(&a).unwrap().matrix(), &a);
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 3.0, -3.1, 0.0]);
        assert!(matches!(make_coupling(&bad), Err(Error::NotSkewSymmetric { .. })));
        assert!(matches!(make_coupling(&DMatrix::zeros(3, 3)), Err(Error::OddDimension(3))));
    }

    #[test]
    fn block_diagonal_input_is_reordered() {
        let a = block_matrix(&[2.0, 5.0]);
        let d = canonical_block_diagonalize(&a).unwrap();
        assert!((d.block_values[0] - 5.0).abs() < 1e-14);
        assert!((d.block_values[1] - 2.0).abs() < 1e-14);
        for x in d.rotation.iter() {
            assert!(x.abs() < 1e-14 || (x.abs() - 1.0).abs() < 1e-14);
        }
        assert!(max_abs(&(d.reconstruct() - a)) < 1e-13);
    }

    #[test]
    fn negative_block_is_flipped() {
        let a = block_matrix(&[-3.0]);
        let d = canonical_block_diagonalize(&a).unwrap();
        assert!((d.block_values[0] - 3.0).abs() < 1e-15);
        assert!(max_abs(&(d.reconstruct() - a)) < 1e-14);
    }

    #[test]
    fn random_skew_matches_eigenvalues() {
        let a = random_skew(8, 11);
        let d = canonical_block_diagonalize(&a).unwrap();
        let mut im: Vec<f64> = a.complex_eigenvalues().iter().map(|z| z.im).filter(|&x| x > 0.0).collect();
        im.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (v, w) in d.block_values.iter().zip(&im) {
            assert!((v - w).abs() < 1e-10);
        }
        let orth = &d.rotation * d.rotation.transpose() - DMatrix::identity(8, 8);
        assert!(max_abs(&orth) < 1e-10);
        assert!(max_abs(&(d.reconstruct() - a)) < 1e-9);
    }

    #[test]
    fn pfaffian_matches_determinant() {
        for seed in 0..5 {
            let a = random_skew(6, seed);
            let (s, l) = pfaffian_sign(&a).unwrap();
            let det = a.clone().determinant();
            assert!((2.0 * l - det.abs().ln()).abs() < 1e-10);
            let d = canonical_block_diagonalize(&a).unwrap();
            let prod: f64 = d.block_values.iter().product();
            let pf = det_sign(&d.rotation) * prod;
            assert_eq!(s as f64, pf.signum());
        }
        assert_eq!(pfaffian_sign(&block_matrix(&[1.0, 0.0])).unwrap().0, 0);
        assert_eq!(pfaffian_sign(&block_matrix(&[-2.0, 3.0])).unwrap().0, -1);
    }

    #[test]
    fn zero_hamiltonian_is_degenerate() {
        let a = make_coupling(&DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(ground_state_correlation(&a), Err(Error::DegenerateGroundState { .. })));
        let opts = GroundStateOptions { policy: ZeroModePolicy::ZeroTemperature, ..Default::default() };
        let gs = ground_state(&a, &opts).unwrap();
        assert_eq!(gs.correlation.matrix(), &DMatrix::zeros(2, 2));
        assert_eq!(gs.zero_modes, vec![(0, ZeroModeResolution::Mixed)]);
    }

    #[test]
    fn ground_state_is_pure_and_minimizes_energy() {
        let a = make_coupling(&random_skew(10, 3)).unwrap();
        let g = ground_state_correlation(&a).unwrap();
        let sq = g.matrix() * g.matrix() + DMatrix::identity(10, 10);
        assert!(max_abs(&sq) < 1e-8);
        let energy = -0.25 * (a.matrix() * g.matrix()).trace();
        let dec = canonical_block_diagonalize(a.matrix()).unwrap();
        let expect: f64 = -0.5 * dec.block_values.iter().sum::<f64>();
        assert!((energy - expect).abs() < 1e-10);
    }

    #[test]
    fn thermal_single_mode() {
        let a = make_coupling(&block_matrix(&[2.0])).unwrap();
        let g = thermal_correlation(&a).unwrap();
        assert!((g.matrix()[(0, 1)] - 1f64.tanh()).abs() < 1e-15);
        let nus = mode_occupations(&g).unwrap();
        assert!((nus[0] - 0.7615941559557649).abs() < 1e-12);
        let z = thermal_correlation(&make_coupling(&DMatrix::zeros(4, 4)).unwrap()).unwrap();
        assert_eq!(z.matrix(), &DMatrix::zeros(4, 4));
    }

    #[test]
    fn reduce_ranges() {
        let g = random_gaussian_correlation(3, false, 5);
        assert_eq!(reduce(&g, 1, 3).unwrap(), g);
        let r = reduce(&g, 2, 3).unwrap();
        assert_eq!(r.matrix()[(0, 1)], g.matrix()[(2, 3)]);
        assert!(reduce(&g, 0, 2).is_err());
        assert!(reduce(&g, 2, 4).is_err());
        assert!(reduce(&g, 3, 2).is_err());
    }

    #[test]
    fn occupations_of_special_states() {
        let zero = CorrelationMatrix::new(&DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(mode_occupations(&zero).unwrap(), vec![0.0, 0.0]);
        let pure = random_gaussian_correlation(4, true, 9);
        for nu in mode_occupations(&pure).unwrap() {
            assert!((nu - 1.0).abs() < 1e-12);
        }
        let too_big = block_matrix(&[1.1]);
        assert!(matches!(CorrelationMatrix::new(&too_big), Err(Error::SpectrumOutOfRange { .. })));
    }

    #[test]
    fn random_states_are_deterministic() {
        let a = random_gaussian_correlation(4, false, 42);
        let b = random_gaussian_correlation(4, false, 42);
        assert_eq!(a, b);
        assert_ne!(a, random_gaussian_correlation(4, false, 43));
    }
}
