//! Uhlmann fidelity between fermionic Gaussian states given their
//! correlation matrices.
//!
//! With `X = Γρ Γσ - I` the fidelity reads
//! `F = |det(X/2)|^{1/4} det(I + sqrt(I + M^2))^{1/4}`, `M = (Γρ + Γσ) X^{-1}`.
//! Writing `I + Γ^2 = L L^T` one finds `I + M^2 = Lρ Lρ^T X^{-T} Lσ Lσ^T X^{-1}`,
//! so the nonzero eigenvalues of `sqrt(I + M^2)` are the singular values of
//! `K = Lσ^T X^{-1} Lρ`. That form needs no eigenvalue pairing and stays
//! accurate when one or both states are (nearly) pure, where `L` has few or
//! no columns.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::CorrelationMatrix;

pub const TOL_SINGULAR: f64 = 1e-24;
pub const TOL_PURE: f64 = 1e-14;
pub const TOL_PAIRING: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityOptions {
    /// Threshold on the raw first determinant below which `F = 0`.
    pub tol_singular: f64,
    /// Residual diagonal at which the factorization of `I + Γ^2` stops.
    pub tol_pure: f64,
}

impl Default for FidelityOptions {
    fn default() -> Self {
        FidelityOptions { tol_singular: TOL_SINGULAR, tol_pure: TOL_PURE }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityResult {
    pub value: f64,
    /// `det((Γρ Γσ - I)/2)`.
    pub first_determinant: f64,
    pub singular: bool,
    /// `1 - F`, evaluated without cancellation.
    pub infidelity: f64,
    /// Set when the first determinant came out materially negative, which
    /// exact arithmetic forbids.
    pub negative_determinant: bool,
}

impl FidelityResult {
    fn singular(d1: f64) -> Self {
        FidelityResult {
            value: 0.0,
            first_determinant: d1,
            singular: true,
            infidelity: 1.0,
            negative_determinant: d1 < -1e-12,
        }
    }
}

/// Pivoted Cholesky factor `L` (dim x k) of the positive semidefinite
/// `I + Γ^2`, stopping once every residual diagonal entry is below `tol`.
pub fn mixedness_factor(g: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = g.nrows();
    let mut diag: Vec<f64> = (0..n).map(|i| 1.0 - g.row(i).iter().map(|x| x * x).sum::<f64>()).collect();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut used = vec![false; n];
    loop {
        let mut p = usize::MAX;
        let mut best = tol;
        for i in 0..n {
            if !used[i] && diag[i] > best {
                best = diag[i];
                p = i;
            }
        }
        if p == usize::MAX {
            break;
        }
        used[p] = true;
        // column p of I + Γ^2 is e_p + Γ (Γ e_p)
        let gp = g.column(p);
        let mut col: Vec<f64> = (0..n).map(|i| g.row(i).dot(&gp.transpose())).collect();
        col[p] += 1.0;
        for c in &cols {
            let cp = c[p];
            if cp != 0.0 {
                for (x, y) in col.iter_mut().zip(c) {
                    *x -= cp * y;
                }
            }
        }
        let piv = best.sqrt();
        for (i, x) in col.iter_mut().enumerate() {
            *x = if used[i] && i != p { 0.0 } else { *x / piv };
        }
        col[p] = piv;
        for i in 0..n {
            if !used[i] {
                diag[i] -= col[i] * col[i];
            }
        }
        diag[p] = 0.0;
        cols.push(col);
    }
    let mut l = DMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..n {
            l[(i, j)] = c[i];
        }
    }
    l
}

fn check_pair(rho: &CorrelationMatrix, sigma: &CorrelationMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `ln|det(X/2)|`, the sign of `det(X/2)`, and the LU of `X`.
fn first_determinant(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
) -> (f64, f64, nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>) {
    let n = a.nrows();
    let x = a * b - DMatrix::<f64>::identity(n, n);
    let lu = x.lu();
    let mut log_abs = -(n as f64) * std::f64::consts::LN_2;
    let mut sign = 1.0;
    let u = lu.u();
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 {
            return (f64::NEG_INFINITY, 0.0, lu);
        }
        if d < 0.0 {
            sign = -sign;
        }
        log_abs += d.abs().ln();
    }
    let perm_sign = lu.p().determinant::<f64>();
    (log_abs, sign * perm_sign, lu)
}

pub fn gaussian_fidelity_with(
    rho: &CorrelationMatrix,
    sigma: &CorrelationMatrix,
    opts: &FidelityOptions,
) -> Result<FidelityResult> {
    check_pair(rho, sigma)?;
    let (a, b) = (rho.matrix(), sigma.matrix());
    let (log_d1, sign, lu) = first_determinant(a, b);
    let d1 = sign * log_d1.exp();
    if log_d1 < opts.tol_singular.ln() {
        return Ok(FidelityResult::singular(d1));
    }
    let la = mixedness_factor(a, opts.tol_pure);
    let lb = mixedness_factor(b, opts.tol_pure);
    let mut log_k = 0.0;
    if la.ncols() > 0 && lb.ncols() > 0 {
        let y = lu.solve(&la).ok_or_else(|| Error::NumericalFailure("singular Γρ Γσ - I".into()))?;
        let k = lb.transpose() * y;
        let s = crate::spectral::singular_values(&k)?;
        log_k = s.iter().map(|x| x.ln_1p()).sum();
    }
    let log_f = 0.25 * (log_d1 + log_k);
    let value = log_f.exp().clamp(0.0, 1.0);
    let infidelity = (-log_f.exp_m1()).clamp(0.0, 1.0);
    Ok(FidelityResult { value, first_determinant: d1, singular: false, infidelity, negative_determinant: d1 < -1e-12 })
}

/// Fidelity with default tolerances.
pub fn gaussian_fidelity(rho: &CorrelationMatrix, sigma: &CorrelationMatrix) -> Result<FidelityResult> {
    gaussian_fidelity_with(rho, sigma, &FidelityOptions::default())
}

/// The `ν_j` of the spectrum `±i ν_j` of `M = (Γρ + Γσ)(Γρ Γσ - I)^{-1}`,
/// clamped to `[0, 1]` and sorted descending.
pub fn mode_angles(rho: &CorrelationMatrix, sigma: &CorrelationMatrix) -> Result<Vec<f64>> {
    mode_angles_with(rho, sigma, &FidelityOptions::default())
}

pub fn mode_angles_with(
    rho: &CorrelationMatrix,
    sigma: &CorrelationMatrix,
    opts: &FidelityOptions,
) -> Result<Vec<f64>> {
    check_pair(rho, sigma)?;
    let (a, b) = (rho.matrix(), sigma.matrix());
    let (log_d1, _, lu) = first_determinant(a, b);
    if log_d1 < opts.tol_singular.ln() {
        return Err(Error::SingularInput(log_d1.exp()));
    }
    // M X = a + b  <=>  X^T M^T = (a + b)^T, and X^T = b a - I
    let n = a.nrows();
    let xt = b * a - DMatrix::<f64>::identity(n, n);
    let _ = lu;
    let mt = xt.lu().solve(&(a + b).transpose()).ok_or_else(|| Error::NumericalFailure("singular Γρ Γσ - I".into()))?;
    let eig = mt.transpose().complex_eigenvalues();
    let worst_re = eig.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    if worst_re > TOL_PAIRING {
        return Err(Error::UnpairedSpectrum(worst_re));
    }
    let mut mags: Vec<(f64, f64)> = eig.iter().map(|z| (z.im.abs(), z.im)).collect();
    mags.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut nus = Vec::with_capacity(n / 2);
    for pair in mags.chunks(2) {
        let (p, q) = (pair[0], pair[1]);
        let mismatch = (p.0 - q.0).abs();
        let opposite = p.1 * q.1 <= 0.0 || p.0 <= TOL_PAIRING;
        if mismatch > TOL_PAIRING || !opposite {
            return Err(Error::UnpairedSpectrum(mismatch.max(if opposite { 0.0 } else { p.0 })));
        }
        nus.push((0.5 * (p.0 + q.0)).clamp(0.0, 1.0));
    }
    Ok(nus)
}

/// `|d1|^{1/4} ∏_j (1 + sqrt(1 - ν_j^2))^{1/2}`.
pub fn fidelity_from_angles(first_determinant: f64, nus: &[f64]) -> f64 {
    let log = 0.25 * first_determinant.abs().ln()
        + 0.5 * nus.iter().map(|nu| (1.0 - nu * nu).max(0.0).sqrt().ln_1p()).sum::<f64>();
    log.exp().clamp(0.0, 1.0)
}
