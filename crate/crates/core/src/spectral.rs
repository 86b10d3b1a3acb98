//! Dense spectral helpers built on the symmetric eigensolver only.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn descending(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&x, &y| values[y].partial_cmp(&values[x]).unwrap_or(std::cmp::Ordering::Equal));
    order
}

fn finite(m: &DMatrix<f64>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NumericalFailure("non-finite matrix entry".into()))
    }
}

/// Singular values of `m`, descending, from the eigenvalues of
/// `[[0, m], [m^T, 0]]`.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    finite(m)?;
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut aug = DMatrix::zeros(r + c, r + c);
    aug.view_mut((0, r), (r, c)).copy_from(m);
    aug.view_mut((r, 0), (c, r)).copy_from(&m.transpose());
    let ev = aug.symmetric_eigenvalues();
    let order = descending(ev.as_slice());
    Ok(order[..k].iter().map(|&i| ev[i].max(0.0)).collect())
}

/// Gram-Schmidt on `vs`, in order, or with column pivoting when `pivot`.
fn orthonormal_span(mut vs: Vec<nalgebra::DVector<f64>>, want: usize, pivot: bool) -> Vec<nalgebra::DVector<f64>> {
    let mut out: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(want);
    vs.reverse();
    while out.len() < want && !vs.is_empty() {
        let next = if pivot {
            let (best, _) =
                vs.iter()
                    .enumerate()
                    .map(|(i, v)| (i, v.norm()))
                    .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            best
        } else {
            vs.len() - 1
        };
        let mut q = vs.swap_remove(next);
        // twice is enough
        for _ in 0..2 {
            for p in &out {
                let d: f64 = p.dot(&q);
                q.axpy(-d, p, 1.0);
            }
        }
        let nq = q.norm();
        if nq == 0.0 {
            break;
        }
        q /= nq;
        for v in vs.iter_mut() {
            let d = q.dot(v);
            v.axpy(-d, &q, 1.0);
        }
        out.push(q);
    }
    out
}

/// Canonical form of the skew tridiagonal matrix with superdiagonal `e`
/// (`S[k, k+1] = e[k]`, `S[k+1, k] = -e[k]`): an orthogonal `W` and values
/// `σ_1 ≥ … ≥ σ_n ≥ 0` with `W^T S W = ⊕ σ_j J`.
///
/// With `D = diag(i^k)`, `D* S D = i T` for the symmetric tridiagonal `T`
/// with zero diagonal and off-diagonal `e`, whose spectrum is `±σ_j`. An
/// eigenvector `x` of `T` for `σ > 0` splits into its even and odd
/// entries, which (with alternating signs) are the two columns of a block.
pub fn skew_tridiagonal_canonical(e: &[f64]) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let dim = e.len() + 1;
    if !dim.is_multiple_of(2) {
        return Err(Error::OddDimension(dim));
    }
    let n = dim / 2;
    if e.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("non-finite matrix entry".into()));
    }
    let mut t = DMatrix::zeros(dim, dim);
    for (k, &x) in e.iter().enumerate() {
        t[(k, k + 1)] = x;
        t[(k + 1, k)] = x;
    }
    let scale = e.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let tol = 64.0 * dim as f64 * f64::EPSILON * scale;
    let eig = t.symmetric_eigen();
    let order = descending(eig.eigenvalues.as_slice());
    let positive = order[..n].iter().take_while(|&&i| eig.eigenvalues[i] > tol).count();

    let split = |x: &nalgebra::DVector<f64>| {
        let mut p = nalgebra::DVector::zeros(dim);
        let mut q = nalgebra::DVector::zeros(dim);
        for k in 0..dim {
            let s = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p[k] = s * x[k];
            } else {
                q[k] = s * x[k];
            }
        }
        (p, q)
    };

    let mut w = DMatrix::zeros(dim, dim);
    let mut values = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(dim);
    for &i in &order[..positive] {
        let (p, q) = split(&eig.eigenvectors.column(i).into_owned());
        cols.push(p);
        cols.push(q);
        values.push(eig.eigenvalues[i]);
    }
    // a clustered spectrum leaves the pairs orthogonal only to O(ε/gap)
    let mut basis = orthonormal_span(cols, 2 * positive, false);
    if basis.len() != 2 * positive {
        return Err(Error::NumericalFailure("canonical basis lost rank".into()));
    }
    let zero = n - positive;
    if zero > 0 {
        let mut null = Vec::with_capacity(4 * zero);
        for &i in &order[positive..dim - positive] {
            let (p, q) = split(&eig.eigenvectors.column(i).into_owned());
            null.push(p);
            null.push(q);
        }
        // project out the nonzero blocks before completing the basis
        for v in null.iter_mut() {
            for b in &basis {
                let d = b.dot(v);
                v.axpy(-d, b, 1.0);
            }
        }
        let extra = orthonormal_span(null, 2 * zero, true);
        if extra.len() != 2 * zero {
            return Err(Error::NumericalFailure("null space lost rank".into()));
        }
        basis.extend(extra);
        values.extend(std::iter::repeat_n(0.0, zero));
    }
    for (j, b) in basis.iter().enumerate() {
        w.set_column(j, b);
    }
    Ok((w, values))
}
