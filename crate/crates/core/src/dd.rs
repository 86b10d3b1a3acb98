//! Double-double arithmetic (an unevaluated sum `hi + lo` of two f64 values,
//! roughly 106 bits of significand) and the handful of dense kernels the
//! extended-precision pipeline needs.

use std::cmp::Ordering;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline(always)]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline(always)]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline(always)]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    #[inline(always)]
    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let xx = Dd::from_f64(x).sqr();
        let corr = (self - xx).hi / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, corr);
        Dd { hi, lo }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline(always)]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline(always)]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline(always)]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline(always)]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl AddAssign for Dd {
    #[inline(always)]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    #[inline(always)]
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

/// Row-major dense matrix of double-doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct DdMat {
    rows: usize,
    cols: usize,
    data: Vec<Dd>,
}

impl DdMat {
    pub fn zeros(rows: usize, cols: usize) -> DdMat {
        DdMat { rows, cols, data: vec![Dd::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> DdMat {
        let mut m = DdMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Dd::ONE;
        }
        m
    }

    pub fn from_f64(m: &nalgebra::DMatrix<f64>) -> DdMat {
        let mut out = DdMat::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = Dd::from_f64(m[(i, j)]);
            }
        }
        out
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Dd] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DdMat {
        let mut t = DdMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Copy of the block starting at (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> DdMat {
        let mut b = DdMat::zeros(rows, cols);
        for i in 0..rows {
            b.data[i * cols..(i + 1) * cols]
                .copy_from_slice(&self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols]);
        }
        b
    }

    pub fn matmul(&self, b: &DdMat) -> DdMat {
        assert_eq!(self.cols, b.rows);
        let mut c = DdMat::zeros(self.rows, b.cols);
        let n = b.cols;
        for i in 0..self.rows {
            let crow = &mut c.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.hi == 0.0 {
                    continue;
                }
                let brow = &b.data[k * n..(k + 1) * n];
                for (cij, &bkj) in crow.iter_mut().zip(brow) {
                    *cij += a * bkj;
                }
            }
        }
        c
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x.hi * x.hi).sum()
    }

    pub fn scale(&mut self, s: f64) {
        for x in &mut self.data {
            *x = x.mul_f64(s);
        }
    }

    pub fn max_abs_diff(&self, other: &DdMat) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).to_f64().abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DdMat {
    type Output = Dd;
    #[inline(always)]
    fn index(&self, (i, j): (usize, usize)) -> &Dd {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DdMat {
    #[inline(always)]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Dd {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
pub struct DdLu {
    lu: DdMat,
    perm: Vec<usize>,
    swaps: usize,
}

impl DdLu {
    pub fn new(mut a: DdMat) -> Result<DdLu> {
        let n = a.rows;
        if n != a.cols {
            return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].hi.abs();
            for i in k + 1..n {
                let v = a[(i, k)].hi.abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::NumericalFailure(format!("singular pivot at column {k}")));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = a[(k, k)];
            let inv = Dd::ONE / pivot;
            let (top, rest) = a.data.split_at_mut((k + 1) * n);
            let prow = &top[k * n + k + 1..k * n + n];
            for i in 0..n - k - 1 {
                let row = &mut rest[i * n..(i + 1) * n];
                let l = row[k] * inv;
                row[k] = l;
                if l.hi == 0.0 {
                    continue;
                }
                for (x, &u) in row[k + 1..].iter_mut().zip(prow) {
                    *x -= l * u;
                }
            }
        }
        Ok(DdLu { lu: a, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Determinant scaled by `factor^n`, i.e. `det(A * factor)`.
    pub fn det_scaled(&self, factor: f64) -> Dd {
        let mut d = if self.swaps.is_multiple_of(2) { Dd::ONE } else { -Dd::ONE };
        for i in 0..self.lu.rows {
            d = d * self.lu[(i, i)].mul_f64(factor);
        }
        d
    }

    /// Solves `A X = B` for a block of right-hand sides.
    pub fn solve(&self, b: &DdMat) -> DdMat {
        let n = self.lu.rows;
        assert_eq!(b.rows, n);
        let m = b.cols;
        let mut x = DdMat::zeros(n, m);
        for i in 0..n {
            x.data[i * m..(i + 1) * m].copy_from_slice(b.row(self.perm[i]));
        }
        for i in 0..n {
            let (done, cur) = x.data.split_at_mut(i * m);
            let cur = &mut cur[..m];
            for k in 0..i {
                let l = self.lu[(i, k)];
                if l.hi == 0.0 {
                    continue;
                }
                for (c, &xk) in cur.iter_mut().zip(&done[k * m..(k + 1) * m]) {
                    *c -= l * xk;
                }
            }
        }
        for i in (0..n).rev() {
            let (head, tail) = x.data.split_at_mut((i + 1) * m);
            let cur = &mut head[i * m..];
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                if u.hi == 0.0 {
                    continue;
                }
                let xk = &tail[(k - i - 1) * m..(k - i) * m];
                for (c, &v) in cur.iter_mut().zip(xk) {
                    *c -= u * v;
                }
            }
            let inv = Dd::ONE / self.lu[(i, i)];
            for c in cur.iter_mut() {
                *c = *c * inv;
            }
        }
        x
    }

    pub fn inverse(&self) -> DdMat {
        self.solve(&DdMat::identity(self.lu.rows))
    }
}

/// Singular values of `a` by one-sided Jacobi, preconditioned with the f64
/// eigenvectors of `a^T a` so that only a few sweeps are needed.
pub fn singular_values(a: &DdMat) -> Result<Vec<Dd>> {
    let (m, n) = (a.rows, a.cols);
    if m == 0 || n == 0 {
        return Ok(Vec::new());
    }
    let af = a.to_f64();
    if af.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("non-finite matrix entry".into()));
    }
    let mut v = DdMat::from_f64(&(af.transpose() * &af).symmetric_eigen().eigenvectors);
    // the f64 vectors are orthonormal only to ~1e-16; polish so that the
    // transformation preserves singular values to double-double accuracy
    for _ in 0..4 {
        let mut t = v.transpose().matmul(&v);
        let mut defect = 0.0f64;
        for i in 0..t.rows {
            for j in 0..t.cols {
                let e = if i == j { t[(i, j)] - Dd::ONE } else { t[(i, j)] };
                defect = defect.max(e.to_f64().abs());
                t[(i, j)] = if i == j { Dd::from_f64(3.0) - t[(i, j)] } else { -t[(i, j)] };
            }
        }
        if defect < 1e-31 {
            break;
        }
        v = v.matmul(&t);
        v.scale(0.5);
    }
    // columns of w are the (nearly orthogonal) images a v_j; store transposed
    let mut w = a.matmul(&v).transpose();
    let k = w.rows;
    let len = w.cols;
    for _sweep in 0..30 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (mut alpha, mut beta, mut gamma) = (Dd::ZERO, Dd::ZERO, Dd::ZERO);
                {
                    let wp = w.row(p);
                    let wq = w.row(q);
                    for t in 0..len {
                        alpha += wp[t].sqr();
                        beta += wq[t].sqr();
                        gamma += wp[t] * wq[t];
                    }
                }
                // purely relative test: an absolute floor would leave tiny
                // columns contaminated by larger ones
                if gamma.hi == 0.0 || gamma.hi.abs() <= 1e-28 * (alpha.hi * beta.hi).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / gamma.mul_f64(2.0);
                let sgn = if zeta.hi >= 0.0 { 1.0 } else { -1.0 };
                let t = Dd::from_f64(sgn) / (zeta.abs() + (Dd::ONE + zeta.sqr()).sqrt());
                let c = Dd::ONE / (Dd::ONE + t.sqr()).sqrt();
                let s = c * t;
                for idx in 0..len {
                    let x = w[(p, idx)];
                    let y = w[(q, idx)];
                    w[(p, idx)] = c * x - s * y;
                    w[(q, idx)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            let mut out: Vec<Dd> =
                (0..k).map(|p| w.row(p).iter().fold(Dd::ZERO, |acc, x| acc + x.sqr()).sqrt()).collect();
            out.sort_by(|x, y| y.partial_cmp(x).unwrap_or(Ordering::Equal));
            return Ok(out);
        }
    }
    Err(Error::NumericalFailure("one-sided Jacobi did not converge".into()))
}
