//! Dense complex linear algebra helpers: nalgebra storage, faer decompositions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative rank tolerance used by the structural operations.
pub const RANK_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Thin SVD with singular values in descending order.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

pub fn svd(m: &CMat) -> Svd {
    let (r, cols) = m.shape();
    let k = r.min(cols);
    if k == 0 {
        return Svd {
            u: zeros(r, 0),
            s: vec![],
            v: zeros(cols, 0),
        };
    }
    let d = to_faer(m).thin_svd().expect("svd converged");
    let s = d.S().column_vector();
    Svd {
        u: from_faer(d.U()),
        s: (0..k).map(|j| s[j].re).collect(),
        v: from_faer(d.V()),
    }
}

fn to_faer(m: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Spectral norm.
pub fn norm2(m: &CMat) -> f64 {
    svd(m).s.first().copied().unwrap_or(0.0)
}

/// Smallest singular value of a square matrix (0 for an empty one is never reported).
pub fn sigma_min(m: &CMat) -> f64 {
    svd(m).s.last().copied().unwrap_or(f64::INFINITY)
}

fn threshold(m: &CMat, smax: f64) -> f64 {
    RANK_TOL * (m.nrows().max(m.ncols()).max(1) as f64) * smax.max(1.0)
}

/// Orthonormal basis of the column span; singular values at or below `thresh` are discarded.
pub fn orth_with(m: &CMat, thresh: f64) -> CMat {
    let d = svd(m);
    let r = d.s.iter().filter(|&&s| s > thresh).count();
    d.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the column span with the default rank threshold.
pub fn orth(m: &CMat) -> CMat {
    let d = svd(m);
    let t = threshold(m, d.s.first().copied().unwrap_or(0.0));
    let r = d.s.iter().filter(|&&s| s > t).count();
    d.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the kernel; singular values at or below `thresh` count as zero.
pub fn null_space_with(m: &CMat, thresh: f64) -> CMat {
    let (r, cols) = m.shape();
    if cols == 0 {
        return zeros(0, 0);
    }
    if r == 0 {
        return eye(cols);
    }
    let sq = if r < cols {
        let mut p = zeros(cols, cols);
        p.rows_mut(0, r).copy_from(m);
        p
    } else {
        m.clone()
    };
    let d = svd(&sq);
    let idx: Vec<usize> = (0..cols).filter(|&j| d.s[j] <= thresh).collect();
    let mut out = zeros(cols, idx.len());
    for (k, &j) in idx.iter().enumerate() {
        out.set_column(k, &d.v.column(j));
    }
    out
}

/// Orthonormal basis of the kernel with the default rank threshold.
pub fn null_space(m: &CMat) -> CMat {
    let smax = if m.nrows() == 0 || m.ncols() == 0 {
        0.0
    } else {
        norm2(m)
    };
    null_space_with(m, threshold(m, smax))
}

/// Orthonormal basis of the orthogonal complement of the span of an orthonormal `q`.
pub fn complement(q: &CMat) -> CMat {
    let n = q.nrows();
    if q.ncols() == 0 {
        return eye(n);
    }
    null_space_with(&q.adjoint(), 0.5)
}

/// Horizontal concatenation of blocks with equal row counts.
pub fn hstack(blocks: &[&CMat]) -> CMat {
    let r = blocks.first().map_or(0, |b| b.nrows());
    let c: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(r, c);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.nrows(), r, "hstack row mismatch");
        out.columns_mut(off, b.ncols()).copy_from(*b);
        off += b.ncols();
    }
    out
}

/// Vertical concatenation of blocks with equal column counts.
pub fn vstack(blocks: &[&CMat]) -> CMat {
    let c = blocks.first().map_or(0, |b| b.ncols());
    let r: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(r, c);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.ncols(), c, "vstack column mismatch");
        out.rows_mut(off, b.nrows()).copy_from(*b);
        off += b.nrows();
    }
    out
}

/// Block diagonal matrix.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// 2x2 block matrix from four blocks.
pub fn block2(a: &CMat, b: &CMat, cc: &CMat, d: &CMat) -> CMat {
    vstack(&[&hstack(&[a, b]), &hstack(&[cc, d])])
}

pub fn rows(m: &CMat, start: usize, count: usize) -> CMat {
    m.rows(start, count).into_owned()
}

/// Solves `a x = b` for square nonsingular `a`; `None` when `a` is numerically singular.
pub fn solve(a: &CMat, b: &CMat) -> Option<CMat> {
    let n = a.nrows();
    if n != a.ncols() || b.nrows() != n {
        return None;
    }
    if n == 0 {
        return Some(zeros(0, b.ncols()));
    }
    let d = svd(a);
    let smax = d.s[0];
    let smin = d.s[n - 1];
    if smin <= 1e-13 * smax.max(f64::MIN_POSITIVE) * n as f64 || smin == 0.0 {
        return None;
    }
    a.clone().lu().solve(b)
}

pub fn inverse(a: &CMat) -> Option<CMat> {
    solve(a, &eye(a.nrows()))
}

/// Moore-Penrose pseudo-inverse with the given singular value cutoff.
pub fn pinv_with(a: &CMat, thresh: f64) -> CMat {
    let d = svd(a);
    let mut out = zeros(a.ncols(), a.nrows());
    for (k, &s) in d.s.iter().enumerate() {
        if s > thresh {
            out += d.v.column(k) * d.u.column(k).adjoint() / c(s, 0.0);
        }
    }
    out
}

/// Hermitian part `(a + a*)/2`.
pub fn re_part(a: &CMat) -> CMat {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// Skew part `(a - a*)/(2i)`.
pub fn im_part(a: &CMat) -> CMat {
    (a - a.adjoint()) * c(0.0, -0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn herm_eigvals(h: &CMat) -> Vec<f64> {
    if h.nrows() == 0 {
        return vec![];
    }
    let mut v = to_faer(&re_part(h))
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("eigenvalues converged");
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Residual of `b` outside the span of an orthonormal `q`, in spectral norm.
pub fn residual_outside(q: &CMat, b: &CMat) -> f64 {
    if b.ncols() == 0 {
        return 0.0;
    }
    let r = b - q * (q.adjoint() * b);
    norm2(&r)
}

/// Scalar multiple of a matrix.
pub fn scale(m: &CMat, z: C64) -> CMat {
    m * z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = CMat::from_row_slice(1, 3, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let n = null_space(&m);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&m * &n)) < 1e-14);
    }

    #[test]
    fn complement_dimension() {
        let q = orth(&CMat::from_row_slice(3, 1, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]));
        let p = complement(&q);
        assert_eq!(p.ncols(), 2);
        assert!(max_abs(&(q.adjoint() * &p)) < 1e-14);
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(orth(&zeros(3, 0)).shape(), (3, 0));
        assert_eq!(null_space(&zeros(0, 2)).ncols(), 2);
        assert_eq!(complement(&zeros(2, 0)).ncols(), 2);
        assert_eq!(orth(&zeros(2, 2)).ncols(), 0);
    }

    #[test]
    fn skew_part_of_scalar() {
        let a = CMat::from_element(1, 1, c(2.0, 3.0));
        assert!((im_part(&a)[(0, 0)] - c(3.0, 0.0)).norm() < 1e-15);
    }
}
