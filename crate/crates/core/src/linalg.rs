//! Dense complex linear algebra helpers on top of LAPACK/BLAS.

use blas::zgemm;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO, SVD};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = Array2<C64>;

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn cone() -> C64 {
    C64::new(1.0, 0.0)
}

/// Matrix product via BLAS zgemm. Inputs must be square or compatible.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let (m, k) = a.dim();
    let (k2, n) = b.dim();
    assert_eq!(k, k2, "matmul dimension mismatch");
    // zgemm is column-major; compute C^T = B^T A^T by feeding row-major
    // buffers straight through with swapped operands.
    let a_std = a.as_standard_layout();
    let b_std = b.as_standard_layout();
    let mut c = vec![czero(); m * n];
    unsafe {
        zgemm(
            b'N',
            b'N',
            n as i32,
            m as i32,
            k as i32,
            cone(),
            b_std.as_slice().unwrap(),
            n as i32,
            a_std.as_slice().unwrap(),
            k as i32,
            czero(),
            &mut c,
            n as i32,
        );
    }
    Array2::from_shape_vec((m, n), c).unwrap()
}

/// Conjugate transpose.
pub fn adjoint(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (am, an) = a.dim();
    let (bm, bn) = b.dim();
    let mut out = Array2::from_elem((am * bm, an * bn), czero());
    for i in 0..am {
        for j in 0..an {
            let aij = a[[i, j]];
            if aij == czero() {
                continue;
            }
            for p in 0..bm {
                for q in 0..bn {
                    out[[i * bm + p, j * bn + q]] = aij * b[[p, q]];
                }
            }
        }
    }
    out
}

/// All singular values, ascending, via the Hermitian eigenproblem of A*A.
pub fn singular_values(a: &CMat) -> Array1<f64> {
    let gram = matmul(&adjoint(a), a);
    let (vals, _) = gram.eigh(UPLO::Lower).expect("eigh failed");
    vals.mapv(|v| v.max(0.0).sqrt())
}

/// Smallest singular value of a square matrix.
pub fn min_singular(a: &CMat) -> f64 {
    if a.nrows() == 0 {
        return f64::INFINITY;
    }
    let s = singular_values(a);
    s.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Full SVD: (u, sigma descending, v_adjoint).
pub fn svd_full(a: &CMat) -> (CMat, Array1<f64>, CMat) {
    let (u, s, vt) = a.svd(true, true).expect("svd failed");
    (u.unwrap(), s, vt.unwrap())
}
