//! Small dense helpers shared by the Gaussian and Fock code.

use nalgebra::{Complex, DMatrix, DVector};
#[cfg(not(feature = "lapack"))]
use nalgebra::SymmetricEigen;

pub type C64 = Complex<f64>;

/// Symplectic form ⊕ [[0, 1], [-1, 0]] for `n` modes in (x₁, p₁, …) ordering.
pub fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// Smallest eigenvalue of the Hermitian matrix `re + i·im`.
pub fn min_eigenvalue_hermitian(re: &DMatrix<f64>, im: &DMatrix<f64>) -> f64 {
    let h = DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]));
    eigvalsh(&h).first().copied().unwrap_or(f64::INFINITY)
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Rows/columns `2k, 2k+1` for every mode `k` in `modes`, in the given order.
pub fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect()
}

pub fn select_block(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn select_entries(v: &DVector<f64>, idx: &[usize]) -> DVector<f64> {
    DVector::from_fn(idx.len(), |i, _| v[idx[i]])
}

pub fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = DMatrix::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// Hermitian eigen-decomposition with eigenvalues sorted ascending.
#[cfg(feature = "lapack")]
pub fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let (values, vectors) = zheevd(m, true);
    (values, vectors.expect("vectors requested"))
}

/// Eigenvalues of a Hermitian matrix, ascending.
#[cfg(feature = "lapack")]
pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    zheevd(m, false).0
}

// LAPACK's divide-and-conquer driver. nalgebra's own Hermitian solver returns
// NaN on large sparse rank-deficient inputs such as truncated pure states.
#[cfg(feature = "lapack")]
fn zheevd(m: &DMatrix<C64>, vectors: bool) -> (Vec<f64>, Option<DMatrix<C64>>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), vectors.then(|| DMatrix::zeros(0, 0)));
    }
    let mut a = hermitize(m);
    let jobz = if vectors { b'V' } else { b'N' };
    let n32 = i32::try_from(n).expect("matrix fits LAPACK indexing");
    let mut w = vec![0.0; n];
    let (mut work, mut rwork, mut iwork) = (vec![C64::new(0.0, 0.0)], vec![0.0], vec![0i32]);
    let mut info = 0;
    // SAFETY: every buffer is sized by the workspace query that precedes the call.
    unsafe {
        lapack::zheevd(jobz, b'L', n32, a.as_mut_slice(), n32, &mut w, &mut work, -1, &mut rwork, -1, &mut iwork, -1, &mut info);
    }
    let (lwork, lrwork, liwork) = (work[0].re as usize, rwork[0] as usize, iwork[0] as usize);
    let (lwork, lrwork, liwork) = (lwork.max(1), lrwork.max(1), liwork.max(1));
    let mut work = vec![C64::new(0.0, 0.0); lwork];
    let mut rwork = vec![0.0; lrwork];
    let mut iwork = vec![0i32; liwork];
    unsafe {
        lapack::zheevd(
            jobz,
            b'L',
            n32,
            a.as_mut_slice(),
            n32,
            &mut w,
            &mut work,
            lwork as i32,
            &mut rwork,
            lrwork as i32,
            &mut iwork,
            liwork as i32,
            &mut info,
        );
    }
    assert_eq!(info, 0, "zheevd failed with info {info}");
    (w, vectors.then_some(a))
}

#[cfg(not(feature = "lapack"))]
pub fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

#[cfg(not(feature = "lapack"))]
pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitize(m)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_squares_to_minus_identity() {
        let o = omega(3);
        assert_eq!(&o * &o, -DMatrix::<f64>::identity(6, 6));
    }

    #[test]
    fn min_eigenvalue_of_vacuum_uncertainty_matrix_is_zero() {
        let v = DMatrix::<f64>::identity(2, 2);
        assert!(min_eigenvalue_hermitian(&v, &omega(1)).abs() < 1e-14);
    }

    #[test]
    fn hermitian_spectrum_via_embedding() {
        let i = C64::new(0.0, 1.0);
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(2.0, 0.0), i, -i, C64::new(2.0, 0.0)]);
        let ev = eigvalsh(&m);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
        let mut sparse = DMatrix::<C64>::zeros(30, 30);
        sparse[(0, 0)] = C64::new(1.0, 0.0);
        let ev = eigvalsh(&sparse);
        assert!(ev.iter().all(|v| v.is_finite()));
        assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
