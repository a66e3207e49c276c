//! Small dense linear-algebra helpers shared across modules.
//!
//! Everything here operates on `nalgebra` dynamic matrices; all spaces in
//! this crate have dimension at most 21, so dense factorizations are cheap.

use nalgebra::{DMatrix, DVector};

/// Gram-Schmidt with re-orthogonalization, with respect to the inner
/// product given by the SPD matrix `b`.  Vectors whose residual norm falls
/// below `tol` are dropped.  Returns an orthonormal list.
pub fn gram_schmidt(vectors: &[DVector<f64>], b: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes keep orthogonality near machine precision
        for _ in 0..2 {
            for u in &basis {
                let c = ip(b, u, &w);
                w -= u * c;
            }
        }
        let n = ip(b, &w, &w).sqrt();
        if n > tol {
            basis.push(w / n);
        }
    }
    basis
}

/// Inner product x^T B y.
pub fn ip(b: &DMatrix<f64>, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (x.transpose() * b * y)[(0, 0)]
}

/// Orthonormal basis (w.r.t. `b`) of the null space of `a`, using SVD with
/// relative threshold `tol`.  The null space is computed in standard
/// coordinates and then re-orthonormalized against `b`.
pub fn null_space(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let cols = standard_null_space(a, tol);
    gram_schmidt(&cols, b, 1e-10)
}

/// Null space of `a` w.r.t. the standard dot product, via the spectral
/// decomposition of `a^T a` (full-width, unlike a thin SVD).
pub fn standard_null_space(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let ata = a.transpose() * a;
    let n = ata.nrows() as f64;
    let eig = ata.symmetric_eigen();
    let emax = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    // never drop below the eigensolver noise floor (~eps * |A^T A|)
    let floor = 64.0 * f64::EPSILON * n * emax.max(1.0);
    let thresh = ((tol * tol) * emax.max(1.0)).max(floor);
    let mut out = Vec::new();
    for (i, &e) in eig.eigenvalues.iter().enumerate() {
        if e <= thresh {
            out.push(eig.eigenvectors.column(i).clone_owned());
        }
    }
    out
}

/// Smallest singular value of `a`.
pub fn smallest_singular_value(a: &DMatrix<f64>) -> f64 {
    let svd = a.clone().svd(false, false);
    svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Solve the SPD system `g x = r` by Cholesky factorization.
pub fn spd_solve(g: &DMatrix<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    g.clone().cholesky().map(|ch| ch.solve(r))
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_orthonormal_wrt_b() {
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0, 0.5]));
        let vs = vec![
            DVector::from_vec(vec![1.0, 1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 1.0]),
            DVector::from_vec(vec![1.0, 0.0, 1.0]),
        ];
        let basis = gram_schmidt(&vs, &b, 1e-12);
        assert_eq!(basis.len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip(&b, &basis[i], &basis[j]) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let b = DMatrix::identity(3, 3);
        let ns = null_space(&a, &b, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((v[0] + v[1] + v[2]).abs() < 1e-12);
        }
    }
}
