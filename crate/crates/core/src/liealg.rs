//! Compact real form of a simple Lie algebra, realized from its root system
//! through a Chevalley basis.
//!
//! The basis is `t_1..t_r` (Cartan, from the simple coroots) followed by the
//! pairs `u_alpha = x_alpha - x_{-alpha}`, `v_alpha = i(x_alpha + x_{-alpha})`
//! for each positive root.  The bi-invariant inner product is the negative
//! Killing form, scaled so that long roots have squared length 2; this
//! convention is recorded in every report.

use crate::chevalley::{self, BasisLabel, Tensor3};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rootsys::RootSystem;
use nalgebra::{DMatrix, DVector};

/// Element of the algebra: coordinates in the compact basis.
pub type AlgebraVector = DVector<f64>;

/// Inner-product normalization note embedded in reports.
pub const INNER_PRODUCT_CONVENTION: &str =
    "negative Killing form scaled so long roots have squared length 2";

#[derive(Debug, Clone)]
pub struct CompactLieAlgebra {
    pub root_system: RootSystem,
    pub dim: usize,
    pub rank: usize,
    pub labels: Vec<BasisLabel>,
    pub constants: Tensor3,
    /// Bi-invariant inner product matrix.
    pub inner_product: DMatrix<f64>,
    /// Positive roots in ambient coordinates, height order.
    pub positive_roots: Vec<DVector<f64>>,
    /// Root vectors in t: V_alpha with <V_alpha, h> = alpha(h).
    pub root_vectors: Vec<AlgebraVector>,
    /// Linear map from ambient root coordinates into t (algebra coords).
    ambient_to_t: DMatrix<f64>,
    /// Precomputed ad matrices of the basis vectors.
    ad_basis: Vec<DMatrix<f64>>,
}

/// Construct the compact algebra from a root system.
pub fn build_compact_algebra(rs: &RootSystem) -> Result<CompactLieAlgebra> {
    let out = chevalley::compact_form(rs)?;
    let dim = out.dim;
    let rank = out.rank;

    let mut ad_basis = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            for k in 0..dim {
                m[(k, j)] = out.constants.get(i, j, k);
            }
        }
        ad_basis.push(m);
    }

    // Killing form kappa_ij = tr(ad_i ad_j); negative definite here.
    let mut killing = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = (&ad_basis[i] * &ad_basis[j]).trace();
            killing[(i, j)] = v;
            killing[(j, i)] = v;
        }
    }

    // Root vectors w.r.t. -kappa, then fix the global scale.
    let neg_k_t = -killing.view((0, 0), (rank, rank)).clone_owned();
    let kt_inv = neg_k_t
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InconsistentRootData("degenerate Cartan Killing block".into()))?;
    let pairings: Vec<DVector<f64>> = out
        .positive_roots
        .iter()
        .map(|alpha| {
            DVector::from_iterator(
                rank,
                out.simple_roots
                    .iter()
                    .map(|s| 2.0 * alpha.dot(s) / s.dot(s)),
            )
        })
        .collect();
    let mut qmax = 0.0_f64;
    for a in &pairings {
        let q = (a.transpose() * &kt_inv * a)[(0, 0)];
        qmax = qmax.max(q);
    }
    let lambda = qmax / 2.0;
    let inner_product = &killing * (-lambda);

    let mut root_vectors = Vec::with_capacity(out.positive_roots.len());
    for a in &pairings {
        let coeffs = &kt_inv * a / lambda;
        let mut v = DVector::zeros(dim);
        for i in 0..rank {
            v[i] = coeffs[i];
        }
        root_vectors.push(v);
    }

    // Least-squares map from ambient coordinates onto the root vectors.
    let amb = rs.ambient_dim;
    let npos = out.positive_roots.len();
    let mut a_mat = DMatrix::zeros(amb, npos);
    let mut v_mat = DMatrix::zeros(dim, npos);
    for (k, alpha) in out.positive_roots.iter().enumerate() {
        a_mat.set_column(k, alpha);
        v_mat.set_column(k, &root_vectors[k]);
    }
    let a_pinv = a_mat
        .clone()
        .svd(true, true)
        .pseudo_inverse(1e-10)
        .map_err(|e| Error::InconsistentRootData(e.to_string()))?;
    let ambient_to_t = v_mat * a_pinv;

    let alg = CompactLieAlgebra {
        root_system: rs.clone(),
        dim,
        rank,
        labels: out.labels,
        constants: out.constants,
        inner_product,
        positive_roots: out.positive_roots,
        root_vectors,
        ambient_to_t,
        ad_basis,
    };

    let jr = alg.jacobi_residual();
    if jr > 1e-10 {
        return Err(Error::InconsistentRootData(format!(
            "Jacobi residual {jr:.3e} above tolerance"
        )));
    }
    Ok(alg)
}

impl CompactLieAlgebra {
    pub fn build(rs: &RootSystem) -> Result<Self> {
        build_compact_algebra(rs)
    }

    fn check_dim(&self, x: &AlgebraVector) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Lie bracket from the structure constants.
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub fn bracket_unchecked(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            let xi = x[i];
            if xi != 0.0 {
                out += &self.ad_basis[i] * y * xi;
            }
        }
        out
    }

    /// Bi-invariant inner product.
    pub fn inner(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.inner_unchecked(x, y))
    }

    pub fn inner_unchecked(&self, x: &AlgebraVector, y: &AlgebraVector) -> f64 {
        linalg::ip(&self.inner_product, x, y)
    }

    pub fn norm(&self, x: &AlgebraVector) -> f64 {
        self.inner_unchecked(x, x).sqrt()
    }

    /// ad(x) as a matrix.
    pub fn ad(&self, x: &AlgebraVector) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            if x[i] != 0.0 {
                m += &self.ad_basis[i] * x[i];
            }
        }
        m
    }

    pub fn basis_vector(&self, i: usize) -> AlgebraVector {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    /// Indices (u, v) of the root plane g_{+-alpha} for positive root `k`.
    pub fn plane_indices(&self, k: usize) -> (usize, usize) {
        (self.rank + 2 * k, self.rank + 2 * k + 1)
    }

    /// Index of the positive root matching `alpha` (up to sign) in ambient
    /// coordinates.
    pub fn positive_root_index(&self, alpha: &DVector<f64>) -> Option<usize> {
        self.positive_roots
            .iter()
            .position(|r| (r - alpha).amax() < 1e-9 || (r + alpha).amax() < 1e-9)
    }

    /// Map a vector in ambient root coordinates into t.
    pub fn torus_vector(&self, ambient: &DVector<f64>) -> Result<AlgebraVector> {
        if ambient.len() != self.root_system.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.root_system.ambient_dim,
                got: ambient.len(),
            });
        }
        Ok(&self.ambient_to_t * ambient)
    }

    /// Maximal Jacobi residual over all basis triples.
    /// Ambient coordinates of a Cartan-supported vector, if one matches:
    /// the least-squares preimage under the ambient-to-t map, accepted only
    /// when it reproduces the input.
    pub fn ambient_of_torus(&self, t: &AlgebraVector) -> Option<DVector<f64>> {
        let svd = self.ambient_to_t.clone().svd(true, true);
        let a = svd.solve(t, 1e-12).ok()?;
        let back = &self.ambient_to_t * &a;
        if self.norm(&(&back - t)) < 1e-8 * self.norm(t).max(1.0) {
            Some(a)
        } else {
            None
        }
    }

    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in (i + 1)..d {
                let cij = self.ad_basis[i].column(j).clone_owned();
                for k in (j + 1)..d {
                    let cjk = self.ad_basis[j].column(k).clone_owned();
                    let cik = self.ad_basis[i].column(k).clone_owned();
                    let r = &self.ad_basis[i] * &cjk - &self.ad_basis[j] * &cik
                        + &self.ad_basis[k] * &cij;
                    worst = worst.max(r.amax());
                }
            }
        }
        worst
    }

    /// Maximal ad-invariance residual |<[x,y],z> + <y,[x,z]>| over the basis.
    pub fn ad_invariance_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for ad in &self.ad_basis {
            let c = &self.inner_product * ad;
            let r = (&c + c.transpose()).amax();
            worst = worst.max(r);
        }
        worst
    }

    /// Validate against the explicit skew-Hermitian / quaternionic matrix
    /// realization (families A and C only).
    pub fn classical_matrix_check(&self) -> Result<crate::matrixreal::MatrixCheckReport> {
        crate::matrixreal::classical_matrix_check(self)
    }
}
