//! Orthogonal reductive decomposition `g = h + m` and the isotypic splitting
//! of `m` under the isotropy action.
//!
//! The splitting algorithm builds the commutant of `ad(h)|_m`, splits `m` by
//! the eigenspaces of a random symmetric commutant element, and then merges
//! blocks that carry equivalent representations (detected through nonzero
//! intertwiners).  The paper-style case decompositions are reproduced by
//! matching the solver output against declarative fixtures.

use crate::error::{Error, Result};
use crate::liealg::{AlgebraVector, CompactLieAlgebra};
use crate::linalg;
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::ops::Range;
use std::sync::Arc;

const CLOSURE_TOL: f64 = 1e-10;
const EIGEN_MERGE_TOL: f64 = 1e-8;
const EIGEN_GAP_TOL: f64 = 1e-6;
const INTERTWINER_TOL: f64 = 1e-6;

/// Description of the isotropy subalgebra h.
#[derive(Debug, Clone, Default)]
pub struct SubalgebraSpec {
    /// Torus generators, as vectors in ambient root coordinates.
    pub torus_part: Vec<DVector<f64>>,
    /// Roots alpha whose planes g_{+-alpha} lie in h (ambient coordinates).
    pub root_part: Vec<DVector<f64>>,
    /// Extra generators in algebra coordinates, for embeddings not aligned
    /// to root planes.
    pub extra_generators: Vec<AlgebraVector>,
}

#[derive(Debug, Clone)]
pub struct ReductiveSplit {
    pub algebra: Arc<CompactLieAlgebra>,
    /// Orthonormal basis of h.
    pub h_basis: Vec<AlgebraVector>,
    /// Orthonormal basis of m, grouped by summand.
    pub m_basis: Vec<AlgebraVector>,
    /// Index ranges into `m_basis` defining m_1, ..., m_s.
    pub summands: Vec<Range<usize>>,
    /// dim(t ∩ m) for the Cartan t of the construction.
    pub t_m_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizerReport {
    pub ms_dim: usize,
    pub centralizer_dim: usize,
    pub centralizer_matches_ms: bool,
    /// max residual of [m_s, m_i] outside m_i, per summand i < s
    pub residuals: Vec<f64>,
    pub ok: bool,
}

impl SubalgebraSpec {
    /// Generators in algebra coordinates.
    pub fn generators(&self, g: &CompactLieAlgebra) -> Result<Vec<AlgebraVector>> {
        let mut out = Vec::new();
        for t in &self.torus_part {
            out.push(g.torus_vector(t)?);
        }
        for alpha in &self.root_part {
            let k = g.positive_root_index(alpha).ok_or_else(|| {
                Error::InvalidArgument(format!("root part entry {alpha:?} is not a root"))
            })?;
            let (u, v) = g.plane_indices(k);
            out.push(g.basis_vector(u));
            out.push(g.basis_vector(v));
        }
        for x in &self.extra_generators {
            out.push(x.clone());
        }
        Ok(out)
    }
}

/// Compute the orthogonal reductive split of g along h, with isotypic
/// summands of the isotropy action, in canonical order.
pub fn reductive_split(g: Arc<CompactLieAlgebra>, spec: &SubalgebraSpec) -> Result<ReductiveSplit> {
    let b = &g.inner_product;
    let gens = spec.generators(&g)?;
    let h_basis = linalg::gram_schmidt(&gens, b, 1e-9);
    let nh = h_basis.len();

    // h must be closed under bracket
    let mut closure = 0.0_f64;
    for x in &h_basis {
        for y in &h_basis {
            let br = g.bracket_unchecked(x, y);
            let mut res = br.clone();
            for u in &h_basis {
                let c = linalg::ip(b, u, &res);
                res -= u * c;
            }
            closure = closure.max(linalg::ip(b, &res, &res).sqrt());
        }
    }
    if closure > CLOSURE_TOL {
        return Err(Error::NotSubalgebra { residual: closure });
    }

    // complete to an orthonormal basis; the tail spans m
    let mut all = h_basis.clone();
    for i in 0..g.dim {
        all.push(g.basis_vector(i));
    }
    let full = linalg::gram_schmidt(&all, b, 1e-8);
    if full.len() != g.dim {
        return Err(Error::InconsistentRootData(
            "basis completion lost dimensions".into(),
        ));
    }
    let m_raw: Vec<AlgebraVector> = full[nh..].to_vec();
    let dm = m_raw.len();

    // ad(h) restricted to m, and the reductivity check
    let mut ads: Vec<DMatrix<f64>> = Vec::with_capacity(nh);
    for x in &h_basis {
        let mut a = DMatrix::zeros(dm, dm);
        for j in 0..dm {
            let br = g.bracket_unchecked(x, &m_raw[j]);
            let mut h_part = 0.0_f64;
            for u in &h_basis {
                h_part = h_part.max(linalg::ip(b, u, &br).abs());
            }
            if h_part > CLOSURE_TOL {
                return Err(Error::InconsistentRootData(format!(
                    "[h, m] leaks into h with residual {h_part:.3e}"
                )));
            }
            for i in 0..dm {
                a[(i, j)] = linalg::ip(b, &m_raw[i], &br);
            }
        }
        ads.push(a);
    }

    // commutant of {ad(x)|_m} as the null space of a linear system
    let n2 = dm * dm;
    let mut sys = DMatrix::zeros(nh * n2, n2);
    for (t, a) in ads.iter().enumerate() {
        for i in 0..dm {
            for j in 0..dm {
                let row = t * n2 + i * dm + j;
                for k in 0..dm {
                    // (A X - X A)_{ij}
                    sys[(row, k * dm + j)] += a[(i, k)];
                    sys[(row, i * dm + k)] -= a[(k, j)];
                }
            }
        }
    }
    let comm_flat = if nh == 0 {
        // H trivial: the commutant is everything; treat m as one block per
        // eigenspace of a random symmetric matrix, i.e. all of m merges.
        vec![]
    } else {
        linalg::standard_null_space(&sys, 1e-8)
    };
    let commutant: Vec<DMatrix<f64>> = comm_flat
        .iter()
        .map(|v| DMatrix::from_fn(dm, dm, |i, j| v[i * dm + j]))
        .collect();

    // split by eigenspaces of a random symmetric commutant element
    let blocks: Vec<DMatrix<f64>> = if commutant.is_empty() {
        vec![DMatrix::identity(dm, dm)]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA5E);
        let mut s = DMatrix::zeros(dm, dm);
        for x in &commutant {
            let gcoef: f64 = rng.random::<f64>() - 0.5;
            s += (x + x.transpose()) * (0.5 * gcoef);
        }
        let eig = s.symmetric_eigen();
        let mut order: Vec<usize> = (0..dm).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            let ev = eig.eigenvalues[i];
            match clusters.last_mut() {
                Some(c) if (ev - eig.eigenvalues[*c.last().unwrap()]).abs() < EIGEN_MERGE_TOL => {
                    c.push(i)
                }
                _ => clusters.push(vec![i]),
            }
        }
        // ambiguous if distinct clusters sit closer than the gap tolerance
        for w in clusters.windows(2) {
            let gap = eig.eigenvalues[w[1][0]] - eig.eigenvalues[*w[0].last().unwrap()];
            if gap < EIGEN_GAP_TOL {
                return Err(Error::AmbiguousEigenSplit { gap });
            }
        }
        clusters
            .iter()
            .map(|c| {
                let mut q = DMatrix::zeros(dm, c.len());
                for (col, &i) in c.iter().enumerate() {
                    q.set_column(col, &eig.eigenvectors.column(i));
                }
                q
            })
            .collect()
    };

    // merge blocks carrying equivalent representations
    let nb = blocks.len();
    let mut parent: Vec<usize> = (0..nb).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..nb {
        for j in (i + 1)..nb {
            if has_intertwiner(&ads, &blocks[i], &blocks[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; nb];
    for i in 0..nb {
        let r = find(&mut parent, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[r]].push(i);
    }

    // summand bases in algebra coordinates
    let mut summand_vecs: Vec<Vec<AlgebraVector>> = Vec::new();
    for grp in &groups {
        let mut vs = Vec::new();
        for &bi in grp {
            let q = &blocks[bi];
            for col in 0..q.ncols() {
                let mut v = DVector::zeros(g.dim);
                for row in 0..dm {
                    v += &m_raw[row] * q[(row, col)];
                }
                vs.push(v);
            }
        }
        summand_vecs.push(linalg::gram_schmidt(&vs, b, 1e-9));
    }

    // canonical order: (dim, root-content key); a 1-dim summand inside the
    // centralizer of h is forced last, matching the m_s convention
    let cz = centralizer_in_m(&g, &h_basis, &m_raw);
    let mut keyed: Vec<(bool, usize, Vec<usize>, usize)> = Vec::new();
    for (idx, vs) in summand_vecs.iter().enumerate() {
        let central = vs.len() == 1 && in_span(&g, &cz, &vs[0]);
        keyed.push((central, vs.len(), root_content(&g, vs), idx));
    }
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
    });

    let mut m_basis = Vec::new();
    let mut summands = Vec::new();
    for (_, _, _, idx) in &keyed {
        let start = m_basis.len();
        m_basis.extend(summand_vecs[*idx].iter().cloned());
        summands.push(start..m_basis.len());
    }
    if m_basis.len() != g.dim - nh {
        return Err(Error::InconsistentRootData(
            "summand dimensions do not sum to dim m".into(),
        ));
    }

    // dim(t ∩ m)
    let t_m_dim = {
        let mut proj = DMatrix::zeros(m_basis.len(), g.rank);
        for i in 0..g.rank {
            let t = g.basis_vector(i);
            for (r, mv) in m_basis.iter().enumerate() {
                proj[(r, i)] = linalg::ip(b, mv, &t);
            }
        }
        let svd = proj.svd(false, false);
        svd.singular_values.iter().filter(|&&s| s > 1e-8).count()
    };

    let split = ReductiveSplit {
        algebra: g,
        h_basis,
        m_basis,
        summands,
        t_m_dim,
    };
    split.validate()?;
    Ok(split)
}

fn has_intertwiner(ads: &[DMatrix<f64>], bi: &DMatrix<f64>, bj: &DMatrix<f64>) -> bool {
    let p = bi.ncols();
    let q = bj.ncols();
    if ads.is_empty() {
        return true;
    }
    let mut sys = DMatrix::zeros(ads.len() * q * p, q * p);
    for (t, a) in ads.iter().enumerate() {
        let ri = bi.transpose() * a * bi; // p x p
        let rj = bj.transpose() * a * bj; // q x q
        for i in 0..q {
            for j in 0..p {
                let row = t * q * p + i * p + j;
                for k in 0..q {
                    sys[(row, k * p + j)] += rj[(i, k)];
                }
                for k in 0..p {
                    sys[(row, i * p + k)] -= ri[(k, j)];
                }
            }
        }
    }
    linalg::smallest_singular_value(&sys) < INTERTWINER_TOL
}

fn centralizer_in_m(
    g: &CompactLieAlgebra,
    h_basis: &[AlgebraVector],
    m_raw: &[AlgebraVector],
) -> Vec<AlgebraVector> {
    if h_basis.is_empty() {
        return m_raw.to_vec();
    }
    let dm = m_raw.len();
    let mut sys = DMatrix::zeros(h_basis.len() * g.dim, dm);
    for (t, x) in h_basis.iter().enumerate() {
        for j in 0..dm {
            let br = g.bracket_unchecked(x, &m_raw[j]);
            for i in 0..g.dim {
                sys[(t * g.dim + i, j)] = br[i];
            }
        }
    }
    let ns = linalg::standard_null_space(&sys, 1e-8);
    ns.iter()
        .map(|c| {
            let mut v = DVector::zeros(g.dim);
            for (j, mv) in m_raw.iter().enumerate() {
                v += mv * c[j];
            }
            v
        })
        .collect()
}

fn in_span(g: &CompactLieAlgebra, span: &[AlgebraVector], v: &AlgebraVector) -> bool {
    let b = &g.inner_product;
    let mut res = v.clone();
    let on = linalg::gram_schmidt(span, b, 1e-9);
    for u in &on {
        let c = linalg::ip(b, u, &res);
        res -= u * c;
    }
    linalg::ip(b, &res, &res).sqrt() < 1e-8
}

/// Sorted indices of positive roots whose plane meets the span, with the
/// algebra dimension appended when the span meets t.
fn root_content(g: &CompactLieAlgebra, vs: &[AlgebraVector]) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 0..g.positive_roots.len() {
        let (u, v) = g.plane_indices(k);
        let overlap = vs
            .iter()
            .map(|x| (x[u].powi(2) + x[v].powi(2)).sqrt())
            .fold(0.0_f64, f64::max);
        if overlap > 1e-8 {
            out.push(k);
        }
    }
    let t_overlap = vs
        .iter()
        .map(|x| (0..g.rank).map(|i| x[i].powi(2)).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    if t_overlap > 1e-8 {
        out.push(g.dim); // sentinel for t-content, sorts after root planes
    }
    out
}

impl ReductiveSplit {
    pub fn dim_m(&self) -> usize {
        self.m_basis.len()
    }

    pub fn num_summands(&self) -> usize {
        self.summands.len()
    }

    pub fn summand_dims(&self) -> Vec<usize> {
        self.summands.iter().map(|r| r.len()).collect()
    }

    /// Orthogonal projection onto m.
    pub fn project_m(&self, x: &AlgebraVector) -> AlgebraVector {
        let b = &self.algebra.inner_product;
        let mut out = DVector::zeros(self.algebra.dim);
        for mv in &self.m_basis {
            out += mv * linalg::ip(b, mv, x);
        }
        out
    }

    /// Coordinates of the m-component of `x` in the orthonormal m-basis.
    pub fn m_coords(&self, x: &AlgebraVector) -> DVector<f64> {
        let b = &self.algebra.inner_product;
        DVector::from_iterator(
            self.m_basis.len(),
            self.m_basis.iter().map(|mv| linalg::ip(b, mv, x)),
        )
    }

    /// Algebra vector from m-basis coordinates.
    pub fn from_m_coords(&self, c: &DVector<f64>) -> AlgebraVector {
        let mut out = DVector::zeros(self.algebra.dim);
        for (j, mv) in self.m_basis.iter().enumerate() {
            out += mv * c[j];
        }
        out
    }

    /// Summand index of each m-basis vector.
    pub fn summand_of_index(&self, i: usize) -> usize {
        self.summands
            .iter()
            .position(|r| r.contains(&i))
            .expect("index inside m")
    }

    /// Component of `x` in summand `p`.
    pub fn summand_projection(&self, x: &AlgebraVector, p: usize) -> AlgebraVector {
        let b = &self.algebra.inner_product;
        let mut out = DVector::zeros(self.algebra.dim);
        for i in self.summands[p].clone() {
            out += &self.m_basis[i] * linalg::ip(b, &self.m_basis[i], x);
        }
        out
    }

    /// dim(t ∩ m) for the Cartan subalgebra aligned with h.
    pub fn rank_gap(&self) -> usize {
        self.t_m_dim
    }

    /// Residual of [h, m_i] ⊆ m_i over all summands.
    pub fn invariance_residual(&self) -> f64 {
        let g = &self.algebra;
        let mut worst = 0.0_f64;
        for x in &self.h_basis {
            for (p, r) in self.summands.iter().enumerate() {
                for i in r.clone() {
                    let br = g.bracket_unchecked(x, &self.m_basis[i]);
                    let inside = self.summand_projection(&br, p);
                    worst = worst.max(g.norm(&(&br - &inside)));
                }
            }
        }
        worst
    }

    /// Largest off-block entry of any ad(h)-commutant element: zero when the
    /// summands carry pairwise inequivalent representations (the very
    /// standard condition).
    pub fn very_standard_residual(&self) -> f64 {
        let g = &self.algebra;
        let b = &g.inner_product;
        let dm = self.m_basis.len();
        if self.h_basis.is_empty() {
            return 0.0;
        }
        let mut ads: Vec<DMatrix<f64>> = Vec::new();
        for x in &self.h_basis {
            let mut a = DMatrix::zeros(dm, dm);
            for j in 0..dm {
                let br = g.bracket_unchecked(x, &self.m_basis[j]);
                for i in 0..dm {
                    a[(i, j)] = linalg::ip(b, &self.m_basis[i], &br);
                }
            }
            ads.push(a);
        }
        let n2 = dm * dm;
        let mut sys = DMatrix::zeros(ads.len() * n2, n2);
        for (t, a) in ads.iter().enumerate() {
            for i in 0..dm {
                for j in 0..dm {
                    let row = t * n2 + i * dm + j;
                    for k in 0..dm {
                        sys[(row, k * dm + j)] += a[(i, k)];
                        sys[(row, i * dm + k)] -= a[(k, j)];
                    }
                }
            }
        }
        let mut worst = 0.0_f64;
        for v in linalg::standard_null_space(&sys, 1e-8) {
            for i in 0..dm {
                for j in 0..dm {
                    if self.summand_of_index(i) != self.summand_of_index(j) {
                        worst = worst.max(v[i * dm + j].abs());
                    }
                }
            }
        }
        worst
    }

    fn validate(&self) -> Result<()> {
        let g = &self.algebra;
        let b = &g.inner_product;
        // <h, m> = 0
        for x in &self.h_basis {
            for y in &self.m_basis {
                if linalg::ip(b, x, y).abs() > 1e-9 {
                    return Err(Error::InconsistentRootData(
                        "h and m are not orthogonal".into(),
                    ));
                }
            }
        }
        let res = self.invariance_residual();
        if res > CLOSURE_TOL {
            return Err(Error::InconsistentRootData(format!(
                "Ad(H)-invariance residual {res:.3e}"
            )));
        }
        Ok(())
    }

    /// Verify the structural conditions on the last summand and the
    /// invariance [m_s, m_i] ⊆ m_i used by the submersion setup.
    pub fn check_normalizer_structure(&self) -> Result<NormalizerReport> {
        let g = &self.algebra;
        let s = self.num_summands();
        let last = self.summands[s - 1].clone();
        if last.len() != 1 {
            return Err(Error::InvalidLastSummand(format!(
                "dim m_s = {} (expected 1)",
                last.len()
            )));
        }
        let m_raw: Vec<AlgebraVector> = self.m_basis.clone();
        let cz = centralizer_in_m(g, &self.h_basis, &m_raw);
        let e_s = &self.m_basis[last.start];
        let matches = cz.len() == 1 && in_span(g, &cz, e_s);
        let mut residuals = Vec::new();
        for p in 0..(s - 1) {
            let mut worst = 0.0_f64;
            for i in self.summands[p].clone() {
                let br = g.bracket_unchecked(e_s, &self.m_basis[i]);
                let inside = self.summand_projection(&br, p);
                worst = worst.max(g.norm(&(&br - &inside)));
            }
            residuals.push(worst);
        }
        let ok = matches && residuals.iter().all(|&r| r < CLOSURE_TOL);
        Ok(NormalizerReport {
            ms_dim: 1,
            centralizer_dim: cz.len(),
            centralizer_matches_ms: matches,
            residuals,
            ok,
        })
    }

    /// Split for the base space G/H' with h' = h ⊕ m_s and m' = m_1+...+m_{s-1}.
    pub fn submersion_base(&self) -> Result<ReductiveSplit> {
        let rep = self.check_normalizer_structure()?;
        if !rep.ok {
            return Err(Error::InvalidLastSummand(format!(
                "normalizer-structure conditions fail: {rep:?}"
            )));
        }
        let s = self.num_summands();
        let last = self.summands[s - 1].clone();
        let mut h_basis = self.h_basis.clone();
        h_basis.push(self.m_basis[last.start].clone());
        let m_basis: Vec<AlgebraVector> = self.m_basis[..last.start].to_vec();
        let summands: Vec<Range<usize>> = self.summands[..s - 1].to_vec();
        let split = ReductiveSplit {
            algebra: self.algebra.clone(),
            h_basis,
            m_basis,
            summands,
            t_m_dim: self.t_m_dim.saturating_sub(1),
        };
        split.validate()?;
        Ok(split)
    }

    /// Reorder summands to match an expected list of subspaces, given as
    /// (positive-root ambient vectors, torus ambient vectors) per summand.
    pub fn match_expected(&self, expected: &[ExpectedSummand]) -> Result<ReductiveSplit> {
        let g = &self.algebra;
        if expected.len() != self.num_summands() {
            return Err(Error::FixtureMismatch(format!(
                "solver found {} summands, fixture lists {}",
                self.num_summands(),
                expected.len()
            )));
        }
        let mut perm: Vec<usize> = Vec::new();
        for exp in expected {
            let mut basis: Vec<AlgebraVector> = Vec::new();
            for alpha in &exp.roots {
                let k = g.positive_root_index(alpha).ok_or_else(|| {
                    Error::FixtureMismatch(format!("expected root {alpha:?} is not a root"))
                })?;
                let (u, v) = g.plane_indices(k);
                basis.push(g.basis_vector(u));
                basis.push(g.basis_vector(v));
            }
            for t in &exp.torus {
                basis.push(g.torus_vector(t)?);
            }
            let found = (0..self.num_summands()).find(|&p| {
                !perm.contains(&p)
                    && self.summands[p].len() == basis.len()
                    && basis.iter().all(|v| {
                        let span: Vec<AlgebraVector> = self.summands[p]
                            .clone()
                            .map(|i| self.m_basis[i].clone())
                            .collect();
                        in_span(g, &span, v)
                    })
            });
            match found {
                Some(p) => perm.push(p),
                None => {
                    return Err(Error::FixtureMismatch(format!(
                        "no computed summand matches expected block {:?}",
                        exp
                    )))
                }
            }
        }
        let mut m_basis = Vec::new();
        let mut summands = Vec::new();
        for &p in &perm {
            let start = m_basis.len();
            m_basis.extend(self.summands[p].clone().map(|i| self.m_basis[i].clone()));
            summands.push(start..m_basis.len());
        }
        Ok(ReductiveSplit {
            algebra: self.algebra.clone(),
            h_basis: self.h_basis.clone(),
            m_basis,
            summands,
            t_m_dim: self.t_m_dim,
        })
    }

    /// Human-readable summand description (root planes and t-lines).
    pub fn summand_description(&self, p: usize) -> String {
        let g = &self.algebra;
        let content = root_content(
            g,
            &self.summands[p]
                .clone()
                .map(|i| self.m_basis[i].clone())
                .collect::<Vec<_>>(),
        );
        let mut parts: Vec<String> = Vec::new();
        for k in &content {
            if *k == g.dim {
                parts.push("t∩m".to_string());
            } else {
                let r = &g.positive_roots[*k];
                let coords: Vec<String> = r.iter().map(|c| format!("{c:.4}")).collect();
                parts.push(format!("g±({})", coords.join(",")));
            }
        }
        format!("dim {}: {}", self.summands[p].len(), parts.join(" + "))
    }
}

/// Expected summand content for fixture matching.
#[derive(Debug, Clone, Default)]
pub struct ExpectedSummand {
    pub roots: Vec<DVector<f64>>,
    pub torus: Vec<DVector<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_compact_algebra;
    use crate::rootsys::{build_root_system, Family};

    fn vecf(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    fn algebra(fam: Family, rank: usize) -> Arc<CompactLieAlgebra> {
        Arc::new(build_compact_algebra(&build_root_system(fam, rank).unwrap()).unwrap())
    }

    #[test]
    fn case1_summand_dims() {
        // Sp(2)/S^1 embedded with weights (1,3): dims {1,4,2,2}
        let g = algebra(Family::C, 2);
        let spec = SubalgebraSpec {
            torus_part: vec![vecf(&[1.0, 3.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        let mut dims = split.summand_dims();
        dims.sort();
        assert_eq!(dims, vec![1, 2, 2, 4]);
        assert_eq!(split.rank_gap(), 1);
        assert!(split.invariance_residual() < 1e-10);
        assert!(split.very_standard_residual() < 1e-8);
    }

    #[test]
    fn aw_degenerate_dims() {
        // SU(3)/S^1 with k+l=0: dims {2,4,1}, m_s central and last
        let g = algebra(Family::A, 2);
        let spec = SubalgebraSpec {
            torus_part: vec![vecf(&[1.0, -1.0, 0.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        let mut dims = split.summand_dims();
        dims.sort();
        assert_eq!(dims, vec![1, 2, 4]);
        // the central line sits last
        assert_eq!(*split.summand_dims().last().unwrap(), 1);
        let rep = split.check_normalizer_structure().unwrap();
        assert!(rep.ok, "{rep:?}");
        for r in &rep.residuals {
            assert!(*r < 1e-10);
        }
    }

    #[test]
    fn full_torus_has_rank_gap_zero() {
        let g = algebra(Family::A, 2);
        let spec = SubalgebraSpec {
            torus_part: vec![vecf(&[1.0, -1.0, 0.0]), vecf(&[1.0, 1.0, -2.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        assert_eq!(split.rank_gap(), 0);
        assert_eq!(split.summand_dims(), vec![2, 2, 2]);
    }

    #[test]
    fn projection_idempotent_and_orthogonal() {
        let g = algebra(Family::C, 2);
        let spec = SubalgebraSpec {
            torus_part: vec![vecf(&[1.0, 3.0])],
            ..Default::default()
        };
        let split = reductive_split(g.clone(), &spec).unwrap();
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = DVector::from_fn(g.dim, |_, _| rng.random::<f64>() - 0.5);
            let p = split.project_m(&x);
            let pp = split.project_m(&p);
            assert!((&p - &pp).amax() < 1e-10);
            for h in &split.h_basis {
                assert!(g.inner_unchecked(&p, h).abs() < 1e-10);
            }
        }
        // h vectors project to zero, m vectors to themselves
        assert!(split.project_m(&split.h_basis[0]).amax() < 1e-10);
        let m0 = split.m_basis[0].clone();
        assert!((split.project_m(&m0) - &m0).amax() < 1e-10);
    }

    #[test]
    fn non_subalgebra_rejected() {
        let g = algebra(Family::C, 2);
        // a root plane alone is not closed: [u_a, v_a] lands in t
        let spec = SubalgebraSpec {
            root_part: vec![vecf(&[2.0, 0.0])],
            ..Default::default()
        };
        assert!(matches!(
            reductive_split(g, &spec),
            Err(Error::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn normalizer_check_requires_one_dimensional_last_summand() {
        let g = algebra(Family::A, 2);
        // h = su(2): summands (4,1)... last summand here is the t-line, so
        // instead use the sphere split reversed: check the error path with a
        // split whose last summand is not 1-dimensional.
        let spec = SubalgebraSpec {
            torus_part: vec![vecf(&[1.0, -1.0, 0.0])],
            root_part: vec![vecf(&[1.0, -1.0, 0.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        assert_eq!(split.summand_dims(), vec![4, 1]);
        // swap so the 4-dim block is last
        let swapped = ReductiveSplit {
            algebra: split.algebra.clone(),
            h_basis: split.h_basis.clone(),
            m_basis: {
                let mut v: Vec<_> = split.summands[1]
                    .clone()
                    .map(|i| split.m_basis[i].clone())
                    .collect();
                v.extend(split.summands[0].clone().map(|i| split.m_basis[i].clone()));
                v
            },
            summands: vec![0..1, 1..5],
            t_m_dim: split.t_m_dim,
        };
        assert!(matches!(
            swapped.check_normalizer_structure(),
            Err(Error::InvalidLastSummand(_))
        ));
    }

    #[test]
    fn submersion_base_of_aw() {
        let g = algebra(Family::A, 2);
        let spec = SubalgebraSpec {
            torus_part: vec![vecf(&[1.0, -1.0, 0.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        let base = split.submersion_base().unwrap();
        assert_eq!(base.dim_m(), 6);
        assert_eq!(base.h_basis.len(), 2);
        assert!(base.invariance_residual() < 1e-10);
    }
}
