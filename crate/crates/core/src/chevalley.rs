//! Chevalley basis with integer structure constants, and its rotation to the
//! compact real form.
//!
//! Signs are fixed by the deterministic extraspecial-pair rule: positive
//! roots are ordered by height (lexicographic tie-break), each non-simple
//! positive root gets `N = +(p+1)` on its extraspecial pair, and every other
//! constant follows from the standard identities.  The same root data always
//! produces the same constants.

use crate::error::{Error, Result};
use crate::rootsys::{simple_coordinates, RootSystem};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;

/// Dense 3-index structure-constant tensor: `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Debug, Clone)]
pub struct Tensor3 {
    pub dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Tensor3 {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// i * h_k for the k-th simple coroot.
    Cartan(usize),
    /// u_alpha = x_alpha - x_{-alpha} for the k-th positive root.
    U(usize),
    /// v_alpha = i (x_alpha + x_{-alpha}) for the k-th positive root.
    V(usize),
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisLabel::Cartan(k) => write!(f, "t{}", k + 1),
            BasisLabel::U(k) => write!(f, "u{}", k + 1),
            BasisLabel::V(k) => write!(f, "v{}", k + 1),
        }
    }
}

pub struct ChevalleyOutput {
    pub dim: usize,
    pub rank: usize,
    /// Positive roots in ambient coordinates, height order.
    pub positive_roots: Vec<DVector<f64>>,
    pub simple_roots: Vec<DVector<f64>>,
    pub labels: Vec<BasisLabel>,
    /// Real structure constants of the compact form in the basis
    /// t_1..t_r, u_1, v_1, ..., u_P, v_P.
    pub constants: Tensor3,
}

struct RootData {
    simples: Vec<Vec<i64>>,
    /// positive roots as integer simple-root coordinates, height order
    pos: Vec<Vec<i64>>,
    pos_index: HashMap<Vec<i64>, usize>,
    /// Gram matrix of the simple roots in ambient coordinates
    gram: DMatrix<f64>,
    /// structure constants on positive pairs, keyed (i, j) with i < j
    n_pos: HashMap<(usize, usize), f64>,
}

impl RootData {
    fn is_root(&self, c: &[i64]) -> bool {
        if c.iter().all(|&x| x >= 0) {
            self.pos_index.contains_key(c)
        } else {
            let neg: Vec<i64> = c.iter().map(|&x| -x).collect();
            self.pos_index.contains_key(&neg)
        }
    }

    fn is_positive(c: &[i64]) -> bool {
        c.iter().all(|&x| x >= 0)
    }

    fn norm2(&self, c: &[i64]) -> f64 {
        let v = DVector::from_iterator(c.len(), c.iter().map(|&x| x as f64));
        (v.transpose() * &self.gram * &v)[(0, 0)]
    }

    fn dot(&self, a: &[i64], b: &[i64]) -> f64 {
        let va = DVector::from_iterator(a.len(), a.iter().map(|&x| x as f64));
        let vb = DVector::from_iterator(b.len(), b.iter().map(|&x| x as f64));
        (va.transpose() * &self.gram * &vb)[(0, 0)]
    }

    /// max p such that b - p a is a root
    fn string_down(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut p = 0;
        let mut v: Vec<i64> = b.iter().zip(a).map(|(&x, &y)| x - y).collect();
        while v.iter().any(|&x| x != 0) && self.is_root(&v) {
            p += 1;
            for (vi, &ai) in v.iter_mut().zip(a) {
                *vi -= ai;
            }
        }
        p
    }

    fn n_positive(&self, i: usize, j: usize) -> f64 {
        if i < j {
            *self.n_pos.get(&(i, j)).unwrap_or(&0.0)
        } else {
            -*self.n_pos.get(&(j, i)).unwrap_or(&0.0)
        }
    }

    /// Structure constant N(a, b) for arbitrary roots a, b with a + b != 0.
    fn n_const(&self, a: &[i64], b: &[i64], depth: usize) -> f64 {
        assert!(depth < 4, "rotation failed to terminate");
        let s: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x + y).collect();
        assert!(s.iter().any(|&x| x != 0), "n_const called with b = -a");
        if !self.is_root(&s) {
            return 0.0;
        }
        let pa = Self::is_positive(a);
        let pb = Self::is_positive(b);
        if pa && pb {
            let i = self.pos_index[a];
            let j = self.pos_index[b];
            self.n_positive(i, j)
        } else if !pa && !pb {
            let na: Vec<i64> = a.iter().map(|&x| -x).collect();
            let nb: Vec<i64> = b.iter().map(|&x| -x).collect();
            -self.n_const(&na, &nb, depth)
        } else {
            // rotate: with z = -a-b, N(a,b) = (z,z)/(a,a) N(b,z)
            let z: Vec<i64> = s.iter().map(|&x| -x).collect();
            self.n_const(b, &z, depth + 1) * self.norm2(&z) / self.norm2(a)
        }
    }
}

/// Fill the positive-pair structure-constant table stage by stage.
fn build_constants(rd: &mut RootData) -> Result<()> {
    let npos = rd.pos.len();
    for g in 0..npos {
        let gamma = rd.pos[g].clone();
        let height: i64 = gamma.iter().sum();
        if height == 1 {
            continue; // simple root
        }
        // special pairs (i, j), i < j, alpha_i + alpha_j = gamma
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..npos {
            for j in (i + 1)..npos {
                let sum: Vec<i64> = rd.pos[i].iter().zip(&rd.pos[j]).map(|(&x, &y)| x + y).collect();
                if sum == gamma {
                    pairs.push((i, j));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::InconsistentRootData(format!(
                "no special pair for positive root of height {height}"
            )));
        }
        // extraspecial pair: minimal first index
        let (i1, j1) = pairs[0];
        let p = rd.string_down(&rd.pos[i1], &rd.pos[j1]);
        rd.n_pos.insert((i1, j1), (p + 1) as f64);
        let a1 = rd.pos[i1].clone();
        let b1 = rd.pos[j1].clone();
        let n_extra = (p + 1) as f64;
        for &(i, j) in pairs.iter().skip(1) {
            let alpha = rd.pos[i].clone();
            let beta = rd.pos[j].clone();
            let neg_alpha: Vec<i64> = alpha.iter().map(|&x| -x).collect();
            let neg_beta: Vec<i64> = beta.iter().map(|&x| -x).collect();
            // Jacobi on (a1, b1, -alpha), remaining root -beta:
            //   N(a1,b1) N(gamma,-alpha) + N(b1,-alpha) N(b1-alpha, a1)
            //     + N(-alpha,a1) N(a1-alpha, b1) = 0
            // and N(gamma,-alpha) = -(beta,beta)/(gamma,gamma) N(alpha,beta).
            let t2 = {
                let s: Vec<i64> = b1.iter().zip(&neg_alpha).map(|(&x, &y)| x + y).collect();
                if rd.is_root(&s) {
                    rd.n_const(&b1, &neg_alpha, 0) * rd.n_const(&s, &a1, 0)
                } else {
                    0.0
                }
            };
            let t3 = {
                let s: Vec<i64> = neg_alpha.iter().zip(&a1).map(|(&x, &y)| x + y).collect();
                if rd.is_root(&s) {
                    rd.n_const(&neg_alpha, &a1, 0) * rd.n_const(&s, &b1, 0)
                } else {
                    0.0
                }
            };
            let n = rd.norm2(&gamma) / rd.norm2(&beta) * (t2 + t3) / n_extra;
            // must be +/-(p+1)
            let pij = rd.string_down(&alpha, &beta);
            let expect = (pij + 1) as f64;
            if (n.abs() - expect).abs() > 1e-9 {
                return Err(Error::InconsistentRootData(format!(
                    "structure constant {n} is not +/-{expect}"
                )));
            }
            rd.n_pos.insert((i, j), n.round());
            let _ = neg_beta;
        }
    }
    Ok(())
}

/// Build the compact real form of the simple Lie algebra attached to `rs`.
pub fn compact_form(rs: &RootSystem) -> Result<ChevalleyOutput> {
    let simples_amb = rs.simple_roots();
    let pos_amb = rs.positive_roots();
    let rank = simples_amb.len();
    let npos = pos_amb.len();

    let mut gram = DMatrix::zeros(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            gram[(i, j)] = simples_amb[i].dot(&simples_amb[j]);
        }
    }

    let simples: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    let pos: Vec<Vec<i64>> = pos_amb
        .iter()
        .map(|r| {
            simple_coordinates(r, &simples_amb)
                .ok_or_else(|| Error::InconsistentRootData("root not in simple-root lattice".into()))
        })
        .collect::<Result<_>>()?;
    let mut pos_index = HashMap::new();
    for (i, c) in pos.iter().enumerate() {
        pos_index.insert(c.clone(), i);
    }

    let mut rd = RootData {
        simples,
        pos,
        pos_index,
        gram,
        n_pos: HashMap::new(),
    };
    build_constants(&mut rd)?;

    // --- complex Chevalley algebra: basis h_1..h_r, x_{+k}, x_{-k} ---
    let dim = rank + 2 * npos;
    let xp = |k: usize| rank + k;
    let xm = |k: usize| rank + npos + k;

    let mut c_old = Tensor3::zeros(dim);
    // [h_i, x_{+-alpha}] = +-<alpha, alpha_i^vee> x_{+-alpha}
    for i in 0..rank {
        for k in 0..npos {
            let pair = 2.0 * rd.dot(&rd.pos[k], &rd.simples[i]) / rd.norm2(&rd.simples[i]);
            c_old.set(i, xp(k), xp(k), pair);
            c_old.set(xp(k), i, xp(k), -pair);
            c_old.set(i, xm(k), xm(k), -pair);
            c_old.set(xm(k), i, xm(k), pair);
        }
    }
    // [x_alpha, x_{-alpha}] = h_alpha = sum_i c_i h_i
    for k in 0..npos {
        let alpha = &rd.pos[k];
        let n2 = rd.norm2(alpha);
        for i in 0..rank {
            let ci = alpha[i] as f64 * rd.norm2(&rd.simples[i]) / n2;
            if (ci - ci.round()).abs() > 1e-9 {
                return Err(Error::InconsistentRootData(format!(
                    "coroot coefficient {ci} not an integer"
                )));
            }
            c_old.set(xp(k), xm(k), i, ci.round());
            c_old.set(xm(k), xp(k), i, -ci.round());
        }
    }
    // [x_a, x_b] = N(a,b) x_{a+b} for a + b != 0
    let signed: Vec<(Vec<i64>, usize)> = (0..npos)
        .map(|k| (rd.pos[k].clone(), xp(k)))
        .chain((0..npos).map(|k| {
            let neg: Vec<i64> = rd.pos[k].iter().map(|&x| -x).collect();
            (neg, xm(k))
        }))
        .collect();
    let index_of = |c: &[i64]| -> usize {
        if RootData::is_positive(c) {
            xp(rd.pos_index[c])
        } else {
            let neg: Vec<i64> = c.iter().map(|&x| -x).collect();
            xm(rd.pos_index[&neg])
        }
    };
    for (ca, ia) in &signed {
        for (cb, ib) in &signed {
            if ia == ib {
                continue;
            }
            let s: Vec<i64> = ca.iter().zip(cb).map(|(&x, &y)| x + y).collect();
            if s.iter().all(|&x| x == 0) || !rd.is_root(&s) {
                continue;
            }
            let n = rd.n_const(ca, cb, 0);
            c_old.set(*ia, *ib, index_of(&s), n);
        }
    }

    // --- rotate to the compact form ---
    // t_i = i h_i, u_k = x_{+k} - x_{-k}, v_k = i (x_{+k} + x_{-k})
    let zero = Complex64::new(0.0, 0.0);
    let iu = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let mut t = DMatrix::from_element(dim, dim, zero);
    let mut labels = Vec::with_capacity(dim);
    for i in 0..rank {
        t[(i, i)] = iu;
        labels.push(BasisLabel::Cartan(i));
    }
    for k in 0..npos {
        let cu = rank + 2 * k;
        let cv = rank + 2 * k + 1;
        t[(xp(k), cu)] = one;
        t[(xm(k), cu)] = -one;
        t[(xp(k), cv)] = iu;
        t[(xm(k), cv)] = iu;
        labels.push(BasisLabel::U(k));
        labels.push(BasisLabel::V(k));
    }
    let t_inv = t
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InconsistentRootData("basis change not invertible".into()))?;

    let mut constants = Tensor3::zeros(dim);
    for a in 0..dim {
        for b in 0..dim {
            // w = [T e_a, T e_b] in the old basis
            let mut w = DVector::from_element(dim, zero);
            for i in 0..dim {
                let ta = t[(i, a)];
                if ta == zero {
                    continue;
                }
                for j in 0..dim {
                    let tb = t[(j, b)];
                    if tb == zero {
                        continue;
                    }
                    for k in 0..dim {
                        let c = c_old.get(i, j, k);
                        if c != 0.0 {
                            w[k] += ta * tb * c;
                        }
                    }
                }
            }
            let coeffs = &t_inv * w;
            for k in 0..dim {
                let c = coeffs[k];
                if c.im.abs() > 1e-10 {
                    return Err(Error::InconsistentRootData(format!(
                        "compact rotation left imaginary residue {:.3e}",
                        c.im
                    )));
                }
                if c.re.abs() > 1e-12 {
                    constants.set(a, b, k, c.re);
                }
            }
        }
    }

    Ok(ChevalleyOutput {
        dim,
        rank,
        positive_roots: pos_amb,
        simple_roots: simples_amb,
        labels,
        constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, Family};

    #[test]
    fn dims() {
        for (fam, rank, dim) in [
            (Family::A, 2, 8),
            (Family::A, 3, 15),
            (Family::C, 2, 10),
            (Family::C, 3, 21),
            (Family::G2, 2, 14),
        ] {
            let rs = build_root_system(fam, rank).unwrap();
            let out = compact_form(&rs).unwrap();
            assert_eq!(out.dim, dim);
        }
    }

    #[test]
    fn constants_antisymmetric() {
        let rs = build_root_system(Family::G2, 2).unwrap();
        let out = compact_form(&rs).unwrap();
        let d = out.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let a = out.constants.get(i, j, k);
                    let b = out.constants.get(j, i, k);
                    assert!((a + b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cartan_abelian() {
        let rs = build_root_system(Family::C, 3).unwrap();
        let out = compact_form(&rs).unwrap();
        for i in 0..out.rank {
            for j in 0..out.rank {
                for k in 0..out.dim {
                    assert_eq!(out.constants.get(i, j, k), 0.0);
                }
            }
        }
    }
}
