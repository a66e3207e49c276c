//! Cross-validation of the constructed compact algebras against explicit
//! matrix realizations: su(n+1) as skew-Hermitian trace-zero matrices and
//! sp(n) as the quaternionic-unitary subalgebra of u(2n).
//!
//! The check builds an explicit linear isomorphism basis vector by basis
//! vector (resolving the sign freedom of the root vectors along the way) and
//! reports the worst bracket discrepancy over all basis pairs.

use crate::chevalley::BasisLabel;
use crate::error::{Error, Result};
use crate::liealg::CompactLieAlgebra;
use crate::rootsys::Family;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

type CMat = DMatrix<Complex64>;

#[derive(Debug, Clone, Serialize)]
pub struct MatrixCheckReport {
    pub family: String,
    pub matrix_size: usize,
    pub max_bracket_discrepancy: f64,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn e_mat(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::from_element(n, n, czero());
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Raising matrix for a positive root given in ambient coordinates.
fn raising_matrix(family: Family, rank: usize, alpha: &DVector<f64>) -> Result<CMat> {
    let near = |x: f64, y: f64| (x - y).abs() < 1e-9;
    match family {
        Family::A => {
            let n = rank + 1;
            let mut plus = None;
            let mut minus = None;
            for (i, &c) in alpha.iter().enumerate() {
                if near(c, 1.0) {
                    plus = Some(i);
                } else if near(c, -1.0) {
                    minus = Some(i);
                } else if !near(c, 0.0) {
                    return Err(Error::InconsistentRootData("unexpected A root shape".into()));
                }
            }
            let (a, b) = (plus.unwrap(), minus.unwrap());
            Ok(e_mat(n, a, b))
        }
        Family::C => {
            let n = rank;
            let nz: Vec<(usize, f64)> = alpha
                .iter()
                .enumerate()
                .filter(|(_, &c)| !near(c, 0.0))
                .map(|(i, &c)| (i, c))
                .collect();
            match nz.as_slice() {
                [(a, c)] if near(*c, 2.0) => Ok(e_mat(2 * n, *a, n + *a)),
                [(a, c)] if near(*c, -2.0) => Ok(e_mat(2 * n, n + *a, *a)),
                [(a, ca), (b, cb)] => {
                    if near(*ca, 1.0) && near(*cb, 1.0) {
                        Ok(e_mat(2 * n, *a, n + *b) + e_mat(2 * n, *b, n + *a))
                    } else if near(*ca, 1.0) && near(*cb, -1.0) {
                        Ok(e_mat(2 * n, *a, *b) - e_mat(2 * n, n + *b, n + *a))
                    } else if near(*ca, -1.0) && near(*cb, 1.0) {
                        Ok(e_mat(2 * n, *b, *a) - e_mat(2 * n, n + *a, n + *b))
                    } else {
                        Err(Error::InconsistentRootData("unexpected C root shape".into()))
                    }
                }
                _ => Err(Error::InconsistentRootData("unexpected C root shape".into())),
            }
        }
        Family::G2 => Err(Error::UnsupportedFamily(
            "classical matrix check supports families A and C only".into(),
        )),
    }
}

fn dagger(m: &CMat) -> CMat {
    m.map(|c| c.conj()).transpose()
}

fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

fn frobenius(a: &CMat, b: &CMat) -> Complex64 {
    let mut s = czero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            s += a[(i, j)].conj() * b[(i, j)];
        }
    }
    s
}

/// Build the matrix images of the compact basis and report the worst
/// bracket discrepancy of the resulting linear map.
pub fn classical_matrix_check(g: &CompactLieAlgebra) -> Result<MatrixCheckReport> {
    let family = g.root_system.family;
    let rank = g.root_system.rank;
    let n = match family {
        Family::A => rank + 1,
        Family::C => 2 * rank,
        Family::G2 => {
            return Err(Error::UnsupportedFamily(
                "classical matrix check supports families A and C only".into(),
            ))
        }
    };
    let npos = g.positive_roots.len();
    let raising: Vec<CMat> = g
        .positive_roots
        .iter()
        .map(|a| raising_matrix(family, rank, a))
        .collect::<Result<_>>()?;

    // Resolve the per-root sign so that the abstract structure constants
    // match the matrix commutators.  Simple roots get +1; composite roots
    // inherit signs from any lower-height decomposition.
    let heights: Vec<f64> = {
        let simples = g.root_system.simple_roots();
        g.positive_roots
            .iter()
            .map(|r| {
                crate::rootsys::simple_coordinates(r, &simples)
                    .map(|c| c.iter().sum::<i64>() as f64)
                    .unwrap_or(f64::NAN)
            })
            .collect()
    };
    let mut sign: Vec<Option<f64>> = vec![None; npos];
    for k in 0..npos {
        if (heights[k] - 1.0).abs() < 1e-9 {
            sign[k] = Some(1.0);
        }
    }
    let mut progress = true;
    while progress {
        progress = false;
        for gidx in 0..npos {
            if sign[gidx].is_some() {
                continue;
            }
            'search: for a in 0..npos {
                for b in 0..npos {
                    if sign[a].is_none() || sign[b].is_none() {
                        continue;
                    }
                    let sum = &g.positive_roots[a] + &g.positive_roots[b];
                    if (&sum - &g.positive_roots[gidx]).amax() > 1e-9 {
                        continue;
                    }
                    // abstract N(a,b): coefficient of u_gamma in [u_a, u_b]
                    let (ua, _) = g.plane_indices(a);
                    let (ub, _) = g.plane_indices(b);
                    let (ug, _) = g.plane_indices(gidx);
                    let n_abs = g.constants.get(ua, ub, ug);
                    if n_abs.abs() < 1e-9 {
                        continue;
                    }
                    let comm = commutator(&raising[a], &raising[b]);
                    let c_mat = frobenius(&raising[gidx], &comm) / frobenius(&raising[gidx], &raising[gidx]);
                    if c_mat.im.abs() > 1e-9 {
                        return Err(Error::InconsistentRootData(
                            "complex matrix structure constant".into(),
                        ));
                    }
                    let eps = sign[a].unwrap() * sign[b].unwrap() * c_mat.re / n_abs;
                    if (eps.abs() - 1.0).abs() > 1e-9 {
                        return Err(Error::InconsistentRootData(format!(
                            "sign resolution produced {eps}, expected +/-1"
                        )));
                    }
                    sign[gidx] = Some(eps.round());
                    progress = true;
                    break 'search;
                }
            }
        }
    }
    if sign.iter().any(|s| s.is_none()) {
        return Err(Error::InconsistentRootData(
            "could not resolve all root-vector signs".into(),
        ));
    }

    // Matrix images of the compact basis.
    let iu = Complex64::new(0.0, 1.0);
    let simples = g.root_system.simple_roots();
    let mut images: Vec<CMat> = Vec::with_capacity(g.dim);
    for label in &g.labels {
        match label {
            BasisLabel::Cartan(k) => {
                // t_k = i h_k with h_k the coroot of the k-th simple root
                let up = raising_matrix(family, rank, &simples[*k])?;
                let h = commutator(&up, &dagger(&up));
                images.push(h * iu);
            }
            BasisLabel::U(k) => {
                let m = &raising[*k] * Complex64::new(sign[*k].unwrap(), 0.0);
                images.push(&m - dagger(&m));
            }
            BasisLabel::V(k) => {
                let m = &raising[*k] * Complex64::new(sign[*k].unwrap(), 0.0);
                images.push((&m + dagger(&m)) * iu);
            }
        }
    }

    // Worst-case bracket discrepancy over all basis pairs.
    let mut worst = 0.0_f64;
    for i in 0..g.dim {
        for j in 0..g.dim {
            let mut expected = CMat::from_element(n, n, czero());
            for k in 0..g.dim {
                let c = g.constants.get(i, j, k);
                if c != 0.0 {
                    expected += &images[k] * Complex64::new(c, 0.0);
                }
            }
            let got = commutator(&images[i], &images[j]);
            let diff = &got - &expected;
            let r = diff.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
            worst = worst.max(r);
        }
    }

    Ok(MatrixCheckReport {
        family: format!("{}{}", family.as_str(), rank),
        matrix_size: n,
        max_bracket_discrepancy: worst,
    })
}

#[cfg(test)]
mod tests {
    use crate::liealg::build_compact_algebra;
    use crate::rootsys::{build_root_system, Family};

    #[test]
    fn a2_matches_su3() {
        let g = build_compact_algebra(&build_root_system(Family::A, 2).unwrap()).unwrap();
        let rep = g.classical_matrix_check().unwrap();
        assert!(rep.max_bracket_discrepancy < 1e-10, "{rep:?}");
    }

    #[test]
    fn c2_matches_sp2() {
        let g = build_compact_algebra(&build_root_system(Family::C, 2).unwrap()).unwrap();
        let rep = g.classical_matrix_check().unwrap();
        assert!(rep.max_bracket_discrepancy < 1e-10, "{rep:?}");
    }

    #[test]
    fn g2_unsupported() {
        let g = build_compact_algebra(&build_root_system(Family::G2, 2).unwrap()).unwrap();
        assert!(g.classical_matrix_check().is_err());
    }
}
