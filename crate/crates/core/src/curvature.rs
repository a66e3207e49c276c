//! Flag curvature of invariant metrics on reductive homogeneous spaces.
//!
//! The main entry point computes the flag curvature of a commuting flag
//! `(y, v)` for an arbitrary invariant Minkowski norm, provided `y` is a
//! geodesic ("pole") direction.  Two independent oracles cross-check it:
//! the Berger formula for the normal metric, and the Nomizu-type formula
//! for commuting pairs under an arbitrary invariant Riemannian metric.

use crate::coset::ReductiveSplit;
use crate::error::{Error, Result};
use crate::liealg::AlgebraVector;
use crate::linalg;
use crate::norm::LFunction;
use nalgebra::DVector;
use serde::Serialize;

/// Default tolerance for the commuting and pole preconditions, applied to
/// unit-normalized inputs.
pub const PRECONDITION_TOL: f64 = 1e-9;
/// Flags with denominator below this are degenerate (y, v nearly parallel).
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Flag {
    pub y: AlgebraVector,
    pub v: AlgebraVector,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureResult {
    pub k: f64,
    /// Solution of g_y U = r in the orthonormal m-basis.
    pub u_coords: Vec<f64>,
    pub commutator_residual: f64,
    pub pole_residual: f64,
    pub denominator: f64,
}

/// The four residuals witnessing a zero flag: the commutator, the pole
/// condition g_y(y, [y,m]_m), and the two cross conditions g_y(y, [v,m]_m)
/// and g_y(v, [y,m]_m), plus the resulting curvature data.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroFlagCertificate {
    pub commutator_residual: f64,
    pub pole_residual: f64,
    pub cross_residual_yv: f64,
    pub cross_residual_vy: f64,
    pub u_norm: f64,
    pub denominator: f64,
    pub k: f64,
}

/// Bracket of two m-vectors followed by projection to m, in m-coordinates.
fn bracket_m(split: &ReductiveSplit, a: &AlgebraVector, b: &AlgebraVector) -> DVector<f64> {
    split.m_coords(&split.algebra.bracket_unchecked(a, b))
}

fn m_vector(split: &ReductiveSplit, y: &AlgebraVector, label: &str) -> Result<AlgebraVector> {
    let c = split.m_coords(y);
    let back = split.from_m_coords(&c);
    let res = split.algebra.norm(&(y - &back));
    if res > 1e-10 * split.algebra.norm(y).max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "{label} has an h-component of norm {res:.3e}"
        )));
    }
    Ok(back)
}

/// Flag curvature K(y, v) for a commuting flag under an invariant norm.
///
/// Preconditions, enforced at tolerance `tol` on unit-normalized vectors:
/// `[y, v] = 0` and the pole condition `g_y(y, [y, m]_m) = 0`.
pub fn flag_curvature(
    split: &ReductiveSplit,
    norm: &LFunction,
    y: &AlgebraVector,
    v: &AlgebraVector,
    tol: f64,
) -> Result<CurvatureResult> {
    let g_alg = &split.algebra;
    let y = m_vector(split, y, "y")?;
    let v = m_vector(split, v, "v")?;
    let ny = g_alg.norm(&y);
    let nv = g_alg.norm(&v);
    if ny < 1e-12 || nv < 1e-12 {
        return Err(Error::DegenerateFlag("zero vector in flag".into()));
    }
    let yu = &y / ny;
    let vu = &v / nv;

    let commutator_residual = g_alg.norm(&g_alg.bracket_unchecked(&yu, &vu));
    if commutator_residual > tol {
        return Err(Error::PreconditionViolated {
            condition: "[y, v] = 0",
            residual: commutator_residual,
            tolerance: tol,
        });
    }

    let yc = split.m_coords(&yu);
    let vc = split.m_coords(&vu);
    let g = norm.fundamental_tensor_coords(&yc)?;

    // pole condition: g_y(y, [y, w]_m) = 0 for every basis direction w
    let dm = split.dim_m();
    let gy = &g * &yc;
    let mut pole_residual = 0.0_f64;
    for j in 0..dm {
        let br = bracket_m(split, &yu, &split.m_basis[j]);
        pole_residual = pole_residual.max(gy.dot(&br).abs());
    }
    if pole_residual > tol {
        return Err(Error::PreconditionViolated {
            condition: "g_y(y, [y, m]_m) = 0",
            residual: pole_residual,
            tolerance: tol,
        });
    }

    // r_w = (g_y([w,y]_m, v) + g_y([w,v]_m, y)) / 2
    let gv = &g * &vc;
    let mut r = DVector::zeros(dm);
    for j in 0..dm {
        let wy = bracket_m(split, &split.m_basis[j], &yu);
        let wv = bracket_m(split, &split.m_basis[j], &vu);
        r[j] = 0.5 * (gv.dot(&wy) + gy.dot(&wv));
    }
    let u = linalg::spd_solve(&g, &r).ok_or_else(|| {
        Error::ConvexityViolation("fundamental tensor is not positive definite at y".into())
    })?;

    let denominator = gy.dot(&yc) * gv.dot(&vc) - gy.dot(&vc).powi(2);
    if denominator < DEGENERATE_TOL {
        return Err(Error::DegenerateFlag(format!(
            "flag denominator {denominator:.3e}"
        )));
    }
    let k = (u.transpose() * &g * &u)[(0, 0)] / denominator;
    Ok(CurvatureResult {
        k,
        u_coords: u.iter().cloned().collect(),
        commutator_residual,
        pole_residual,
        denominator,
    })
}

/// Sectional curvature of the normal homogeneous metric (Berger formula):
/// no commuting requirement.
pub fn normal_oracle(split: &ReductiveSplit, y: &AlgebraVector, v: &AlgebraVector) -> Result<f64> {
    let g_alg = &split.algebra;
    let y = m_vector(split, y, "y")?;
    let v = m_vector(split, v, "v")?;
    let br = g_alg.bracket_unchecked(&y, &v);
    let br_m = split.project_m(&br);
    let br_h = &br - &br_m;
    let ip = |a: &AlgebraVector, b: &AlgebraVector| g_alg.inner_unchecked(a, b);
    let denominator = ip(&y, &y) * ip(&v, &v) - ip(&y, &v).powi(2);
    if denominator < DEGENERATE_TOL {
        return Err(Error::DegenerateFlag(format!(
            "flag denominator {denominator:.3e}"
        )));
    }
    Ok((0.25 * ip(&br_m, &br_m) + ip(&br_h, &br_h)) / denominator)
}

/// Sectional curvature of an arbitrary invariant Riemannian metric on a
/// commuting pair:  K = (|U(y,v)|^2 - <U(y,y), U(v,v)>) / denom, with the
/// Nomizu term U defined by 2 g(U(a,b), w) = g([w,a]_m, b) + g(a, [w,b]_m).
///
/// The metric is taken from the fundamental tensor of `norm`, which must be
/// quadratic (independent of the base point y).
pub fn riemannian_commuting_oracle(
    split: &ReductiveSplit,
    norm: &LFunction,
    y: &AlgebraVector,
    v: &AlgebraVector,
    tol: f64,
) -> Result<f64> {
    let g_alg = &split.algebra;
    let y = m_vector(split, y, "y")?;
    let v = m_vector(split, v, "v")?;
    let ny = g_alg.norm(&y);
    let nv = g_alg.norm(&v);
    if ny < 1e-12 || nv < 1e-12 {
        return Err(Error::DegenerateFlag("zero vector in flag".into()));
    }
    let res = g_alg.norm(&g_alg.bracket_unchecked(&y, &v)) / (ny * nv);
    if res > tol {
        return Err(Error::PreconditionViolated {
            condition: "[y, v] = 0",
            residual: res,
            tolerance: tol,
        });
    }
    let yc = split.m_coords(&y);
    let vc = split.m_coords(&v);
    let g = norm.fundamental_tensor_coords(&yc)?;
    // quadratic norms only: the tensor must not depend on the base point
    let g_probe = norm.fundamental_tensor_coords(&vc)?;
    if (&g - &g_probe).amax() > 1e-9 * g.amax() {
        return Err(Error::WrongNormShape(
            "the Riemannian oracle needs a quadratic norm".into(),
        ));
    }
    let dm = split.dim_m();
    let nomizu = |ac: &DVector<f64>, bc: &DVector<f64>| -> Result<DVector<f64>> {
        let a = split.from_m_coords(ac);
        let b = split.from_m_coords(bc);
        let ga = &g * ac;
        let gb = &g * bc;
        let mut r = DVector::zeros(dm);
        for j in 0..dm {
            let wa = bracket_m(split, &split.m_basis[j], &a);
            let wb = bracket_m(split, &split.m_basis[j], &b);
            r[j] = 0.5 * (gb.dot(&wa) + ga.dot(&wb));
        }
        linalg::spd_solve(&g, &r).ok_or_else(|| {
            Error::ConvexityViolation("metric is not positive definite".into())
        })
    };
    let uyv = nomizu(&yc, &vc)?;
    let uyy = nomizu(&yc, &yc)?;
    let uvv = nomizu(&vc, &vc)?;
    let gdot = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * &g * b)[(0, 0)];
    let denominator = gdot(&yc, &yc) * gdot(&vc, &vc) - gdot(&yc, &vc).powi(2);
    if denominator < DEGENERATE_TOL {
        return Err(Error::DegenerateFlag(format!(
            "flag denominator {denominator:.3e}"
        )));
    }
    Ok((gdot(&uyv, &uyv) - gdot(&uyy, &uvv)) / denominator)
}

/// Verify a claimed zero-curvature flag, reporting every residual that
/// enters the verdict instead of a bare boolean.
pub fn zero_flag_check(
    split: &ReductiveSplit,
    norm: &LFunction,
    y: &AlgebraVector,
    v: &AlgebraVector,
    tol: f64,
) -> Result<ZeroFlagCertificate> {
    let res = flag_curvature(split, norm, y, v, tol)?;
    let u = DVector::from_vec(res.u_coords.clone());

    // the two cross residuals, on the same unit-normalized vectors as the
    // curvature computation
    let g_alg = &split.algebra;
    let yu = m_vector(split, y, "y")?;
    let vu = m_vector(split, v, "v")?;
    let yu = &yu / g_alg.norm(&yu);
    let vu = &vu / g_alg.norm(&vu);
    let yc = split.m_coords(&yu);
    let vc = split.m_coords(&vu);
    let g = norm.fundamental_tensor_coords(&yc)?;
    let gy = &g * &yc;
    let gv = &g * &vc;
    let mut cross_residual_yv = 0.0_f64;
    let mut cross_residual_vy = 0.0_f64;
    for j in 0..split.dim_m() {
        let bv = bracket_m(split, &vu, &split.m_basis[j]);
        let by = bracket_m(split, &yu, &split.m_basis[j]);
        cross_residual_yv = cross_residual_yv.max(gy.dot(&bv).abs());
        cross_residual_vy = cross_residual_vy.max(gv.dot(&by).abs());
    }

    Ok(ZeroFlagCertificate {
        commutator_residual: res.commutator_residual,
        pole_residual: res.pole_residual,
        cross_residual_yv,
        cross_residual_vy,
        u_norm: u.norm(),
        denominator: res.denominator,
        k: res.k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{reductive_split, SubalgebraSpec};
    use crate::liealg::build_compact_algebra;
    use crate::norm::{NormKind, NormShape};
    use crate::rootsys::{build_root_system, Family};
    use std::sync::Arc;

    fn dv(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    /// Sp(2)/S^1 with slope (1,3): summands of dims 1, 4, 2, 2.
    fn c1_split() -> ReductiveSplit {
        let g = Arc::new(
            build_compact_algebra(&build_root_system(Family::C, 2).unwrap()).unwrap(),
        );
        let spec = SubalgebraSpec {
            torus_part: vec![dv(&[1.0, 3.0])],
            ..Default::default()
        };
        reductive_split(g, &spec).unwrap()
    }

    /// The commuting pair y in g_{2e1}, v in g_{2e2}.
    fn c1_pair(split: &ReductiveSplit) -> (AlgebraVector, AlgebraVector) {
        let g = &split.algebra;
        let ky = g.positive_root_index(&dv(&[2.0, 0.0])).unwrap();
        let kv = g.positive_root_index(&dv(&[0.0, 2.0])).unwrap();
        let y = g.basis_vector(g.plane_indices(ky).0);
        let v = g.basis_vector(g.plane_indices(kv).0);
        (y, v)
    }

    fn diag_norm(split: &ReductiveSplit, coeffs: &[f64]) -> LFunction {
        LFunction::new(
            NormShape::Reversible,
            NormKind::Diagonal {
                coeffs: coeffs.to_vec(),
            },
            split.summand_dims(),
        )
        .unwrap()
    }

    #[test]
    fn normal_metric_gives_zero_on_commuting_flag() {
        let split = c1_split();
        let (y, v) = c1_pair(&split);
        let n = diag_norm(&split, &[1.0, 1.0, 1.0, 1.0]);
        let res = flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
        assert!(res.k.abs() < 1e-18, "{res:?}");
        let berger = normal_oracle(&split, &y, &v).unwrap();
        assert!(berger.abs() < 1e-18);
    }

    #[test]
    fn matches_riemannian_oracle_for_diagonal_metrics() {
        let split = c1_split();
        let (y, v) = c1_pair(&split);
        for coeffs in [
            [1.0, 2.0, 0.5, 3.0],
            [0.3, 0.3, 1.7, 0.9],
            [2.0, 1.0, 1.0, 1.0],
        ] {
            let n = diag_norm(&split, &coeffs);
            let res = flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
            let oracle = riemannian_commuting_oracle(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
            assert!(
                (res.k - oracle).abs() < 1e-10 * oracle.abs().max(1.0),
                "{coeffs:?}: {} vs {oracle}",
                res.k
            );
        }
    }

    #[test]
    fn commuting_cross_summand_flags_have_zero_curvature() {
        // vanishing-curvature property: reversible invariant norms make every
        // commuting pair spread across summands a zero flag
        let split = c1_split();
        let (y, v) = c1_pair(&split);
        for coeffs in [[1.0, 2.0, 0.5, 3.0], [0.3, 0.3, 1.7, 0.9]] {
            let n = diag_norm(&split, &coeffs);
            let res = flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
            assert!(res.k.abs() < 1e-12, "{res:?}");
        }
        // also with a generic norm coupling the summands
        let expr = crate::norm::Expr::parse(
            "t1 + 2*t2 + 0.5*t3 + 3*t4 + 0.4*t2*t4/(t1+t2+t3+t4)",
            split.num_summands(),
            false,
        )
        .unwrap();
        let n = LFunction::new(
            NormShape::Reversible,
            NormKind::Generic {
                expr,
                source: String::new(),
            },
            split.summand_dims(),
        )
        .unwrap();
        let res = flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
        assert!(res.k.abs() < 1e-12, "{res:?}");
    }

    #[test]
    fn scaling_and_span_invariance() {
        let split = c1_split();
        let (y, v) = c1_pair(&split);
        let n = diag_norm(&split, &[1.0, 2.0, 0.5, 3.0]);
        let base = flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL).unwrap().k;
        for (a, b, c) in [(2.0, 3.0, 0.0), (0.25, 1.0, 0.0), (1.0, 1.0, 0.7), (3.0, 0.5, -1.2)] {
            let y2 = &y * a;
            let v2 = &v * b + &y * c;
            let k = flag_curvature(&split, &n, &y2, &v2, PRECONDITION_TOL).unwrap().k;
            assert!((k - base).abs() < 1e-9 * base.abs().max(1.0), "{k} vs {base}");
        }
    }

    #[test]
    fn berger_positive_on_sphere() {
        // SU(3)/SU(2) = S^5 with the normal metric has positive curvature
        let g = Arc::new(
            build_compact_algebra(&build_root_system(Family::A, 2).unwrap()).unwrap(),
        );
        let spec = SubalgebraSpec {
            torus_part: vec![dv(&[1.0, -1.0, 0.0])],
            root_part: vec![dv(&[1.0, -1.0, 0.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let y = split.project_m(&DVector::from_fn(split.algebra.dim, |_, _| {
                rng.random::<f64>() - 0.5
            }));
            let v = split.project_m(&DVector::from_fn(split.algebra.dim, |_, _| {
                rng.random::<f64>() - 0.5
            }));
            let k = normal_oracle(&split, &y, &v).unwrap();
            assert!(k > 1e-6, "{k}");
        }
    }

    #[test]
    fn non_commuting_flag_rejected() {
        let split = c1_split();
        let g = &split.algebra;
        // y in g_{2e1}, v in g_{e1+e2}: these do not commute
        let ky = g.positive_root_index(&dv(&[2.0, 0.0])).unwrap();
        let kv = g.positive_root_index(&dv(&[1.0, 1.0])).unwrap();
        let y = g.basis_vector(g.plane_indices(ky).0);
        let v = g.basis_vector(g.plane_indices(kv).0);
        let n = diag_norm(&split, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL),
            Err(Error::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn degenerate_flag_rejected() {
        let split = c1_split();
        let (y, _) = c1_pair(&split);
        let n = diag_norm(&split, &[1.0, 1.0, 1.0, 1.0]);
        let v = &y * 2.0;
        assert!(matches!(
            flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL),
            Err(Error::DegenerateFlag(_))
        ));
    }

    #[test]
    fn randers_norm_on_degenerate_pair() {
        // SU(3)/S^1 with the central t-direction as y and a commuting root
        // plane direction as v; the norm is a Randers deformation along m_s.
        let g = Arc::new(
            build_compact_algebra(&build_root_system(Family::A, 2).unwrap()).unwrap(),
        );
        let spec = SubalgebraSpec {
            torus_part: vec![dv(&[1.0, -1.0, 0.0])],
            ..Default::default()
        };
        let split = reductive_split(g, &spec).unwrap();
        assert_eq!(*split.summand_dims().last().unwrap(), 1);
        let s = split.num_summands();
        let n = LFunction::new(
            NormShape::NonReversible,
            NormKind::Randers {
                coeffs: vec![1.0; s - 1],
                b: 0.4,
            },
            split.summand_dims(),
        )
        .unwrap();
        let y = split.m_basis[split.summands[s - 1].start].clone();
        let kv = split
            .algebra
            .positive_root_index(&dv(&[1.0, -1.0, 0.0]))
            .unwrap();
        let v = split.algebra.basis_vector(split.algebra.plane_indices(kv).0);
        let res = flag_curvature(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
        assert!(res.k.is_finite());
        let cert = zero_flag_check(&split, &n, &y, &v, PRECONDITION_TOL).unwrap();
        assert!(cert.commutator_residual < PRECONDITION_TOL);
    }
}
