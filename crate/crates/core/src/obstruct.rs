//! Case runner: searches for commuting zero-curvature pairs, replays the
//! built-in fixtures over sampled invariant norms, and samples curvature
//! positivity on the sphere baselines.

use crate::coset::ReductiveSplit;
use crate::curvature::{self, ZeroFlagCertificate};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, fmt_ambient, CaseFixture, CaseId};
use crate::liealg::AlgebraVector;
use crate::norm::{LFunction, NormKind, NormShape};
use crate::rootsys::build_root_system;
use crate::{coset, liealg};
use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Sampled-norm admissibility: smallest fundamental-tensor eigenvalue over
/// random directions must clear this.
pub const CONVEXITY_MIN_EIG: f64 = 1e-6;
const CONVEXITY_DIRS: usize = 200;

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionCertificate {
    pub y: String,
    pub v: String,
    pub norm: String,
    #[serde(flatten)]
    pub certificate: ZeroFlagCertificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivitySummary {
    pub n_flags_requested: usize,
    pub n_flags_admissible: usize,
    pub min_k: Option<f64>,
    pub mean_k: Option<f64>,
    pub argmin: Option<ArgminFlag>,
    pub no_admissible_flags: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArgminFlag {
    pub y: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Obstructed,
    PositivitySampled,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case_id: String,
    pub description: String,
    pub summand_dims: Vec<usize>,
    pub rank_gap: usize,
    pub norms_tested: Vec<String>,
    pub certificates: Vec<ObstructionCertificate>,
    pub search_pair: Option<(String, String)>,
    pub positivity: Option<PositivitySummary>,
    pub verdict: Verdict,
}

/// A candidate generator inside one summand, with a printable name.
fn summand_generators(split: &ReductiveSplit, p: usize) -> Vec<(String, AlgebraVector)> {
    let g = &split.algebra;
    let span: Vec<AlgebraVector> = split.summands[p]
        .clone()
        .map(|i| split.m_basis[i].clone())
        .collect();
    let contains = |v: &AlgebraVector| {
        let proj = split.summand_projection(v, p);
        g.norm(&(v - &proj)) < 1e-8 * g.norm(v).max(1.0)
    };
    let mut out = Vec::new();
    for k in 0..g.positive_roots.len() {
        let (ui, _) = g.plane_indices(k);
        let u = g.basis_vector(ui);
        if contains(&u) {
            out.push((format!("u[{}]", fmt_ambient(&g.positive_roots[k])), u));
        }
    }
    // t ∩ (this summand): project the Cartan directions and orthonormalize
    let t_proj: Vec<AlgebraVector> = (0..g.rank)
        .map(|i| split.summand_projection(&g.basis_vector(i), p))
        .collect();
    for t in crate::linalg::gram_schmidt(&t_proj, &g.inner_product, 1e-8) {
        // express in ambient coordinates for readability
        let name = match g.ambient_of_torus(&t).map(|a| pretty_ambient(&a)) {
            Some(a) => format!("t[{}]", fmt_ambient(&a)),
            None => "t[...]".to_string(),
        };
        out.push((name, t));
        let _ = &span;
    }
    out
}

/// Rescale an ambient direction so its coordinates are small integers or
/// half-integers when possible; leaves the vector untouched otherwise.
fn pretty_ambient(a: &DVector<f64>) -> DVector<f64> {
    let is_nice = |v: &DVector<f64>| {
        v.iter().all(|&c| {
            let d = 2.0 * c;
            (d - d.round()).abs() < 1e-7 && d.abs() < 20.5
        })
    };
    for &c in a.iter() {
        if c.abs() < 1e-9 {
            continue;
        }
        for mult in 1..=4 {
            let scaled = a * (mult as f64 / c.abs());
            if is_nice(&scaled) {
                return scaled.map(|x| {
                    let r = (2.0 * x).round() / 2.0;
                    if (x - r).abs() < 1e-7 {
                        r
                    } else {
                        x
                    }
                });
            }
        }
    }
    a.clone()
}

/// Deterministic search for a commuting pair certified as a zero flag.
///
/// Candidates are structured generators (root-plane vectors, then t∩m
/// directions) enumerated summand pair by summand pair; the first pair that
/// commutes and passes the zero-flag check is returned.
pub fn find_commuting_zero_pair(
    split: &ReductiveSplit,
    norm: &LFunction,
    tol: f64,
) -> Option<(String, String, ZeroFlagCertificate)> {
    let g = &split.algebra;
    let s = split.num_summands();
    let gens: Vec<Vec<(String, AlgebraVector)>> =
        (0..s).map(|p| summand_generators(split, p)).collect();
    for i in 0..s {
        for j in i..s {
            for (a, (na, ya)) in gens[i].iter().enumerate() {
                for (b, (nb, vb)) in gens[j].iter().enumerate() {
                    if i == j && b <= a {
                        continue;
                    }
                    let br = g.bracket_unchecked(ya, vb);
                    if g.norm(&br) > 1e-9 * g.norm(ya).max(1.0) * g.norm(vb).max(1.0) {
                        continue;
                    }
                    // linear independence
                    let ip = g.inner_unchecked(ya, vb);
                    let na2 = g.inner_unchecked(ya, ya);
                    let nb2 = g.inner_unchecked(vb, vb);
                    if ip * ip > (1.0 - 1e-9) * na2 * nb2 {
                        continue;
                    }
                    if let Ok(cert) = curvature::zero_flag_check(split, norm, ya, vb, tol) {
                        if cert.k.abs() < tol {
                            return Some((na.clone(), nb.clone(), cert));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Positivity sampling.  For the normal metric (all-equal diagonal norms)
/// arbitrary flags are admissible and curvature comes from the Berger
/// formula; otherwise flags are commuting pairs found by projecting random
/// vectors onto centralizers, filtered by the pole condition.
pub fn positivity_sample(
    split: &ReductiveSplit,
    norm: &LFunction,
    n_flags: usize,
    seed: u64,
    tol: f64,
) -> Result<PositivitySummary> {
    if n_flags == 0 {
        return Err(Error::InvalidArgument("n_flags must be at least 1".into()));
    }
    let g = &split.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dm = split.dim_m();
    let rand_m = |rng: &mut ChaCha8Rng| -> AlgebraVector {
        let c = DVector::from_fn(dm, |_, _| rng.random::<f64>() * 2.0 - 1.0);
        split.from_m_coords(&c)
    };

    let mut ks: Vec<f64> = Vec::new();
    let mut argmin: Option<ArgminFlag> = None;
    let mut min_k = f64::INFINITY;
    let mut record = |k: f64, y: &AlgebraVector, v: &AlgebraVector| {
        if k < min_k {
            min_k = k;
            argmin = Some(ArgminFlag {
                y: y.iter().cloned().collect(),
                v: v.iter().cloned().collect(),
            });
        }
    };

    if is_normal_metric(norm) {
        while ks.len() < n_flags {
            let y = rand_m(&mut rng);
            let v = rand_m(&mut rng);
            match curvature::normal_oracle(split, &y, &v) {
                Ok(k) => {
                    record(k, &y, &v);
                    ks.push(k);
                }
                Err(Error::DegenerateFlag(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    } else {
        let max_attempts = 200 * n_flags;
        let mut attempts = 0;
        while ks.len() < n_flags && attempts < max_attempts {
            attempts += 1;
            let y = rand_m(&mut rng);
            // centralizer of y inside m (excluding the span of y)
            let mut rows = nalgebra::DMatrix::zeros(g.dim, dm);
            for j in 0..dm {
                let br = g.bracket_unchecked(&y, &split.m_basis[j]);
                for i in 0..g.dim {
                    rows[(i, j)] = br[i];
                }
            }
            let cz = crate::linalg::standard_null_space(&rows, 1e-7);
            if cz.len() < 2 {
                continue;
            }
            // random direction in the centralizer, made independent of y
            let mut vc = DVector::zeros(dm);
            for b in &cz {
                vc += b * (rng.random::<f64>() * 2.0 - 1.0);
            }
            let v = split.from_m_coords(&vc);
            match curvature::flag_curvature(split, norm, &y, &v, tol) {
                Ok(res) => {
                    record(res.k, &y, &v);
                    ks.push(res.k);
                }
                Err(Error::PreconditionViolated { .. })
                | Err(Error::DegenerateFlag(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }

    let n = ks.len();
    Ok(PositivitySummary {
        n_flags_requested: n_flags,
        n_flags_admissible: n,
        min_k: if n > 0 { Some(min_k) } else { None },
        mean_k: if n > 0 {
            Some(ks.iter().sum::<f64>() / n as f64)
        } else {
            None
        },
        argmin,
        no_admissible_flags: n == 0,
    })
}

fn is_normal_metric(norm: &LFunction) -> bool {
    match &norm.kind {
        NormKind::Diagonal { coeffs } => coeffs
            .windows(2)
            .all(|w| (w[0] - w[1]).abs() < 1e-12),
        _ => false,
    }
}

/// Draw a random admissible norm for the given split.  Reversible shapes
/// alternate between diagonal and a rational 1-homogeneous family; the
/// non-reversible shape mixes diagonal coefficients with a drift term along
/// the last summand.
pub fn sample_norm(
    split: &ReductiveSplit,
    shape: NormShape,
    rng: &mut ChaCha8Rng,
    index: usize,
) -> Result<LFunction> {
    let s = split.num_summands();
    let dims = split.summand_dims();
    let log_uniform =
        |rng: &mut ChaCha8Rng| -> f64 { (0.2_f64.ln() + rng.random::<f64>() * (5.0_f64 / 0.2).ln()).exp() };
    loop {
        let candidate = match shape {
            NormShape::Reversible => {
                if index % 3 == 2 {
                    // rational perturbation of a diagonal norm, still
                    // 1-homogeneous in the t-variables
                    let base: Vec<f64> = (0..s).map(|_| log_uniform(rng)).collect();
                    let num: Vec<f64> = (0..s).map(|_| log_uniform(rng)).collect();
                    let den: Vec<f64> = (0..s).map(|_| log_uniform(rng)).collect();
                    let eps = 0.05 + 0.1 * rng.random::<f64>();
                    let terms: Vec<String> = (0..s)
                        .map(|p| format!("{:.6}*t{}", base[p], p + 1))
                        .collect();
                    let numer: Vec<String> = (0..s)
                        .map(|p| format!("{:.6}*t{}", num[p], p + 1))
                        .collect();
                    let denom: Vec<String> = (0..s)
                        .map(|p| format!("{:.6}*t{}", den[p], p + 1))
                        .collect();
                    let src = format!(
                        "{} + {eps:.6}*({})^2/({})",
                        terms.join(" + "),
                        numer.join(" + "),
                        denom.join(" + ")
                    );
                    let expr = crate::norm::Expr::parse(&src, s, false)?;
                    LFunction::new(
                        shape,
                        NormKind::Generic { expr, source: src },
                        dims.clone(),
                    )?
                } else {
                    let coeffs: Vec<f64> = (0..s).map(|_| log_uniform(rng)).collect();
                    LFunction::new(shape, NormKind::Diagonal { coeffs }, dims.clone())?
                }
            }
            NormShape::NonReversible => {
                let coeffs: Vec<f64> = (0..s - 1).map(|_| log_uniform(rng)).collect();
                let b = rng.random::<f64>() * 1.8 - 0.9;
                LFunction::new(shape, NormKind::Randers { coeffs, b }, dims.clone())?
            }
        };
        // admissibility: strong convexity sampled over random directions
        let min_eig = candidate.convexity_sample(CONVEXITY_DIRS, rng.random::<u64>())?;
        if min_eig > CONVEXITY_MIN_EIG {
            return Ok(candidate);
        }
    }
}

pub fn describe_norm(norm: &LFunction) -> String {
    let kind = match &norm.kind {
        NormKind::Diagonal { coeffs } => {
            let cs: Vec<String> = coeffs.iter().map(|c| format!("{c:.6}")).collect();
            format!("diagonal[{}]", cs.join(","))
        }
        NormKind::Randers { coeffs, b } => {
            let cs: Vec<String> = coeffs.iter().map(|c| format!("{c:.6}")).collect();
            format!("randers[{};b={b:.6}]", cs.join(","))
        }
        NormKind::Generic { source, .. } => format!("generic[{source}]"),
        NormKind::Induced { .. } => "induced".to_string(),
    };
    format!("{}:{}", norm.shape.as_str(), kind)
}

/// The zero flag used for non-reversible norms: the flag pole spans the
/// one-dimensional central summand m_s, paired with the first structured
/// generator in an earlier summand that commutes with it.
fn nonreversible_pair(
    split: &ReductiveSplit,
) -> Result<(String, AlgebraVector, String, AlgebraVector)> {
    let g = &split.algebra;
    let s = split.num_summands();
    let last = summand_generators(split, s - 1);
    let (yn, y) = last
        .first()
        .ok_or_else(|| Error::FixtureMismatch("empty last summand".into()))?
        .clone();
    for p in 0..s - 1 {
        for (vn, v) in summand_generators(split, p) {
            if g.norm(&g.bracket_unchecked(&y, &v)) < 1e-9 {
                return Ok((yn, y, vn, v));
            }
        }
    }
    Err(Error::FixtureMismatch(
        "no commuting partner for the central summand".into(),
    ))
}

/// Build the split for a fixture and permute it into the reference order.
pub fn build_case_split(f: &CaseFixture) -> Result<ReductiveSplit> {
    let rs = build_root_system(f.family, f.rank)?;
    let g = Arc::new(liealg::build_compact_algebra(&rs)?);
    let split = coset::reductive_split(g, &f.subalgebra)?;
    split.match_expected(&f.expected_summands)
}

/// Run a full case: fixture integrity, norm sampling, certification or
/// positivity sampling.
pub fn verify_case(
    case_id: CaseId,
    norm_samples: usize,
    n_flags: usize,
    seed: u64,
    tol: f64,
) -> Result<CaseReport> {
    if norm_samples == 0 {
        return Err(Error::InvalidArgument(
            "norm sample count must be at least 1".into(),
        ));
    }
    let f = fixture(case_id);
    let split = build_case_split(&f)?;
    if split.summand_dims() != f.expected_dims() {
        return Err(Error::FixtureMismatch(format!(
            "summand dims {:?} != expected {:?}",
            split.summand_dims(),
            f.expected_dims()
        )));
    }
    if split.dim_m() % 2 == 1 && split.rank_gap() != 1 {
        return Err(Error::FixtureMismatch(format!(
            "odd-dimensional case has rank gap {}",
            split.rank_gap()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norms_tested = Vec::new();
    let mut certificates = Vec::new();
    let mut search_pair = None;
    let mut positivity = None;

    let verdict = if let Some(pair) = &f.obstruction {
        let y = pair.y.realize(&split.algebra)?;
        let v = pair.v.realize(&split.algebra)?;
        // For non-reversible norms the zero flag must be based in the
        // one-dimensional central summand m_s; derive that pair from the
        // split (y = the m_s line, v = the first structured generator
        // commuting with it).
        let ns_pair = if f.nonreversible_shape {
            Some(nonreversible_pair(&split)?)
        } else {
            None
        };
        let mut all_ok = true;
        for i in 0..norm_samples {
            // non-reversible shapes are exercised on the fixtures that
            // support them, alternating with reversible ones
            let shape = if f.nonreversible_shape && i % 2 == 1 {
                NormShape::NonReversible
            } else {
                NormShape::Reversible
            };
            let (yn, yv, vn, vv) = if shape == NormShape::NonReversible {
                let (yn, yv, vn, vv) = ns_pair.as_ref().unwrap();
                (yn.clone(), yv.clone(), vn.clone(), vv.clone())
            } else {
                (pair.y.describe(), y.clone(), pair.v.describe(), v.clone())
            };
            let norm = sample_norm(&split, shape, &mut rng, i)?;
            norms_tested.push(describe_norm(&norm));
            match curvature::zero_flag_check(&split, &norm, &yv, &vv, tol) {
                Ok(cert) if cert.k.abs() < tol => {
                    certificates.push(ObstructionCertificate {
                        y: yn,
                        v: vn,
                        norm: describe_norm(&norm),
                        certificate: cert,
                    });
                }
                _ => {
                    all_ok = false;
                }
            }
            if search_pair.is_none() {
                if let Some((ny, nv, _)) = find_commuting_zero_pair(&split, &norm, tol) {
                    search_pair = Some((ny, nv));
                }
            }
        }
        if all_ok {
            Verdict::Obstructed
        } else {
            Verdict::Inconclusive
        }
    } else {
        // positivity baseline: scaled normal metrics, Berger sampling
        let mut min_k = f64::INFINITY;
        let mut summary: Option<PositivitySummary> = None;
        for _ in 0..norm_samples {
            let scale =
                (0.2_f64.ln() + rng.random::<f64>() * (5.0_f64 / 0.2).ln()).exp();
            let norm = LFunction::new(
                NormShape::Reversible,
                NormKind::Diagonal {
                    coeffs: vec![scale; split.num_summands()],
                },
                split.summand_dims(),
            )?;
            norms_tested.push(describe_norm(&norm));
            let s = positivity_sample(&split, &norm, n_flags, rng.random::<u64>(), tol)?;
            if let Some(k) = s.min_k {
                min_k = min_k.min(k);
            }
            summary = Some(s);
        }
        positivity = summary;
        if min_k.is_finite() && min_k > 0.0 {
            Verdict::PositivitySampled
        } else {
            Verdict::Inconclusive
        }
    };

    Ok(CaseReport {
        case_id: case_id.as_str().to_string(),
        description: f.description.to_string(),
        summand_dims: split.summand_dims(),
        rank_gap: split.rank_gap(),
        norms_tested,
        certificates,
        search_pair,
        positivity,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::PRECONDITION_TOL;

    #[test]
    fn case1_obstructed_with_matching_pair() {
        let rep = verify_case(CaseId::C1, 4, 10, 42, PRECONDITION_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        assert_eq!(rep.certificates.len(), 4);
        let (y, v) = rep.search_pair.as_ref().unwrap();
        assert_eq!(y, "u[2e1]");
        assert_eq!(v, "u[2e2]");
        for c in &rep.certificates {
            assert!(c.certificate.k.abs() < 1e-9);
            assert!(c.certificate.commutator_residual < 1e-9);
            assert!(c.certificate.pole_residual < 1e-9);
        }
    }

    #[test]
    fn aw_obstructed_including_nonreversible_norms() {
        let rep = verify_case(CaseId::AwDegenerate, 6, 10, 7, PRECONDITION_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::Obstructed);
        assert!(rep
            .norms_tested
            .iter()
            .any(|n| n.starts_with("nonreversible:")));
        assert!(rep.certificates.iter().all(|c| c.certificate.k.abs() < 1e-9));
    }

    #[test]
    fn sphere_positivity_sampled() {
        let rep = verify_case(CaseId::SphereSp, 1, 200, 3, PRECONDITION_TOL).unwrap();
        assert_eq!(rep.verdict, Verdict::PositivitySampled);
        let p = rep.positivity.unwrap();
        assert!(p.min_k.unwrap() > 0.0, "{:?}", p.min_k);
        assert_eq!(p.n_flags_admissible, 200);
    }

    #[test]
    fn sphere_has_no_commuting_pairs() {
        for case in [CaseId::SphereSu, CaseId::SphereSp] {
            let f = fixture(case);
            let split = build_case_split(&f).unwrap();
            let norm = LFunction::new(
                NormShape::Reversible,
                NormKind::Diagonal {
                    coeffs: vec![1.0; split.num_summands()],
                },
                split.summand_dims(),
            )
            .unwrap();
            assert!(
                find_commuting_zero_pair(&split, &norm, PRECONDITION_TOL).is_none(),
                "{case}"
            );
        }
    }

    #[test]
    fn zero_norm_count_is_an_error() {
        assert!(matches!(
            verify_case(CaseId::C1, 0, 10, 1, PRECONDITION_TOL),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn positivity_sample_zero_flags_is_an_error() {
        let f = fixture(CaseId::SphereSu);
        let split = build_case_split(&f).unwrap();
        let norm = LFunction::new(
            NormShape::Reversible,
            NormKind::Diagonal {
                coeffs: vec![1.0; split.num_summands()],
            },
            split.summand_dims(),
        )
        .unwrap();
        assert!(positivity_sample(&split, &norm, 0, 1, PRECONDITION_TOL).is_err());
    }

    #[test]
    fn determinism_of_reports() {
        let a = verify_case(CaseId::C2, 3, 10, 9, PRECONDITION_TOL).unwrap();
        let b = verify_case(CaseId::C2, 3, 10, 9, PRECONDITION_TOL).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
