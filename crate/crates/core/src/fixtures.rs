//! Built-in case fixtures: the five candidate spaces, the degenerate
//! circle quotient of SU(3), and the two homogeneous spheres used as
//! positivity baselines.
//!
//! Each fixture records the coset data, the expected isotypic decomposition
//! in a fixed reference order, and either the known commuting obstruction
//! pair or the expectation of positive curvature.

use crate::coset::{ExpectedSummand, SubalgebraSpec};
use crate::error::{Error, Result};
use crate::liealg::{AlgebraVector, CompactLieAlgebra};
use crate::rootsys::{Family, SQRT3};
use nalgebra::DVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    C1,
    C2,
    C3,
    C4,
    C5,
    AwDegenerate,
    SphereSu,
    SphereSp,
}

pub const ALL_CASES: [CaseId; 8] = [
    CaseId::C1,
    CaseId::C2,
    CaseId::C3,
    CaseId::C4,
    CaseId::C5,
    CaseId::AwDegenerate,
    CaseId::SphereSu,
    CaseId::SphereSp,
];

impl CaseId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseId::C1 => "C1",
            CaseId::C2 => "C2",
            CaseId::C3 => "C3",
            CaseId::C4 => "C4",
            CaseId::C5 => "C5",
            CaseId::AwDegenerate => "AW_degenerate",
            CaseId::SphereSu => "sphere_SU",
            CaseId::SphereSp => "sphere_Sp",
        }
    }
}

impl std::str::FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_CASES
            .iter()
            .find(|c| c.as_str() == s)
            .copied()
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named vector in m: either the u-generator of a root plane or a torus
/// direction given in ambient coordinates.
#[derive(Debug, Clone)]
pub enum VectorSpec {
    RootPlane(DVector<f64>),
    Torus(DVector<f64>),
}

impl VectorSpec {
    pub fn realize(&self, g: &CompactLieAlgebra) -> Result<AlgebraVector> {
        match self {
            VectorSpec::RootPlane(alpha) => {
                let k = g.positive_root_index(alpha).ok_or_else(|| {
                    Error::InvalidArgument(format!("{alpha:?} is not a root"))
                })?;
                Ok(g.basis_vector(g.plane_indices(k).0))
            }
            VectorSpec::Torus(t) => g.torus_vector(t),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            VectorSpec::RootPlane(a) => {
                format!("u[{}]", fmt_ambient(a))
            }
            VectorSpec::Torus(t) => format!("t[{}]", fmt_ambient(t)),
        }
    }
}

/// Render an ambient vector as a signed combination of e_i (with sqrt(3)
/// coefficients spelled out for the exceptional family).
pub fn fmt_ambient(v: &DVector<f64>) -> String {
    let mut out = String::new();
    for (i, &c) in v.iter().enumerate() {
        if c.abs() < 1e-12 {
            continue;
        }
        let sign = if c < 0.0 {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let a = c.abs();
        let mag = if (a - 1.0).abs() < 1e-9 {
            String::new()
        } else if (a - SQRT3).abs() < 1e-9 {
            "sqrt(3)".to_string()
        } else if (a - SQRT3 / 2.0).abs() < 1e-9 {
            "sqrt(3)/2".to_string()
        } else if (a - a.round()).abs() < 1e-9 {
            format!("{}", a.round() as i64)
        } else if (2.0 * a - (2.0 * a).round()).abs() < 1e-9 {
            format!("{}/2", (2.0 * a).round() as i64)
        } else {
            format!("{a}")
        };
        out.push_str(sign);
        out.push_str(&mag);
        out.push_str(&format!("e{}", i + 1));
    }
    out
}

#[derive(Debug, Clone)]
pub struct ObstructionPair {
    pub y: VectorSpec,
    pub v: VectorSpec,
}

#[derive(Debug, Clone)]
pub struct CaseFixture {
    pub case_id: CaseId,
    pub description: &'static str,
    pub family: Family,
    pub rank: usize,
    pub subalgebra: SubalgebraSpec,
    /// Summands in the reference order (the solver output is permuted to
    /// match).
    pub expected_summands: Vec<ExpectedSummand>,
    /// The known commuting zero-curvature pair; None for the positively
    /// curved baselines.
    pub obstruction: Option<ObstructionPair>,
    /// Whether non-reversible (last-summand-weighted) norms apply: the last
    /// reference summand is the 1-dim centralizer line.
    pub nonreversible_shape: bool,
}

fn amb(v: &[f64]) -> DVector<f64> {
    DVector::from_vec(v.to_vec())
}

fn planes(list: &[&[f64]]) -> Vec<DVector<f64>> {
    list.iter().map(|v| amb(v)).collect()
}

fn summand(roots: &[&[f64]], torus: &[&[f64]]) -> ExpectedSummand {
    ExpectedSummand {
        roots: planes(roots),
        torus: planes(torus),
    }
}

pub fn fixture(case_id: CaseId) -> CaseFixture {
    match case_id {
        CaseId::C1 => CaseFixture {
            case_id,
            description: "Sp(2)/S^1 embedded with slope (1,3)",
            family: Family::C,
            rank: 2,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[1.0, 3.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(&[], &[&[3.0, -1.0]]),
                summand(&[&[1.0, -1.0], &[2.0, 0.0]], &[]),
                summand(&[&[1.0, 1.0]], &[]),
                summand(&[&[0.0, 2.0]], &[]),
            ],
            obstruction: Some(ObstructionPair {
                y: VectorSpec::RootPlane(amb(&[2.0, 0.0])),
                v: VectorSpec::RootPlane(amb(&[0.0, 2.0])),
            }),
            nonreversible_shape: false,
        },
        CaseId::C2 => CaseFixture {
            case_id,
            description: "Sp(2)/S^1 embedded diagonally",
            family: Family::C,
            rank: 2,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[1.0, 1.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(&[&[1.0, -1.0]], &[&[1.0, -1.0]]),
                summand(&[&[1.0, 1.0], &[2.0, 0.0], &[0.0, 2.0]], &[]),
            ],
            obstruction: Some(ObstructionPair {
                y: VectorSpec::Torus(amb(&[1.0, -1.0])),
                v: VectorSpec::RootPlane(amb(&[1.0, 1.0])),
            }),
            nonreversible_shape: false,
        },
        CaseId::C3 => CaseFixture {
            case_id,
            description: "Sp(3)/(S^1 x Sp(1)) with the circle embedded diagonally in the first two factors",
            family: Family::C,
            rank: 3,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[1.0, 1.0, 0.0]), amb(&[0.0, 0.0, 1.0])],
                root_part: vec![amb(&[0.0, 0.0, 2.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(
                    &[
                        &[1.0, 0.0, 1.0],
                        &[0.0, 1.0, 1.0],
                        &[1.0, 0.0, -1.0],
                        &[0.0, 1.0, -1.0],
                    ],
                    &[],
                ),
                summand(
                    &[&[1.0, 1.0, 0.0], &[2.0, 0.0, 0.0], &[0.0, 2.0, 0.0]],
                    &[],
                ),
                summand(&[&[1.0, -1.0, 0.0]], &[&[1.0, -1.0, 0.0]]),
            ],
            obstruction: Some(ObstructionPair {
                y: VectorSpec::RootPlane(amb(&[2.0, 0.0, 0.0])),
                v: VectorSpec::RootPlane(amb(&[0.0, 2.0, 0.0])),
            }),
            nonreversible_shape: false,
        },
        CaseId::C4 => CaseFixture {
            case_id,
            description: "SU(4)/(S^1 x SU(2)) with the circle of weights (1,1,1,-3)",
            family: Family::A,
            rank: 3,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[1.0, 1.0, 1.0, -3.0]), amb(&[1.0, -1.0, 0.0, 0.0])],
                root_part: vec![amb(&[1.0, -1.0, 0.0, 0.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(
                    &[&[1.0, 0.0, -1.0, 0.0], &[0.0, 1.0, -1.0, 0.0]],
                    &[],
                ),
                summand(
                    &[&[1.0, 0.0, 0.0, -1.0], &[0.0, 1.0, 0.0, -1.0]],
                    &[],
                ),
                summand(&[&[0.0, 0.0, 1.0, -1.0]], &[]),
                summand(&[], &[&[1.0, 1.0, -2.0, 0.0]]),
            ],
            obstruction: Some(ObstructionPair {
                y: VectorSpec::RootPlane(amb(&[1.0, 0.0, -1.0, 0.0])),
                v: VectorSpec::RootPlane(amb(&[0.0, 1.0, 0.0, -1.0])),
            }),
            // The central line R(e1+e2-2e3) admits the non-reversible shape,
            // but it commutes with nothing else in m, so no zero flag based
            // there exists; the non-reversible obstruction for this space
            // comes from the submersion comparison instead.  Only reversible
            // norms are certified here.
            nonreversible_shape: false,
        },
        CaseId::C5 => CaseFixture {
            case_id,
            description: "G2/SU(2) with SU(2) along the long root",
            family: Family::G2,
            rank: 2,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[0.0, 1.0])],
                root_part: vec![amb(&[0.0, SQRT3])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(
                    &[
                        &[0.5, SQRT3 / 2.0],
                        &[0.5, -SQRT3 / 2.0],
                        &[1.5, SQRT3 / 2.0],
                        &[1.5, -SQRT3 / 2.0],
                    ],
                    &[],
                ),
                summand(&[&[1.0, 0.0]], &[&[1.0, 0.0]]),
            ],
            obstruction: Some(ObstructionPair {
                y: VectorSpec::RootPlane(amb(&[0.5, -SQRT3 / 2.0])),
                v: VectorSpec::RootPlane(amb(&[1.5, SQRT3 / 2.0])),
            }),
            nonreversible_shape: false,
        },
        CaseId::AwDegenerate => CaseFixture {
            case_id,
            description: "SU(3)/S^1 with circle weights (1,-1,0): the degenerate Aloff-Wallach slope",
            family: Family::A,
            rank: 2,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[1.0, -1.0, 0.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(&[&[1.0, -1.0, 0.0]], &[]),
                summand(&[&[0.0, 1.0, -1.0], &[1.0, 0.0, -1.0]], &[]),
                summand(&[], &[&[1.0, 1.0, -2.0]]),
            ],
            obstruction: Some(ObstructionPair {
                y: VectorSpec::Torus(amb(&[1.0, 1.0, -2.0])),
                v: VectorSpec::RootPlane(amb(&[1.0, -1.0, 0.0])),
            }),
            nonreversible_shape: true,
        },
        CaseId::SphereSu => CaseFixture {
            case_id,
            description: "SU(3)/SU(2) = S^5 with the normal metric",
            family: Family::A,
            rank: 2,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[1.0, -1.0, 0.0])],
                root_part: vec![amb(&[1.0, -1.0, 0.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(&[&[0.0, 1.0, -1.0], &[1.0, 0.0, -1.0]], &[]),
                summand(&[], &[&[1.0, 1.0, -2.0]]),
            ],
            obstruction: None,
            nonreversible_shape: false,
        },
        CaseId::SphereSp => CaseFixture {
            case_id,
            description: "Sp(2)/Sp(1) = S^7 with the normal metric",
            family: Family::C,
            rank: 2,
            subalgebra: SubalgebraSpec {
                torus_part: vec![amb(&[0.0, 1.0])],
                root_part: vec![amb(&[0.0, 2.0])],
                ..Default::default()
            },
            expected_summands: vec![
                summand(&[&[2.0, 0.0]], &[&[1.0, 0.0]]),
                summand(&[&[1.0, 1.0], &[1.0, -1.0]], &[]),
            ],
            obstruction: None,
            nonreversible_shape: false,
        },
    }
}

impl CaseFixture {
    pub fn expected_dims(&self) -> Vec<usize> {
        self.expected_summands
            .iter()
            .map(|s| 2 * s.roots.len() + s.torus.len())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::reductive_split;
    use crate::liealg::build_compact_algebra;
    use crate::rootsys::build_root_system;
    use std::str::FromStr;
    use std::sync::Arc;

    #[test]
    fn case_id_round_trip() {
        for c in ALL_CASES {
            assert_eq!(CaseId::from_str(c.as_str()).unwrap(), c);
        }
        assert!(CaseId::from_str("C9").is_err());
    }

    #[test]
    fn expected_dims_match_reference() {
        let want: [(&str, &[usize]); 8] = [
            ("C1", &[1, 4, 2, 2]),
            ("C2", &[3, 6]),
            ("C3", &[8, 6, 3]),
            ("C4", &[4, 4, 2, 1]),
            ("C5", &[8, 3]),
            ("AW_degenerate", &[2, 4, 1]),
            ("sphere_SU", &[4, 1]),
            ("sphere_Sp", &[3, 4]),
        ];
        for (id, dims) in want {
            let f = fixture(CaseId::from_str(id).unwrap());
            assert_eq!(f.expected_dims(), dims.to_vec(), "{id}");
        }
    }

    #[test]
    fn solver_reproduces_every_fixture_decomposition() {
        for c in ALL_CASES {
            let f = fixture(c);
            let g = Arc::new(
                build_compact_algebra(&build_root_system(f.family, f.rank).unwrap()).unwrap(),
            );
            let split = reductive_split(g, &f.subalgebra).unwrap();
            let matched = split.match_expected(&f.expected_summands).unwrap();
            assert_eq!(matched.summand_dims(), f.expected_dims(), "{c}");
            // every fixture is an odd-dimensional coset with rank gap 1
            assert_eq!(matched.dim_m() % 2, 1, "{c}");
            assert_eq!(matched.rank_gap(), 1, "{c}");
            assert!(matched.very_standard_residual() < 1e-8, "{c}");
        }
    }

    #[test]
    fn obstruction_pairs_commute() {
        for c in ALL_CASES {
            let f = fixture(c);
            let Some(pair) = &f.obstruction else { continue };
            let g = Arc::new(
                build_compact_algebra(&build_root_system(f.family, f.rank).unwrap()).unwrap(),
            );
            let y = pair.y.realize(&g).unwrap();
            let v = pair.v.realize(&g).unwrap();
            let br = g.bracket_unchecked(&y, &v);
            assert!(g.norm(&br) < 1e-10, "{c}");
        }
    }

    #[test]
    fn nonreversible_fixtures_have_central_line_last() {
        for c in ALL_CASES {
            let f = fixture(c);
            if f.nonreversible_shape {
                assert_eq!(*f.expected_dims().last().unwrap(), 1, "{c}");
            }
        }
    }

    #[test]
    fn describe_vectors() {
        assert_eq!(
            VectorSpec::RootPlane(amb(&[2.0, 0.0])).describe(),
            "u[2e1]"
        );
        assert_eq!(
            VectorSpec::Torus(amb(&[1.0, 1.0, -2.0])).describe(),
            "t[e1+e2-2e3]"
        );
        assert_eq!(
            fmt_ambient(&amb(&[0.5, -SQRT3 / 2.0])),
            "1/2e1-sqrt(3)/2e2"
        );
    }
}
