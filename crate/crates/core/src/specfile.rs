//! Plain-text file formats: space descriptions (coset data plus expected
//! summands), norm descriptions, and the short vector syntax used on the
//! command line.
//!
//! Both formats are line-oriented, written by this module in a canonical
//! form that parses back bit-exactly (floats use shortest round-trip
//! formatting).

use crate::coset::{ExpectedSummand, SubalgebraSpec};
use crate::error::{Error, Result};
use crate::fixtures::{fixture, CaseFixture, CaseId};
use crate::liealg::{AlgebraVector, CompactLieAlgebra};
use crate::norm::{Expr, LFunction, NormKind, NormShape};
use crate::rootsys::{Family, SQRT3};
use nalgebra::DVector;
use std::str::FromStr;

#[derive(Debug, Clone)]
pub struct SpaceSpec {
    pub name: String,
    pub family: Family,
    pub rank: usize,
    pub subalgebra: SubalgebraSpec,
    pub expected_summands: Vec<ExpectedSummand>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormSpecKind {
    Diagonal { coeffs: Vec<f64> },
    Randers { coeffs: Vec<f64>, b: f64 },
    Generic { expr: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    pub shape: NormShape,
    pub kind: NormSpecKind,
}

fn perr(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_floats(file: &str, line_no: usize, items: &[&str]) -> Result<Vec<f64>> {
    items
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| perr(file, line_no, format!("bad number {s:?}")))
        })
        .collect()
}

fn fmt_floats(v: &DVector<f64>) -> String {
    v.iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse a space file.
pub fn parse_space(file: &str, text: &str) -> Result<SpaceSpec> {
    let mut name = String::new();
    let mut family: Option<Family> = None;
    let mut rank: Option<usize> = None;
    let mut sub = SubalgebraSpec::default();
    let mut expected: Vec<ExpectedSummand> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let key = it.next().unwrap();
        let rest: Vec<&str> = it.collect();
        match key {
            "space" => name = rest.join(" "),
            "family" => {
                let f = rest
                    .first()
                    .ok_or_else(|| perr(file, n, "missing family"))?;
                family = Some(Family::from_str(f)?);
            }
            "rank" => {
                let r = rest.first().ok_or_else(|| perr(file, n, "missing rank"))?;
                rank = Some(
                    r.parse()
                        .map_err(|_| perr(file, n, format!("bad rank {r:?}")))?,
                );
            }
            "h.torus" => sub
                .torus_part
                .push(DVector::from_vec(parse_floats(file, n, &rest)?)),
            "h.plane" => sub
                .root_part
                .push(DVector::from_vec(parse_floats(file, n, &rest)?)),
            "summand" => {
                let mut s = ExpectedSummand::default();
                for item in &rest {
                    let (tag, coords) = item
                        .split_once(':')
                        .ok_or_else(|| perr(file, n, format!("bad summand item {item:?}")))?;
                    let parts: Vec<&str> = coords.split(',').collect();
                    let v = DVector::from_vec(parse_floats(file, n, &parts)?);
                    match tag {
                        "plane" => s.roots.push(v),
                        "torus" => s.torus.push(v),
                        other => {
                            return Err(perr(file, n, format!("unknown summand tag {other:?}")))
                        }
                    }
                }
                expected.push(s);
            }
            other => return Err(perr(file, n, format!("unknown directive {other:?}"))),
        }
    }
    Ok(SpaceSpec {
        name,
        family: family.ok_or_else(|| perr(file, 0, "missing family"))?,
        rank: rank.ok_or_else(|| perr(file, 0, "missing rank"))?,
        subalgebra: sub,
        expected_summands: expected,
    })
}

/// Canonical text form of a space spec.
pub fn write_space(s: &SpaceSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("space {}\n", s.name));
    out.push_str(&format!("family {}\n", s.family.as_str()));
    out.push_str(&format!("rank {}\n", s.rank));
    for t in &s.subalgebra.torus_part {
        out.push_str(&format!("h.torus {}\n", fmt_floats(t)));
    }
    for p in &s.subalgebra.root_part {
        out.push_str(&format!("h.plane {}\n", fmt_floats(p)));
    }
    for sm in &s.expected_summands {
        let mut items = Vec::new();
        for r in &sm.roots {
            items.push(format!(
                "plane:{}",
                r.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",")
            ));
        }
        for t in &sm.torus {
            items.push(format!(
                "torus:{}",
                t.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(",")
            ));
        }
        out.push_str(&format!("summand {}\n", items.join(" ")));
    }
    out
}

/// Space spec corresponding to a built-in fixture.
pub fn space_of_fixture(f: &CaseFixture) -> SpaceSpec {
    SpaceSpec {
        name: f.case_id.as_str().to_string(),
        family: f.family,
        rank: f.rank,
        subalgebra: f.subalgebra.clone(),
        expected_summands: f.expected_summands.clone(),
    }
}

pub fn load_builtin_space(case_id: CaseId) -> SpaceSpec {
    space_of_fixture(&fixture(case_id))
}

/// Parse a norm file.
pub fn parse_norm(file: &str, text: &str) -> Result<NormSpec> {
    let mut shape: Option<NormShape> = None;
    let mut kind: Option<&str> = None;
    let mut coeffs: Vec<f64> = Vec::new();
    let mut b: Option<f64> = None;
    let mut expr: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "norm" => {}
            "shape" => shape = Some(NormShape::from_str(rest.trim())?),
            "kind" => {
                kind = Some(match rest.trim() {
                    "diagonal" => "diagonal",
                    "randers" => "randers",
                    "generic" => "generic",
                    other => {
                        return Err(perr(file, n, format!("unknown norm kind {other:?}")))
                    }
                })
            }
            "coeffs" => {
                let items: Vec<&str> = rest.split_whitespace().collect();
                coeffs = parse_floats(file, n, &items)?;
            }
            "b" => {
                b = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| perr(file, n, format!("bad number {rest:?}")))?,
                )
            }
            "expr" => expr = Some(rest.trim().to_string()),
            other => return Err(perr(file, n, format!("unknown directive {other:?}"))),
        }
    }
    let shape = shape.ok_or_else(|| perr(file, 0, "missing shape"))?;
    let kind = match kind.ok_or_else(|| perr(file, 0, "missing kind"))? {
        "diagonal" => NormSpecKind::Diagonal { coeffs },
        "randers" => NormSpecKind::Randers {
            coeffs,
            b: b.ok_or_else(|| perr(file, 0, "randers norm needs b"))?,
        },
        "generic" => NormSpecKind::Generic {
            expr: expr.ok_or_else(|| perr(file, 0, "generic norm needs expr"))?,
        },
        _ => unreachable!(),
    };
    Ok(NormSpec { shape, kind })
}

/// Canonical text form of a norm spec.
pub fn write_norm(n: &NormSpec) -> String {
    let mut out = String::new();
    out.push_str("norm\n");
    out.push_str(&format!("shape {}\n", n.shape.as_str()));
    match &n.kind {
        NormSpecKind::Diagonal { coeffs } => {
            out.push_str("kind diagonal\n");
            out.push_str(&format!(
                "coeffs {}\n",
                coeffs.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(" ")
            ));
        }
        NormSpecKind::Randers { coeffs, b } => {
            out.push_str("kind randers\n");
            out.push_str(&format!(
                "coeffs {}\n",
                coeffs.iter().map(|c| format!("{c}")).collect::<Vec<_>>().join(" ")
            ));
            out.push_str(&format!("b {b}\n"));
        }
        NormSpecKind::Generic { expr } => {
            out.push_str("kind generic\n");
            out.push_str(&format!("expr {expr}\n"));
        }
    }
    out
}

impl NormSpec {
    /// Instantiate for a concrete summand structure.
    pub fn realize(&self, summand_dims: Vec<usize>) -> Result<LFunction> {
        let s = summand_dims.len();
        let kind = match &self.kind {
            NormSpecKind::Diagonal { coeffs } => NormKind::Diagonal {
                coeffs: coeffs.clone(),
            },
            NormSpecKind::Randers { coeffs, b } => NormKind::Randers {
                coeffs: coeffs.clone(),
                b: *b,
            },
            NormSpecKind::Generic { expr } => {
                let num_t = if self.shape == NormShape::NonReversible {
                    s - 1
                } else {
                    s
                };
                NormKind::Generic {
                    expr: Expr::parse(expr, num_t, self.shape == NormShape::NonReversible)?,
                    source: expr.clone(),
                }
            }
        };
        LFunction::new(self.shape, kind, summand_dims)
    }
}

/// Parse the short vector syntax: `u[2e1]` (root-plane generator),
/// `v[2e1]` (the rotated generator), or `t[e1+e2-2e3]` (torus direction).
pub fn parse_vector_spec(g: &CompactLieAlgebra, s: &str) -> Result<AlgebraVector> {
    let bad = || Error::InvalidArgument(format!("cannot parse vector spec {s:?}"));
    let s = s.trim();
    let (tag, body) = s.split_once('[').ok_or_else(bad)?;
    let body = body.strip_suffix(']').ok_or_else(bad)?;
    let amb = parse_ambient(body, g.root_system.ambient_dim)?;
    match tag {
        "u" | "v" => {
            let k = g
                .positive_root_index(&amb)
                .ok_or_else(|| Error::InvalidArgument(format!("{body:?} is not a root")))?;
            let (ui, vi) = g.plane_indices(k);
            Ok(g.basis_vector(if tag == "u" { ui } else { vi }))
        }
        "t" => g.torus_vector(&amb),
        _ => Err(bad()),
    }
}

/// Parse a signed combination like `e1+e2-2e3`, `3e1-e2`, or
/// `1/2e1-sqrt(3)/2e2`.
pub fn parse_ambient(body: &str, dim: usize) -> Result<DVector<f64>> {
    let bad = |msg: &str| Error::InvalidArgument(format!("{msg} in ambient spec {body:?}"));
    let mut out = DVector::zeros(dim);
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = 1.0;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        // magnitude: [number | sqrt(3)] [/ number]
        let mut mag = 1.0;
        if i < chars.len() && chars[i] != 'e' {
            if chars[i..].iter().collect::<String>().starts_with("sqrt(3)") {
                mag = SQRT3;
                i += 7;
            } else {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let txt: String = chars[start..i].iter().collect();
                mag = txt.parse().map_err(|_| bad("bad coefficient"))?;
            }
            if i < chars.len() && chars[i] == '/' {
                i += 1;
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let txt: String = chars[start..i].iter().collect();
                let den: f64 = txt.parse().map_err(|_| bad("bad denominator"))?;
                mag /= den;
            }
        }
        if i >= chars.len() || chars[i] != 'e' {
            return Err(bad("expected basis symbol e<i>"));
        }
        i += 1;
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let idx: usize = chars[start..i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| bad("bad basis index"))?;
        if idx == 0 || idx > dim {
            return Err(bad("basis index out of range"));
        }
        out[idx - 1] += sign * mag;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::ALL_CASES;
    use crate::liealg::build_compact_algebra;
    use crate::rootsys::build_root_system;

    #[test]
    fn space_round_trip_for_all_fixtures() {
        for c in ALL_CASES {
            let spec = load_builtin_space(c);
            let text = write_space(&spec);
            let parsed = parse_space("mem", &text).unwrap();
            assert_eq!(write_space(&parsed), text, "{c}");
            assert_eq!(parsed.family, spec.family);
            assert_eq!(parsed.rank, spec.rank);
            assert_eq!(
                parsed.expected_summands.len(),
                spec.expected_summands.len()
            );
        }
    }

    #[test]
    fn shipped_space_files_match_embedded_fixtures() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
        for c in ALL_CASES {
            let path = dir.join(format!("{}.space", c.as_str()));
            let text = std::fs::read_to_string(&path).unwrap();
            assert_eq!(
                text,
                write_space(&load_builtin_space(c)),
                "{} out of sync",
                path.display()
            );
            let parsed = parse_space(&path.display().to_string(), &text).unwrap();
            assert_eq!(write_space(&parsed), text);
        }
    }

    #[test]
    fn norm_round_trip() {
        let specs = vec![
            NormSpec {
                shape: NormShape::Reversible,
                kind: NormSpecKind::Diagonal {
                    coeffs: vec![1.0, 0.5, 2.25],
                },
            },
            NormSpec {
                shape: NormShape::NonReversible,
                kind: NormSpecKind::Randers {
                    coeffs: vec![1.0, 3.0],
                    b: 0.375,
                },
            },
            NormSpec {
                shape: NormShape::Reversible,
                kind: NormSpecKind::Generic {
                    expr: "t1 + 2*t2".to_string(),
                },
            },
        ];
        for s in specs {
            let text = write_norm(&s);
            let parsed = parse_norm("mem", &text).unwrap();
            assert_eq!(parsed, s);
            assert_eq!(write_norm(&parsed), text);
        }
    }

    #[test]
    fn norm_realize_checks_shape() {
        let spec = NormSpec {
            shape: NormShape::NonReversible,
            kind: NormSpecKind::Randers {
                coeffs: vec![1.0],
                b: 0.3,
            },
        };
        assert!(spec.realize(vec![2, 1]).is_ok());
        assert!(spec.realize(vec![2, 3]).is_err());
    }

    #[test]
    fn vector_spec_parsing() {
        let g = build_compact_algebra(&build_root_system(Family::A, 2).unwrap()).unwrap();
        let u = parse_vector_spec(&g, "u[e1-e2]").unwrap();
        let k = g
            .positive_root_index(&DVector::from_vec(vec![1.0, -1.0, 0.0]))
            .unwrap();
        assert_eq!(u, g.basis_vector(g.plane_indices(k).0));
        let t = parse_vector_spec(&g, "t[e1+e2-2e3]").unwrap();
        assert!(g.norm(&t) > 0.1);
        // G2 half/sqrt coefficients
        let g2 = build_compact_algebra(&build_root_system(Family::G2, 2).unwrap()).unwrap();
        assert!(parse_vector_spec(&g2, "u[1/2e1-sqrt(3)/2e2]").is_ok());
        assert!(parse_vector_spec(&g, "u[e1+e2]").is_err());
        assert!(parse_vector_spec(&g, "w[e1-e2]").is_err());
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_space("f.space", "family A\nrank 2\nbogus 1").unwrap_err();
        match err {
            Error::Parse { file, line, .. } => {
                assert_eq!(file, "f.space");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
