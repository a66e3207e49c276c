//! Abstract root systems for the families `A_n`, `C_n` and `G2`, with roots
//! realized as explicit vectors in Euclidean coordinates.
//!
//! `A_n` roots live in the trace-zero hyperplane of an `(n+1)`-dimensional
//! ambient space, so that every root keeps the familiar `e_i - e_j` shape.

use crate::error::{Error, Result};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

pub const ROOT_MATCH_TOL: f64 = 1e-12;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    C,
    G2,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::C => "C",
            Family::G2 => "G2",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "C" | "c" => Ok(Family::C),
            "G2" | "g2" | "G" | "g" => Ok(Family::G2),
            other => Err(Error::UnsupportedFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// Dimension of the ambient Euclidean space carrying the coordinates.
    pub ambient_dim: usize,
    /// Dimension of the Cartan subalgebra t (= rank).
    pub cartan_dim: usize,
    pub roots: Vec<DVector<f64>>,
}

fn unit(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

/// Build the full root set of the given family in the standard coordinates.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    match family {
        Family::A => {
            if rank < 1 {
                return Err(Error::UnsupportedFamily(format!("A{rank}")));
            }
            let dim = rank + 1;
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        roots.push(unit(dim, i) - unit(dim, j));
                    }
                }
            }
            Ok(RootSystem {
                family,
                rank,
                ambient_dim: dim,
                cartan_dim: rank,
                roots,
            })
        }
        Family::C => {
            if rank < 2 {
                return Err(Error::UnsupportedFamily(format!("C{rank}")));
            }
            let dim = rank;
            let mut roots = Vec::new();
            for i in 0..dim {
                for j in (i + 1)..dim {
                    for si in [1.0, -1.0] {
                        for sj in [1.0, -1.0] {
                            roots.push(unit(dim, i) * si + unit(dim, j) * sj);
                        }
                    }
                }
            }
            for i in 0..dim {
                roots.push(unit(dim, i) * 2.0);
                roots.push(unit(dim, i) * -2.0);
            }
            Ok(RootSystem {
                family,
                rank,
                ambient_dim: dim,
                cartan_dim: rank,
                roots,
            })
        }
        Family::G2 => {
            if rank != 2 {
                return Err(Error::UnsupportedFamily(format!("G2 with rank {rank}")));
            }
            let h = SQRT3 / 2.0;
            let raw: [[f64; 2]; 6] = [
                [1.0, 0.0],
                [0.0, SQRT3],
                [0.5, h],
                [0.5, -h],
                [1.5, h],
                [1.5, -h],
            ];
            let mut roots = Vec::new();
            for r in raw {
                roots.push(DVector::from_vec(vec![r[0], r[1]]));
                roots.push(DVector::from_vec(vec![-r[0], -r[1]]));
            }
            Ok(RootSystem {
                family,
                rank,
                ambient_dim: 2,
                cartan_dim: 2,
                roots,
            })
        }
    }
}

/// True iff `v` matches one of the roots within `ROOT_MATCH_TOL`.
pub fn is_root(rs: &RootSystem, v: &DVector<f64>) -> bool {
    rs.root_index(v).is_some()
}

impl RootSystem {
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        build_root_system(family, rank)
    }

    /// Index of the root matching `v`, if any.
    pub fn root_index(&self, v: &DVector<f64>) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| (r - v).amax() < ROOT_MATCH_TOL)
    }

    pub fn contains(&self, v: &DVector<f64>) -> bool {
        self.root_index(v).is_some()
    }

    /// Positive roots, determined by a fixed generic linear functional and
    /// ordered by height (sum of simple-root coordinates), ties broken
    /// lexicographically.  The ordering is deterministic.
    pub fn positive_roots(&self) -> Vec<DVector<f64>> {
        let f = self.generic_functional();
        let mut pos: Vec<DVector<f64>> = self
            .roots
            .iter()
            .filter(|r| r.dot(&f) > 0.0)
            .cloned()
            .collect();
        let simples = simple_from_positive(&pos);
        let coords: Vec<Vec<i64>> = pos
            .iter()
            .map(|r| simple_coordinates(r, &simples).expect("root expressible in simple roots"))
            .collect();
        let mut idx: Vec<usize> = (0..pos.len()).collect();
        idx.sort_by(|&a, &b| {
            let ha: i64 = coords[a].iter().sum();
            let hb: i64 = coords[b].iter().sum();
            ha.cmp(&hb).then_with(|| coords[a].cmp(&coords[b]))
        });
        pos = idx.into_iter().map(|i| pos[i].clone()).collect();
        pos
    }

    /// Simple roots (indecomposable positive roots), in the order induced by
    /// `positive_roots`.
    pub fn simple_roots(&self) -> Vec<DVector<f64>> {
        let f = self.generic_functional();
        let pos: Vec<DVector<f64>> = self
            .roots
            .iter()
            .filter(|r| r.dot(&f) > 0.0)
            .cloned()
            .collect();
        simple_from_positive(&pos)
    }

    /// Fixed generic functional separating the root set into positives and
    /// negatives without ties.
    fn generic_functional(&self) -> DVector<f64> {
        let phi = 0.618_033_988_749_894_9_f64;
        DVector::from_iterator(
            self.ambient_dim,
            (0..self.ambient_dim).map(|i| phi.powi(i as i32 + 1)),
        )
    }

    /// Cartan pairing 2<a,b>/<b,b>.
    pub fn pairing(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        2.0 * a.dot(b) / b.dot(b)
    }

    /// Largest `p` with `b - p a` a root (the tail of the a-string through b).
    pub fn string_down(&self, a: &DVector<f64>, b: &DVector<f64>) -> usize {
        let mut p = 0;
        let mut v = b - a;
        while self.contains(&v) {
            p += 1;
            v -= a;
        }
        p
    }
}

fn simple_from_positive(pos: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut simples: Vec<DVector<f64>> = Vec::new();
    for r in pos {
        let decomposable = pos.iter().any(|a| {
            pos.iter().any(|b| {
                let s = a + b;
                (&s - r).amax() < ROOT_MATCH_TOL
            })
        });
        if !decomposable {
            simples.push(r.clone());
        }
    }
    simples
}

/// Integer coordinates of a root in the simple-root basis.
pub fn simple_coordinates(root: &DVector<f64>, simples: &[DVector<f64>]) -> Option<Vec<i64>> {
    // least-squares solve, then round and verify
    let dim = root.len();
    let k = simples.len();
    let mut a = nalgebra::DMatrix::zeros(dim, k);
    for (j, s) in simples.iter().enumerate() {
        a.set_column(j, s);
    }
    let sol = a.clone().svd(true, true).solve(root, 1e-12).ok()?;
    let mut coords = Vec::with_capacity(k);
    let mut recon = DVector::zeros(dim);
    for (j, s) in simples.iter().enumerate() {
        let c = sol[j].round();
        if (sol[j] - c).abs() > 1e-8 {
            return None;
        }
        coords.push(c as i64);
        recon += s * c;
    }
    if (recon - root).amax() > 1e-8 {
        return None;
    }
    Some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecf(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    #[test]
    fn c2_roots() {
        let rs = build_root_system(Family::C, 2).unwrap();
        assert_eq!(rs.roots.len(), 8);
        for expected in [
            vecf(&[2.0, 0.0]),
            vecf(&[-2.0, 0.0]),
            vecf(&[0.0, 2.0]),
            vecf(&[0.0, -2.0]),
            vecf(&[1.0, 1.0]),
            vecf(&[1.0, -1.0]),
            vecf(&[-1.0, 1.0]),
            vecf(&[-1.0, -1.0]),
        ] {
            assert!(rs.contains(&expected));
        }
        assert!(!is_root(&rs, &vecf(&[2.0, 2.0])));
        assert!(is_root(&rs, &vecf(&[1.0, -1.0])));
    }

    #[test]
    fn a2_roots() {
        let rs = build_root_system(Family::A, 2).unwrap();
        assert_eq!(rs.roots.len(), 6);
        assert!(rs.contains(&vecf(&[1.0, -1.0, 0.0])));
        assert!(rs.contains(&vecf(&[1.0, 0.0, -1.0])));
        assert!(rs.contains(&vecf(&[0.0, 1.0, -1.0])));
    }

    #[test]
    fn g2_roots() {
        let rs = build_root_system(Family::G2, 2).unwrap();
        assert_eq!(rs.roots.len(), 12);
        assert!(rs.contains(&vecf(&[0.0, SQRT3])));
        assert!(rs.contains(&vecf(&[1.5, -SQRT3 / 2.0])));
        // e1 + sqrt(3) e2 is not a root
        assert!(!is_root(&rs, &vecf(&[1.0, SQRT3])));
    }

    #[test]
    fn family_counts() {
        assert_eq!(build_root_system(Family::A, 3).unwrap().roots.len(), 12);
        assert_eq!(build_root_system(Family::C, 3).unwrap().roots.len(), 18);
    }

    #[test]
    fn negation_closure_and_crystallographic() {
        for rs in [
            build_root_system(Family::A, 3).unwrap(),
            build_root_system(Family::C, 3).unwrap(),
            build_root_system(Family::G2, 2).unwrap(),
        ] {
            for r in &rs.roots {
                assert!(rs.contains(&(-r.clone())));
            }
            for a in &rs.roots {
                for b in &rs.roots {
                    let p = RootSystem::pairing(a, b);
                    assert!(
                        (p - p.round()).abs() < 1e-9,
                        "pairing {p} not an integer in {:?}",
                        rs.family
                    );
                }
            }
        }
    }

    #[test]
    fn weyl_reflection_closure() {
        for rs in [
            build_root_system(Family::A, 2).unwrap(),
            build_root_system(Family::C, 2).unwrap(),
            build_root_system(Family::G2, 2).unwrap(),
        ] {
            for a in &rs.roots {
                for b in &rs.roots {
                    let refl = a - b * RootSystem::pairing(a, b);
                    assert!(rs.contains(&refl));
                }
            }
        }
    }

    #[test]
    fn string_lengths() {
        for (rs, maxlen) in [
            (build_root_system(Family::A, 3).unwrap(), 2usize),
            (build_root_system(Family::C, 3).unwrap(), 2),
            (build_root_system(Family::G2, 2).unwrap(), 4),
        ] {
            for a in &rs.roots {
                for b in &rs.roots {
                    if (a - b).amax() < 1e-12 || (a + b).amax() < 1e-12 {
                        continue;
                    }
                    let down = rs.string_down(a, b);
                    let mut up = 0;
                    let mut v = a + b;
                    while rs.contains(&v) {
                        up += 1;
                        v += a;
                    }
                    assert!(down + up <= maxlen, "string too long in {:?}", rs.family);
                }
            }
        }
    }

    #[test]
    fn simple_roots_counts() {
        assert_eq!(build_root_system(Family::A, 3).unwrap().simple_roots().len(), 3);
        assert_eq!(build_root_system(Family::C, 3).unwrap().simple_roots().len(), 3);
        assert_eq!(build_root_system(Family::G2, 2).unwrap().simple_roots().len(), 2);
    }

    #[test]
    fn positive_roots_height_ordered() {
        let rs = build_root_system(Family::G2, 2).unwrap();
        let pos = rs.positive_roots();
        assert_eq!(pos.len(), 6);
        let simples = rs.simple_roots();
        let heights: Vec<i64> = pos
            .iter()
            .map(|r| simple_coordinates(r, &simples).unwrap().iter().sum())
            .collect();
        for w in heights.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert_eq!(*heights.last().unwrap(), 5); // highest root of G2
    }

    #[test]
    fn unsupported_families() {
        assert!(build_root_system(Family::G2, 3).is_err());
        assert!(build_root_system(Family::C, 1).is_err());
        assert!(build_root_system(Family::A, 0).is_err());
    }
}
