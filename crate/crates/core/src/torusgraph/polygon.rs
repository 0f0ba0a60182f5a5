//! Decorated Newton polygons.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Embedding, Strand};
use crate::cyclic::{rotation_gcd, total_excess, CyclicComposition, Partition};
use crate::geom::{angle_cmp, Pt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("edge vectors must be nonzero")]
    ZeroEdge,
    #[error("edge vectors do not sum to zero")]
    NotClosed,
    #[error("edges are not in strictly counterclockwise order of direction")]
    NotConvex,
    #[error("decoration of edge {0} has size {1}, expected its integer length {2}")]
    SizeMismatch(usize, u64, u64),
    #[error("invalid decoration: {0}")]
    Decoration(String),
    #[error("cannot parse polygon: {0}")]
    Parse(String),
}

/// Lattice polygon with one decoration per edge, edges in counterclockwise order
/// starting from the first direction at or after the positive x-axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecoratedPolygon<D> {
    edges: Vec<((i64, i64), D)>,
}

pub type WeakPolygon = DecoratedPolygon<Partition>;
pub type StrongPolygon = DecoratedPolygon<CyclicComposition>;

pub trait Decoration {
    fn size(&self) -> u64;
}

impl Decoration for Partition {
    fn size(&self) -> u64 {
        Partition::size(self)
    }
}

impl Decoration for CyclicComposition {
    fn size(&self) -> u64 {
        self.n()
    }
}

pub fn ilen(v: (i64, i64)) -> u64 {
    v.0.unsigned_abs().gcd(&v.1.unsigned_abs())
}

fn dir_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    angle_cmp(Pt::int(a.0, a.1), Pt::int(b.0, b.1))
}

impl<D: Decoration + Clone> DecoratedPolygon<D> {
    /// Validates and sorts edges into canonical counterclockwise order.
    pub fn new(mut edges: Vec<((i64, i64), D)>) -> Result<Self, PolygonError> {
        if edges.iter().any(|e| e.0 == (0, 0)) {
            return Err(PolygonError::ZeroEdge);
        }
        let sum = edges.iter().fold((0, 0), |a, e| (a.0 + e.0 .0, a.1 + e.0 .1));
        if sum != (0, 0) {
            return Err(PolygonError::NotClosed);
        }
        edges.sort_by(|a, b| dir_cmp(a.0, b.0));
        for w in edges.windows(2) {
            if dir_cmp(w[0].0, w[1].0) == Ordering::Equal {
                return Err(PolygonError::NotConvex);
            }
        }
        for (i, (v, d)) in edges.iter().enumerate() {
            if d.size() != ilen(*v) {
                return Err(PolygonError::SizeMismatch(i, d.size(), ilen(*v)));
            }
        }
        Ok(DecoratedPolygon { edges })
    }

    pub fn edges(&self) -> &[((i64, i64), D)] {
        &self.edges
    }

    pub fn vectors(&self) -> Vec<(i64, i64)> {
        self.edges.iter().map(|e| e.0).collect()
    }

    pub fn is_point(&self) -> bool {
        self.edges.is_empty()
    }

    /// Twice the area, always an integer.
    pub fn twice_area(&self) -> i64 {
        let mut p = (0i64, 0i64);
        let mut s = 0;
        for (v, _) in &self.edges {
            let q = (p.0 + v.0, p.1 + v.1);
            s += p.0 * q.1 - p.1 * q.0;
            p = q;
        }
        s
    }

    /// Applies an integer matrix of determinant one to the edge vectors.
    pub fn transform(&self, m: [[i64; 2]; 2]) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|(v, d)| ((m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1), d.clone()))
            .collect();
        DecoratedPolygon::new(edges).expect("unimodular maps preserve validity")
    }
}

impl WeakPolygon {
    pub fn excess(&self) -> u64 {
        total_excess(self.edges.iter().map(|e| &e.1))
    }

    /// Groups nonzero strand homologies by direction.
    pub fn from_strands(strands: &[Strand]) -> WeakPolygon {
        let mut groups: Vec<((i64, i64), Vec<u64>)> = Vec::new();
        for s in strands.iter().filter(|s| s.homology != (0, 0)) {
            let g = ilen(s.homology) as i64;
            let prim = (s.homology.0 / g, s.homology.1 / g);
            match groups.iter_mut().find(|e| e.0 == prim) {
                Some(e) => e.1.push(g as u64),
                None => groups.push((prim, vec![g as u64])),
            }
        }
        let edges = groups
            .into_iter()
            .map(|(p, parts)| {
                let t: u64 = parts.iter().sum();
                ((p.0 * t as i64, p.1 * t as i64), Partition::new(parts).expect("positive parts"))
            })
            .collect();
        WeakPolygon::new(edges).expect("strand homologies close up")
    }
}

impl StrongPolygon {
    pub fn weak(&self) -> WeakPolygon {
        WeakPolygon { edges: self.edges.iter().map(|(v, c)| (*v, c.to_partition())).collect() }
    }

    /// `d(bfcc)`, the gcd of rotation numbers; `None` for a point.
    pub fn rotation_gcd(&self) -> Option<u64> {
        let cs: Vec<CyclicComposition> = self.edges.iter().map(|e| e.1.clone()).collect();
        rotation_gcd(&cs).ok()
    }

    pub fn to_json(&self, mu: Option<u64>) -> serde_json::Value {
        let file = PolygonFile {
            edges: self
                .edges
                .iter()
                .map(|(v, c)| EdgeFile { vector: [v.0, v.1], composition: c.parts().to_vec() })
                .collect(),
            mu,
        };
        serde_json::to_value(file).expect("serializable")
    }

    /// Parses `{edges:[{vector,composition}], mu}`.
    pub fn from_json_str(s: &str) -> Result<(StrongPolygon, Option<u64>), PolygonError> {
        let file: PolygonFile = serde_json::from_str(s).map_err(|e| PolygonError::Parse(e.to_string()))?;
        let edges = file
            .edges
            .into_iter()
            .map(|e| {
                CyclicComposition::new(e.composition)
                    .map(|c| ((e.vector[0], e.vector[1]), c))
                    .map_err(|err| PolygonError::Decoration(err.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((StrongPolygon::new(edges)?, file.mu))
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    vector: [i64; 2],
    composition: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct PolygonFile {
    edges: Vec<EdgeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<u64>,
}

impl Embedding {
    pub fn newton_polygon_weak(&self) -> WeakPolygon {
        WeakPolygon::from_strands(&self.strands())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(p: &[u64]) -> CyclicComposition {
        CyclicComposition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn example_polygon() {
        let p = StrongPolygon::new(vec![((-4, -2), cc(&[2])), ((2, 0), cc(&[2])), ((2, 2), cc(&[2]))]).unwrap();
        assert_eq!(p.vectors(), vec![(2, 0), (2, 2), (-4, -2)]);
        assert_eq!(p.twice_area(), 4);
        assert_eq!(p.rotation_gcd(), Some(2));
        assert_eq!(p.weak().excess(), 3);
    }

    #[test]
    fn rejects_bad_polygons() {
        assert_eq!(StrongPolygon::new(vec![((1, 0), cc(&[1]))]).unwrap_err(), PolygonError::NotClosed);
        assert!(matches!(
            StrongPolygon::new(vec![((2, 0), cc(&[1])), ((-2, 0), cc(&[2]))]),
            Err(PolygonError::SizeMismatch(..))
        ));
        assert_eq!(
            StrongPolygon::new(vec![((1, 0), cc(&[1])), ((1, 0), cc(&[1])), ((-2, 0), cc(&[2]))]).unwrap_err(),
            PolygonError::NotConvex
        );
    }

    #[test]
    fn json_round_trip() {
        let p = StrongPolygon::new(vec![((4, 0), cc(&[2, 2])), ((-4, 0), cc(&[2, 2]))]).unwrap();
        let s = p.to_json(Some(1)).to_string();
        assert_eq!(StrongPolygon::from_json_str(&s).unwrap(), (p, Some(1)));
    }
}
