//! Face walks and contractible faces.

use num_traits::Signed;

use super::Embedding;
use crate::geom::{twice_signed_area, winding_number, BBox, Pt};

/// Face walks with the face kept on the left.
#[derive(Debug, Clone)]
pub struct FaceData {
    pub walks: Vec<Vec<usize>>,
    pub voltages: Vec<(i64, i64)>,
    pub contractible: Vec<bool>,
    /// Walk index of every dart.
    pub walk_of: Vec<usize>,
    /// Lift offset of each dart's origin within its walk, the walk starting at offset zero.
    pub prefix: Vec<(i64, i64)>,
}

impl FaceData {
    pub fn num_contractible(&self) -> usize {
        self.contractible.iter().filter(|&&c| c).count()
    }
}

impl Embedding {
    /// Next dart along the face on the left of `d`.
    pub fn face_next(&self, d: usize) -> usize {
        let m = self.map();
        m.rot_prev(m.twin(d))
    }

    /// Closed lifted boundary polygon of a walk starting at offset zero.
    pub fn walk_polygon(&self, walk: &[usize]) -> Vec<Pt> {
        let m = self.map();
        let mut off = Pt::zero();
        let mut poly = Vec::new();
        for &d in walk {
            let pl = m.polyline(d);
            poly.extend(pl[..pl.len() - 1].iter().map(|&p| p + off));
            let v = m.voltage(d);
            off = off + Pt::int(v.0, v.1);
        }
        poly
    }

    pub fn faces(&self) -> FaceData {
        let m = self.map();
        let nd = m.num_darts();
        let mut walk_of = vec![usize::MAX; nd];
        let mut prefix = vec![(0, 0); nd];
        let mut walks = Vec::new();
        let mut voltages = Vec::new();
        for s in 0..nd {
            if walk_of[s] != usize::MAX {
                continue;
            }
            let idx = walks.len();
            let mut w = Vec::new();
            let mut pos = (0i64, 0i64);
            let mut d = s;
            while walk_of[d] == usize::MAX {
                walk_of[d] = idx;
                prefix[d] = pos;
                w.push(d);
                let v = m.voltage(d);
                pos = (pos.0 + v.0, pos.1 + v.1);
                d = self.face_next(d);
            }
            walks.push(w);
            voltages.push(pos);
        }
        let reps = self.component_representatives();
        let contractible = walks
            .iter()
            .zip(&voltages)
            .map(|(w, &v)| v == (0, 0) && self.bounds_empty_disk(w, &reps))
            .collect();
        FaceData { walks, voltages, contractible, walk_of, prefix }
    }

    pub fn count_contractible_faces(&self) -> usize {
        self.faces().num_contractible()
    }

    fn component_representatives(&self) -> Vec<Pt> {
        let comp = self.components();
        let mut reps: Vec<Option<Pt>> = Vec::new();
        for (v, &c) in comp.iter().enumerate() {
            if reps.len() <= c {
                reps.resize(c + 1, None);
            }
            if reps[c].is_none() {
                reps[c] = Some(self.graph().vertices[v].pos);
            }
        }
        reps.into_iter().flatten().collect()
    }

    fn bounds_empty_disk(&self, walk: &[usize], reps: &[Pt]) -> bool {
        let poly = self.walk_polygon(walk);
        if !twice_signed_area(&poly).is_positive() {
            return false;
        }
        let bb = BBox::of(&poly);
        for &r in reps {
            let rb = BBox::of(&[r]);
            for (tx, ty) in bb.translations_meeting(&rb) {
                let p = r + Pt::int(tx, ty);
                if let Some(w) = winding_number(&poly, p) {
                    if w != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_graphs::*;
    use super::*;

    #[test]
    fn every_dart_in_one_walk() {
        for g in [parallel_bigons(), horizontal_loop(), contractible_square()] {
            let e = Embedding::new(g).unwrap();
            let f = e.faces();
            let total: usize = f.walks.iter().map(|w| w.len()).sum();
            assert_eq!(total, e.map().num_darts());
        }
    }

    #[test]
    fn contractible_counts() {
        assert_eq!(Embedding::new(contractible_square()).unwrap().count_contractible_faces(), 1);
        assert_eq!(Embedding::new(horizontal_loop()).unwrap().count_contractible_faces(), 0);
        assert_eq!(Embedding::new(parallel_bigons()).unwrap().count_contractible_faces(), 1);
    }

    #[test]
    fn nested_loop_blocks_outer_disk() {
        use super::super::{Color, TorusGraph};
        use crate::geom::q;
        let mut g = TorusGraph::default();
        let p = |a, b| Pt::new(q(a, 16), q(b, 16));
        let square = |g: &mut TorusGraph, lo: i128, hi: i128| {
            let a = g.add_vertex(Color::White, p(lo, lo));
            let b = g.add_vertex(Color::Black, p(hi, lo));
            let c = g.add_vertex(Color::White, p(hi, hi));
            let d = g.add_vertex(Color::Black, p(lo, hi));
            g.add_edge_path(a, b, &[p(lo, lo), p(hi, lo)]);
            g.add_edge_path(b, c, &[p(hi, lo), p(hi, hi)]);
            g.add_edge_path(c, d, &[p(hi, hi), p(lo, hi)]);
            g.add_edge_path(d, a, &[p(lo, hi), p(lo, lo)]);
        };
        square(&mut g, 2, 14);
        square(&mut g, 6, 10);
        let e = Embedding::new(g).unwrap();
        assert_eq!(e.count_contractible_faces(), 1);
    }
}
