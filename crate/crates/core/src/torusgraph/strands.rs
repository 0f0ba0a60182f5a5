//! Strand tracing and strand crossings.
//!
//! Strands turn maximally right at black vertices and maximally left at white
//! vertices. Each strand is drawn on the left of the darts it traverses, so all
//! crossings happen near black vertices: a passage entering along dart `x` and
//! leaving along `rot_next(x)` is a chord of a small circle around the vertex,
//! and two passages cross exactly when their chords interleave.

use num_integer::Integer;

use super::{Color, Embedding};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    /// Darts in traversal order, starting from the smallest dart.
    pub darts: Vec<usize>,
    pub homology: (i64, i64),
}

impl Strand {
    /// Integer length of the homology class (0 for null-homologous strands).
    pub fn ilen(&self) -> u64 {
        (self.homology.0.unsigned_abs()).gcd(&self.homology.1.unsigned_abs())
    }
}

/// Crossing counts between strands, indexed as returned by [`Embedding::strands`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandCrossings {
    pub self_crossings: Vec<usize>,
    pub pairwise: Vec<Vec<usize>>,
}

/// One strand passage through a black vertex.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Passage {
    /// Dart along which the strand arrives.
    pub incoming: usize,
    /// Chord endpoints on the circle of `2·deg` points around the vertex.
    pub chord: (usize, usize),
}

pub(crate) fn chords_cross(a: (usize, usize), b: (usize, usize), m: usize) -> bool {
    let between = |x: usize| {
        let (lo, hi) = (a.0, a.1);
        let d = (hi + m - lo) % m;
        let t = (x + m - lo) % m;
        t > 0 && t < d
    };
    between(b.0) != between(b.1)
}

impl Embedding {
    /// Dart following `d` on its strand.
    pub fn strand_next(&self, d: usize) -> usize {
        let m = self.map();
        let t = m.twin(d);
        match self.color(m.origin(t)) {
            Color::Black => m.rot_next(t),
            Color::White => m.rot_prev(t),
        }
    }

    pub fn strands(&self) -> Vec<Strand> {
        let nd = self.map().num_darts();
        let mut seen = vec![false; nd];
        let mut out = Vec::new();
        for s in 0..nd {
            if seen[s] {
                continue;
            }
            let mut darts = Vec::new();
            let mut h = (0, 0);
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                darts.push(d);
                let v = self.map().voltage(d);
                h = (h.0 + v.0, h.1 + v.1);
                d = self.strand_next(d);
            }
            debug_assert_eq!(d, s);
            out.push(Strand { darts, homology: h });
        }
        let total = out.iter().fold((0, 0), |acc, s| (acc.0 + s.homology.0, acc.1 + s.homology.1));
        assert_eq!(total, (0, 0), "strand homologies must sum to zero");
        out
    }

    /// Strand index of every dart.
    pub fn strand_of_dart(&self, strands: &[Strand]) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.map().num_darts()];
        for (i, s) in strands.iter().enumerate() {
            for &d in &s.darts {
                out[d] = i;
            }
        }
        out
    }

    /// Passages through black vertex `v`.
    pub(crate) fn passages_at(&self, v: usize) -> Vec<Passage> {
        let m = self.map();
        let ds = m.darts_at(v);
        let deg = ds.len();
        (0..deg)
            .map(|i| Passage { incoming: m.twin(ds[i]), chord: (2 * i, (2 * ((i + 1) % deg) + 1) % (2 * deg)) })
            .collect()
    }

    pub fn strand_crossings(&self, strands: &[Strand]) -> StrandCrossings {
        let k = strands.len();
        let of = self.strand_of_dart(strands);
        let mut self_crossings = vec![0; k];
        let mut pairwise = vec![vec![0; k]; k];
        for v in 0..self.graph().vertices.len() {
            if self.color(v) != Color::Black {
                continue;
            }
            let ps = self.passages_at(v);
            let m = 2 * ps.len();
            for i in 0..ps.len() {
                for j in i + 1..ps.len() {
                    if !chords_cross(ps[i].chord, ps[j].chord, m) {
                        continue;
                    }
                    let (a, b) = (of[ps[i].incoming], of[ps[j].incoming]);
                    if a == b {
                        self_crossings[a] += 1;
                    } else {
                        pairwise[a][b] += 1;
                        pairwise[b][a] += 1;
                    }
                }
            }
        }
        StrandCrossings { self_crossings, pairwise }
    }

    /// Whether the lift of a null-homologous strand to the plane has no self-crossings.
    pub fn strand_lift_is_simple(&self, s: &Strand) -> bool {
        if s.homology != (0, 0) {
            return false;
        }
        let m = self.map();
        let mut pos = (0i64, 0i64);
        let mut visits: Vec<(usize, (i64, i64), usize)> = Vec::new();
        for &d in &s.darts {
            let v = m.voltage(d);
            pos = (pos.0 + v.0, pos.1 + v.1);
            let w = m.target(d);
            if self.color(w) == Color::Black {
                visits.push((w, pos, d));
            }
        }
        for (i, &(w, p, d)) in visits.iter().enumerate() {
            for &(w2, p2, d2) in &visits[i + 1..] {
                if w != w2 || p != p2 {
                    continue;
                }
                let ps = self.passages_at(w);
                let deg2 = 2 * ps.len();
                let a = ps.iter().find(|q| q.incoming == d).unwrap().chord;
                let b = ps.iter().find(|q| q.incoming == d2).unwrap().chord;
                if chords_cross(a, b, deg2) {
                    return false;
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

    fn homologies(e: &Embedding) -> Vec<(i64, i64)> {
        let mut h: Vec<_> = e.strands().iter().map(|s| s.homology).collect();
        h.sort();
        h
    }

    #[test]
    fn loop_strands() {
        let e = Embedding::new(horizontal_loop()).unwrap();
        assert_eq!(homologies(&e), vec![(-1, 0), (1, 0)]);
    }

    #[test]
    fn parallel_bigons_single_simple_strand() {
        let e = Embedding::new(parallel_bigons()).unwrap();
        let s = e.strands();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].homology, (0, 0));
        assert!(e.strand_lift_is_simple(&s[0]));
        let c = e.strand_crossings(&s);
        assert_eq!(c.self_crossings, vec![0]);
    }

    #[test]
    fn every_dart_once() {
        let e = Embedding::new(parallel_bigons()).unwrap();
        let s = e.strands();
        let total: usize = s.iter().map(|x| x.darts.len()).sum();
        assert_eq!(total, e.map().num_darts());
    }

    #[test]
    fn chord_interleaving() {
        assert!(chords_cross((0, 3), (2, 5), 6));
        assert!(!chords_cross((0, 3), (4, 5), 6));
        assert!(!chords_cross((0, 3), (1, 2), 4));
    }
}
