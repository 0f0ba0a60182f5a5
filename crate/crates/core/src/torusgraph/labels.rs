//! e-region labelings, strong decorations and the graph modular invariant.
//!
//! Labels live on face walks. `Lab(W)` is the label of the region just inside the
//! lift of `W` that starts at offset zero; the lift at offset `o` carries
//! `Lab(W) + det(e, o)`. Crossing a strand of `Sᵉ` from its left to its right
//! lowers the label by one.

use std::collections::VecDeque;

use thiserror::Error;

use super::polygon::{ilen, StrongPolygon, WeakPolygon};
use super::{Embedding, FaceData, Strand};
use crate::cyclic::{interval_partition, CyclicComposition, IntervalPartition};
use crate::geom::{cross, on_segment, orient, sign, BBox, Pt, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("{0:?} is not an edge of the Newton polygon")]
    NotAnEdge((i64, i64)),
    #[error("labels are inconsistent: {0}")]
    Holonomy(String),
    #[error("right-side labels of strand {0} do not form an interval of its integer length")]
    NotInterval(usize),
    #[error("strand intervals do not tile Z/{0}Z")]
    NotTiling(u64),
    #[error("parallel strands {0} and {1} cross")]
    ParallelCrossing(usize, usize),
    #[error("no generic segment links two components")]
    Degenerate,
    #[error("the Newton polygon is a single point")]
    PointPolygon,
    #[error("modular labeling is not constant")]
    NotConstant,
}

/// Normalized labeling for one polygon edge.
#[derive(Debug, Clone)]
pub struct ERegionLabeling {
    pub edge: (i64, i64),
    pub composition: CyclicComposition,
    pub rot: u64,
    /// Normalized integer labels of each face walk at offset zero.
    pub lifted: Vec<i64>,
    /// Labels modulo `rot`.
    pub labels: Vec<u64>,
    /// `(strand, interval start mod ilen(e), strand ilen)` in strand order.
    pub intervals: Vec<(usize, u64, u64)>,
}

pub(crate) struct Analysis<'a> {
    emb: &'a Embedding,
    pub strands: Vec<Strand>,
    pub strand_of: Vec<usize>,
    pub faces: FaceData,
}

fn det(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn parallel(a: (i64, i64), e: (i64, i64)) -> bool {
    a != (0, 0) && det(a, e) == 0 && a.0 * e.0 + a.1 * e.1 > 0
}

fn dist2_f64(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (abx, aby) = (b.0 - a.0, b.1 - a.1);
    let len2 = abx * abx + aby * aby;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * abx + (p.1 - a.1) * aby) / len2).clamp(0.0, 1.0) };
    let (cx, cy) = (a.0 + abx * t - p.0, a.1 + aby * t - p.1);
    cx * cx + cy * cy
}

impl<'a> Analysis<'a> {
    pub fn new(emb: &'a Embedding) -> Self {
        let strands = emb.strands();
        let strand_of = emb.strand_of_dart(&strands);
        let faces = emb.faces();
        Analysis { emb, strands, strand_of, faces }
    }

    fn in_set(&self, e: (i64, i64)) -> Vec<bool> {
        self.strands.iter().map(|s| parallel(s.homology, e)).collect()
    }

    /// Unnormalized labels, one per face walk.
    fn raw_labels(&self, e: (i64, i64), member: &[bool]) -> Result<Vec<i64>, LabelError> {
        let m = self.emb.map();
        let f = &self.faces;
        let nw = f.walks.len();
        let ind = |d: usize| member[self.strand_of[d]] as i64;
        let mut lab: Vec<Option<i64>> = vec![None; nw];
        let mut labeled_darts: Vec<usize> = Vec::new();
        for start in 0..nw {
            if lab[start].is_some() {
                continue;
            }
            lab[start] = Some(if labeled_darts.is_empty() { 0 } else { self.link(member, &labeled_darts, start, &lab)? });
            let mut queue = VecDeque::from([start]);
            while let Some(w1) = queue.pop_front() {
                let l1 = lab[w1].unwrap();
                for &d in &f.walks[w1] {
                    labeled_darts.push(d);
                    let t = m.twin(d);
                    let w2 = f.walk_of[t];
                    let v = m.voltage(d);
                    let o2 = (f.prefix[d].0 + v.0 - f.prefix[t].0, f.prefix[d].1 + v.1 - f.prefix[t].1);
                    let l2 = l1 - det(e, o2) - ind(d) + ind(t);
                    match lab[w2] {
                        None => {
                            lab[w2] = Some(l2);
                            queue.push_back(w2);
                        }
                        Some(x) if x != l2 => {
                            return Err(LabelError::Holonomy(format!("across edge {}", m.edge(d))));
                        }
                        _ => {}
                    }
                }
            }
        }
        for (w, v) in f.voltages.iter().enumerate() {
            if det(e, *v) != 0 {
                return Err(LabelError::Holonomy(format!("around face walk {w}")));
            }
        }
        Ok(lab.into_iter().map(|l| l.unwrap()).collect())
    }

    /// Label of walk `w2` obtained along a straight segment from an already labeled walk.
    fn link(
        &self,
        member: &[bool],
        labeled: &[usize],
        w2: usize,
        lab: &[Option<i64>],
    ) -> Result<i64, LabelError> {
        let f = &self.faces;
        for &d2 in &f.walks[w2] {
            let q = self.sample(d2);
            for &d1 in labeled {
                let p = self.sample(d1);
                if let Some(delta) = self.crossing_delta(p, q, member) {
                    return Ok(lab[f.walk_of[d1]].unwrap() + delta);
                }
            }
        }
        Err(LabelError::Degenerate)
    }

    /// A point just left of the first segment of `d`, in the lift of its walk at offset zero.
    fn sample(&self, d: usize) -> Pt {
        let m = self.emb.map();
        let pl = m.polyline(d);
        let (a, b) = (pl[0], pl[1]);
        let mid = (a + b).scale(Q::new(1, 2));
        let dir = b - a;
        // Clearance is estimated in f64: exact squared distances overflow on finely snapped graphs.
        let (mx, my) = mid.to_f64();
        let mut min_d2 = f64::INFINITY;
        let probe = BBox { lo: mid - Pt::int(1, 1), hi: mid + Pt::int(1, 1) };
        for ed in &self.emb.graph().edges {
            let poly = ed.polyline(self.emb.graph());
            let bb = BBox::of(&poly);
            for (tx, ty) in probe.translations_meeting(&bb) {
                let t = Pt::int(tx, ty);
                for w in poly.windows(2) {
                    if on_segment(mid, w[0] + t, w[1] + t) {
                        continue;
                    }
                    let ((ax, ay), (bx, by)) = (w[0].to_f64(), w[1].to_f64());
                    let d2 = dist2_f64((mx, my), (ax + tx as f64, ay + ty as f64), (bx + tx as f64, by + ty as f64));
                    min_d2 = min_d2.min(d2);
                }
            }
        }
        let (dx, dy) = dir.to_f64();
        let len2 = dx * dx + dy * dy;
        let mut df = 0.25;
        while df * df * len2 * 16.0 >= min_d2 {
            df /= 2.0;
        }
        // Snapped to a dyadic grid well inside the clearance so that later exact tests stay small.
        let h = df * len2.sqrt();
        let bits = (8.0 / h).log2().ceil().clamp(20.0, 60.0) as u32;
        let scale = (1i128 << bits) as f64;
        let (px, py) = (mx - dy * df, my + dx * df);
        let snap = |v: f64| Q::new((v * scale).round() as i128, 1i128 << bits);
        let pre = self.faces.prefix[d];
        Pt::new(snap(px), snap(py)) + Pt::int(pre.0, pre.1)
    }

    /// Signed strand-crossing count along the segment `p → q`, or `None` if degenerate.
    fn crossing_delta(&self, p: Pt, q: Pt, member: &[bool]) -> Option<i64> {
        let g = self.emb.graph();
        let sb = BBox::of(&[p, q]);
        let mut delta = 0;
        for (i, ed) in g.edges.iter().enumerate() {
            let poly = ed.polyline(g);
            let bb = BBox::of(&poly);
            let w = member[self.strand_of[2 * i]] as i64 - member[self.strand_of[2 * i + 1]] as i64;
            for (tx, ty) in sb.translations_meeting(&bb) {
                let t = Pt::int(tx, ty);
                for s in poly.windows(2) {
                    let (a, b) = (s[0] + t, s[1] + t);
                    let (o1, o2) = (orient(p, q, a), orient(p, q, b));
                    let (o3, o4) = (orient(a, b, p), orient(a, b, q));
                    if o1 * o2 < 0 && o3 * o4 < 0 {
                        delta += sign(&cross(b - a, q - p)) as i64 * w;
                    } else if on_segment(a, p, q) || on_segment(b, p, q) || on_segment(p, a, b) || on_segment(q, a, b) {
                        return None;
                    }
                }
            }
        }
        Some(delta)
    }

    pub fn labeling(&self, e: (i64, i64)) -> Result<ERegionLabeling, LabelError> {
        let member = self.in_set(e);
        if !member.iter().any(|&b| b) {
            return Err(LabelError::NotAnEdge(e));
        }
        let ne = ilen(e);
        let total: u64 = self.strands.iter().zip(&member).filter(|x| *x.1).map(|x| x.0.ilen()).sum();
        if total != ne {
            return Err(LabelError::NotAnEdge(e));
        }
        let raw = self.raw_labels(e, &member)?;
        let m = self.emb.map();
        let f = &self.faces;
        let mut ivs: Vec<(usize, i64, u64)> = Vec::new();
        for (si, s) in self.strands.iter().enumerate().filter(|x| member[x.0]) {
            let mut a = (0i64, 0i64);
            let mut seen: Vec<i64> = Vec::new();
            for &d in &s.darts {
                let pre = f.prefix[d];
                let l = raw[f.walk_of[d]] + det(e, (a.0 - pre.0, a.1 - pre.1)) - 1;
                seen.push(l);
                let v = m.voltage(d);
                a = (a.0 + v.0, a.1 + v.1);
            }
            seen.sort_unstable();
            seen.dedup();
            let len = s.ilen();
            if seen.len() as u64 != len || (seen[seen.len() - 1] - seen[0] + 1) as u64 != len {
                return Err(LabelError::NotInterval(si));
            }
            ivs.push((si, seen[0], len));
        }
        let pairs: Vec<(i64, u64)> = ivs.iter().map(|x| (x.1, x.2)).collect();
        let ip = IntervalPartition::from_intervals(ne, &pairs).ok_or(LabelError::NotTiling(ne))?;
        let composition = ip.composition();
        let target = interval_partition(&composition);
        let shift = ip.offset_to(&target).expect("same composition") as i64;
        let rot = composition.rotation_number();
        let lifted: Vec<i64> = raw.iter().map(|l| l + shift).collect();
        let labels = lifted.iter().map(|l| l.rem_euclid(rot as i64) as u64).collect();
        let intervals = ivs
            .iter()
            .map(|&(si, a, len)| (si, (a + shift).rem_euclid(ne as i64) as u64, len))
            .collect();
        Ok(ERegionLabeling { edge: e, composition, rot, lifted, labels, intervals })
    }

    /// Checks that distinct strands parallel to a common polygon edge never cross.
    pub fn check_parallel_disjoint(&self, weak: &WeakPolygon) -> Result<(), LabelError> {
        let cr = self.emb.strand_crossings(&self.strands);
        for (e, _) in weak.edges() {
            let idx: Vec<usize> = (0..self.strands.len()).filter(|&i| parallel(self.strands[i].homology, *e)).collect();
            for (x, &i) in idx.iter().enumerate() {
                for &j in &idx[x + 1..] {
                    if cr.pairwise[i][j] != 0 {
                        return Err(LabelError::ParallelCrossing(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn strong_polygon(&self) -> Result<(StrongPolygon, Vec<ERegionLabeling>), LabelError> {
        let weak = WeakPolygon::from_strands(&self.strands);
        self.check_parallel_disjoint(&weak)?;
        let mut edges = Vec::new();
        let mut labs = Vec::new();
        for (e, _) in weak.edges() {
            let l = self.labeling(*e)?;
            edges.push((*e, l.composition.clone()));
            labs.push(l);
        }
        let strong = StrongPolygon::new(edges).expect("same edges as the weak polygon");
        Ok((strong, labs))
    }

    /// `(μ, d)` from precomputed labelings.
    pub fn modular_invariant(&self, strong: &StrongPolygon, labs: &[ERegionLabeling]) -> Result<(u64, u64), LabelError> {
        let d = strong.rotation_gcd().ok_or(LabelError::PointPolygon)?;
        let nw = self.faces.walks.len();
        let mut value: Option<u64> = None;
        for w in 0..nw {
            let s: u64 = labs.iter().map(|l| l.labels[w]).sum::<u64>() % d;
            match value {
                None => value = Some(s),
                Some(v) if v != s => return Err(LabelError::NotConstant),
                _ => {}
            }
        }
        Ok((value.unwrap_or(0), d))
    }
}

impl Embedding {
    /// Normalized e-region labeling for the polygon edge `e` (no reducedness check).
    pub fn e_region_labeling(&self, e: (i64, i64)) -> Result<ERegionLabeling, LabelError> {
        Analysis::new(self).labeling(e)
    }
}
