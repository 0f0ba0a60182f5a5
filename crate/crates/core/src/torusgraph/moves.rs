//! Local moves on torus graphs: the spider move and contraction/uncontraction.
//!
//! Each move rebuilds the drawing locally and re-validates it; a move whose
//! straight-line realization would cross existing edges is rejected rather than
//! rerouted. New points are snapped to a dyadic grid so coordinates stay small.

use thiserror::Error;

use super::{Color, Embedding, GraphError, TorusGraph};
use crate::geom::{q, Pt, Q};

const GRID: i128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Spider move on the contractible square face with this walk index.
    Spider { face: usize },
    /// Contract a degree-two vertex together with its two neighbours.
    Contract { vertex: usize },
    /// Split `vertex`; the `len` darts starting at position `start` of its
    /// counterclockwise rotation go to one side.
    Uncontract { vertex: usize, start: usize, len: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("no valid straight-line realization: {0}")]
    Geometry(GraphError),
}

fn snap(v: Q) -> Q {
    let scaled = v * Q::from_integer(GRID);
    q(scaled.round().to_integer(), GRID)
}

fn snap_f64(v: f64) -> Q {
    q((v * GRID as f64).round() as i128, GRID)
}

fn snap_pt(p: Pt) -> Pt {
    Pt::new(snap(p.x), snap(p.y))
}

/// Accumulates a graph from vertices placed at arbitrary lifts.
#[derive(Default)]
struct Builder {
    g: TorusGraph,
}

impl Builder {
    fn vertex(&mut self, color: Color, lift: Pt) -> usize {
        let (p, _) = lift.wrap();
        self.g.add_vertex(color, p)
    }

    /// `path` runs between lifts of `a` and `b`.
    fn edge(&mut self, a: usize, b: usize, path: &[Pt]) {
        let start = path[0] - self.g.vertices[a].pos;
        let (sx, sy) = start.floor();
        let s = Pt::int(sx, sy);
        let shifted: Vec<Pt> = path.iter().map(|&p| p - s).collect();
        self.g.add_edge_path(a, b, &shifted);
    }
}

fn finish(b: Builder) -> Result<Embedding, MoveError> {
    Embedding::new(b.g).map_err(MoveError::Geometry)
}

impl Embedding {
    /// Moves whose combinatorial preconditions hold; geometric realizability is
    /// only known after [`Embedding::apply_move`].
    pub fn move_candidates(&self) -> Vec<Move> {
        let m = self.map();
        let mut out = Vec::new();
        let faces = self.faces();
        for (i, w) in faces.walks.iter().enumerate() {
            if faces.contractible[i] && self.spider_square(w).is_some() {
                out.push(Move::Spider { face: i });
            }
        }
        for v in 0..self.graph().vertices.len() {
            let deg = m.darts_at(v).len();
            if self.contraction_neighbours(v).is_some() {
                out.push(Move::Contract { vertex: v });
            }
            if deg >= 2 {
                for start in 0..deg {
                    for len in 1..deg {
                        out.push(Move::Uncontract { vertex: v, start, len });
                    }
                }
            }
        }
        out
    }

    pub fn apply_move(&self, mv: Move) -> Result<Embedding, MoveError> {
        match mv {
            Move::Spider { face } => self.spider(face),
            Move::Contract { vertex } => self.contract(vertex),
            Move::Uncontract { vertex, start, len } => self.uncontract(vertex, start, len),
        }
    }

    fn spider_square(&self, walk: &[usize]) -> Option<[usize; 4]> {
        let m = self.map();
        if walk.len() != 4 {
            return None;
        }
        let vs: Vec<usize> = walk.iter().map(|&d| m.origin(d)).collect();
        let es: Vec<usize> = walk.iter().map(|&d| m.edge(d)).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                if vs[i] == vs[j] || es[i] == es[j] {
                    return None;
                }
            }
        }
        if vs.iter().any(|&v| m.darts_at(v).len() < 3) {
            return None;
        }
        Some([walk[0], walk[1], walk[2], walk[3]])
    }

    /// Replaces a contractible square by a smaller square of swapped colours
    /// joined to the old corners.
    pub fn spider(&self, face: usize) -> Result<Embedding, MoveError> {
        let m = self.map();
        let fd = self.faces();
        let walk = fd.walks.get(face).ok_or(MoveError::NotApplicable("no such face"))?;
        if !fd.contractible[face] {
            return Err(MoveError::NotApplicable("face is not contractible"));
        }
        let darts = self.spider_square(walk).ok_or(MoveError::NotApplicable("face is not a spider square"))?;
        let lifts: Vec<Pt> = darts
            .iter()
            .map(|&d| {
                let (ox, oy) = fd.prefix[d];
                self.graph().vertices[m.origin(d)].pos + Pt::int(ox, oy)
            })
            .collect();
        let c = (lifts[0] + lifts[1] + lifts[2] + lifts[3]).scale(q(1, 4));
        let inner: Vec<Pt> = lifts.iter().map(|&p| snap_pt(c + (p - c).scale(q(1, 2)))).collect();

        let removed: Vec<usize> = darts.iter().map(|&d| m.edge(d)).collect();
        let mut b = Builder::default();
        for v in &self.graph().vertices {
            b.g.add_vertex(v.color, v.pos);
        }
        for (i, e) in self.graph().edges.iter().enumerate() {
            if !removed.contains(&i) {
                b.g.edges.push(e.clone());
            }
        }
        let us: Vec<usize> = (0..4).map(|i| b.vertex(self.color(m.origin(darts[i])).other(), inner[i])).collect();
        for i in 0..4 {
            b.edge(m.origin(darts[i]), us[i], &[lifts[i], inner[i]]);
            let j = (i + 1) % 4;
            b.edge(us[i], us[j], &[inner[i], inner[j]]);
        }
        finish(b)
    }

    /// The two distinct neighbours of a degree-two vertex, as darts leaving it.
    fn contraction_neighbours(&self, x: usize) -> Option<(usize, usize)> {
        let m = self.map();
        let ds = m.darts_at(x);
        if ds.len() != 2 {
            return None;
        }
        let (a, b) = (m.target(ds[0]), m.target(ds[1]));
        if a == b || m.darts_at(a).len() < 2 || m.darts_at(b).len() < 2 {
            return None;
        }
        Some((ds[0], ds[1]))
    }

    /// Merges a degree-two vertex with both neighbours at its own position.
    pub fn contract(&self, x: usize) -> Result<Embedding, MoveError> {
        let (da, db) = self.contraction_neighbours(x).ok_or(MoveError::NotApplicable("not a contractible degree-two vertex"))?;
        let mut last = None;
        for t in [q(1, 4), q(1, 16), q(1, 64)] {
            match finish(self.contract_with(x, da, db, t)) {
                Ok(e) => return Ok(e),
                Err(err) => last = Some(err),
            }
        }
        Err(last.unwrap())
    }

    fn contract_with(&self, x: usize, da: usize, db: usize, t: Q) -> Builder {
        let g = self.graph();
        let m = self.map();
        let (a, bv) = (m.target(da), m.target(db));
        let xp = g.vertices[x].pos;
        let mut index = vec![usize::MAX; g.vertices.len()];
        let mut b = Builder::default();
        for (v, vert) in g.vertices.iter().enumerate() {
            if v == x {
                index[v] = b.g.add_vertex(self.color(a), xp);
            } else if v != a && v != bv {
                index[v] = b.g.add_vertex(vert.color, vert.pos);
            }
        }
        index[a] = index[x];
        index[bv] = index[x];
        for (i, e) in g.edges.iter().enumerate() {
            if e.from == x || e.to == x {
                continue;
            }
            let merged_side = [a, bv].iter().find(|&&u| u == e.from || u == e.to).copied();
            match merged_side {
                None => {
                    let mut e = e.clone();
                    e.from = index[e.from];
                    e.to = index[e.to];
                    b.g.edges.push(e);
                }
                Some(u) => {
                    let d = if e.from == u { 2 * i } else { 2 * i + 1 };
                    let via = if u == a { da } else { db };
                    let ulift = *m.polyline(via).last().unwrap();
                    let s = ulift - g.vertices[u].pos;
                    let pl = m.polyline(d);
                    let mut path = vec![xp, snap_pt(pl[0] + (pl[1] - pl[0]).scale(t) + s)];
                    path.extend(pl[1..].iter().map(|&p| p + s));
                    b.edge(index[x], index[m.target(d)], &path);
                }
            }
        }
        b
    }

    /// Splits `v` into two copies joined through a new degree-two vertex of the
    /// opposite colour placed at `v`.
    pub fn uncontract(&self, v: usize, start: usize, len: usize) -> Result<Embedding, MoveError> {
        let deg = self.map().darts_at(v).len();
        if v >= self.graph().vertices.len() || deg < 2 || start >= deg || len == 0 || len >= deg {
            return Err(MoveError::NotApplicable("bad split"));
        }
        let mut last = None;
        for (t, r) in [(q(1, 4), 1.0 / 16.0), (q(1, 16), 1.0 / 128.0), (q(1, 64), 1.0 / 1024.0)] {
            match finish(self.uncontract_with(v, start, len, t, r)) {
                Ok(e) => return Ok(e),
                Err(err) => last = Some(err),
            }
        }
        Err(last.unwrap())
    }

    fn uncontract_with(&self, v: usize, start: usize, len: usize, t: Q, r: f64) -> Builder {
        let g = self.graph();
        let m = self.map();
        let around = m.darts_at(v);
        let deg = around.len();
        let side: Vec<usize> = (0..deg).map(|i| ((i + deg - start) % deg < len) as usize).collect();
        let angle = |d: usize| {
            let pl = m.polyline(d);
            let (x, y) = (pl[1] - pl[0]).to_f64();
            y.atan2(x)
        };
        let mid = |first: usize, last: usize| {
            let (a0, a1) = (angle(around[first]), angle(around[last]));
            let mut span = a1 - a0;
            if span < 0.0 {
                span += std::f64::consts::TAU;
            }
            a0 + span / 2.0
        };
        let min_len = around
            .iter()
            .map(|&d| {
                let pl = m.polyline(d);
                let (x, y) = (pl[1] - pl[0]).to_f64();
                x.hypot(y)
            })
            .fold(f64::INFINITY, f64::min);
        let dir = |theta: f64| {
            let (s, c) = theta.sin_cos();
            Pt::new(snap_f64(r * min_len * c), snap_f64(r * min_len * s))
        };
        let vp = g.vertices[v].pos;
        let lift_in = vp + dir(mid(start, (start + len - 1) % deg));
        let lift_out = vp + dir(mid((start + len) % deg, (start + deg - 1) % deg));

        let mut b = Builder::default();
        for (u, vert) in g.vertices.iter().enumerate() {
            if u == v {
                b.vertex(vert.color, lift_in);
            } else {
                b.g.add_vertex(vert.color, vert.pos);
            }
        }
        let x = b.g.add_vertex(self.color(v).other(), vp);
        let out = b.vertex(self.color(v), lift_out);
        let copies = [out, v];
        let lifts = [lift_out, lift_in];
        b.edge(x, v, &[vp, lift_in]);
        b.edge(x, out, &[vp, lift_out]);
        for (i, e) in g.edges.iter().enumerate() {
            if e.from != v && e.to != v {
                b.g.edges.push(e.clone());
                continue;
            }
            let d = if e.from == v { 2 * i } else { 2 * i + 1 };
            let k = side[around.iter().position(|&z| z == d).unwrap()];
            let pl = m.polyline(d);
            let mut path = vec![lifts[k], snap_pt(pl[0] + (pl[1] - pl[0]).scale(t))];
            path.extend_from_slice(&pl[1..]);
            b.edge(copies[k], m.target(d), &path);
        }
        b
    }
}

/// Applies the first realizable move of `order`, if any.
pub fn apply_first(e: &Embedding, order: impl IntoIterator<Item = Move>) -> Option<(Move, Embedding)> {
    order.into_iter().find_map(|mv| e.apply_move(mv).ok().map(|r| (mv, r)))
}
