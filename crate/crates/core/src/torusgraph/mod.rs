//! Bipartite graphs embedded in the torus `R²/Z²`.
//!
//! A graph is given geometrically: vertices in the fundamental square, edges as
//! polylines in the universal cover together with the integer voltage of their
//! endpoint lift. [`Embedding::new`] validates the drawing and derives the
//! rotation system; all invariants are computed from an [`Embedding`].

mod faces;
mod labels;
pub mod moves;
mod polygon;
mod reduced;
mod strands;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{angle_cmp, fmt_q, parse_q, same_direction, segment_intersection, BBox, Pt, SegHit};

pub use faces::FaceData;
pub use labels::{ERegionLabeling, LabelError};
pub use polygon::{ilen, Decoration, DecoratedPolygon, PolygonError, StrongPolygon, WeakPolygon};
pub use reduced::{move_equivalent, InvariantReport, ReducedError, ReducedStatus};
pub use strands::{Strand, StrandCrossings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub color: Color,
    pub pos: Pt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Interior bend points in cover coordinates, with the source at its canonical position.
    pub waypoints: Vec<Pt>,
    /// Lift of the target relative to its canonical position.
    pub voltage: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorusGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} lies outside [0,1)²")]
    OutOfSquare(usize),
    #[error("vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),
    #[error("edge {0} references a missing vertex")]
    MissingVertex(usize),
    #[error("edge {0} joins two vertices of the same color")]
    NotBipartite(usize),
    #[error("edge {0} has a degenerate segment")]
    DegenerateSegment(usize),
    #[error("edges {0} and {1} cross at {2:?}")]
    Crossing(usize, usize, Pt),
    #[error("edges {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("vertex {0} lies on edge {1}")]
    VertexOnEdge(usize, usize),
    #[error("two edges leave vertex {0} in the same direction")]
    TangentTie(usize),
    #[error("cannot parse graph: {0}")]
    Parse(String),
}

impl Edge {
    /// `[source, waypoints…, target lift]` in cover coordinates.
    pub fn polyline(&self, g: &TorusGraph) -> Vec<Pt> {
        let mut pts = Vec::with_capacity(self.waypoints.len() + 2);
        pts.push(g.vertices[self.from].pos);
        pts.extend(self.waypoints.iter().copied());
        pts.push(g.vertices[self.to].pos + Pt::int(self.voltage.0, self.voltage.1));
        pts
    }
}

impl TorusGraph {
    pub fn add_vertex(&mut self, color: Color, pos: Pt) -> usize {
        self.vertices.push(Vertex { color, pos });
        self.vertices.len() - 1
    }

    /// Adds an edge along `path`, given in cover coordinates and starting at the
    /// source's canonical position; the voltage is read off the endpoint.
    pub fn add_edge_path(&mut self, from: usize, to: usize, path: &[Pt]) -> usize {
        let end = *path.last().expect("nonempty path");
        let off = end - self.vertices[to].pos;
        let (vx, vy) = off.floor();
        debug_assert_eq!(off, Pt::int(vx, vy), "path must end at a lift of the target");
        self.edges.push(Edge {
            from,
            to,
            waypoints: path[1..path.len() - 1].to_vec(),
            voltage: (vx, vy),
        });
        self.edges.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.from == v) as usize + (e.to == v) as usize).sum()
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.vertices.iter().filter(|v| v.color == c).count()
    }

    /// Applies an integer matrix of determinant one to geometry and voltages.
    pub fn transform(&self, m: [[i64; 2]; 2]) -> TorusGraph {
        let lin = |p: Pt| {
            Pt::new(
                p.x * crate::geom::qi(m[0][0]) + p.y * crate::geom::qi(m[0][1]),
                p.x * crate::geom::qi(m[1][0]) + p.y * crate::geom::qi(m[1][1]),
            )
        };
        let mut out = TorusGraph::default();
        let mut shifts = Vec::new();
        for v in &self.vertices {
            let (p, off) = lin(v.pos).wrap();
            out.vertices.push(Vertex { color: v.color, pos: p });
            shifts.push(Pt::int(off.0, off.1));
        }
        for e in &self.edges {
            let poly: Vec<Pt> = e.polyline(self).into_iter().map(|p| lin(p) - shifts[e.from]).collect();
            out.add_edge_path(e.from, e.to, &poly);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vs: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| {
                serde_json::json!({
                    "color": v.color,
                    "x": fmt_q(&v.pos.x),
                    "y": fmt_q(&v.pos.y),
                })
            })
            .collect();
        let es: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                let wp: Vec<[String; 2]> =
                    e.waypoints.iter().map(|p| [fmt_q(&p.x), fmt_q(&p.y)]).collect();
                serde_json::json!({
                    "from": e.from,
                    "to": e.to,
                    "waypoints": wp,
                    "voltage": [e.voltage.0, e.voltage.1],
                })
            })
            .collect();
        serde_json::json!({ "vertices": vs, "edges": es })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<TorusGraph, GraphError> {
        let file: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Parse(e.to_string()))?;
        let mut g = TorusGraph::default();
        for v in file.vertices {
            let pos = Pt::new(
                parse_q(&v.x).map_err(GraphError::Parse)?,
                parse_q(&v.y).map_err(GraphError::Parse)?,
            );
            g.vertices.push(Vertex { color: v.color, pos });
        }
        for e in file.edges {
            let waypoints = e
                .waypoints
                .iter()
                .map(|[x, y]| Ok(Pt::new(parse_q(x)?, parse_q(y)?)))
                .collect::<Result<Vec<_>, String>>()
                .map_err(GraphError::Parse)?;
            g.edges.push(Edge { from: e.from, to: e.to, waypoints, voltage: (e.voltage[0], e.voltage[1]) });
        }
        Ok(g)
    }
}

#[derive(Deserialize)]
struct VertexFile {
    color: Color,
    x: String,
    y: String,
}

#[derive(Deserialize)]
struct EdgeFile {
    from: usize,
    to: usize,
    #[serde(default)]
    waypoints: Vec<[String; 2]>,
    voltage: [i64; 2],
}

#[derive(Deserialize)]
struct GraphFile {
    vertices: Vec<VertexFile>,
    edges: Vec<EdgeFile>,
}

/// Dart-level combinatorial map derived from the drawing.
///
/// Dart `2e` runs along edge `e` from `from` to `to`, dart `2e + 1` backwards.
#[derive(Debug, Clone)]
pub struct DerivedMap {
    origin: Vec<usize>,
    voltage: Vec<(i64, i64)>,
    polyline: Vec<Vec<Pt>>,
    rot_next: Vec<usize>,
    rot_prev: Vec<usize>,
    around: Vec<Vec<usize>>,
}

impl DerivedMap {
    pub fn num_darts(&self) -> usize {
        self.origin.len()
    }

    pub fn twin(&self, d: usize) -> usize {
        d ^ 1
    }

    pub fn edge(&self, d: usize) -> usize {
        d / 2
    }

    pub fn origin(&self, d: usize) -> usize {
        self.origin[d]
    }

    pub fn target(&self, d: usize) -> usize {
        self.origin[d ^ 1]
    }

    pub fn voltage(&self, d: usize) -> (i64, i64) {
        self.voltage[d]
    }

    /// Polyline of the dart starting at the canonical position of its origin.
    pub fn polyline(&self, d: usize) -> &[Pt] {
        &self.polyline[d]
    }

    /// Next dart counterclockwise around the origin.
    pub fn rot_next(&self, d: usize) -> usize {
        self.rot_next[d]
    }

    /// Next dart clockwise around the origin.
    pub fn rot_prev(&self, d: usize) -> usize {
        self.rot_prev[d]
    }

    /// Darts leaving `v` in counterclockwise order.
    pub fn darts_at(&self, v: usize) -> &[usize] {
        &self.around[v]
    }
}

/// A validated graph with its derived map.
#[derive(Debug, Clone)]
pub struct Embedding {
    graph: TorusGraph,
    map: DerivedMap,
}

impl Embedding {
    pub fn new(graph: TorusGraph) -> Result<Embedding, GraphError> {
        let map = validate(&graph)?;
        Ok(Embedding { graph, map })
    }

    pub fn graph(&self) -> &TorusGraph {
        &self.graph
    }

    pub fn map(&self) -> &DerivedMap {
        &self.map
    }

    pub fn into_graph(self) -> TorusGraph {
        self.graph
    }

    pub fn color(&self, v: usize) -> Color {
        self.graph.vertices[v].color
    }

    /// Connected component index of every vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.graph.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &self.graph.edges {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for v in 0..n {
            let r = roots[v];
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[v] = ids[r];
        }
        out
    }

    /// Whether some connected component has trivial homology image.
    pub fn has_contractible_component(&self) -> bool {
        let n = self.graph.vertices.len();
        let mut pot: Vec<Option<(i64, i64)>> = vec![None; n];
        let mut bad = vec![false; n];
        let comp = self.components();
        for s in 0..n {
            if pot[s].is_some() {
                continue;
            }
            pot[s] = Some((0, 0));
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let pv = pot[v].unwrap();
                for &d in self.map.darts_at(v) {
                    let w = self.map.target(d);
                    let vol = self.map.voltage(d);
                    let cand = (pv.0 + vol.0, pv.1 + vol.1);
                    match pot[w] {
                        None => {
                            pot[w] = Some(cand);
                            stack.push(w);
                        }
                        Some(pw) if pw != cand => bad[comp[s]] = true,
                        _ => {}
                    }
                }
            }
        }
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        (0..ncomp).any(|c| !bad[c])
    }

    pub fn has_leaf(&self) -> bool {
        (0..self.graph.vertices.len()).any(|v| self.map.darts_at(v).len() == 1)
    }

    /// Maximum matching size between black and white vertices.
    pub fn maximum_matching(&self) -> usize {
        let n = self.graph.vertices.len();
        let blacks: Vec<usize> = (0..n).filter(|&v| self.color(v) == Color::Black).collect();
        let mut mate: Vec<Option<usize>> = vec![None; n];
        let mut size = 0;
        for &b in &blacks {
            let mut seen = vec![false; n];
            if self.augment(b, &mut seen, &mut mate) {
                size += 1;
            }
        }
        size
    }

    fn augment(&self, b: usize, seen: &mut [bool], mate: &mut [Option<usize>]) -> bool {
        for &d in self.map.darts_at(b) {
            let w = self.map.target(d);
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if mate[w].is_none() || self.augment(mate[w].unwrap(), seen, mate) {
                mate[w] = Some(b);
                return true;
            }
        }
        false
    }

    pub fn perfect_matching_exists(&self) -> bool {
        let b = self.graph.count_color(Color::Black);
        let w = self.graph.count_color(Color::White);
        b == w && self.maximum_matching() == b
    }
}

fn validate(g: &TorusGraph) -> Result<DerivedMap, GraphError> {
    let zero = crate::geom::qi(0);
    let one = crate::geom::qi(1);
    for (i, v) in g.vertices.iter().enumerate() {
        if v.pos.x < zero || v.pos.x >= one || v.pos.y < zero || v.pos.y >= one {
            return Err(GraphError::OutOfSquare(i));
        }
    }
    let mut sorted: Vec<(Pt, usize)> = g.vertices.iter().enumerate().map(|(i, v)| (v.pos, i)).collect();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(GraphError::CoincidentVertices(w[0].1, w[1].1));
        }
    }
    let nv = g.vertices.len();
    for (i, e) in g.edges.iter().enumerate() {
        if e.from >= nv || e.to >= nv {
            return Err(GraphError::MissingVertex(i));
        }
        if g.vertices[e.from].color == g.vertices[e.to].color {
            return Err(GraphError::NotBipartite(i));
        }
    }
    let polys: Vec<Vec<Pt>> = g.edges.iter().map(|e| e.polyline(g)).collect();
    for (i, p) in polys.iter().enumerate() {
        if p.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::DegenerateSegment(i));
        }
    }
    let boxes: Vec<BBox> = polys.iter().map(|p| BBox::of(p)).collect();
    for i in 0..polys.len() {
        for j in i..polys.len() {
            for t in boxes[i].translations_meeting(&boxes[j]) {
                let tv = Pt::int(t.0, t.1);
                check_pair(i, &polys[i], j, &polys[j], tv)?;
            }
        }
    }
    let mut degree = vec![0usize; nv];
    for e in &g.edges {
        degree[e.from] += 1;
        degree[e.to] += 1;
    }
    for v in (0..nv).filter(|&v| degree[v] == 0) {
        let p = g.vertices[v].pos;
        let pb = BBox::of(&[p]);
        for (i, poly) in polys.iter().enumerate() {
            for t in pb.translations_meeting(&boxes[i]) {
                let q = p - Pt::int(t.0, t.1);
                if poly.windows(2).any(|w| crate::geom::on_segment(q, w[0], w[1])) {
                    return Err(GraphError::VertexOnEdge(v, i));
                }
            }
        }
    }

    let nd = 2 * g.edges.len();
    let mut origin = vec![0; nd];
    let mut voltage = vec![(0, 0); nd];
    let mut polyline = vec![Vec::new(); nd];
    for (i, e) in g.edges.iter().enumerate() {
        origin[2 * i] = e.from;
        origin[2 * i + 1] = e.to;
        voltage[2 * i] = e.voltage;
        voltage[2 * i + 1] = (-e.voltage.0, -e.voltage.1);
        let vt = Pt::int(e.voltage.0, e.voltage.1);
        polyline[2 * i] = polys[i].clone();
        polyline[2 * i + 1] = polys[i].iter().rev().map(|&p| p - vt).collect();
    }
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for d in 0..nd {
        around[origin[d]].push(d);
    }
    let mut rot_next = vec![0; nd];
    let mut rot_prev = vec![0; nd];
    for (v, ds) in around.iter_mut().enumerate() {
        let dir = |d: usize| polyline[d][1] - polyline[d][0];
        ds.sort_by(|&a, &b| angle_cmp(dir(a), dir(b)));
        for k in 0..ds.len() {
            if ds.len() > 1 && same_direction(dir(ds[k]), dir(ds[(k + 1) % ds.len()])) {
                return Err(GraphError::TangentTie(v));
            }
            rot_next[ds[k]] = ds[(k + 1) % ds.len()];
            rot_prev[ds[(k + 1) % ds.len()]] = ds[k];
        }
    }
    Ok(DerivedMap { origin, voltage, polyline, rot_next, rot_prev, around })
}

fn check_pair(i: usize, a: &[Pt], j: usize, b: &[Pt], t: Pt) -> Result<(), GraphError> {
    let b: Vec<Pt> = b.iter().map(|&p| p + t).collect();
    let same = i == j && t.is_zero();
    let ends_a = [a[0], a[a.len() - 1]];
    let ends_b = [b[0], b[b.len() - 1]];
    let sa = BBox::of(a);
    let sb = BBox::of(&b);
    if !sa.meets(&sb) {
        return Ok(());
    }
    let fa: Vec<(f64, f64)> = a.iter().map(|p| p.to_f64()).collect();
    let fb: Vec<(f64, f64)> = b.iter().map(|p| p.to_f64()).collect();
    let apart = |p: (f64, f64), q: (f64, f64), r: (f64, f64), s: (f64, f64)| {
        const SLACK: f64 = 1e-9;
        p.0.max(q.0) + SLACK < r.0.min(s.0)
            || r.0.max(s.0) + SLACK < p.0.min(q.0)
            || p.1.max(q.1) + SLACK < r.1.min(s.1)
            || r.1.max(s.1) + SLACK < p.1.min(q.1)
    };
    for x in 0..a.len() - 1 {
        let y0 = if same { x + 1 } else { 0 };
        for y in y0..b.len() - 1 {
            if apart(fa[x], fa[x + 1], fb[y], fb[y + 1]) {
                continue;
            }
            let hit = match segment_intersection(a[x], a[x + 1], b[y], b[y + 1]) {
                None => continue,
                Some(h) => h,
            };
            match hit {
                SegHit::Overlap => return Err(GraphError::Overlap(i, j)),
                SegHit::Point(p) => {
                    if same {
                        if y == x + 1 && p == a[x + 1] {
                            continue;
                        }
                        return Err(GraphError::Crossing(i, j, p));
                    }
                    if ends_a.contains(&p) && ends_b.contains(&p) {
                        continue;
                    }
                    return Err(GraphError::Crossing(i, j, p));
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for TorusGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json_string())
    }
}
