//! Brute-force verifiers, written independently of the main algorithms.
//!
//! Affine permutations are handled as raw windows, and graphs as raw
//! coordinates in `f64`: faces come from a raster flood fill, strand crossings
//! from intersecting explicit offset polylines.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::affine::AffinePermutation;
use crate::geom::to_f64;
use crate::torusgraph::{Color, TorusGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("closure exceeds {cap} elements")]
    Overflow { cap: usize },
    #[error("raster would need {needed} cells per side, limit {limit}")]
    ResolutionUnderflow { needed: f64, limit: usize },
}

fn eval(w: &[i64], i: i64) -> i64 {
    let n = w.len() as i64;
    let r = (i - 1).rem_euclid(n);
    w[r as usize] + (i - 1 - r)
}

/// Length by the inversion formula `Σ_{i<j} |⌊(f(j) − f(i))/n⌋|` over the window.
pub fn window_length(w: &[i64]) -> u64 {
    let n = w.len() as i64;
    let mut total = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            total += (w[j] - w[i]).div_euclid(n).unsigned_abs();
        }
    }
    total
}

/// `s_i f s_i` on windows.
fn conjugate(w: &[i64], i: i64) -> Vec<i64> {
    let n = w.len() as i64;
    let s = |j: i64| match (j - i).rem_euclid(n) {
        0 => j + 1,
        1 => j - 1,
        _ => j,
    };
    (1..=n).map(|j| s(eval(w, s(j)))).collect()
}

/// Everything reachable from `f` by conjugations `f → s_i f s_i` that never
/// increase length.
pub fn bfs_c_closure(f: &AffinePermutation, cap: usize) -> Result<BTreeSet<AffinePermutation>, OracleError> {
    let n = f.n();
    let start = f.window().to_vec();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        let l = window_length(&w);
        for i in 0..n as i64 {
            let c = conjugate(&w, i);
            if window_length(&c) <= l && seen.insert(c.clone()) {
                if seen.len() > cap {
                    return Err(OracleError::Overflow { cap });
                }
                queue.push_back(c);
            }
        }
    }
    Ok(seen.into_iter().map(|w| AffinePermutation::from_window(n, w).expect("conjugates are permutations")).collect())
}

/// c-equivalence by mutual reachability.
pub fn bfs_c_equivalent(f: &AffinePermutation, g: &AffinePermutation, cap: usize) -> Result<bool, OracleError> {
    Ok(bfs_c_closure(f, cap)?.contains(g) && bfs_c_closure(g, cap)?.contains(f))
}

type P = (f64, f64);

fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}

fn add(a: P, b: P) -> P {
    (a.0 + b.0, a.1 + b.1)
}

fn mul(a: P, s: f64) -> P {
    (a.0 * s, a.1 * s)
}

fn cross(a: P, b: P) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn unit(a: P) -> P {
    let l = a.0.hypot(a.1);
    (a.0 / l, a.1 / l)
}

fn left(u: P) -> P {
    (-u.1, u.0)
}

fn point_segment(p: P, a: P, b: P) -> f64 {
    let ab = sub(b, a);
    let t = ((p.0 - a.0) * ab.0 + (p.1 - a.1) * ab.1) / (ab.0 * ab.0 + ab.1 * ab.1);
    let c = add(a, mul(ab, t.clamp(0.0, 1.0)));
    (p.0 - c.0).hypot(p.1 - c.1)
}

fn proper_cross(a: P, b: P, c: P, d: P) -> bool {
    let o1 = cross(sub(b, a), sub(c, a));
    let o2 = cross(sub(b, a), sub(d, a));
    let o3 = cross(sub(d, c), sub(a, c));
    let o4 = cross(sub(d, c), sub(b, c));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

fn near(a: P, b: P) -> bool {
    (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12
}

struct Drawing {
    pos: Vec<P>,
    /// Per edge: polyline in the cover, starting at the source's position.
    lines: Vec<Vec<P>>,
}

impl Drawing {
    fn new(g: &TorusGraph) -> Drawing {
        let pos = g.vertices.iter().map(|v| (to_f64(&v.pos.x), to_f64(&v.pos.y))).collect();
        let lines = g
            .edges
            .iter()
            .map(|e| e.polyline(g).iter().map(|p| (to_f64(&p.x), to_f64(&p.y))).collect())
            .collect();
        Drawing { pos, lines }
    }

    fn segments(&self) -> Vec<(P, P)> {
        self.lines.iter().flat_map(|l| l.windows(2).map(|w| (w[0], w[1]))).collect()
    }

    /// Smallest distance between features that do not touch, capped at 1/2.
    fn separation(&self) -> f64 {
        let segs = self.segments();
        let mut best: f64 = 0.5;
        let shifts: Vec<P> = (-2..=2).flat_map(|x| (-2..=2).map(move |y| (x as f64, y as f64))).collect();
        for (i, &(a, b)) in segs.iter().enumerate() {
            for &(c0, d0) in &segs[i..] {
                for &t in &shifts {
                    let (c, d) = (add(c0, t), add(d0, t));
                    if near(a, c) || near(a, d) || near(b, c) || near(b, d) || (near(a, c0) && near(b, d0) && t == (0.0, 0.0)) {
                        continue;
                    }
                    let dist = point_segment(a, c, d).min(point_segment(b, c, d)).min(point_segment(c, a, b)).min(point_segment(d, a, b));
                    best = best.min(dist);
                }
            }
            for &p in &self.pos {
                for &t in &shifts {
                    let p = add(p, t);
                    if !near(p, a) && !near(p, b) {
                        best = best.min(point_segment(p, a, b));
                    }
                }
            }
        }
        for (i, &p) in self.pos.iter().enumerate() {
            for &q in &self.pos[i + 1..] {
                for &t in &shifts {
                    let d = sub(add(q, t), p);
                    best = best.min(d.0.hypot(d.1));
                }
            }
        }
        best
    }
}

/// Largest raster side accepted by [`naive_contractible_faces`].
pub const RASTER_LIMIT: usize = 4096;

/// Counts disk faces by flood-filling a raster of the torus.
pub fn naive_contractible_faces(g: &TorusGraph) -> Result<usize, OracleError> {
    let dr = Drawing::new(g);
    let needed = 8.0 / dr.separation();
    if needed > RASTER_LIMIT as f64 {
        return Err(OracleError::ResolutionUnderflow { needed, limit: RASTER_LIMIT });
    }
    let r = (needed.ceil() as usize).max(16);
    let rf = r as f64;
    let ri = r as i64;
    let mut blocked = vec![false; r * r];
    let mut mark = |x: i64, y: i64| blocked[(y.rem_euclid(ri) * ri + x.rem_euclid(ri)) as usize] = true;
    let eps = 1e-9;
    for (a, b) in dr.segments() {
        let (a, b) = (mul(a, rf), mul(b, rf));
        let (x0, x1) = (a.0.min(b.0), a.0.max(b.0));
        for cx in (x0 - eps).floor() as i64..=(x1 + eps).floor() as i64 {
            let (lo, hi) = (cx as f64 - eps, cx as f64 + 1.0 + eps);
            let y_at = |x: f64| if (b.0 - a.0).abs() < 1e-15 { a.1 } else { a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0) };
            let (xa, xb) = (lo.max(x0), hi.min(x1));
            let (ya, yb) = if (b.0 - a.0).abs() < 1e-15 { (a.1.min(b.1), a.1.max(b.1)) } else { (y_at(xa).min(y_at(xb)), y_at(xa).max(y_at(xb))) };
            for cy in (ya - eps).floor() as i64..=(yb + eps).floor() as i64 {
                mark(cx, cy);
            }
        }
    }
    for &p in &dr.pos {
        let (cx, cy) = ((p.0 * rf).floor() as i64, (p.1 * rf).floor() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                mark(cx + dx, cy + dy);
            }
        }
    }

    let mut offset: Vec<Option<(i64, i64)>> = vec![None; r * r];
    let mut count = 0;
    for s in 0..r * r {
        if blocked[s] || offset[s].is_some() {
            continue;
        }
        offset[s] = Some((0, 0));
        let mut cells = vec![s];
        let mut queue = VecDeque::from([s]);
        let mut holonomy = false;
        while let Some(c) = queue.pop_front() {
            let (x, y) = ((c % r) as i64, (c / r) as i64);
            let (ox, oy) = offset[c].unwrap();
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                let (wx, wy) = (nx.div_euclid(ri), ny.div_euclid(ri));
                let nc = (ny.rem_euclid(ri) * ri + nx.rem_euclid(ri)) as usize;
                if blocked[nc] {
                    continue;
                }
                let no = (ox + wx, oy + wy);
                match offset[nc] {
                    None => {
                        offset[nc] = Some(no);
                        cells.push(nc);
                        queue.push_back(nc);
                    }
                    Some(o) if o != no => holonomy = true,
                    _ => {}
                }
            }
        }
        if !holonomy && simply_connected(&cells, &offset, r) {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether a bounded lifted region has no holes.
fn simply_connected(cells: &[usize], offset: &[Option<(i64, i64)>], r: usize) -> bool {
    let ri = r as i64;
    let lifted: Vec<(i64, i64)> = cells
        .iter()
        .map(|&c| {
            let (ox, oy) = offset[c].unwrap();
            ((c % r) as i64 + ox * ri, (c / r) as i64 + oy * ri)
        })
        .collect();
    let x0 = lifted.iter().map(|p| p.0).min().unwrap() - 1;
    let y0 = lifted.iter().map(|p| p.1).min().unwrap() - 1;
    let w = (lifted.iter().map(|p| p.0).max().unwrap() - x0 + 2) as usize;
    let h = (lifted.iter().map(|p| p.1).max().unwrap() - y0 + 2) as usize;
    let mut state = vec![0u8; w * h];
    for &(x, y) in &lifted {
        state[(y - y0) as usize * w + (x - x0) as usize] = 1;
    }
    let mut queue = VecDeque::from([0usize]);
    state[0] = 2;
    while let Some(c) = queue.pop_front() {
        let (x, y) = ((c % w) as i64, (c / w) as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let nc = ny as usize * w + nx as usize;
                if state[nc] == 0 {
                    state[nc] = 2;
                    queue.push_back(nc);
                }
            }
        }
    }
    state.iter().all(|&s| s != 0)
}

/// Strand data recomputed from scratch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveStrandReport {
    /// Each strand as its dart sequence starting from its smallest dart, sorted.
    pub strands: Vec<Vec<usize>>,
    pub homologies: Vec<(i64, i64)>,
    pub homology_sum: (i64, i64),
    pub self_crossings: Vec<usize>,
    pub pairwise: Vec<Vec<usize>>,
}

/// Traces strands with angle-sorted rotations and counts crossings of explicit
/// polylines drawn just left of every traversed dart.
pub fn naive_strand_invariants(g: &TorusGraph) -> NaiveStrandReport {
    let dr = Drawing::new(g);
    let nd = 2 * g.edges.len();
    let dart_line = |d: usize| -> Vec<P> {
        let l = &dr.lines[d / 2];
        if d.is_multiple_of(2) {
            l.clone()
        } else {
            let e = &g.edges[d / 2];
            let v = (e.voltage.0 as f64, e.voltage.1 as f64);
            l.iter().rev().map(|&p| sub(p, v)).collect()
        }
    };
    let lines: Vec<Vec<P>> = (0..nd).map(dart_line).collect();
    let origin = |d: usize| if d.is_multiple_of(2) { g.edges[d / 2].from } else { g.edges[d / 2].to };
    let volt = |d: usize| {
        let v = g.edges[d / 2].voltage;
        if d.is_multiple_of(2) {
            v
        } else {
            (-v.0, -v.1)
        }
    };
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); g.vertices.len()];
    for d in 0..nd {
        around[origin(d)].push(d);
    }
    let angle = |d: usize| {
        let u = sub(lines[d][1], lines[d][0]);
        u.1.atan2(u.0)
    };
    for a in &mut around {
        a.sort_by(|&x, &y| angle(x).total_cmp(&angle(y)));
    }
    let next = |d: usize| {
        let t = d ^ 1;
        let v = origin(t);
        let a = &around[v];
        let i = a.iter().position(|&x| x == t).unwrap();
        match g.vertices[v].color {
            Color::Black => a[(i + 1) % a.len()],
            Color::White => a[(i + a.len() - 1) % a.len()],
        }
    };

    let mut strand_of = vec![usize::MAX; nd];
    let mut strands = Vec::new();
    for s in 0..nd {
        if strand_of[s] != usize::MAX {
            continue;
        }
        let mut w = Vec::new();
        let mut d = s;
        while strand_of[d] == usize::MAX {
            strand_of[d] = strands.len();
            w.push(d);
            d = next(d);
        }
        strands.push(w);
    }
    let homologies: Vec<(i64, i64)> = strands
        .iter()
        .map(|w| w.iter().fold((0, 0), |acc, &d| (acc.0 + volt(d).0, acc.1 + volt(d).1)))
        .collect();
    let homology_sum = homologies.iter().fold((0, 0), |a, h| (a.0 + h.0, a.1 + h.1));

    let min_first = lines.iter().map(|l| {
        let (a, b) = (sub(l[1], l[0]), sub(l[l.len() - 1], l[l.len() - 2]));
        a.0.hypot(a.1).min(b.0.hypot(b.1))
    });
    let rad = min_first.fold(dr.separation(), f64::min) / 4.0;
    let mut min_gap = std::f64::consts::PI;
    for a in &around {
        for i in 0..a.len() {
            let (x, y) = (angle(a[i]), angle(a[(i + 1) % a.len()]));
            let gap = if a.len() == 1 { std::f64::consts::TAU } else { (y - x).rem_euclid(std::f64::consts::TAU) };
            min_gap = min_gap.min(gap);
        }
    }
    let eps = rad * (min_gap / 4.0).tan().min(0.25);

    let mut segs: Vec<(usize, P, P)> = Vec::new();
    for (k, w) in strands.iter().enumerate() {
        let mut off = (0.0, 0.0);
        let mut pts: Vec<P> = Vec::new();
        for &d in w {
            let l: Vec<P> = lines[d].iter().map(|&p| add(p, off)).collect();
            let m = l.len();
            let u0 = unit(sub(l[1], l[0]));
            pts.push(add(add(l[0], mul(u0, rad)), mul(left(u0), eps)));
            for i in 1..m - 1 {
                let n1 = left(unit(sub(l[i], l[i - 1])));
                let n2 = left(unit(sub(l[i + 1], l[i])));
                let miter = mul(add(n1, n2), 1.0 / (1.0 + n1.0 * n2.0 + n1.1 * n2.1));
                pts.push(add(l[i], mul(miter, eps)));
            }
            let ul = unit(sub(l[m - 1], l[m - 2]));
            pts.push(add(sub(l[m - 1], mul(ul, rad)), mul(left(ul), eps)));
            let v = volt(d);
            off = add(off, (v.0 as f64, v.1 as f64));
        }
        pts.push(add(pts[0], off));
        segs.extend(pts.windows(2).map(|p| (k, p[0], p[1])));
    }

    let ns = strands.len();
    let mut self_twice = vec![0usize; ns];
    let mut pairwise = vec![vec![0usize; ns]; ns];
    let bbox = |a: P, b: P| (a.0.min(b.0), a.1.min(b.1), a.0.max(b.0), a.1.max(b.1));
    for (i, &(ki, a, b)) in segs.iter().enumerate() {
        let (ax0, ay0, ax1, ay1) = bbox(a, b);
        for (j, &(kj, c, d)) in segs.iter().enumerate().skip(i) {
            let (cx0, cy0, cx1, cy1) = bbox(c, d);
            for tx in (ax0 - cx1).floor() as i64..=(ax1 - cx0).ceil() as i64 {
                for ty in (ay0 - cy1).floor() as i64..=(ay1 - cy0).ceil() as i64 {
                    if i == j && tx == 0 && ty == 0 {
                        continue;
                    }
                    let t = (tx as f64, ty as f64);
                    if !proper_cross(a, b, add(c, t), add(d, t)) {
                        continue;
                    }
                    if ki == kj {
                        self_twice[ki] += if i == j { 1 } else { 2 };
                    } else {
                        pairwise[ki][kj] += 1;
                        pairwise[kj][ki] += 1;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..ns).collect();
    let canon: Vec<Vec<usize>> = strands
        .iter()
        .map(|w| {
            let i = (0..w.len()).min_by_key(|&i| w[i]).unwrap();
            w[i..].iter().chain(&w[..i]).copied().collect()
        })
        .collect();
    order.sort_by_key(|&k| canon[k][0]);
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut pw = vec![vec![0; ns]; ns];
    for a in 0..ns {
        for b in 0..ns {
            pw[pos[&a]][pos[&b]] = pairwise[a][b];
        }
    }
    NaiveStrandReport {
        strands: order.iter().map(|&k| canon[k].clone()).collect(),
        homologies: order.iter().map(|&k| homologies[k]).collect(),
        homology_sum,
        self_crossings: order.iter().map(|&k| self_twice[k] / 2).collect(),
        pairwise: pw,
    }
}
