//! Shared generators and fixture loading for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use toric::affine::AffinePermutation;
use toric::cyclic::CyclicComposition;
use toric::fence::{DoubleAffineWord, Letter};
use toric::geom::{q, Pt};
use toric::torusgraph::{Color, Embedding, StrongPolygon, TorusGraph};

pub const FIXTURES: &[&str] = &[
    "fig1.2-gamma2",
    "fig1.2-gamma3",
    "fig1.2-gamma2-extra-edge",
    "fig-parallelbigons",
    "fig-twsq-gamma1",
    "fig-twsq-gamma2",
    "fig-two-big-w",
    "fig-two-big-wprime",
    "fig-nested-loops",
];

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> TorusGraph {
    TorusGraph::from_json_str(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn embedding(name: &str) -> Embedding {
    Embedding::new(fixture(name)).unwrap()
}

pub fn cc(parts: &[u64]) -> CyclicComposition {
    CyclicComposition::new(parts.to_vec()).unwrap()
}

pub fn random_word<R: Rng>(rng: &mut R, max_n: usize, max_len: usize) -> DoubleAffineWord {
    let n = rng.gen_range(2..=max_n.max(2));
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| match rng.gen_range(0..10) {
            0..=3 => Letter::S(rng.gen_range(1..=n)),
            4..=7 => Letter::Sb(rng.gen_range(1..=n)),
            8 => Letter::L,
            _ => Letter::Linv,
        })
        .collect();
    DoubleAffineWord::new(n, letters).unwrap()
}

/// Checkerboard subgraph of an `m × m` grid on the torus, `m` even.
pub fn random_grid_graph<R: Rng>(rng: &mut R) -> TorusGraph {
    let m = 2 * rng.gen_range(1..=4) as i64;
    let density = rng.gen_range(0.2..0.95);
    let mut g = TorusGraph::default();
    let at = |i: i64, j: i64| Pt::new(q((2 * i + 1) as i128, (2 * m) as i128), q((2 * j + 1) as i128, (2 * m) as i128));
    let mut id = vec![vec![0; m as usize]; m as usize];
    for i in 0..m {
        for j in 0..m {
            let c = if (i + j) % 2 == 0 { Color::White } else { Color::Black };
            id[i as usize][j as usize] = g.add_vertex(c, at(i, j));
        }
    }
    for i in 0..m {
        for j in 0..m {
            for (di, dj) in [(1, 0), (0, 1)] {
                if rng.gen_bool(density) {
                    let (ti, tj) = ((i + di) % m, (j + dj) % m);
                    g.add_edge_path(id[i as usize][j as usize], id[ti as usize][tj as usize], &[at(i, j), at(i + di, j + dj)]);
                }
            }
        }
    }
    g
}

pub fn random_composition<R: Rng>(rng: &mut R, total: u64) -> CyclicComposition {
    let mut parts = Vec::new();
    let mut left = total;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    CyclicComposition::new(parts).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Random strongly decorated polygon with at most `max_edges` edges, each of integer length at most `max_ilen`.
pub fn random_polygon<R: Rng>(rng: &mut R, max_edges: usize, max_ilen: i64) -> StrongPolygon {
    loop {
        let k = rng.gen_range(2..=max_edges);
        let mut vs: Vec<(i64, i64)> = Vec::new();
        for _ in 0..k - 1 {
            let (a, b) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            if (a, b) == (0, 0) || gcd(a, b) != 1 {
                continue;
            }
            let t = rng.gen_range(1..=max_ilen);
            vs.push((a * t, b * t));
        }
        let s = vs.iter().fold((0, 0), |acc, v| (acc.0 - v.0, acc.1 - v.1));
        if s == (0, 0) || gcd(s.0, s.1) > max_ilen {
            continue;
        }
        vs.push(s);
        let edges: Vec<_> = vs.iter().map(|&v| (v, random_composition(rng, gcd(v.0, v.1) as u64))).collect();
        if let Ok(p) = StrongPolygon::new(edges) {
            return p;
        }
    }
}

/// Every element `w·Λᵏ` with `ℓ(w) ≤ max_len` and `0 ≤ k < n`.
pub fn short_elements(n: usize, max_len: u64) -> Vec<AffinePermutation> {
    let mut out = BTreeSet::new();
    for k in 0..n as i64 {
        let mut layer = vec![AffinePermutation::shift(n, k)];
        out.insert(layer[0].clone());
        for _ in 0..max_len {
            let mut next = Vec::new();
            for f in &layer {
                for i in 1..=n as i64 {
                    let g = AffinePermutation::simple(n, i).unwrap().compose(f).unwrap();
                    if g.length() == f.length() + 1 && out.insert(g.clone()) {
                        next.push(g);
                    }
                }
            }
            layer = next;
        }
    }
    out.into_iter().collect()
}

/// Main-path strand data in the layout of the naive report.
pub fn strand_report(e: &Embedding) -> toric::oracle::NaiveStrandReport {
    let strands = e.strands();
    let cr = e.strand_crossings(&strands);
    let homologies: Vec<(i64, i64)> = strands.iter().map(|s| s.homology).collect();
    let homology_sum = homologies.iter().fold((0, 0), |a, h| (a.0 + h.0, a.1 + h.1));
    toric::oracle::NaiveStrandReport {
        strands: strands.into_iter().map(|s| s.darts).collect(),
        homologies,
        homology_sum,
        self_crossings: cr.self_crossings,
        pairwise: cr.pairwise,
    }
}

/// `Ok(None)` when the raster oracle cannot resolve the drawing.
pub fn faces_agree(e: &Embedding) -> Option<bool> {
    match toric::oracle::naive_contractible_faces(e.graph()) {
        Ok(n) => Some(n == e.count_contractible_faces()),
        Err(toric::oracle::OracleError::ResolutionUnderflow { .. }) => None,
        Err(err) => panic!("{err}"),
    }
}

/// Random pairs of c-reduced elements with `n ≤ max_n`, half of them sharing their class data.
pub fn c_reduced_pairs<R: Rng>(rng: &mut R, max_n: usize, max_len: u64, count: usize) -> Vec<(AffinePermutation, AffinePermutation)> {
    let pools: Vec<Vec<AffinePermutation>> =
        (2..=max_n).map(|n| short_elements(n, max_len).into_iter().filter(|f| f.is_c_reduced()).collect()).collect();
    let mut out = Vec::new();
    while out.len() < count {
        let pool = &pools[rng.gen_range(0..pools.len())];
        let f = pool[rng.gen_range(0..pool.len())].clone();
        let g = if rng.gen_bool(0.5) {
            let key = |h: &AffinePermutation| (h.k(), h.length(), format!("{:?}", h.strong_decoration().ok()));
            let same: Vec<_> = pool.iter().filter(|h| key(h) == key(&f)).collect();
            same[rng.gen_range(0..same.len())].clone()
        } else {
            pool[rng.gen_range(0..pool.len())].clone()
        };
        out.push((f, g));
    }
    out
}

pub type InvariantKey = (Option<StrongPolygon>, Option<(u64, u64)>, toric::torusgraph::ReducedStatus);

pub fn invariant_key(e: &Embedding) -> InvariantKey {
    let r = e.report().unwrap();
    (r.strong, r.modular, r.status)
}

/// Applies `steps` random moves, picking the move kind first so that
/// uncontractions do not swamp the walk. Returns the graphs visited.
pub fn random_move_walk<R: Rng>(rng: &mut R, start: Embedding, steps: usize) -> Vec<Embedding> {
    use toric::torusgraph::moves::Move;
    let mut cur = start;
    let mut out = Vec::new();
    let mut stuck = 0;
    while out.len() < steps && stuck < 50 {
        let cands = cur.move_candidates();
        let kind = rng.gen_range(0..3);
        let pick: Vec<Move> = cands
            .into_iter()
            .filter(|m| match m {
                Move::Spider { .. } => kind == 0,
                Move::Contract { .. } => kind == 1,
                Move::Uncontract { .. } => kind == 2,
            })
            .collect();
        if pick.is_empty() {
            stuck += 1;
            continue;
        }
        match cur.apply_move(pick[rng.gen_range(0..pick.len())]) {
            Ok(next) => {
                stuck = 0;
                out.push(next.clone());
                cur = next;
            }
            Err(_) => stuck += 1,
        }
    }
    out
}

/// Degree-three black vertices of a graph.
pub fn black_trivalent(g: &TorusGraph) -> usize {
    (0..g.vertices.len()).filter(|&v| g.vertices[v].color == Color::Black && g.degree(v) == 3).count()
}

/// Self-crossings equal `ilen − 1` and parallel strands never meet.
pub fn reduced_strand_shape(e: &Embedding) -> bool {
    let strands = e.strands();
    let cr = e.strand_crossings(&strands);
    let self_ok = strands.iter().zip(&cr.self_crossings).all(|(s, &x)| x as u64 == s.ilen() - 1);
    let dir = |h: (i64, i64)| {
        let l = toric::torusgraph::ilen(h) as i64;
        (h.0 / l, h.1 / l)
    };
    let mut par_ok = true;
    for i in 0..strands.len() {
        for j in i + 1..strands.len() {
            if dir(strands[i].homology) == dir(strands[j].homology) {
                par_ok &= cr.pairwise[i][j] == 0;
            }
        }
    }
    self_ok && par_ok
}
