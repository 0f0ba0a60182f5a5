//! Synthesis of move-reduced graphs from strongly decorated polygons.

use thiserror::Error;

use crate::affine::{zonotope_area, AffinePermutation, StrongDecoratedVC};
use crate::fence::{fence_graph, word_from_pair, DoubleAffineWord, FenceError};
use crate::straighten::{build_eps_straight, StraightenError};
use crate::torusgraph::{Embedding, GraphError, InvariantReport, ReducedError, ReducedStatus, StrongPolygon, TorusGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("the polygon is a single point")]
    PointPolygon,
    #[error("target {target} is out of range mod {modulus}")]
    MuOutOfRange { target: u64, modulus: u64 },
    #[error("area identity fails: 2·Area(N) = {twice_area}, zonotopes give {plus} + {minus}")]
    AreaIdentity { twice_area: i64, plus: i64, minus: i64 },
    #[error("synthesized graph violates its contract: {0}")]
    Contract(String),
    #[error(transparent)]
    Straighten(#[from] StraightenError),
    #[error(transparent)]
    Fence(#[from] FenceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Reduced(#[from] ReducedError),
}

pub type Matrix = [[i64; 2]; 2];

pub fn inverse(m: Matrix) -> Matrix {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

/// First shear `[[1, t], [0, 1]]`, `t = 0, 1, −1, 2, −2, …`, after which no edge is vertical.
pub fn sl2_normalize(p: &StrongPolygon) -> (Matrix, StrongPolygon) {
    let mut t = 0i64;
    loop {
        if p.vectors().iter().all(|v| v.0 + t * v.1 != 0) {
            let m = [[1, t], [0, 1]];
            return (m, p.transform(m));
        }
        t = if t > 0 { -t } else { 1 - t };
    }
}

/// `(Ë₊, Ë₋)`: right-pointing edges, and left-pointing edges turned by a half turn.
pub fn split_configs(p: &StrongPolygon) -> (StrongDecoratedVC, StrongDecoratedVC) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (v, c) in p.edges() {
        assert!(v.0 != 0, "normalize the polygon first");
        if v.0 > 0 {
            plus.push((*v, c.clone()));
        } else {
            minus.push(((-v.0, -v.1), c.clone()));
        }
    }
    (StrongDecoratedVC::new(plus), StrongDecoratedVC::new(minus))
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub graph: TorusGraph,
    pub word: DoubleAffineWord,
    pub f: AffinePermutation,
    pub fbar: AffinePermutation,
    /// Shear applied to the polygon before building; the graph is mapped back by its inverse.
    pub matrix: Matrix,
    pub mu: u64,
    pub modulus: u64,
}

fn build(f: &AffinePermutation, fbar: &AffinePermutation, back: Matrix) -> Result<(DoubleAffineWord, Embedding), SynthError> {
    let w = word_from_pair(f, fbar)?;
    let g = fence_graph(&w).transform(back);
    Ok((w, Embedding::new(g)?))
}

/// A move-reduced graph with strong decoration `p` and modular invariant `mu`.
pub fn synthesize(p: &StrongPolygon, mu: u64) -> Result<Synthesis, SynthError> {
    let d = p.rotation_gcd().ok_or(SynthError::PointPolygon)?;
    if mu >= d {
        return Err(SynthError::MuOutOfRange { target: mu, modulus: d });
    }
    let (m, pn) = sl2_normalize(p);
    let (plus, minus) = split_configs(&pn);
    let (za, zb) = (zonotope_area(&plus.vectors()), zonotope_area(&minus.vectors()));
    if p.twice_area() != za + zb {
        return Err(SynthError::AreaIdentity { twice_area: p.twice_area(), plus: za, minus: zb });
    }
    let f0 = build_eps_straight(&plus)?;
    let fbar = build_eps_straight(&minus)?;
    let back = inverse(m);

    // Rotating f alone moves the graph invariant by one step per rotation.
    let (w0, e0) = build(&f0, &fbar, back)?;
    let (mu0, _) = e0.modular_invariant()?;
    let guess = (mu + d - mu0) % d;
    let n = f0.n() as u64;
    let mut first = Some((w0, e0));
    let order = std::iter::once(guess).chain((0..n).filter(|&r| r != guess));
    for r in order {
        let f = f0.rotate_by(r as i64);
        let (w, e) = match first.take() {
            Some(b) if r == 0 => b,
            kept => {
                first = kept;
                build(&f, &fbar, back)?
            }
        };
        let report = e.report()?;
        if report.modular.map(|x| x.0) != Some(mu) {
            continue;
        }
        check_contract(&report, p, mu)?;
        return Ok(Synthesis { graph: e.into_graph(), word: w, f, fbar, matrix: m, mu, modulus: d });
    }
    Err(SynthError::Contract(format!("no rotation of f reaches μ = {mu}")))
}

fn check_contract(r: &InvariantReport, p: &StrongPolygon, mu: u64) -> Result<(), SynthError> {
    if r.status != ReducedStatus::Reduced {
        return Err(SynthError::Contract(format!("status {:?}", r.status)));
    }
    if !r.perfect_matching {
        return Err(SynthError::Contract("no perfect matching".into()));
    }
    if r.strong.as_ref() != Some(p) {
        return Err(SynthError::Contract(format!("strong decoration {:?}", r.strong)));
    }
    if r.modular.map(|x| x.0) != Some(mu) {
        return Err(SynthError::Contract(format!("modular invariant {:?}", r.modular)));
    }
    Ok(())
}
