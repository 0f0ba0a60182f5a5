//! Double affine words and their fence graphs.
//!
//! A word over `s_i`, `s_ī` and `Λ^{±1}` is drawn on `n` horizontal wires. Columns
//! are the letters read from right to left: `s_i` becomes a rung with a white
//! vertex on wire `i` and a black vertex on wire `i + 1`, `s_ī` a rung with a
//! black vertex on wire `i − 1` and a white vertex on wire `i`, and `Λ` shifts
//! every wire up by one. Strands moving right then realize `f` and strands moving
//! left, read after a half turn, realize `f̄`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::affine::{AffineError, AffinePermutation};
use crate::geom::{q, Pt, Q};
use crate::torusgraph::{Color, TorusGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FenceError {
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("pair has different shifts k(f) = {0}, k(f̄) = {1}")]
    ShiftMismatch(i64, i64),
    #[error(transparent)]
    Affine(#[from] AffineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `s_i` with `i ∈ [1, n]`.
    S(usize),
    /// `s_ī` with `i ∈ [1, n]`.
    Sb(usize),
    L,
    Linv,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoubleAffineWord {
    n: usize,
    letters: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePair {
    pub f: AffinePermutation,
    pub fbar: AffinePermutation,
}

fn wrap_index(i: i64, n: usize) -> usize {
    ((i - 1).rem_euclid(n as i64) + 1) as usize
}

impl DoubleAffineWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self, FenceError> {
        if n == 0 {
            return Err(FenceError::Parse("n must be positive".into()));
        }
        for l in &letters {
            match *l {
                Letter::S(i) | Letter::Sb(i) if i == 0 || i > n => {
                    return Err(FenceError::Parse(format!("index {i} outside [1, {n}]")))
                }
                Letter::S(_) | Letter::Sb(_) if n < 2 => return Err(AffineError::NoReflections.into()),
                _ => {}
            }
        }
        Ok(DoubleAffineWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of `s` and `s̄` letters.
    pub fn length(&self) -> usize {
        self.letters.iter().filter(|l| matches!(l, Letter::S(_) | Letter::Sb(_))).count()
    }

    fn lambda_power(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::L => 1,
                Letter::Linv => -1,
                _ => 0,
            })
            .sum()
    }

    /// Rewrites as unbarred letters, then `Λ^K`, then barred letters, using only
    /// commutations and `Λ s_i = s_{i+1} Λ`, `Λ s_ī = s_{ī+1} Λ`.
    pub fn normalize(&self) -> DoubleAffineWord {
        let total = self.lambda_power();
        let mut e = 0i64;
        let mut unbarred = Vec::new();
        let mut barred = Vec::new();
        for l in &self.letters {
            match *l {
                Letter::L => e += 1,
                Letter::Linv => e -= 1,
                Letter::S(c) => unbarred.push(Letter::S(wrap_index(c as i64 + e, self.n))),
                Letter::Sb(c) => barred.push(Letter::Sb(wrap_index(c as i64 - (total - e), self.n))),
            }
        }
        let lam = if total >= 0 { Letter::L } else { Letter::Linv };
        let mut letters = unbarred;
        letters.extend(std::iter::repeat_n(lam, total.unsigned_abs() as usize));
        letters.extend(barred);
        DoubleAffineWord { n: self.n, letters }
    }

    /// `φ(w) = (f, f̄)`.
    pub fn phi(&self) -> Result<AffinePair, FenceError> {
        let w = self.normalize();
        let k = w.lambda_power();
        let ups: Vec<i64> = w.letters.iter().filter_map(|l| if let Letter::S(i) = l { Some(*i as i64) } else { None }).collect();
        let downs: Vec<i64> = w
            .letters
            .iter()
            .rev()
            .filter_map(|l| if let Letter::Sb(j) = l { Some((w.n - *j + 1) as i64) } else { None })
            .collect();
        Ok(AffinePair { f: AffinePermutation::from_word(w.n, &ups, k)?, fbar: AffinePermutation::from_word(w.n, &downs, k)? })
    }

    /// `σ(w) = Λ w Λ⁻¹`.
    pub fn rotate(&self) -> DoubleAffineWord {
        let letters = self
            .letters
            .iter()
            .map(|l| match *l {
                Letter::S(i) => Letter::S(wrap_index(i as i64 + 1, self.n)),
                Letter::Sb(i) => Letter::Sb(wrap_index(i as i64 + 1, self.n)),
                other => other,
            })
            .collect();
        DoubleAffineWord { n: self.n, letters }
    }
}

/// A word `w` with `φ(w) = (f, f̄)` built from reduced words of both.
pub fn word_from_pair(f: &AffinePermutation, fbar: &AffinePermutation) -> Result<DoubleAffineWord, FenceError> {
    if f.n() != fbar.n() {
        return Err(AffineError::PeriodMismatch(f.n(), fbar.n()).into());
    }
    if f.k() != fbar.k() {
        return Err(FenceError::ShiftMismatch(f.k(), fbar.k()));
    }
    let n = f.n();
    let (ups, k) = f.reduced_word();
    let (downs, _) = fbar.reduced_word();
    let mut letters: Vec<Letter> = ups.iter().map(|&i| Letter::S(wrap_index(i, n))).collect();
    let lam = if k >= 0 { Letter::L } else { Letter::Linv };
    letters.extend(std::iter::repeat_n(lam, k.unsigned_abs() as usize));
    letters.extend(downs.iter().rev().map(|&b| Letter::Sb(wrap_index(n as i64 + 1 - b, n))));
    DoubleAffineWord::new(n, letters)
}

impl fmt::Display for DoubleAffineWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} ;", self.n)?;
        for l in &self.letters {
            match l {
                Letter::S(i) => write!(f, " s{i}")?,
                Letter::Sb(i) => write!(f, " sb{i}")?,
                Letter::L => write!(f, " L")?,
                Letter::Linv => write!(f, " Linv")?,
            }
        }
        Ok(())
    }
}

impl FromStr for DoubleAffineWord {
    type Err = FenceError;

    fn from_str(s: &str) -> Result<Self, FenceError> {
        let (head, body) = s.split_once(';').ok_or_else(|| FenceError::Parse("expected `n=<period> ; letters`".into()))?;
        let n: usize = head
            .trim()
            .strip_prefix("n=")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| FenceError::Parse(format!("bad period `{}`", head.trim())))?;
        let mut letters = Vec::new();
        for tok in body.split_whitespace() {
            let bad = || FenceError::Parse(format!("bad letter `{tok}`"));
            let l = if tok == "L" {
                Letter::L
            } else if tok == "Linv" {
                Letter::Linv
            } else if let Some(r) = tok.strip_prefix("sb") {
                Letter::Sb(r.parse().map_err(|_| bad())?)
            } else if let Some(r) = tok.strip_prefix('s') {
                Letter::S(r.parse().map_err(|_| bad())?)
            } else {
                return Err(bad());
            };
            letters.push(l);
        }
        DoubleAffineWord::new(n, letters)
    }
}

#[derive(Clone, Copy)]
enum Item {
    /// A point where a degree-two vertex may be placed.
    Slot,
    Vertex(usize),
}

/// The fence graph of `w`.
pub fn fence_graph(w: &DoubleAffineWord) -> TorusGraph {
    let n = w.n;
    let mut cols: Vec<Option<Letter>> = w.letters.iter().rev().map(|&l| Some(l)).collect();
    if cols.is_empty() {
        cols.push(None);
    }
    let lq = cols.len() as i128;
    let nq = n as i128;
    let wire_y = |h: usize| q(2 * h as i128 - 1, 2 * nq);
    let col_x = |t: usize| q(t as i128, lq);
    let center_x = |t: usize| q(2 * t as i128 + 1, 2 * lq);

    let mut g = TorusGraph::default();
    // Rung vertices, keyed by (column, wire).
    let mut at: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, l) in cols.iter().enumerate() {
        let (lower, upper, lower_color) = match *l {
            Some(Letter::S(a)) => (a, a % n + 1, Color::White),
            Some(Letter::Sb(b)) => (wrap_index(b as i64 - 1, n), b, Color::Black),
            _ => continue,
        };
        let lo = g.add_vertex(lower_color, Pt::new(center_x(t), wire_y(lower)));
        let hi = g.add_vertex(lower_color.other(), Pt::new(center_x(t), wire_y(upper)));
        at.insert((t, lower), lo);
        at.insert((t, upper), hi);
        let start = Pt::new(center_x(t), wire_y(lower));
        g.add_edge_path(lo, hi, &[start, start + Pt::new(Q::from_integer(0), q(1, nq))]);
    }

    let mut visited = vec![false; n + 1];
    for h0 in 1..=n {
        if visited[h0] {
            continue;
        }
        // Trace the wire cycle through h0 at the left boundary.
        let mut items: Vec<(Pt, Item)> = Vec::new();
        let (mut h, mut lift, mut pass) = (h0, 0i64, 0i64);
        loop {
            if pass > 0 && h == h0 {
                break;
            }
            visited[h] = true;
            for (t, l) in cols.iter().enumerate() {
                let xo = Q::from_integer(pass as i128);
                let y = wire_y(h) + Q::from_integer(lift as i128);
                items.push((Pt::new(col_x(t) + xo, y), Item::Slot));
                match *l {
                    Some(lam @ (Letter::L | Letter::Linv)) => {
                        let up = lam == Letter::L;
                        let dy = if up { q(1, 2 * nq) } else { q(-1, 2 * nq) };
                        items.push((Pt::new(center_x(t) + xo, y + dy), Item::Slot));
                        if up {
                            if h == n {
                                h = 1;
                                lift += 1;
                            } else {
                                h += 1;
                            }
                        } else if h == 1 {
                            h = n;
                            lift -= 1;
                        } else {
                            h -= 1;
                        }
                    }
                    _ => {
                        let it = at.get(&(t, h)).map_or(Item::Slot, |&v| Item::Vertex(v));
                        items.push((Pt::new(center_x(t) + xo, y), it));
                    }
                }
            }
            pass += 1;
        }
        let shift = Pt::int(pass, lift);
        close_wire(&mut g, &mut items, shift);
    }
    g
}

/// Makes one wire cycle bipartite and adds its edges.
fn close_wire(g: &mut TorusGraph, items: &mut [(Pt, Item)], shift: Pt) {
    let m = items.len();
    let verts: Vec<usize> = (0..m).filter(|&i| matches!(items[i].1, Item::Vertex(_))).collect();
    let color = |g: &TorusGraph, it: Item| match it {
        Item::Vertex(v) => g.vertices[v].color,
        Item::Slot => unreachable!(),
    };
    if verts.is_empty() {
        let (a, b) = (0, 1);
        let (pa, _) = items[a].0.wrap();
        let (pb, _) = items[b].0.wrap();
        items[a].1 = Item::Vertex(g.add_vertex(Color::White, pa));
        items[b].1 = Item::Vertex(g.add_vertex(Color::Black, pb));
    } else {
        for (x, &i) in verts.iter().enumerate() {
            let j = verts[(x + 1) % verts.len()];
            let ci = color(g, items[i].1);
            if ci != color(g, items[j].1) {
                continue;
            }
            let slot = (1..m).map(|s| (i + s) % m).find(|&s| matches!(items[s].1, Item::Slot)).expect("slot between vertices");
            let (p, _) = items[slot].0.wrap();
            items[slot].1 = Item::Vertex(g.add_vertex(ci.other(), p));
        }
    }
    let verts: Vec<usize> = (0..m).filter(|&i| matches!(items[i].1, Item::Vertex(_))).collect();
    for (x, &i) in verts.iter().enumerate() {
        let j = verts[(x + 1) % verts.len()];
        let end = if j > i { j } else { j + m };
        let pt = |s: usize| if s < m { items[s].0 } else { items[s - m].0 + shift };
        let (a, b) = match (items[i].1, items[j].1) {
            (Item::Vertex(a), Item::Vertex(b)) => (a, b),
            _ => unreachable!(),
        };
        let off = pt(i) - g.vertices[a].pos;
        let path: Vec<Pt> = (i..=end).map(|s| pt(s) - off).collect();
        g.add_edge_path(a, b, &path);
    }
}
