//! Affine permutations of `Z` in window notation.
//!
//! Composition follows function composition: `f.compose(&g)` is `f∘g`, so a word
//! `s_{i1} ⋯ s_{il} Λ^k` applies `Λ^k` first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::cyclic::{
    interval_partition, rotation_gcd, total_excess, CyclicComposition, IntervalPartition, Partition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("window has {got} entries, expected {expected}")]
    WindowLength { expected: usize, got: usize },
    #[error("window residues are not a permutation of [n]")]
    NotBijective,
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("simple reflections need n >= 2")]
    NoReflections,
    #[error("residue set is not a union of cycles")]
    NotClosed,
    #[error("permutation is not c-reduced")]
    NotCReduced,
    #[error("cycle structure is inconsistent with a c-reduced element: {0}")]
    Internal(String),
    #[error("cannot parse affine permutation: {0}")]
    Parse(String),
}

/// Exact rational slope.
pub type Slope = Ratio<i64>;

/// A bijection `f: Z → Z` with `f(i + n) = f(i) + n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

/// One cycle of an affine permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Sorted residues in `1..=n`.
    pub residues: Vec<usize>,
    pub n_c: i64,
    pub k_c: i64,
    pub d_c: i64,
    pub slope: Slope,
}

impl Cycle {
    pub fn vector(&self) -> (i64, i64) {
        (self.n_c, self.k_c)
    }
}

/// Per-slope vector `(n_ν, k_ν)`, sorted by slope descending.
pub type VectorConfig = Vec<(i64, i64)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakDecoratedVC {
    pub entries: Vec<((i64, i64), Partition)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongDecoratedVC {
    pub entries: Vec<((i64, i64), CyclicComposition)>,
}

impl WeakDecoratedVC {
    pub fn vectors(&self) -> VectorConfig {
        self.entries.iter().map(|e| e.0).collect()
    }
}

impl StrongDecoratedVC {
    /// Sorts entries by slope descending; vectors must have positive first coordinate.
    pub fn new(mut entries: Vec<((i64, i64), CyclicComposition)>) -> Self {
        entries.sort_by_key(|e| std::cmp::Reverse(slope_of(e.0)));
        StrongDecoratedVC { entries }
    }

    pub fn vectors(&self) -> VectorConfig {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn weak(&self) -> WeakDecoratedVC {
        WeakDecoratedVC {
            entries: self.entries.iter().map(|(v, c)| (*v, c.to_partition())).collect(),
        }
    }

    pub fn compositions(&self) -> Vec<CyclicComposition> {
        self.entries.iter().map(|e| e.1.clone()).collect()
    }
}

fn slope_of(v: (i64, i64)) -> Slope {
    Ratio::new(v.1, v.0)
}

fn gcd_i(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// `Σ_{i<j} |det(e_i, e_j)|`.
pub fn zonotope_area(vectors: &[(i64, i64)]) -> i64 {
    let mut a = 0;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            a += (vectors[i].0 * vectors[j].1 - vectors[i].1 * vectors[j].0).abs();
        }
    }
    a
}

impl AffinePermutation {
    pub fn from_window(n: usize, window: Vec<i64>) -> Result<Self, AffineError> {
        if n == 0 {
            return Err(AffineError::ZeroPeriod);
        }
        if window.len() != n {
            return Err(AffineError::WindowLength { expected: n, got: window.len() });
        }
        let mut seen = vec![false; n];
        for &v in &window {
            let r = (v - 1).rem_euclid(n as i64) as usize;
            if seen[r] {
                return Err(AffineError::NotBijective);
            }
            seen[r] = true;
        }
        Ok(AffinePermutation { window })
    }

    pub fn identity(n: usize) -> Self {
        Self::shift(n, 0)
    }

    /// `Λ^k`, the map `i ↦ i + k`.
    pub fn shift(n: usize, k: i64) -> Self {
        assert!(n > 0, "period must be positive");
        AffinePermutation { window: (1..=n as i64).map(|i| i + k).collect() }
    }

    /// The simple reflection `s_i` exchanging `i` and `i + 1` modulo `n`.
    pub fn simple(n: usize, i: i64) -> Result<Self, AffineError> {
        if n < 2 {
            return Err(AffineError::NoReflections);
        }
        let nn = n as i64;
        let a = (i - 1).rem_euclid(nn);
        let b = i.rem_euclid(nn);
        let window = (0..nn)
            .map(|j| {
                if j == a {
                    j + 2
                } else if j == b {
                    j
                } else {
                    j + 1
                }
            })
            .collect();
        Ok(AffinePermutation { window })
    }

    /// `s_{i1} ∘ ⋯ ∘ s_{il} ∘ Λ^k`.
    pub fn from_word(n: usize, letters: &[i64], k: i64) -> Result<Self, AffineError> {
        let mut f = Self::shift(n, k);
        for &i in letters.iter().rev() {
            f = Self::simple(n, i)?.compose(&f)?;
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn eval(&self, i: i64) -> i64 {
        let n = self.n() as i64;
        let r = (i - 1).rem_euclid(n);
        let q = (i - 1 - r) / n;
        self.window[r as usize] + q * n
    }

    /// Average displacement `(1/n) Σ (f(i) − i)`.
    pub fn k(&self) -> i64 {
        let n = self.n() as i64;
        let s: i64 = self.window.iter().enumerate().map(|(i, &v)| v - (i as i64 + 1)).sum();
        debug_assert_eq!(s % n, 0);
        s / n
    }

    /// `gcd(k(f), n)`.
    pub fn d(&self) -> i64 {
        gcd_i(self.k(), self.n() as i64)
    }

    fn check_same(&self, g: &Self) -> Result<(), AffineError> {
        if self.n() != g.n() {
            Err(AffineError::PeriodMismatch(self.n(), g.n()))
        } else {
            Ok(())
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &Self) -> Result<Self, AffineError> {
        self.check_same(g)?;
        Ok(AffinePermutation { window: g.window.iter().map(|&v| self.eval(v)).collect() })
    }

    pub fn inverse(&self) -> Self {
        let n = self.n() as i64;
        let mut w = vec![0; self.n()];
        for (j, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(n);
            let q = (v - 1 - r) / n;
            w[r as usize] = j as i64 + 1 - q * n;
        }
        AffinePermutation { window: w }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self, AffineError> {
        g.compose(self)?.compose(&g.inverse())
    }

    /// `σ(f) = Λ f Λ⁻¹`.
    pub fn rotate(&self) -> Self {
        self.rotate_by(1)
    }

    /// `σ^r(f)`.
    pub fn rotate_by(&self, r: i64) -> Self {
        let n = self.n() as i64;
        AffinePermutation { window: (1..=n).map(|i| self.eval(i - r) + r).collect() }
    }

    /// `s_i f s_i`.
    pub fn conjugate_simple(&self, i: i64) -> Result<Self, AffineError> {
        let s = Self::simple(self.n(), i)?;
        s.compose(self)?.compose(&s)
    }

    fn max_displacement(&self) -> i64 {
        self.window
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - i as i64 - 1).abs())
            .max()
            .unwrap_or(0)
    }

    fn inversion_window(&self) -> i64 {
        self.n() as i64 + 2 * self.max_displacement()
    }

    /// Inversions `(i, j)` with `i ∈ [n]`, `i < j`, `f(i) > f(j)`.
    pub fn inversions(&self) -> Vec<(i64, i64)> {
        let w = self.inversion_window();
        let mut out = Vec::new();
        for i in 1..=self.n() as i64 {
            let fi = self.eval(i);
            for j in i + 1..=i + w {
                if fi > self.eval(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn length(&self) -> u64 {
        let w = self.inversion_window();
        let mut count = 0u64;
        for i in 1..=self.n() as i64 {
            let fi = self.eval(i);
            count += (i + 1..=i + w).filter(|&j| fi > self.eval(j)).count() as u64;
            debug_assert!((i + w + 1..=i + 2 * w + 4).all(|j| fi < self.eval(j)));
        }
        count
    }

    fn residue(&self, x: i64) -> usize {
        ((x - 1).rem_euclid(self.n() as i64) + 1) as usize
    }

    pub fn cycles(&self) -> Vec<Cycle> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut residues = Vec::new();
            let mut disp = 0i64;
            let mut r = start;
            while !seen[r] {
                seen[r] = true;
                residues.push(r);
                let v = self.window[r - 1];
                disp += v - r as i64;
                r = self.residue(v);
            }
            residues.sort_unstable();
            let n_c = residues.len() as i64;
            let k_c = disp / n as i64;
            out.push(Cycle {
                n_c,
                k_c,
                d_c: gcd_i(k_c, n_c),
                slope: Ratio::new(k_c, n_c),
                residues,
            });
        }
        out
    }

    /// `r_C ∘ f ∘ r_C⁻¹` for an `f`-closed residue set `C`.
    pub fn restriction(&self, residues: &[usize]) -> Result<Self, AffineError> {
        let n = self.n() as i64;
        let mut set: Vec<usize> = residues.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() || set.iter().any(|&r| r == 0 || r > self.n()) {
            return Err(AffineError::NotClosed);
        }
        let m = set.len() as i64;
        let index: BTreeMap<usize, i64> =
            set.iter().enumerate().map(|(i, &r)| (r, i as i64 + 1)).collect();
        let mut window = Vec::with_capacity(set.len());
        for &c in &set {
            let v = self.eval(c as i64);
            let r = self.residue(v);
            let j = *index.get(&r).ok_or(AffineError::NotClosed)?;
            let q = (v - r as i64) / n;
            window.push(j + q * m);
        }
        Self::from_window(set.len(), window)
    }

    /// Cycles grouped by slope, slopes descending.
    pub fn slope_classes(&self) -> Vec<(Slope, Vec<Cycle>)> {
        let mut map: BTreeMap<Slope, Vec<Cycle>> = BTreeMap::new();
        for c in self.cycles() {
            map.entry(c.slope).or_default().push(c);
        }
        map.into_iter().rev().collect()
    }

    pub fn vector_config(&self) -> VectorConfig {
        self.slope_classes()
            .iter()
            .map(|(_, cs)| {
                cs.iter().fold((0, 0), |acc, c| (acc.0 + c.n_c, acc.1 + c.k_c))
            })
            .collect()
    }

    pub fn weak_decoration(&self) -> WeakDecoratedVC {
        WeakDecoratedVC {
            entries: self
                .slope_classes()
                .iter()
                .map(|(_, cs)| {
                    let v = cs.iter().fold((0, 0), |acc, c| (acc.0 + c.n_c, acc.1 + c.k_c));
                    let p = Partition::new(cs.iter().map(|c| c.d_c as u64).collect())
                        .expect("d_C >= 1");
                    (v, p)
                })
                .collect(),
        }
    }

    /// Ordered crossing number of two cycles.
    pub fn xing(&self, c: &Cycle, c2: &Cycle) -> u64 {
        let w = self.inversion_window();
        let mut count = 0;
        for &i in &c.residues {
            let i = i as i64;
            let fi = self.eval(i);
            for j in i + 1..=i + w {
                if c2.residues.binary_search(&self.residue(j)).is_ok() && fi > self.eval(j) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `Area(Z(E_f)) + exc(λ^f)`, the minimum length over the conjugacy class.
    pub fn minimal_length(&self) -> u64 {
        let weak = self.weak_decoration();
        zonotope_area(&weak.vectors()) as u64 + total_excess(weak.entries.iter().map(|e| &e.1))
    }

    pub fn is_c_reduced(&self) -> bool {
        let aggregate = self.length() == self.minimal_length();
        debug_assert_eq!(aggregate, self.per_pair_reduced(), "aggregate and per-pair tests disagree");
        aggregate
    }

    fn per_pair_reduced(&self) -> bool {
        let cycles = self.cycles();
        for c in &cycles {
            for c2 in &cycles {
                let x = self.xing(c, c2) as i64;
                let expected = if std::ptr::eq(c, c2) {
                    c.d_c - 1
                } else if c.slope <= c2.slope {
                    0
                } else {
                    (c.n_c * c2.k_c - c.k_c * c2.n_c).abs()
                };
                if x != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced expression `f = s_{i1} ⋯ s_{il} Λ^k`, taking the smallest descent first.
    pub fn reduced_word(&self) -> (Vec<i64>, i64) {
        let n = self.n();
        let mut f = self.clone();
        let mut word = Vec::new();
        if n >= 2 {
            loop {
                let inv = f.inverse();
                let desc = (1..=n as i64).find(|&i| inv.eval(i) > inv.eval(i + 1));
                match desc {
                    Some(i) => {
                        word.push(i);
                        f = Self::simple(n, i).unwrap().compose(&f).unwrap();
                    }
                    None => break,
                }
            }
        }
        debug_assert_eq!(f, Self::shift(n, f.k()));
        (word, f.k())
    }

    /// Strongly decorated vector configuration; requires `f` c-reduced.
    pub fn strong_decoration(&self) -> Result<StrongDecoratedVC, AffineError> {
        if !self.is_c_reduced() {
            return Err(AffineError::NotCReduced);
        }
        let mut entries = Vec::new();
        for (_, cs) in self.slope_classes() {
            let v = cs.iter().fold((0, 0), |acc, c| (acc.0 + c.n_c, acc.1 + c.k_c));
            let residues: Vec<usize> = cs.iter().flat_map(|c| c.residues.clone()).collect();
            let g = self.restriction(&residues)?;
            let ip = constant_slope_intervals(&g)?;
            entries.push((v, ip.composition()));
        }
        Ok(StrongDecoratedVC { entries })
    }

    /// `(μ(f), d(bfcc_f))`.
    pub fn modular_invariant(&self) -> Result<(u64, u64), AffineError> {
        if !self.is_c_reduced() {
            return Err(AffineError::NotCReduced);
        }
        let mut comps = Vec::new();
        let mut offsets = Vec::new();
        for (_, cs) in self.slope_classes() {
            let residues: Vec<usize> = cs.iter().flat_map(|c| c.residues.clone()).collect();
            let g = self.restriction(&residues)?;
            let (mu, c) = constant_slope_invariant(&g)?;
            comps.push(c);
            offsets.push(mu);
        }
        let d = rotation_gcd(&comps).expect("at least one slope");
        Ok((offsets.iter().sum::<u64>() % d, d))
    }
}

/// The partition `I_g` of `Z/dZ` for a c-reduced `g` of constant slope, `d = gcd(k, n)`.
pub fn constant_slope_intervals(g: &AffinePermutation) -> Result<IntervalPartition, AffineError> {
    let n = g.n() as i64;
    let d = g.d();
    let cycles = g.cycles();
    if cycles.len() > 1 {
        let mut iv = Vec::new();
        for c in &cycles {
            let mut res: Vec<i64> = c.residues.iter().map(|&r| (r as i64).rem_euclid(d)).collect();
            res.sort_unstable();
            res.dedup();
            if res.len() as i64 != c.d_c {
                return Err(AffineError::Internal(format!(
                    "cycle image mod {d} has {} residues, expected {}",
                    res.len(),
                    c.d_c
                )));
            }
            let start = (0..d)
                .find(|s| {
                    res.binary_search(s).is_ok()
                        && res.binary_search(&((s - 1).rem_euclid(d))).is_err()
                })
                .unwrap_or(0);
            iv.push((start, c.d_c as u64));
        }
        return IntervalPartition::from_intervals(d as u64, &iv)
            .ok_or_else(|| AffineError::Internal("cycle images do not tile Z/dZ".into()));
    }
    // Single cycle: the crossing components of the arrow diagram are runs of consecutive
    // arrows; the interval starts at the first arrow of a run of length d.
    let lo = -n + 1;
    let hi = 2 * n;
    let size = (hi - lo + 1) as usize;
    let mut parent: Vec<usize> = (0..size).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    let vals: Vec<i64> = (lo..=hi).map(|i| g.eval(i)).collect();
    for a in 0..size {
        for b in a + 1..size {
            if vals[a] > vals[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let idx = |i: i64| (i - lo) as usize;
    for j in 1..=n {
        let cj = find(&mut parent, idx(j));
        if find(&mut parent, idx(j - 1)) == cj
            || (1..d).any(|t| find(&mut parent, idx(j + t)) != cj)
            || find(&mut parent, idx(j + d)) == cj
        {
            continue;
        }
        return Ok(IntervalPartition::from_intervals(d as u64, &[(j, d as u64)]).unwrap());
    }
    Err(AffineError::Internal("no crossing run of length d in a single-cycle diagram".into()))
}

/// `(μ(g), c^g)` for a c-reduced constant-slope `g`; `μ` is taken mod `rot(c^g)`.
pub fn constant_slope_invariant(
    g: &AffinePermutation,
) -> Result<(u64, CyclicComposition), AffineError> {
    let ig = constant_slope_intervals(g)?;
    let c = ig.composition();
    let ic = interval_partition(&c);
    let r = ic
        .offset_to(&ig)
        .ok_or_else(|| AffineError::Internal("interval partitions not in one σ-orbit".into()))?;
    Ok((r % c.rotation_number(), c))
}

/// Decides c-equivalence of two c-reduced elements through their invariants.
pub fn c_equivalent(f: &AffinePermutation, g: &AffinePermutation) -> Result<bool, AffineError> {
    f.check_same(g)?;
    if !f.is_c_reduced() || !g.is_c_reduced() {
        return Err(AffineError::NotCReduced);
    }
    if f.weak_decoration() != g.weak_decoration() {
        return Ok(false);
    }
    if f.strong_decoration()? != g.strong_decoration()? {
        return Ok(false);
    }
    Ok(f.modular_invariant()? == g.modular_invariant()?)
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [", self.n())?;
        for (i, v) in self.window.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AffinePermutation {
    type Err = AffineError;

    /// Parses `n=7 [7,-1,2,5,8,3,11]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| AffineError::Parse(m.to_string());
        let s = s.trim();
        let rest = s.strip_prefix("n=").ok_or_else(|| bad("expected `n=`"))?;
        let open = rest.find('[').ok_or_else(|| bad("expected `[`"))?;
        let n: usize = rest[..open].trim().parse().map_err(|_| bad("bad period"))?;
        let body = rest[open + 1..]
            .trim_end()
            .strip_suffix(']')
            .ok_or_else(|| bad("expected `]`"))?;
        let window = body
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<i64>().map_err(|_| bad(&format!("bad entry `{}`", t.trim()))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_window(n, window)
    }
}
