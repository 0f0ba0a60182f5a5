//! Partitions, cyclic compositions and interval partitions of `Z/nZ`.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error("parts must be positive integers")]
    NonPositivePart,
    #[error("a composition needs at least one part")]
    Empty,
    #[error("gcd of an empty family of rotation numbers is undefined")]
    EmptyFamily,
}

/// Integer partition with parts stored in weakly decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self, CyclicError> {
        if parts.contains(&0) {
            return Err(CyclicError::NonPositivePart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

/// `|λ|` minus the number of parts.
pub fn excess(lambda: &Partition) -> u64 {
    lambda.parts.iter().map(|p| p - 1).sum()
}

/// Sum of excesses over a family of partitions.
pub fn total_excess<'a>(family: impl IntoIterator<Item = &'a Partition>) -> u64 {
    family.into_iter().map(excess).sum()
}

/// Composition up to cyclic rotation, stored as its lexicographically maximal rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicComposition {
    parts: Vec<u64>,
}

impl CyclicComposition {
    pub fn new(parts: Vec<u64>) -> Result<Self, CyclicError> {
        if parts.is_empty() {
            return Err(CyclicError::Empty);
        }
        if parts.contains(&0) {
            return Err(CyclicError::NonPositivePart);
        }
        let (normal, _) = normal_form(&parts);
        Ok(CyclicComposition { parts: normal })
    }

    /// Parts of the normal form.
    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn n(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.parts.len()
    }

    pub fn to_partition(&self) -> Partition {
        Partition::new(self.parts.clone()).expect("parts are positive")
    }

    pub fn reverse(&self) -> CyclicComposition {
        let mut p = self.parts.clone();
        p.reverse();
        CyclicComposition::new(p).expect("parts are positive")
    }

    pub fn rotation_number(&self) -> u64 {
        rotation_number(self)
    }

    pub fn interval_partition(&self) -> IntervalPartition {
        interval_partition(self)
    }
}

impl fmt::Display for CyclicComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.parts)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, parts: &[u64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, ")")
}

/// Lexicographically maximal rotation of `parts` and the smallest offset producing it.
///
/// The returned offset `o` satisfies `normal[i] = parts[(i + o) % m]`.
pub fn normal_form(parts: &[u64]) -> (Vec<u64>, usize) {
    let m = parts.len();
    let mut best: Option<(Vec<u64>, usize)> = None;
    for o in 0..m {
        let rot: Vec<u64> = (0..m).map(|i| parts[(i + o) % m]).collect();
        match &best {
            Some((b, _)) if *b >= rot => {}
            _ => best = Some((rot, o)),
        }
    }
    best.unwrap_or((Vec::new(), 0))
}

/// A partition of `Z/nZ` into cyclic intervals.
///
/// Residues are represented in `0..n`. Intervals are kept sorted by start, so two
/// partitions compare equal exactly when they consist of the same intervals; with a
/// single interval the start is part of the data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalPartition {
    n: u64,
    intervals: Vec<(u64, u64)>,
}

impl IntervalPartition {
    /// Builds from `(start, length)` pairs; returns `None` unless they tile `Z/nZ`.
    pub fn from_intervals(n: u64, intervals: &[(i64, u64)]) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let mut covered = vec![false; n as usize];
        let mut out = Vec::with_capacity(intervals.len());
        for &(s, len) in intervals {
            if len == 0 {
                return None;
            }
            let s = s.rem_euclid(n as i64) as u64;
            for t in 0..len {
                let r = ((s + t) % n) as usize;
                if covered[r] {
                    return None;
                }
                covered[r] = true;
            }
            out.push((s, len));
        }
        if covered.iter().any(|c| !c) {
            return None;
        }
        out.sort_unstable();
        Some(IntervalPartition { n, intervals: out })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(start, length)` pairs sorted by start.
    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn starts(&self) -> Vec<u64> {
        self.intervals.iter().map(|i| i.0).collect()
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.intervals.iter().map(|i| i.1).collect()
    }

    /// Image under `σ^r`, which adds `r` to every residue.
    pub fn shift(&self, r: i64) -> IntervalPartition {
        let n = self.n as i64;
        let mut intervals: Vec<(u64, u64)> = self
            .intervals
            .iter()
            .map(|&(s, l)| ((s as i64 + r).rem_euclid(n) as u64, l))
            .collect();
        intervals.sort_unstable();
        IntervalPartition { n: self.n, intervals }
    }

    /// Cyclic composition read off from the lengths in cyclic order.
    pub fn composition(&self) -> CyclicComposition {
        CyclicComposition::new(self.lengths()).expect("lengths are positive")
    }

    /// Smallest `r >= 0` with `σ^r(self) = other`, if any.
    pub fn offset_to(&self, other: &IntervalPartition) -> Option<u64> {
        if self.n != other.n {
            return None;
        }
        (0..self.n).find(|&r| self.shift(r as i64) == *other)
    }
}

/// Intervals `[1, c1], [c1+1, c1+c2], …` of the normal form, as residues mod `n`.
pub fn interval_partition(c: &CyclicComposition) -> IntervalPartition {
    let n = c.n();
    let mut start = 1u64;
    let mut iv = Vec::with_capacity(c.m());
    for &p in c.parts() {
        iv.push((start as i64, p));
        start += p;
    }
    IntervalPartition::from_intervals(n, &iv).expect("consecutive intervals tile Z/nZ")
}

/// Smallest `r` in `[1, n]` with `σ^r(I_c) = I_c`.
pub fn rotation_number(c: &CyclicComposition) -> u64 {
    let ip = interval_partition(c);
    (1..=c.n())
        .find(|&r| ip.shift(r as i64) == ip)
        .unwrap_or_else(|| c.n())
}

/// Gcd of the rotation numbers of a nonempty family.
pub fn rotation_gcd(family: &[CyclicComposition]) -> Result<u64, CyclicError> {
    if family.is_empty() {
        return Err(CyclicError::EmptyFamily);
    }
    Ok(family
        .iter()
        .map(rotation_number)
        .fold(0u64, |acc, r| acc.gcd(&r)))
}
