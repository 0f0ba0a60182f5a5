//! Point configurations, sorting permutations and ε-straight arrow diagrams.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::affine::{AffineError, AffinePermutation, StrongDecoratedVC};
use crate::geom::{q, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StraightenError {
    #[error("point configuration is not generic")]
    NotGeneric,
    #[error("empty point configuration")]
    Empty,
    #[error("vector ({0}, {1}) has non-positive first coordinate")]
    NonPositive(i64, i64),
    #[error("decoration size {got} differs from integer length {expected} of ({n}, {k})")]
    SizeMismatch { n: i64, k: i64, expected: i64, got: u64 },
    #[error("target {target} is out of range mod {modulus}")]
    TargetOutOfRange { target: u64, modulus: u64 },
    #[error("construction check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Affine(#[from] AffineError),
}

/// `x: Z → Q` with `x(i + n) = x(i) + 1`, stored on `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    coords: Vec<Q>,
}

impl PointConfig {
    pub fn new(coords: Vec<Q>) -> Result<Self, StraightenError> {
        if coords.is_empty() {
            return Err(StraightenError::Empty);
        }
        let mut reduced: Vec<Q> = coords.iter().map(|c| c - c.floor()).collect();
        reduced.sort();
        if reduced.windows(2).any(|w| w[0] == w[1]) {
            return Err(StraightenError::NotGeneric);
        }
        Ok(PointConfig { coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn at(&self, i: i64) -> Q {
        let n = self.n() as i64;
        let r = (i - 1).rem_euclid(n);
        let qt = (i - 1 - r) / n;
        self.coords[r as usize] + Q::from_integer(qt as i128)
    }
}

fn balance(x: &PointConfig, c: Q) -> i128 {
    let mut left = 0i128;
    let mut right = 0i128;
    for xr in &x.coords {
        let a = (xr - c).floor().to_integer();
        if a > 0 {
            left += a;
        }
        let b = (c - xr).floor().to_integer() + 1;
        if b > 0 {
            right += b;
        }
    }
    left - right
}

/// Midpoint of the interval of `c` with `#{i ≤ 0 : x_i > c} = #{i ≥ 1 : x_i < c}`.
pub fn cutoff_point(x: &PointConfig) -> Q {
    let lo = x.coords.iter().min().unwrap().floor() - Q::from_integer(2);
    let hi = x.coords.iter().max().unwrap().ceil() + Q::from_integer(2);
    let mut pts: Vec<Q> = Vec::new();
    for xr in &x.coords {
        for m in -4..=4 {
            let v = xr + Q::from_integer(m);
            if v >= lo && v <= hi {
                pts.push(v);
            }
        }
    }
    pts.sort();
    for w in pts.windows(2) {
        let mid = (w[0] + w[1]) / Q::from_integer(2);
        if balance(x, mid) == 0 {
            return mid;
        }
    }
    unreachable!("the balance function decreases by one at every point")
}

/// The sorting permutation `g_x` with `k(g_x) = 0`.
pub fn sorting_permutation(x: &PointConfig) -> Result<AffinePermutation, StraightenError> {
    let c = cutoff_point(x);
    let n = x.n() as i64;
    let mut inside: Vec<(Q, i64)> = Vec::with_capacity(x.n());
    for r in 1..=n {
        let v = x.at(r);
        let m = (v - c).floor().to_integer() as i64;
        inside.push((v - Q::from_integer(m as i128), r - m * n));
    }
    inside.sort();
    let inv: Vec<i64> = inside.iter().map(|p| p.1).collect();
    let g = AffinePermutation::from_window(x.n(), inv)?.inverse();
    debug_assert_eq!(g.k(), 0);
    Ok(g)
}

struct Block {
    base: Q,
    parts: u64,
    edge: usize,
}

/// A c-reduced permutation realizing a strongly decorated vector configuration.
pub fn build_eps_straight(config: &StrongDecoratedVC) -> Result<AffinePermutation, StraightenError> {
    let mut entries = config.entries.clone();
    for (v, c) in &entries {
        if v.0 <= 0 {
            return Err(StraightenError::NonPositive(v.0, v.1));
        }
        let ilen = v.0.gcd(&v.1);
        if c.n() as i64 != ilen {
            return Err(StraightenError::SizeMismatch { n: v.0, k: v.1, expected: ilen, got: c.n() });
        }
    }
    entries.sort_by(|a, b| {
        let sa = num_rational::Ratio::new(a.0 .1, a.0 .0);
        let sb = num_rational::Ratio::new(b.0 .1, b.0 .0);
        sb.cmp(&sa)
    });
    let m_total: i128 = entries.iter().map(|e| e.1.m() as i128).sum();
    let denoms: Vec<i128> = entries.iter().map(|(v, _)| (v.0 / v.0.gcd(&v.1)) as i128).collect();
    let lcm = denoms.iter().fold(1i128, |a, b| a.lcm(b));
    let max_n = entries.iter().map(|e| e.0 .0 as i128).max().unwrap_or(1);
    let eps = q(1, 4 * m_total.max(1) * lcm * max_n);

    let mut blocks = Vec::new();
    let mut j = 0i128;
    for (ei, (_, c)) in entries.iter().enumerate() {
        for &d in c.parts() {
            j += 1;
            blocks.push(Block { base: q(j, (m_total + 1) * lcm), parts: d, edge: ei });
        }
    }

    // (source real, target real)
    let mut arrows: Vec<(Q, Q)> = Vec::new();
    for b in &blocks {
        let (n_e, k_e) = entries[b.edge].0;
        let ilen = n_e.gcd(&k_e);
        let period = n_e / ilen;
        let nu = q(k_e as i128, n_e as i128);
        let d = b.parts as i128;
        for r in 0..period {
            let p = b.base + q(r as i128, period as i128);
            let p = p - p.floor();
            let is_base = p == b.base;
            for t in 1..=d {
                let src = p + eps * q(t, d);
                let tt = if is_base { t % d + 1 } else { t };
                let dst = p + nu + eps * q(tt, d);
                arrows.push((src, dst));
            }
        }
    }
    let n = arrows.len();
    let mut reps: Vec<Q> = arrows.iter().map(|a| a.0 - a.0.floor()).collect();
    reps.sort();
    if reps.windows(2).any(|w| w[0] == w[1]) {
        return Err(StraightenError::Check("block points collide".into()));
    }
    let index: BTreeMap<Q, i64> = reps.iter().enumerate().map(|(i, &v)| (v, i as i64 + 1)).collect();
    let label = |v: Q| -> Option<i64> {
        let fl = v.floor();
        index.get(&(v - fl)).map(|i| i + fl.to_integer() as i64 * n as i64)
    };
    let mut window = vec![0i64; n];
    for (src, dst) in &arrows {
        let fl = src.floor();
        let s = label(*src).ok_or_else(|| StraightenError::Check("missing source".into()))?;
        let t = label(*dst).ok_or_else(|| StraightenError::Check("arrow target is not a point".into()))?;
        let shift = fl.to_integer() as i64 * n as i64;
        window[(s - shift - 1) as usize] = t - shift;
    }
    let g = AffinePermutation::from_window(n, window)?;
    if !g.is_c_reduced() {
        return Err(StraightenError::Check("output is not c-reduced".into()));
    }
    let got = g.strong_decoration()?;
    let want = StrongDecoratedVC::new(entries);
    if got != want {
        return Err(StraightenError::Check(format!("decoration mismatch: {got:?} vs {want:?}")));
    }
    Ok(g)
}

/// `σ^r(f)` for the smallest `r ≥ 0` with `μ(σ^r f) = target`.
pub fn set_modular_invariant(
    f: &AffinePermutation,
    target: u64,
) -> Result<AffinePermutation, StraightenError> {
    let (mu, d) = f.modular_invariant()?;
    if target >= d {
        return Err(StraightenError::TargetOutOfRange { target, modulus: d });
    }
    let r = (target + d - mu) % d;
    Ok(f.rotate_by(r as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::CyclicComposition;
    use num_traits::{One, Zero};

    fn cc(p: &[u64]) -> CyclicComposition {
        CyclicComposition::new(p.to_vec()).unwrap()
    }

    fn config_from(g: &AffinePermutation, offset: Q) -> PointConfig {
        let n = g.n() as i128;
        PointConfig::new(
            (1..=g.n() as i64)
                .map(|i| q(2 * g.eval(i) as i128 - 1, 2 * n) + offset)
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cutoff_examples() {
        let n = 5;
        let x = PointConfig::new((1..=n).map(|i| q(i, n)).collect()).unwrap();
        let c = cutoff_point(&x);
        assert!(c > Q::zero() && c < q(1, n));
        let shifted = PointConfig::new((1..=n).map(|i| q(i, n) + Q::one()).collect()).unwrap();
        assert_eq!(cutoff_point(&shifted), c + Q::one());
    }

    #[test]
    fn sorting_golden() {
        let g = AffinePermutation::from_word(7, &[5, 2, 1], 0).unwrap();
        let x = config_from(&g, Q::zero());
        assert_eq!(sorting_permutation(&x).unwrap(), g);
        assert_eq!(sorting_permutation(&x).unwrap().inverse().window(), &[2, 3, 1, 4, 6, 5, 7]);
        let sorted = PointConfig::new((1..=4).map(|i| q(i, 5)).collect()).unwrap();
        assert_eq!(sorting_permutation(&sorted).unwrap(), AffinePermutation::identity(4));
    }

    #[test]
    fn sorting_permutation_is_k_zero_for_shifted_configs() {
        let g = AffinePermutation::from_word(5, &[1, 4, 2, 5, 3], 0).unwrap();
        for off in [q(1, 3), q(7, 5), q(-9, 4)] {
            let x = config_from(&g, off);
            let s = sorting_permutation(&x).unwrap();
            assert_eq!(s.k(), 0);
            for i in 1..=5 {
                for j in 1..=5 {
                    assert_eq!(x.at(i) < x.at(j), s.eval(i) < s.eval(j));
                }
            }
        }
    }

    #[test]
    fn non_generic_rejected() {
        assert_eq!(PointConfig::new(vec![q(1, 2), q(3, 2)]), Err(StraightenError::NotGeneric));
    }

    #[test]
    fn example_configuration() {
        let cfg = StrongDecoratedVC::new(vec![((2, 0), cc(&[2])), ((2, 2), cc(&[2]))]);
        let g = build_eps_straight(&cfg).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.k(), 2);
        assert_eq!(g.length(), 6);
        assert!(g.is_c_reduced());
        assert_eq!(g.strong_decoration().unwrap(), cfg);
    }

    #[test]
    fn long_single_vector() {
        let cfg = StrongDecoratedVC::new(vec![((18, 12), cc(&[2, 1, 3]))]);
        let g = build_eps_straight(&cfg).unwrap();
        assert_eq!((g.n(), g.k()), (18, 12));
        assert!(g.is_c_reduced());
        assert_eq!(g.strong_decoration().unwrap(), cfg);
        let rev = StrongDecoratedVC::new(vec![((18, 12), cc(&[3, 1, 2]))]);
        assert_eq!(build_eps_straight(&rev).unwrap().strong_decoration().unwrap(), rev);
    }

    #[test]
    fn all_fixed_points() {
        let cfg = StrongDecoratedVC::new(vec![((4, 0), cc(&[1, 1, 1, 1]))]);
        assert_eq!(build_eps_straight(&cfg).unwrap(), AffinePermutation::identity(4));
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = StrongDecoratedVC { entries: vec![((-2, 0), cc(&[2]))] };
        assert!(matches!(build_eps_straight(&cfg), Err(StraightenError::NonPositive(..))));
        let cfg = StrongDecoratedVC { entries: vec![((2, 0), cc(&[1]))] };
        assert!(matches!(build_eps_straight(&cfg), Err(StraightenError::SizeMismatch { .. })));
    }

    #[test]
    fn modular_targeting() {
        let cfg = StrongDecoratedVC::new(vec![((4, 0), cc(&[2, 2]))]);
        let f = build_eps_straight(&cfg).unwrap();
        let (mu, d) = f.modular_invariant().unwrap();
        assert_eq!(d, 2);
        assert_eq!(set_modular_invariant(&f, mu).unwrap(), f);
        let g = set_modular_invariant(&f, (mu + 1) % d).unwrap();
        assert_eq!(g, f.rotate());
        for t in 0..d {
            assert_eq!(set_modular_invariant(&f, t).unwrap().modular_invariant().unwrap().0, t);
        }
        assert!(set_modular_invariant(&f, 2).is_err());
    }

    #[test]
    fn random_configurations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let prims = [(1, 0), (1, 1), (1, -1), (2, 1), (1, 2), (3, -1), (1, -2)];
        for _ in 0..60 {
            let count = rng.gen_range(1..=3);
            let mut used = Vec::new();
            let mut entries = Vec::new();
            while entries.len() < count {
                let p: (i64, i64) = prims[rng.gen_range(0..prims.len())];
                if used.contains(&p) {
                    continue;
                }
                used.push(p);
                let ilen = rng.gen_range(1..=4u64);
                let mut parts = Vec::new();
                let mut left = ilen;
                while left > 0 {
                    let x = rng.gen_range(1..=left);
                    parts.push(x);
                    left -= x;
                }
                entries.push(((p.0 * ilen as i64, p.1 * ilen as i64), cc(&parts)));
            }
            let cfg = StrongDecoratedVC::new(entries);
            let g = build_eps_straight(&cfg).unwrap();
            assert_eq!(g.strong_decoration().unwrap(), cfg);
        }
    }
}
