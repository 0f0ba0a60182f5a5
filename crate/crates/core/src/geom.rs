//! Exact rational plane geometry.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational number.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Ratio::from_integer(n as i128)
}

/// Parses `p/q` or an integer.
pub fn parse_q(s: &str) -> Result<Q, String> {
    Q::from_str(s.trim()).map_err(|_| format!("bad rational `{s}`"))
}

pub fn fmt_q(v: &Q) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Pt { x: qi(x), y: qi(y) }
    }

    pub fn zero() -> Self {
        Pt::int(0, 0)
    }

    pub fn scale(self, s: Q) -> Self {
        Pt { x: self.x * s, y: self.y * s }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(self, o: Pt) -> Q {
        self.x * o.x + self.y * o.y
    }

    /// Rotation by 90° counterclockwise.
    pub fn perp(self) -> Pt {
        Pt { x: -self.y, y: self.x }
    }

    pub fn floor(self) -> (i64, i64) {
        (self.x.floor().to_integer() as i64, self.y.floor().to_integer() as i64)
    }

    /// Representative in `[0,1)²` and the integer offset removed.
    pub fn wrap(self) -> (Pt, (i64, i64)) {
        let (a, b) = self.floor();
        (self - Pt::int(a, b), (a, b))
    }

    pub fn to_f64(self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Debug for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

impl Add for Pt {
    type Output = Pt;
    fn add(self, o: Pt) -> Pt {
        Pt { x: self.x + o.x, y: self.y + o.y }
    }
}

impl Sub for Pt {
    type Output = Pt;
    fn sub(self, o: Pt) -> Pt {
        Pt { x: self.x - o.x, y: self.y - o.y }
    }
}

impl Neg for Pt {
    type Output = Pt;
    fn neg(self) -> Pt {
        Pt { x: -self.x, y: -self.y }
    }
}

impl Mul<Q> for Pt {
    type Output = Pt;
    fn mul(self, s: Q) -> Pt {
        self.scale(s)
    }
}

pub fn cross(a: Pt, b: Pt) -> Q {
    a.x * b.y - a.y * b.x
}

/// Sign of the turn `a → b → c`: positive for a left turn.
pub fn orient(a: Pt, b: Pt, c: Pt) -> i32 {
    sign(&cross(b - a, c - a))
}

pub fn sign(v: &Q) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Counterclockwise angular order of nonzero directions starting at the positive x-axis.
pub fn angle_cmp(a: Pt, b: Pt) -> Ordering {
    let half = |p: Pt| {
        if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| match sign(&cross(a, b)) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    })
}

/// Whether two nonzero directions point the same way.
pub fn same_direction(a: Pt, b: Pt) -> bool {
    cross(a, b).is_zero() && a.dot(b).is_positive()
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegHit {
    Point(Pt),
    Overlap,
}

/// Intersection of closed segments `ab` and `cd` (both nondegenerate).
pub fn segment_intersection(a: Pt, b: Pt, c: Pt, d: Pt) -> Option<SegHit> {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 == 0 && o2 == 0 {
        let mut pts: Vec<Pt> = Vec::new();
        for p in [a, b] {
            if on_segment(p, c, d) && !pts.contains(&p) {
                pts.push(p);
            }
        }
        for p in [c, d] {
            if on_segment(p, a, b) && !pts.contains(&p) {
                pts.push(p);
            }
        }
        return match pts.len() {
            0 => None,
            1 => Some(SegHit::Point(pts[0])),
            _ => Some(SegHit::Overlap),
        };
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return None;
    }
    let t = cross(c - a, d - c) / cross(b - a, d - c);
    Some(SegHit::Point(a + (b - a) * t))
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BBox {
    pub lo: Pt,
    pub hi: Pt,
}

impl BBox {
    pub fn of(points: &[Pt]) -> BBox {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        BBox { lo, hi }
    }

    pub fn translate(&self, v: Pt) -> BBox {
        BBox { lo: self.lo + v, hi: self.hi + v }
    }

    pub fn meets(&self, o: &BBox) -> bool {
        self.lo.x <= o.hi.x && o.lo.x <= self.hi.x && self.lo.y <= o.hi.y && o.lo.y <= self.hi.y
    }

    /// Integer translations `t` for which `self` and `o + t` meet.
    pub fn translations_meeting(&self, o: &BBox) -> Vec<(i64, i64)> {
        let fl = |v: Q| v.floor().to_integer() as i64;
        let cl = |v: Q| v.ceil().to_integer() as i64;
        let mut out = Vec::new();
        for tx in cl(self.lo.x - o.hi.x)..=fl(self.hi.x - o.lo.x) {
            for ty in cl(self.lo.y - o.hi.y)..=fl(self.hi.y - o.lo.y) {
                out.push((tx, ty));
            }
        }
        out
    }
}

/// Twice the signed area of a closed polygon.
pub fn twice_signed_area(poly: &[Pt]) -> Q {
    let mut s = Q::zero();
    for i in 0..poly.len() {
        s += cross(poly[i], poly[(i + 1) % poly.len()]);
    }
    s
}

/// Winding number of a closed polygon around `p`, or `None` when `p` is on it.
pub fn winding_number(poly: &[Pt], p: Pt) -> Option<i64> {
    let mut w = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if on_segment(p, a, b) {
            return None;
        }
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0 {
                w += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0 {
            w -= 1;
        }
    }
    Some(w)
}

/// Squared distance from `p` to segment `ab`.
pub fn dist2_point_segment(p: Pt, a: Pt, b: Pt) -> Q {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2.is_zero() {
        return (p - a).dot(p - a);
    }
    let t = (p - a).dot(ab) / len2;
    let t = t.max(Q::zero()).min(Q::from_integer(1));
    let c = a + ab * t;
    (p - c).dot(p - c)
}

pub fn abs(v: Q) -> Q {
    v.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angular_order() {
        let dirs = [Pt::int(1, 0), Pt::int(1, 1), Pt::int(0, 1), Pt::int(-1, 0), Pt::int(0, -1), Pt::int(1, -1)];
        for i in 0..dirs.len() {
            for j in 0..dirs.len() {
                assert_eq!(angle_cmp(dirs[i], dirs[j]), i.cmp(&j));
            }
        }
    }

    #[test]
    fn intersections() {
        let hit = segment_intersection(Pt::int(0, 0), Pt::int(2, 2), Pt::int(0, 2), Pt::int(2, 0));
        assert_eq!(hit, Some(SegHit::Point(Pt::int(1, 1))));
        assert_eq!(segment_intersection(Pt::int(0, 0), Pt::int(1, 0), Pt::int(0, 1), Pt::int(1, 1)), None);
        assert_eq!(
            segment_intersection(Pt::int(0, 0), Pt::int(2, 0), Pt::int(1, 0), Pt::int(3, 0)),
            Some(SegHit::Overlap)
        );
        assert_eq!(
            segment_intersection(Pt::int(0, 0), Pt::int(1, 0), Pt::int(1, 0), Pt::int(1, 5)),
            Some(SegHit::Point(Pt::int(1, 0)))
        );
    }

    #[test]
    fn winding_and_area() {
        let sq = [Pt::int(0, 0), Pt::int(2, 0), Pt::int(2, 2), Pt::int(0, 2)];
        assert_eq!(twice_signed_area(&sq), qi(8));
        assert_eq!(winding_number(&sq, Pt::int(1, 1)), Some(1));
        assert_eq!(winding_number(&sq, Pt::int(3, 1)), Some(0));
        assert_eq!(winding_number(&sq, Pt::int(2, 1)), None);
        let rev: Vec<Pt> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, Pt::int(1, 1)), Some(-1));
    }

    #[test]
    fn translations() {
        let a = BBox::of(&[Pt::int(0, 0), Pt::new(q(1, 2), q(1, 2))]);
        let t = a.translations_meeting(&a);
        assert!(t.contains(&(0, 0)));
        assert_eq!(t.len(), 1);
        let b = BBox::of(&[Pt::int(0, 0), Pt::int(1, 1)]);
        assert_eq!(b.translations_meeting(&b).len(), 9);
    }
}
