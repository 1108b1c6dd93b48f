//! Six-sided contours C(a,b,c,d,e,f) in the triangular lattice, the map phi
//! from lattice points to contours, and their sign patterns.
//!
//! Planar points use lattice coordinates (u, v) with the embedding
//! (u + v/2, v*sqrt(3)/2). Side directions follow one another clockwise in
//! 60 degree steps, starting with a = (-1, 1).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::walk::LatticePoint;

/// Unit directions of sides a..f in lattice coordinates.
pub const DIRECTIONS: [(i64, i64); 6] = [(-1, 1), (0, 1), (1, 0), (1, -1), (0, -1), (-1, 0)];

/// Side names in order.
pub const SIDE_NAMES: [char; 6] = ['a', 'b', 'c', 'd', 'e', 'f'];

/// Signed side lengths (a, b, c, d, e, f).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct SixTuple(pub [i64; 6]);

impl SixTuple {
    pub const fn new(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Self {
        Self([a, b, c, d, e, f])
    }

    pub fn sides(&self) -> &[i64; 6] {
        &self.0
    }

    pub fn side(&self, s: usize) -> i64 {
        self.0[s]
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// a+b = d+e, c+d = f+a and the six sides sum to 1.
    pub fn is_valid_closed(&self) -> bool {
        self.closes_up() && self.sum() == 1
    }

    /// a+b = d+e and c+d = f+a.
    pub fn closes_up(&self) -> bool {
        let [a, b, c, d, e, f] = self.0;
        a + b == d + e && c + d == f + a
    }

    /// sigma^m: (a+m, b-m, c+m, d-m, e+m, f-m).
    pub fn sigma(&self, m: i64) -> Self {
        Self(std::array::from_fn(|s| self.0[s] + if s % 2 == 0 { m } else { -m }))
    }

    /// Twisted rotation (a,b,c,d,e,f) -> (-f,-a,-b,-c,-d,-e).
    pub fn theta(&self) -> Self {
        Self(std::array::from_fn(|s| -self.0[(s + 5) % 6]))
    }

    pub fn negate(&self) -> Self {
        Self(self.0.map(|x| -x))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|s| self.0[s] + other.0[s]))
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Corner points starting from `start`: seven points, the last equal to
    /// the first when the contour closes.
    pub fn corners(&self, start: (i64, i64)) -> [(i64, i64); 7] {
        let mut out = [start; 7];
        for s in 0..6 {
            let (du, dv) = DIRECTIONS[s];
            out[s + 1] = (out[s].0 + du * self.0[s], out[s].1 + dv * self.0[s]);
        }
        out
    }

    /// Every lattice point passed, one per unit step, with the index of the
    /// side each step belongs to. Entry n is the step from `points[n]` to
    /// `points[n+1]`.
    pub fn path(&self, start: (i64, i64)) -> ContourPath {
        let mut points = vec![start];
        let mut sides = Vec::new();
        let mut cur = start;
        for s in 0..6 {
            let n = self.0[s];
            let (du, dv) = DIRECTIONS[s];
            let (du, dv) = if n < 0 { (-du, -dv) } else { (du, dv) };
            for _ in 0..n.abs() {
                cur = (cur.0 + du, cur.1 + dv);
                points.push(cur);
                sides.push(s);
            }
        }
        ContourPath { points, sides }
    }

    /// True when the closed unit-step walk visits some lattice point twice.
    ///
    /// Collinear continuation of neighbouring sides (a hidden 180 degree
    /// corner) revisits nothing and is not an intersection.
    pub fn is_self_intersecting(&self) -> bool {
        let path = self.path((0, 0));
        let n = path.points.len() - 1;
        let mut seen = HashSet::with_capacity(n);
        path.points[..n].iter().any(|p| !seen.insert(*p))
    }

    pub fn signs(&self) -> [i8; 6] {
        self.0.map(|x| x.signum() as i8)
    }

    pub fn sign_pattern(&self) -> SignPattern {
        SignPattern::of(self)
    }

    /// Inverse of phi, when this tuple is an image of it.
    pub fn phi_inverse(&self) -> Option<LatticePoint> {
        let [a, _, c, d, _, _] = self.0;
        let twice_k = a - d + 1;
        if twice_k.rem_euclid(2) != 0 {
            return None;
        }
        let k = twice_k / 2;
        let p = LatticePoint::new(c - k, a - k, k);
        (phi(p) == *self).then_some(p)
    }
}

impl fmt::Display for SixTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e, g] = self.0;
        write!(f, "C({a},{b},{c},{d},{e},{g})")
    }
}

impl FromStr for SixTuple {
    type Err = String;

    /// Accepts `C(a,b,c,d,e,f)`, `(a,b,c,d,e,f)` or six bare integers.
    fn from_str(s: &str) -> Result<Self, String> {
        let body = s.trim().trim_start_matches('C').trim_start_matches('(').trim_end_matches(')');
        let nums: Result<Vec<i64>, _> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect();
        let nums = nums.map_err(|e| format!("{s:?}: {e}"))?;
        let arr: [i64; 6] = nums.try_into().map_err(|_| format!("{s:?}: need six integers"))?;
        Ok(SixTuple(arr))
    }
}

/// Unit-step expansion of a contour.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContourPath {
    pub points: Vec<(i64, i64)>,
    pub sides: Vec<usize>,
}

/// phi(i,j,k) = (j+k, -i-j-k, i+k, j+1-k, -i-j-1+k, i+1-k).
pub fn phi(p: LatticePoint) -> SixTuple {
    let LatticePoint { i, j, k } = p;
    SixTuple::new(j + k, -i - j - k, i + k, j + 1 - k, -i - j - 1 + k, i + 1 - k)
}

/// Shape families of closed contours by sign pattern.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ShapeCase {
    /// Rotations of (+,-,-,+,-,-) and its negative: unbounded, sign-unbalanced.
    UnboundedUnbalanced,
    /// Rotations of (+,-,-,+,+,-) and its negative: unbounded, sign-balanced.
    UnboundedBalanced,
    /// Rotations of (+,-,-,-,+,-) and its negative: bounded, sign-unbalanced.
    BoundedUnbalanced,
    /// Some side has length zero; holds the zero positions (0 = a).
    Degenerate { zeros: Vec<usize> },
    /// (+,-,+,-,+,-) or its negative; always self-intersecting.
    Alternating,
    /// A zero-free pattern outside the families above.
    Unclassified,
}

impl ShapeCase {
    /// Case number 1..5 in the shape catalogue, if any.
    pub fn number(&self) -> Option<u8> {
        match self {
            ShapeCase::UnboundedUnbalanced => Some(1),
            ShapeCase::UnboundedBalanced => Some(2),
            ShapeCase::BoundedUnbalanced => Some(3),
            ShapeCase::Degenerate { .. } => Some(4),
            ShapeCase::Alternating => Some(5),
            ShapeCase::Unclassified => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignPattern {
    pub signs: [i8; 6],
    pub case: ShapeCase,
    /// Lexicographically least pattern in the orbit under theta.
    pub theta_representative: [i8; 6],
}

fn rotations(p: [i8; 6]) -> impl Iterator<Item = [i8; 6]> {
    (0..6).map(move |r| std::array::from_fn(|s| p[(s + r) % 6]))
}

fn in_family(signs: &[i8; 6], base: [i8; 6]) -> bool {
    let neg = base.map(|x| -x);
    rotations(base).chain(rotations(neg)).any(|r| r == *signs)
}

impl SignPattern {
    pub fn of(t: &SixTuple) -> Self {
        let signs = t.signs();
        let zeros: Vec<usize> = (0..6).filter(|&s| signs[s] == 0).collect();
        let case = if !zeros.is_empty() {
            ShapeCase::Degenerate { zeros }
        } else if in_family(&signs, [1, -1, -1, 1, -1, -1]) {
            ShapeCase::UnboundedUnbalanced
        } else if in_family(&signs, [1, -1, -1, 1, 1, -1]) {
            ShapeCase::UnboundedBalanced
        } else if in_family(&signs, [1, -1, -1, -1, 1, -1]) {
            ShapeCase::BoundedUnbalanced
        } else if in_family(&signs, [1, -1, 1, -1, 1, -1]) {
            ShapeCase::Alternating
        } else {
            ShapeCase::Unclassified
        };
        let theta = |p: [i8; 6]| -> [i8; 6] { std::array::from_fn(|s| -p[(s + 5) % 6]) };
        let mut rep = signs;
        let mut cur = signs;
        for _ in 0..6 {
            cur = theta(cur);
            rep = rep.min(cur);
        }
        Self { signs, case, theta_representative: rep }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .signs
            .iter()
            .map(|x| match x {
                1 => "+",
                -1 => "-",
                _ => "0",
            })
            .collect();
        write!(f, "({})", s.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(i: i64, j: i64, k: i64) -> LatticePoint {
        LatticePoint::new(i, j, k)
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(lp(0, -1, 1)), SixTuple::new(0, 0, 1, -1, 1, 0));
        assert_eq!(phi(lp(1, 3, -1)), SixTuple::new(2, -3, 0, 5, -6, 3));
        for n in 0..5 {
            let dragon = SixTuple::new(n + 1, -n - 1, 1, n, -n, 0);
            assert_eq!(phi(lp(0, n, 1)), dragon);
            assert_eq!(phi(lp(0, n, 0)).sigma(1), dragon);
        }
    }

    #[test]
    fn validity() {
        assert!(SixTuple::new(0, 0, 1, -1, 1, 0).is_valid_closed());
        assert!(!SixTuple::new(1, 1, 1, 1, 1, 1).is_valid_closed());
        for i in -10..=10 {
            for j in -10..=10 {
                for k in -10..=10 {
                    let t = phi(lp(i, j, k));
                    assert!(t.is_valid_closed());
                    assert_eq!(t.phi_inverse(), Some(lp(i, j, k)));
                    assert_eq!(t.sigma(1), phi(lp(i, j, k + 1)));
                }
            }
        }
        assert_eq!(SixTuple::new(1, 1, 1, 1, 1, 1).phi_inverse(), None);
    }

    #[test]
    fn closure_matches_corners() {
        for t in [SixTuple::new(2, -3, 0, 5, -6, 3), SixTuple::new(5, -5, 3, 0, 0, -2)] {
            assert_eq!(t.corners((0, 0))[6], (0, 0));
        }
        let open = SixTuple::new(1, 0, 0, 0, 0, 0);
        assert!(!open.closes_up());
        assert_ne!(open.corners((0, 0))[6], (0, 0));
    }

    #[test]
    fn theta_has_order_six() {
        let t = SixTuple::new(3, -1, 4, -1, 5, -9);
        let mut u = t;
        for n in 1..=6 {
            u = u.theta();
            assert_eq!(u == t, n == 6);
        }
    }

    #[test]
    fn self_intersection() {
        assert_eq!(phi(lp(0, 0, 3)), SixTuple::new(3, -3, 3, -2, 2, -2));
        assert!(phi(lp(0, 0, 3)).is_self_intersecting());
        assert!(!phi(lp(1, 3, -1)).is_self_intersecting());
        assert!(!SixTuple::new(5, -5, 3, 0, 0, -2).is_self_intersecting());
        assert!(!SixTuple::new(5, -5, 5, 0, 0, 0).is_self_intersecting());
    }

    #[test]
    fn patterns() {
        let p = phi(lp(1, 3, -1)).sign_pattern();
        assert_eq!(p.to_string(), "(+,-,0,+,-,+)");
        assert_eq!(p.case, ShapeCase::Degenerate { zeros: vec![2] });
        assert_eq!(phi(lp(0, 0, 3)).sign_pattern().case, ShapeCase::Alternating);
        assert_eq!(SixTuple::new(3, -4, 2, 2, -3, 1).sign_pattern().case, ShapeCase::UnboundedUnbalanced);
        assert_eq!(SixTuple::new(2, -1, -1, 2, 1, -2).sign_pattern().case, ShapeCase::UnboundedBalanced);
        assert_eq!(SixTuple::new(1, 1, 1, -4, 6, -4).sign_pattern().case.number(), Some(3));
        assert_eq!(SixTuple::new(5, -6, 4, 0, -1, -1).sign_pattern().case.number(), Some(4));
        for k in [-7, 0, 1, 8] {
            for i in -20..=20 {
                for j in -20..=20 {
                    let case = phi(lp(i, j, k)).sign_pattern().case;
                    assert_ne!(case, ShapeCase::Unclassified);
                    if (0..=1).contains(&k) {
                        assert!(matches!(case, ShapeCase::UnboundedUnbalanced | ShapeCase::Degenerate { .. }));
                    }
                }
            }
        }
    }

    #[test]
    fn sign_pattern_census() {
        let census = |k: i64| -> HashSet<[i8; 6]> {
            let mut out = HashSet::new();
            for i in -30..=30 {
                for j in -30..=30 {
                    let s = phi(lp(i, j, k)).signs();
                    if !s.contains(&0) {
                        out.insert(s);
                    }
                }
            }
            out
        };
        let (up, down) = (census(6), census(-6));
        assert_eq!(up.len(), 19);
        assert_eq!(down.len(), 19);
        assert_eq!(up.intersection(&down).count(), 6);
        assert_eq!(up.union(&down).count(), 32);
    }

    #[test]
    fn parse_roundtrip() {
        let t = SixTuple::new(2, -3, 0, 5, -6, 3);
        assert_eq!(t.to_string().parse::<SixTuple>().unwrap(), t);
        assert_eq!("2 -3 0 5 -6 3".parse::<SixTuple>().unwrap(), t);
        assert!("1,2,3".parse::<SixTuple>().is_err());
    }
}
