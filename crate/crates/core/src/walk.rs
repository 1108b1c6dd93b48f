//! Generalized tau words, the alcove walk in the triangulated square lattice,
//! and prisms of lattice points indexing ordered clusters.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;

use crate::error::{QuiverError, WalkError};
use crate::formula;
use crate::laurent::{LaurentPoly, NVARS};
use crate::quiver::Seed;

/// A point (i, j, k) of Z^3; the cluster variable it names is z_i^{j,k}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LatticePoint {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl LatticePoint {
    pub const fn new(i: i64, j: i64, k: i64) -> Self {
        Self { i, j, k }
    }

    /// All points with |i|, |j| <= w and kmin <= k <= kmax, in lexicographic order.
    pub fn window(w: i64, kmin: i64, kmax: i64) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for i in -w..=w {
            for j in -w..=w {
                for k in kmin..=kmax {
                    out.push(LatticePoint::new(i, j, k));
                }
            }
        }
        out
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// One of the five generalized tau mutations.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Tau {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl Tau {
    pub const ALL: [Tau; 5] = [Tau::T1, Tau::T2, Tau::T3, Tau::T4, Tau::T5];

    pub fn index(self) -> usize {
        match self {
            Tau::T1 => 1,
            Tau::T2 => 2,
            Tau::T3 => 3,
            Tau::T4 => 4,
            Tau::T5 => 5,
        }
    }

    pub fn from_index(i: usize) -> Option<Tau> {
        Tau::ALL.get(i.wrapping_sub(1)).copied()
    }

    /// tau_1..tau_3 act on the alcove; tau_4 and tau_5 act on the k-levels.
    pub fn is_planar(self) -> bool {
        self.index() <= 3
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.index())
    }
}

/// Mutation word and trailing relabeling for a tau. The relabeling is given as
/// "new position i holds old position perm[i]" (0-indexed); for the 3-cycles it
/// sends the label at 1 to 4, 4 to 5 and 5 to 1 (resp. 2 to 3, 3 to 6, 6 to 2),
/// which is the direction that returns the quiver to itself.
pub fn tau_to_mutations(t: Tau) -> (Vec<usize>, [usize; NVARS]) {
    match t {
        Tau::T1 => (vec![1, 2], [1, 0, 2, 3, 4, 5]),
        Tau::T2 => (vec![3, 4], [0, 1, 3, 2, 4, 5]),
        Tau::T3 => (vec![5, 6], [0, 1, 2, 3, 5, 4]),
        Tau::T4 => (vec![1, 4, 1, 5, 1], [4, 1, 2, 0, 3, 5]),
        Tau::T5 => (vec![2, 3, 2, 6, 2], [0, 5, 1, 3, 4, 2]),
    }
}

/// A word in tau_1..tau_5, applied left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct TauWord(pub Vec<Tau>);

impl TauWord {
    pub fn new(taus: Vec<Tau>) -> Self {
        Self(taus)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, t: Tau) {
        self.0.push(t);
    }

    /// Splits into the tau_1..tau_3 part and the reduced tau_4/tau_5 tail.
    ///
    /// tau_4 and tau_5 commute with tau_1..tau_3, so the tail is the
    /// subsequence of tau_4/tau_5 letters; equal neighbours cancel since each
    /// tau is an involution, which leaves an alternating tail.
    pub fn factor(&self) -> (Vec<Tau>, Vec<Tau>) {
        let s1: Vec<Tau> = self.0.iter().copied().filter(|t| t.is_planar()).collect();
        let mut s2: Vec<Tau> = Vec::new();
        for t in self.0.iter().copied().filter(|t| !t.is_planar()) {
            if s2.last() == Some(&t) {
                s2.pop();
            } else {
                s2.push(t);
            }
        }
        (s1, s2)
    }
}

impl fmt::Display for TauWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for TauWord {
    type Err = WalkError;

    /// Accepts whitespace- or comma-separated tokens `t1`..`t5` (also `τ1`),
    /// or a run of them written without separators, like `t1t2t4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned = s.replace('τ', "t").replace(',', " ");
        let mut taus = Vec::new();
        for tok in cleaned.split_whitespace() {
            let pieces: Vec<&str> = tok.split('t').collect();
            if pieces.first() != Some(&"") || pieces.len() < 2 {
                return Err(WalkError::Parse(format!("unexpected token {tok:?}")));
            }
            for p in &pieces[1..] {
                let t = p
                    .parse::<usize>()
                    .ok()
                    .and_then(Tau::from_index)
                    .ok_or_else(|| WalkError::Parse(format!("unknown tau {tok:?}")))?;
                taus.push(t);
            }
        }
        Ok(TauWord(taus))
    }
}

pub fn apply_tau(seed: &Seed, t: Tau) -> Result<Seed, QuiverError> {
    let (word, perm) = tau_to_mutations(t);
    Ok(seed.mutate_sequence(&word)?.relabel(&perm))
}

pub fn apply_tau_word(seed: &Seed, w: &TauWord) -> Result<Seed, QuiverError> {
    w.0.iter().try_fold(seed.clone(), |s, &t| apply_tau(&s, t))
}

/// Residue class r in {1,2,3} of I - J mod 3 (3 stands for 0).
pub fn residue(i: i64, j: i64) -> usize {
    match (i - j).rem_euclid(3) {
        0 => 3,
        r => r as usize,
    }
}

/// A unit triangle of the triangulated square lattice. `v[r-1]` is the vertex
/// whose residue is r.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Alcove {
    pub v: [(i64, i64); 3],
}

/// The two orientations of alcoves.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlcoveShape {
    /// [(i,j), (i-1,j+1), (i,j+1)]
    NorthEast,
    /// [(i,j), (i-1,j+1), (i-1,j)]
    SouthWest,
}

impl Alcove {
    pub fn initial() -> Self {
        Self::from_vertices([(0, -1), (-1, 0), (0, 0)])
    }

    /// Orders three vertices by residue. Panics if the residues are not distinct.
    pub fn from_vertices(pts: [(i64, i64); 3]) -> Self {
        let mut v = [(0, 0); 3];
        let mut seen = [false; 3];
        for p in pts {
            let r = residue(p.0, p.1) - 1;
            assert!(!seen[r], "alcove vertices must have distinct residues");
            seen[r] = true;
            v[r] = p;
        }
        Self { v }
    }

    /// Reflection across the edge opposite the residue-`s` vertex; the new
    /// vertex keeps residue s.
    pub fn flip(&self, s: usize) -> Self {
        let mut v = self.v;
        let (a, b, c) = (v[(s) % 3], v[(s + 1) % 3], v[s - 1]);
        v[s - 1] = (a.0 + b.0 - c.0, a.1 + b.1 - c.1);
        Self { v }
    }

    pub fn shape(&self) -> Option<AlcoveShape> {
        let mut pts = self.v;
        pts.sort();
        // sorted by i then j
        let (imin, imax) = (pts[0].0, pts[2].0);
        if imax - imin != 1 {
            return None;
        }
        let hi: Vec<_> = pts.iter().filter(|p| p.0 == imax).collect();
        let lo: Vec<_> = pts.iter().filter(|p| p.0 == imin).collect();
        match (lo.len(), hi.len()) {
            (1, 2) if hi[1].1 == hi[0].1 + 1 && lo[0].1 == hi[1].1 => Some(AlcoveShape::NorthEast),
            (2, 1) if lo[1].1 == lo[0].1 + 1 && hi[0].1 == lo[0].1 => Some(AlcoveShape::SouthWest),
            _ => None,
        }
    }
}

/// Ordered 6-tuple of lattice points naming an ordered cluster.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Prism(pub [LatticePoint; 6]);

impl Prism {
    /// Assembles the prism from an alcove and the two k-levels.
    pub fn from_levels(alcove: &Alcove, k1: i64, k2: i64) -> Self {
        let p = |r: usize, k: i64| LatticePoint::new(alcove.v[r].0, alcove.v[r].1, k);
        Prism([p(0, k1), p(0, k2), p(1, k2), p(1, k1), p(2, k1), p(2, k2)])
    }

    pub fn alcove(&self) -> Alcove {
        let q = |n: usize| (self.0[n].i, self.0[n].j);
        Alcove { v: [q(0), q(2), q(4)] }
    }

    /// (k1, k2): the levels of positions 1 and 2.
    pub fn levels(&self) -> (i64, i64) {
        (self.0[0].k, self.0[1].k)
    }

    pub fn points(&self) -> &[LatticePoint; 6] {
        &self.0
    }
}

impl fmt::Display for Prism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Alcove reached by the tau_1..tau_3 letters of `w`.
pub fn alcove_walk(letters: &[Tau]) -> Alcove {
    letters
        .iter()
        .filter(|t| t.is_planar())
        .fold(Alcove::initial(), |a, t| a.flip(t.index()))
}

/// The prism of a word: alcove from the planar letters, k-levels from the
/// reduced tau_4/tau_5 tail (levels {n, n+1} if it starts with tau_5,
/// {-n, -n+1} if with tau_4, where n is the tail length; k1 = +-n when n is odd
/// and k2 = +-n otherwise).
pub fn prism_of(w: &TauWord) -> Prism {
    let (s1, s2) = w.factor();
    let alcove = alcove_walk(&s1);
    let n = s2.len() as i64;
    let (k1, k2) = match s2.first() {
        None => (1, 0),
        Some(t) => {
            let sign = if *t == Tau::T5 { 1 } else { -1 };
            let (lo, hi) = if sign > 0 { (n, n + 1) } else { (-n, -n + 1) };
            let pinned = sign * n;
            let other = if pinned == lo { hi } else { lo };
            if n % 2 == 1 {
                (pinned, other)
            } else {
                (other, pinned)
            }
        }
    };
    Prism::from_levels(&alcove, k1, k2)
}

/// The same prism computed letter by letter: tau_s (s <= 3) flips the alcove,
/// tau_4 reflects level k1 through k2, tau_5 reflects k2 through k1.
pub fn prism_by_folding(w: &TauWord) -> Prism {
    let mut alcove = Alcove::initial();
    let (mut k1, mut k2) = (1i64, 0i64);
    for &t in &w.0 {
        match t {
            Tau::T4 => k1 = 2 * k2 - k1,
            Tau::T5 => k2 = 2 * k1 - k2,
            _ => alcove = alcove.flip(t.index()),
        }
    }
    Prism::from_levels(&alcove, k1, k2)
}

/// Finds the lattice point whose closed-form variable equals `p`.
///
/// Candidates are screened by their value at two fixed points modulo a prime;
/// the surviving point is confirmed by full expansion.
pub struct Locator {
    window: i64,
    table: FxHashMap<(u64, u64), Vec<LatticePoint>>,
}

impl Locator {
    /// Screening table for all |i|, |j|, |k| <= window.
    pub fn new(window: i64) -> Self {
        let mut table: FxHashMap<(u64, u64), Vec<LatticePoint>> = FxHashMap::default();
        let (ea, eb) = (formula::ModEval::new(&SCREEN_A), formula::ModEval::new(&SCREEN_B));
        for pt in LatticePoint::window(window, -window, window) {
            let key = (ea.cluster_variable(pt), eb.cluster_variable(pt));
            table.entry(key).or_default().push(pt);
        }
        Self { window, table }
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn locate(&self, p: &LaurentPoly) -> Result<LatticePoint, WalkError> {
        let not_found = WalkError::NotFound { window: self.window };
        let (Some(ka), Some(kb)) = (
            formula::eval_mod(p, &SCREEN_A),
            formula::eval_mod(p, &SCREEN_B),
        ) else {
            return Err(not_found);
        };
        let Some(cands) = self.table.get(&(ka, kb)) else {
            return Err(not_found);
        };
        cands
            .iter()
            .copied()
            .find(|&pt| formula::cluster_variable(pt) == *p)
            .ok_or(not_found)
    }
}

const SCREEN_A: [u64; NVARS] = [3, 5, 7, 11, 13, 17];
const SCREEN_B: [u64; NVARS] = [
    1_000_003,
    2_718_281_829,
    3_141_592_653,
    1_618_033_988,
    1_414_213_562,
    1_732_050_807,
];

/// One-shot search over |i|, |j|, |k| <= window.
pub fn locate_variable(p: &LaurentPoly, window: i64) -> Result<LatticePoint, WalkError> {
    Locator::new(window).locate(p)
}
