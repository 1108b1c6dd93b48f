//! Weighted perfect matchings of cut subgraphs, c-values, and graphical
//! condensation.
//!
//! Matchings are enumerated exactly: vertices are visited in a left-to-right
//! sweep, the first unmatched vertex is branched on, and vertices left with a
//! single free neighbour are matched immediately. Each branch carries its
//! running weight as a packed exponent key; leaves are tallied per key.

use std::fmt;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use crate::contour::{phi, SixTuple};
use crate::error::{DimerError, TilingError};
use crate::formula;
use crate::laurent::{ExponentVector, LaurentPoly, NVARS};
use crate::tiling::{self, edge_weight, Color, CutSubgraph, Node};
use crate::walk::LatticePoint;

/// Default cap on the number of enumerated matchings.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

// Exponent keys: 20 bits per variable, biased, x1 in the high bits.
const FIELD: u32 = 20;
const KEY_BIAS: i64 = 1 << (FIELD - 1);

fn key_of(e: &ExponentVector) -> u128 {
    e.iter().fold(0u128, |k, &x| (k << FIELD) | (x as i64 + KEY_BIAS) as u128)
}

fn exps_of(mut key: u128) -> ExponentVector {
    let mut e = [0; NVARS];
    for slot in e.iter_mut().rev() {
        *slot = ((key & ((1 << FIELD) - 1)) as i64 - KEY_BIAS) as i32;
        key >>= FIELD;
    }
    e
}

/// Key offset adding `e` to an exponent vector (wrapping two's complement).
fn delta_of(e: &ExponentVector) -> u128 {
    e.iter().enumerate().fold(0u128, |k, (v, &x)| {
        let shift = FIELD * (NVARS - 1 - v) as u32;
        k.wrapping_add((x as i128 as u128).wrapping_shl(shift))
    })
}

/// A partition function together with its number of matchings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatchingPolynomial {
    pub value: LaurentPoly,
    pub matchings: u128,
}

impl MatchingPolynomial {
    pub fn is_zero(&self) -> bool {
        self.matchings == 0
    }
}

impl fmt::Display for MatchingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} matchings)", self.value, self.matchings)
    }
}

/// Adjacency in sweep order with packed edge weights.
struct Compact {
    adj: Vec<Vec<(u32, u128)>>,
}

// Sweep keys (primary, tie-break) as functionals of the lattice position.
const SWEEPS: [fn(i64, i64) -> (i64, i64); 6] = [
    |x, y| (2 * x + y, y),
    |x, y| (x + 2 * y, x),
    |x, y| (y - x, x + y),
    |x, y| (x, y),
    |x, y| (y, x),
    |x, y| (x + y, x),
];

impl Compact {
    /// Orders vertices along whichever sweep keeps the frontier narrowest.
    fn new(g: &CutSubgraph) -> Self {
        SWEEPS
            .iter()
            .map(|key| Self::with_sweep(g, *key))
            .min_by_key(|c| (c.frontier_width(), c.bandwidth()))
            .expect("at least one sweep")
    }

    fn with_sweep(g: &CutSubgraph, key: fn(i64, i64) -> (i64, i64)) -> Self {
        let mut nodes: Vec<Node> = g.nodes().iter().copied().collect();
        nodes.sort_by_key(|n| {
            let (x, y) = n.position6();
            key(x, y)
        });
        let index: FxHashMap<Node, u32> = nodes.iter().enumerate().map(|(i, n)| (*n, i as u32)).collect();
        let adj = nodes
            .iter()
            .map(|n| {
                g.neighbors_in(n)
                    .into_iter()
                    .map(|m| {
                        let (b, w) = if n.color() == Color::Black { (*n, m) } else { (m, *n) };
                        (index[&m], delta_of(&edge_weight(b, w)))
                    })
                    .collect()
            })
            .collect();
        Self { adj }
    }

    fn bandwidth(&self) -> usize {
        (0..self.adj.len())
            .flat_map(|v| self.adj[v].iter().map(move |&(u, _)| (u as usize).abs_diff(v)))
            .max()
            .unwrap_or(0)
    }

    /// Largest number of later vertices adjacent to earlier ones at any step.
    fn frontier_width(&self) -> usize {
        let n = self.adj.len();
        let mut diff = vec![0i64; n + 1];
        for w in 0..n {
            let first = self.adj[w].iter().map(|&(u, _)| u as usize).min().unwrap_or(w);
            if first < w {
                diff[first + 1] += 1;
                diff[w + 1] -= 1;
            }
        }
        let mut open = 0i64;
        let mut best = 0i64;
        for d in diff {
            open += d;
            best = best.max(open);
        }
        best as usize
    }
}

struct Search<'a> {
    adj: &'a [Vec<(u32, u128)>],
    alive: Vec<bool>,
    deg: Vec<u32>,
    trail: Vec<u32>,
    pending: Vec<u32>,
    leaves: FxHashMap<u128, u64>,
    count: u64,
    budget: u64,
}

struct OverBudget;

impl<'a> Search<'a> {
    fn new(adj: &'a [Vec<(u32, u128)>], budget: u64) -> Self {
        Self {
            adj,
            alive: vec![true; adj.len()],
            deg: adj.iter().map(|a| a.len() as u32).collect(),
            trail: Vec::with_capacity(adj.len()),
            pending: Vec::new(),
            leaves: FxHashMap::default(),
            count: 0,
            budget,
        }
    }

    fn remove(&mut self, x: u32) {
        self.alive[x as usize] = false;
        self.trail.push(x);
        for &(y, _) in &self.adj[x as usize] {
            self.deg[y as usize] -= 1;
            if self.alive[y as usize] {
                self.pending.push(y);
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            self.alive[x as usize] = true;
            for &(y, _) in &self.adj[x as usize] {
                self.deg[y as usize] += 1;
            }
        }
    }

    /// Matches every vertex with a single free neighbour; false on a dead end.
    fn propagate(&mut self, key: &mut u128) -> bool {
        while let Some(y) = self.pending.pop() {
            if !self.alive[y as usize] {
                continue;
            }
            match self.deg[y as usize] {
                0 => return false,
                1 => {
                    let &(z, d) = self.adj[y as usize]
                        .iter()
                        .find(|(z, _)| self.alive[*z as usize])
                        .expect("degree counts live neighbours");
                    *key = key.wrapping_add(d);
                    self.remove(y);
                    self.remove(z);
                }
                _ => {}
            }
        }
        true
    }

    fn run(&mut self, first: usize, key: u128) -> Result<(), OverBudget> {
        let n = self.alive.len();
        let mut v = first;
        while v < n && !self.alive[v] {
            v += 1;
        }
        if v == n {
            self.count += 1;
            if self.count > self.budget {
                return Err(OverBudget);
            }
            *self.leaves.entry(key).or_insert(0) += 1;
            return Ok(());
        }
        let mark = self.trail.len();
        for e in 0..self.adj[v].len() {
            let (w, d) = self.adj[v][e];
            if !self.alive[w as usize] {
                continue;
            }
            self.pending.clear();
            let mut k = key.wrapping_add(d);
            self.remove(v as u32);
            self.remove(w);
            if self.propagate(&mut k) {
                let r = self.run(v + 1, k);
                if r.is_err() {
                    self.undo(mark);
                    return r;
                }
            }
            self.undo(mark);
        }
        Ok(())
    }
}

/// Sum over perfect matchings of the product of edge weights 1/(x_i x_j).
///
/// Returns the zero polynomial if there is no perfect matching, and 1 for the
/// empty graph. Fails with `BudgetExceeded` once more than `budget` matchings
/// have been seen.
pub fn partition_function(g: &CutSubgraph, budget: u64) -> Result<MatchingPolynomial, DimerError> {
    let zero = MatchingPolynomial { value: LaurentPoly::zero(), matchings: 0 };
    let (w, b) = g.color_counts();
    if w != b {
        return Ok(zero);
    }
    let compact = Compact::new(g);
    let mut s = Search::new(&compact.adj, budget);
    let mut key = key_of(&[0; NVARS]);
    s.pending = (0..compact.adj.len() as u32).collect();
    if !s.propagate(&mut key) {
        return Ok(zero);
    }
    if s.run(0, key).is_err() {
        return Err(DimerError::BudgetExceeded { budget, partial: s.count - 1 });
    }
    let value = LaurentPoly::from_terms(s.leaves.iter().map(|(&k, &c)| (exps_of(k), BigInt::from(c))));
    Ok(MatchingPolynomial { value, matchings: s.count as u128 })
}

/// Partition function by a transfer-matrix sweep over the same vertex order
/// the enumerator uses.
///
/// The state after placing vertices `0..v` is the set of later vertices that
/// are already matched, stored as a bit mask relative to `v`; each state
/// carries its partial weight polynomial. The cost grows with the number of
/// states and monomials, not with the number of matchings. Fails with
/// `BudgetExceeded` once more than `max_terms` monomials are held at once, and
/// with `PreconditionViolated` if the sweep order has bandwidth over 127.
pub fn transfer_partition_function(g: &CutSubgraph, max_terms: u64) -> Result<MatchingPolynomial, DimerError> {
    let zero = MatchingPolynomial { value: LaurentPoly::zero(), matchings: 0 };
    let (w, b) = g.color_counts();
    if w != b {
        return Ok(zero);
    }
    let compact = Compact::new(g);
    let adj = &compact.adj;
    let n = adj.len();
    let band = compact.bandwidth();
    if band >= 128 {
        return Err(DimerError::PreconditionViolated(format!("sweep bandwidth {band} is too wide")));
    }
    type Poly = Vec<(u128, u128)>;
    let mut states: FxHashMap<u128, Poly> = FxHashMap::default();
    states.insert(0, vec![(key_of(&[0; NVARS]), 1)]);
    for v in 0..n {
        let mut next: FxHashMap<u128, Poly> = FxHashMap::default();
        for (mask, poly) in states {
            if mask & 1 == 1 {
                next.entry(mask >> 1).or_default().extend(poly);
                continue;
            }
            for &(u, d) in &adj[v] {
                let off = u as usize;
                if off < v || mask & (1 << (off - v)) != 0 {
                    continue;
                }
                let m = (mask | (1 << (off - v))) >> 1;
                next.entry(m).or_default().extend(poly.iter().map(|&(k, c)| (k.wrapping_add(d), c)));
            }
        }
        let mut held = 0u64;
        for poly in next.values_mut() {
            poly.sort_unstable_by_key(|t| t.0);
            let mut out: Poly = Vec::with_capacity(poly.len());
            for &(k, c) in poly.iter() {
                match out.last_mut() {
                    Some(last) if last.0 == k => last.1 += c,
                    _ => out.push((k, c)),
                }
            }
            held += out.len() as u64;
            *poly = out;
        }
        if held > max_terms {
            return Err(DimerError::BudgetExceeded { budget: max_terms, partial: held });
        }
        states = next;
    }
    let Some(poly) = states.remove(&0) else { return Ok(zero) };
    let matchings: u128 = poly.iter().map(|t| t.1).sum();
    let value = LaurentPoly::from_terms(poly.into_iter().map(|(k, c)| (exps_of(k), BigInt::from(c))));
    Ok(MatchingPolynomial { value, matchings })
}

/// Which exact engine computes a partition function.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Method {
    /// Branching enumeration capped at this many matchings.
    Enumerate(u64),
    /// Transfer-matrix sweep capped at this many live monomials.
    Transfer(u64),
}

impl Default for Method {
    fn default() -> Self {
        Method::Enumerate(DEFAULT_BUDGET)
    }
}

impl Method {
    pub fn partition_function(self, g: &CutSubgraph) -> Result<MatchingPolynomial, DimerError> {
        match self {
            Method::Enumerate(budget) => partition_function(g, budget),
            Method::Transfer(max_terms) => transfer_partition_function(g, max_terms),
        }
    }
}

/// Weight of the graph before forced edges were taken out: the partition
/// function times the product of forced edge weights.
pub fn full_weight(g: &CutSubgraph, method: Method) -> Result<MatchingPolynomial, DimerError> {
    let mut pf = method.partition_function(g)?;
    pf.value = pf.value.mul(&LaurentPoly::monomial(g.forced_weight(), 1.into()));
    Ok(pf)
}

/// c(G) = m(G) w(G), by enumeration.
pub fn c_value(g: &CutSubgraph, budget: u64) -> Result<LaurentPoly, DimerError> {
    c_value_with(g, Method::Enumerate(budget))
}

pub fn c_value_with(g: &CutSubgraph, method: Method) -> Result<LaurentPoly, DimerError> {
    Ok(g.covering_monomial().mul(&method.partition_function(g)?.value))
}

/// Number of perfect matchings.
pub fn match_count(g: &CutSubgraph, budget: u64) -> Result<u128, DimerError> {
    Ok(partition_function(g, budget)?.matchings)
}

/// Core subgraph of phi(p), or `SkippedSelfIntersecting`.
pub fn core_for_point(p: LatticePoint) -> Result<CutSubgraph, DimerError> {
    let t = phi(p);
    if t.is_self_intersecting() {
        return Err(DimerError::SkippedSelfIntersecting(t));
    }
    Ok(tiling::core_of(&t)?)
}

/// c-value of the core subgraph of phi(p).
pub fn c_value_at(p: LatticePoint, method: Method) -> Result<LaurentPoly, DimerError> {
    c_value_with(&core_for_point(p)?, method)
}

/// The four versions of graphical condensation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum KuoVariant {
    /// p1, p3 in V1, p2, p4 in V2, |V1| = |V2|.
    Balanced,
    /// p1, p2, p3 in V1, p4 in V2, |V1| = |V2| + 1.
    Unbalanced,
    /// p1, p2 in V1, p3, p4 in V2, |V1| = |V2|.
    NonAlternating,
    /// all four in V1, |V1| = |V2| + 2.
    Monochromatic,
}

impl KuoVariant {
    pub const ALL: [KuoVariant; 4] = [
        KuoVariant::Balanced,
        KuoVariant::Unbalanced,
        KuoVariant::NonAlternating,
        KuoVariant::Monochromatic,
    ];

    /// The three products of the identity as pairs of removed point sets
    /// (indices 0..4 for p1..p4); the first pair is the left-hand side.
    pub fn terms(self) -> [(&'static [usize], &'static [usize]); 3] {
        match self {
            KuoVariant::Balanced => [(&[], &[0, 1, 2, 3]), (&[0, 1], &[2, 3]), (&[0, 3], &[1, 2])],
            KuoVariant::Unbalanced => [(&[1], &[0, 2, 3]), (&[0], &[1, 2, 3]), (&[2], &[0, 1, 3])],
            KuoVariant::NonAlternating => [(&[0, 3], &[1, 2]), (&[], &[0, 1, 2, 3]), (&[0, 2], &[1, 3])],
            KuoVariant::Monochromatic => [(&[0, 2], &[1, 3]), (&[0, 1], &[2, 3]), (&[1, 2], &[3, 0])],
        }
    }

    /// Required colours of p1..p4 relative to V1 (true = V1) and |V1| - |V2|.
    fn pattern(self) -> ([bool; 4], usize) {
        match self {
            KuoVariant::Balanced => ([true, false, true, false], 0),
            KuoVariant::Unbalanced => ([true, true, true, false], 1),
            KuoVariant::NonAlternating => ([true, true, false, false], 0),
            KuoVariant::Monochromatic => ([true, true, true, true], 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KuoVariant::Balanced => "balanced",
            KuoVariant::Unbalanced => "unbalanced",
            KuoVariant::NonAlternating => "non-alternating",
            KuoVariant::Monochromatic => "monochromatic",
        }
    }
}

impl fmt::Display for KuoVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_colors(h: &CutSubgraph, points: &[Node; 4], variant: KuoVariant) -> Result<(), DimerError> {
    let (pattern, surplus) = variant.pattern();
    let v1 = points[0].color();
    for (n, p) in points.iter().enumerate() {
        if !h.contains(p) {
            return Err(DimerError::PreconditionViolated(format!("p{} is not a vertex of the graph", n + 1)));
        }
        if (p.color() == v1) != pattern[n] {
            return Err(DimerError::PreconditionViolated(format!(
                "p{} has the wrong colour for {variant} condensation",
                n + 1
            )));
        }
    }
    let (w, b) = h.color_counts();
    let (n1, n2) = if v1 == Color::White { (w, b) } else { (b, w) };
    if n1 != n2 + surplus {
        return Err(DimerError::PreconditionViolated(format!(
            "{variant} condensation needs |V1| = |V2| + {surplus}, have {n1} and {n2}"
        )));
    }
    Ok(())
}

fn remove_subset(h: &CutSubgraph, points: &[Node; 4], idx: &[usize]) -> Result<CutSubgraph, TilingError> {
    let vs: Vec<Node> = idx.iter().map(|&i| points[i]).collect();
    h.remove_points(&vs)
}

/// w(H - S) for a subset S of the four points.
fn weight_without(h: &CutSubgraph, points: &[Node; 4], idx: &[usize], method: Method) -> Result<LaurentPoly, DimerError> {
    match remove_subset(h, points, idx) {
        Ok(g) => Ok(full_weight(&g, method)?.value),
        Err(TilingError::NoPerfectMatching) => Ok(LaurentPoly::zero()),
        Err(e) => Err(e.into()),
    }
}

/// Checks the condensation identity of `variant` for p1..p4 of `h` as exact
/// Laurent polynomials. Colours and the colour surplus are checked first; the
/// four points are taken to lie in this cyclic order on a common face.
pub fn kuo_check(h: &CutSubgraph, points: &[Node; 4], variant: KuoVariant, method: Method) -> Result<bool, DimerError> {
    check_colors(h, points, variant)?;
    let mut products = Vec::with_capacity(3);
    for (s, t) in variant.terms() {
        let a = weight_without(h, points, s, method)?;
        let b = weight_without(h, points, t, method)?;
        products.push(a.mul(&b));
    }
    Ok(products[0] == products[1].add(&products[2]))
}

/// The three kinds of exchange relations, by lattice move.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RecurrenceKind {
    R1,
    R2,
    R4,
}

impl RecurrenceKind {
    pub fn moves(self) -> Vec<(i64, i64, i64)> {
        let planar6 = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
        match self {
            RecurrenceKind::R4 => {
                let base = [(-1, 2), (1, -2), (2, -1), (-2, 1), (-1, -1), (1, 1)];
                base.iter().flat_map(|&(a, b)| [(a, b, 1), (a, b, -1)]).collect()
            }
            RecurrenceKind::R1 => planar6.iter().flat_map(|&(a, b)| [(a, b, 2), (a, b, -2)]).collect(),
            RecurrenceKind::R2 => planar6.iter().map(|&(a, b)| (2 * a, 2 * b, 0)).collect(),
        }
    }
}

impl fmt::Display for RecurrenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A condensation set-up for the move from p to q: the outer contour O, four
/// special sides with their signs in O, the chosen points on H = cut(O), and
/// the contours obtained by removing each subset of points.
#[derive(Clone, Debug)]
pub struct KuoInstance {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub outer: SixTuple,
    /// Special sides in cyclic order (0 = a), matching p1..p4.
    pub sides: [usize; 4],
    pub points: [Node; 4],
    pub variant: KuoVariant,
    pub graph: CutSubgraph,
    signs: [i64; 4],
}

impl KuoInstance {
    /// Contour obtained from O by removing the given points.
    pub fn contour_without(&self, idx: &[usize]) -> SixTuple {
        idx.iter().fold(self.outer, |c, &n| c.add(&tiling::special_shift(self.sides[n], self.signs[n] > 0)))
    }

    /// Face labels t_X of the four points.
    pub fn labels(&self) -> [u8; 4] {
        std::array::from_fn(|n| tiling::special_label(self.sides[n], self.signs[n] > 0))
    }
}

const SHIFTS: [[i64; 6]; 6] = [
    [-1, 1, 0, 0, 0, 1],
    [1, -1, 1, 0, 0, 0],
    [0, 1, -1, 1, 0, 0],
    [0, 0, 1, -1, 1, 0],
    [0, 0, 0, 1, -1, 1],
    [1, 0, 0, 0, 1, -1],
];

/// Writes phi(q) - phi(p) as a sum of two shift vectors minus two others.
fn decompositions(d: &SixTuple) -> Vec<[i64; 6]> {
    let mut out = Vec::new();
    for code in 0..729u32 {
        let mut c = [0i64; 6];
        let mut x = code;
        for slot in c.iter_mut() {
            *slot = (x % 3) as i64 - 1;
            x /= 3;
        }
        if c.iter().filter(|&&v| v == 1).count() != 2 || c.iter().filter(|&&v| v == -1).count() != 2 {
            continue;
        }
        let sum: [i64; 6] = std::array::from_fn(|s| (0..6).map(|x| c[x] * SHIFTS[x][s]).sum());
        if sum == d.0 {
            out.push(c);
        }
    }
    out
}

/// Labels four cyclically ordered points to fit a variant, if possible.
/// Returns the rotation/reflection as an index map into the cyclic order.
fn fit_variant(colors: &[Color; 4], surplus_white: i64) -> Option<(KuoVariant, [usize; 4])> {
    let orders: Vec<[usize; 4]> = (0..4)
        .flat_map(|r| [[r, (r + 1) % 4, (r + 2) % 4, (r + 3) % 4], [r, (r + 3) % 4, (r + 2) % 4, (r + 1) % 4]])
        .collect();
    for variant in KuoVariant::ALL {
        let (pattern, surplus) = variant.pattern();
        for ord in &orders {
            let v1 = colors[ord[0]];
            let ok = (0..4).all(|n| (colors[ord[n]] == v1) == pattern[n]);
            let sign = if v1 == Color::White { 1 } else { -1 };
            if ok && surplus_white * sign == surplus as i64 {
                return Some((variant, *ord));
            }
        }
    }
    None
}

/// H - S has the same core as the cut of the contour O - S.
fn removal_is_cut(inst: &KuoInstance, idx: &[usize]) -> bool {
    let contour = inst.contour_without(idx);
    if contour.is_self_intersecting() {
        return false;
    }
    match (remove_subset(&inst.graph, &inst.points, idx), tiling::core_of(&contour)) {
        (Ok(a), Ok(b)) => a.same_shape(&b),
        (Err(TilingError::NoPerfectMatching), Err(TilingError::NoPerfectMatching)) => true,
        _ => false,
    }
}

/// Every labeled set-up for the move from p to q: each decomposition of the
/// move into shift vectors and each split of the four points, whose outer
/// contour has the right signs and whose points fit a variant.
fn candidates(p: LatticePoint, q: LatticePoint) -> Vec<KuoInstance> {
    let mut out = Vec::new();
    let c = phi(p);
    let d = phi(q).add(&c.negate());
    for coeffs in decompositions(&d) {
        let support: Vec<usize> = (0..6).filter(|&x| coeffs[x] != 0).collect();
        for mask in 0..16u32 {
            let in_s1 = |n: usize| mask & (1 << n) != 0;
            let signs: [i64; 4] = std::array::from_fn(|n| {
                let x = support[n];
                if in_s1(n) {
                    -coeffs[x]
                } else {
                    coeffs[x]
                }
            });
            let outer = (0..4)
                .filter(|&n| in_s1(n))
                .fold(c, |o, n| o.add(&tiling::special_shift(support[n], coeffs[support[n]] > 0)));
            if (0..4).any(|n| outer.side(support[n]).signum() != signs[n]) || outer.is_self_intersecting() {
                continue;
            }
            let Ok(h) = tiling::cut_contour(&outer) else { continue };
            let pts: Result<Vec<Node>, _> = (0..4).map(|n| h.special_point(support[n], 1)).collect();
            let Ok(pts) = pts else { continue };
            let colors: [Color; 4] = std::array::from_fn(|n| pts[n].color());
            let (w, b) = h.color_counts();
            let Some((variant, ord)) = fit_variant(&colors, w as i64 - b as i64) else { continue };
            let (lhs, _) = variant.terms()[0];
            let lhs_cyclic: Vec<usize> = lhs.iter().map(|&i| ord[i]).collect();
            let s1: Vec<usize> = (0..4).filter(|&n| in_s1(n)).collect();
            let mut s2: Vec<usize> = (0..4).filter(|&n| !in_s1(n)).collect();
            let mut lhs_sorted = lhs_cyclic.clone();
            lhs_sorted.sort();
            s2.sort();
            if lhs_sorted != s1 && lhs_sorted != s2 {
                continue;
            }
            let inst = KuoInstance {
                from: p,
                to: q,
                outer,
                sides: ord.map(|n| support[n]),
                points: ord.map(|n| pts[n]),
                variant,
                graph: h,
                signs: ord.map(|n| signs[n]),
            };
            out.push(inst);
        }
    }
    out
}

/// Builds the condensation set-up whose left-hand side pairs phi(p) with
/// phi(q). A candidate is kept only if removing each subset of points used
/// by the identity leaves the graph cut out by the correspondingly shifted
/// contour.
pub fn build_kuo_instance(p: LatticePoint, q: LatticePoint) -> Result<KuoInstance, DimerError> {
    candidates(p, q)
        .into_iter()
        .find(|inst| inst.variant.terms().iter().all(|(s, t)| removal_is_cut(inst, s) && removal_is_cut(inst, t)))
        .ok_or_else(|| DimerError::PreconditionViolated(format!("no condensation set-up for {p} -> {q}")))
}

/// Outcome of verifying one condensation instance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KuoReport {
    pub variant: KuoVariant,
    pub outer: SixTuple,
    /// Condensation identity on weights holds exactly.
    pub weight_identity: bool,
    /// Each H - S has c-value m(H)/wt(S) w(H - S) equal to c of the core cut by its contour.
    pub removal_matches_contours: bool,
    /// Each contour O - S is phi of a lattice point whose closed form equals that c-value.
    pub matches_formula: bool,
    /// The six lattice points, the left-hand pair first.
    pub points: [LatticePoint; 6],
}

impl KuoReport {
    pub fn passed(&self) -> bool {
        self.weight_identity && self.removal_matches_contours && self.matches_formula
    }
}

/// c-value of H - S: its weight times m(H) divided by the labels of S.
fn removal_c_value(inst: &KuoInstance, idx: &[usize], method: Method) -> Result<LaurentPoly, DimerError> {
    let labels = inst.labels();
    let mut m = inst.graph.covering_exponents();
    for &n in idx {
        m[labels[n] as usize - 1] -= 1;
    }
    let w = weight_without(&inst.graph, &inst.points, idx, method)?;
    Ok(LaurentPoly::monomial(m, 1.into()).mul(&w))
}

/// Verifies an instance: the weight identity on H, the contour bookkeeping
/// of every removal, and agreement with the closed form.
pub fn verify_kuo_instance(inst: &KuoInstance, method: Method) -> Result<KuoReport, DimerError> {
    let h = &inst.graph;
    let weight_identity = kuo_check(h, &inst.points, inst.variant, method)?;
    let mut removal_ok = true;
    let mut formula_ok = true;
    let mut lattice = Vec::with_capacity(6);
    for (s, t) in inst.variant.terms() {
        for idx in [s, t] {
            let c_removed = removal_c_value(inst, idx, method)?;
            let contour = inst.contour_without(idx);
            let c_cut = match tiling::core_of(&contour) {
                Ok(g) => c_value_with(&g, method)?,
                Err(_) => {
                    removal_ok = false;
                    formula_ok = false;
                    continue;
                }
            };
            removal_ok &= c_removed == c_cut;
            match contour.phi_inverse() {
                Some(pt) => {
                    formula_ok &= formula::cluster_variable(pt) == c_cut;
                    lattice.push(pt);
                }
                None => formula_ok = false,
            }
        }
    }
    let points = if lattice.len() == 6 {
        std::array::from_fn(|n| lattice[n])
    } else {
        [inst.from; 6]
    };
    Ok(KuoReport {
        variant: inst.variant,
        outer: inst.outer,
        weight_identity,
        removal_matches_contours: removal_ok,
        matches_formula: formula_ok,
        points,
    })
}

/// Checks the three-term exchange relation for the move from `p` by `dir`
/// using c-values computed from matchings only:
/// c(p) c(q) = c(r3) c(r4) + c(r5) c(r6), where the six contours come from a
/// set-up of the move. Only the contours are used, so the set-up need not
/// pass the removal check of `build_kuo_instance`.
pub fn check_recurrence(p: LatticePoint, dir: (i64, i64, i64), method: Method) -> Result<bool, DimerError> {
    let q = LatticePoint::new(p.i + dir.0, p.j + dir.1, p.k + dir.2);
    let all = candidates(p, q);
    let usable = |inst: &KuoInstance| {
        inst.variant.terms().iter().all(|(s, t)| {
            !inst.contour_without(s).is_self_intersecting() && !inst.contour_without(t).is_self_intersecting()
        })
    };
    let Some(inst) = all.iter().find(|inst| usable(inst)) else {
        return Err(DimerError::PreconditionViolated(format!("no set-up for {p} -> {q}")));
    };
    let mut products = Vec::with_capacity(3);
    for (s, t) in inst.variant.terms() {
        let mut prod = LaurentPoly::one();
        for idx in [s, t] {
            prod = prod.mul(&c_value_with(&tiling::core_of(&inst.contour_without(idx))?, method)?);
        }
        products.push(prod);
    }
    Ok(products[0] == products[1].add(&products[2]))
}

/// Number of matchings the closed form predicts for phi(p).
pub fn predicted_count(p: LatticePoint) -> BigInt {
    formula::exponent_profile(p).value_at_ones()
}

/// Result of comparing the closed form with the dimer side at one point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointOutcome {
    Checked {
        formula: LaurentPoly,
        dimer: LaurentPoly,
        equal: bool,
        matchings: u128,
        millis: u128,
    },
    SkippedSelfIntersecting(SixTuple),
    SkippedOverBudget { predicted: BigInt },
    Failed(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointCheck {
    pub point: LatticePoint,
    pub outcome: PointOutcome,
}

impl PointCheck {
    pub fn is_failure(&self) -> bool {
        matches!(self.outcome, PointOutcome::Failed(_) | PointOutcome::Checked { equal: false, .. })
    }
}

/// Compares c(core(phi(p))) with the closed form at every point, in parallel.
/// Points whose predicted matching count exceeds `max_matchings` are skipped.
/// Results come back in the order of `points`.
pub fn grand_equivalence(points: &[LatticePoint], max_matchings: u128, method: Method) -> Vec<PointCheck> {
    use rayon::prelude::*;
    points
        .par_iter()
        .map(|&point| {
            let outcome = check_point(point, max_matchings, method);
            PointCheck { point, outcome }
        })
        .collect()
}

fn check_point(p: LatticePoint, max_matchings: u128, method: Method) -> PointOutcome {
    let t = phi(p);
    if t.is_self_intersecting() {
        return PointOutcome::SkippedSelfIntersecting(t);
    }
    let predicted = predicted_count(p);
    if predicted > BigInt::from(max_matchings) {
        return PointOutcome::SkippedOverBudget { predicted };
    }
    let start = std::time::Instant::now();
    let g = match tiling::core_of(&t) {
        Ok(g) => g,
        Err(e) => return PointOutcome::Failed(e.to_string()),
    };
    match method.partition_function(&g) {
        Ok(pf) => {
            let dimer = g.covering_monomial().mul(&pf.value);
            let formula = formula::cluster_variable(p);
            PointOutcome::Checked {
                equal: dimer == formula,
                formula,
                dimer,
                matchings: pf.matchings,
                millis: start.elapsed().as_millis(),
            }
        }
        Err(e) => PointOutcome::Failed(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(i: i64, j: i64, k: i64) -> LatticePoint {
        LatticePoint::new(i, j, k)
    }

    #[test]
    fn key_roundtrip() {
        let e = [3, -2, 0, 7, -11, 1];
        assert_eq!(exps_of(key_of(&e)), e);
        let d = [-1, 0, 0, -1, 0, 0];
        let k = key_of(&e).wrapping_add(delta_of(&d));
        assert_eq!(exps_of(k), [2, -2, 0, 6, -11, 1]);
    }

    #[test]
    fn first_base_case() {
        let g = core_for_point(lp(0, -1, 1)).unwrap();
        let pf = partition_function(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(pf.value, "x4^-1*x5^-1".parse().unwrap());
        assert_eq!(c_value(&g, DEFAULT_BUDGET).unwrap(), LaurentPoly::var(1));
    }

    #[test]
    fn budget_is_enforced() {
        let g = core_for_point(lp(1, 2, 0)).unwrap();
        assert_eq!(
            partition_function(&g, 100),
            Err(DimerError::BudgetExceeded { budget: 100, partial: 100 })
        );
        assert_eq!(match_count(&g, DEFAULT_BUDGET).unwrap(), 1024);
    }

    #[test]
    fn small_points_match_the_closed_form() {
        for p in [lp(0, 1, 1), lp(1, 0, 0), lp(-1, 1, 2), lp(1, 1, -1)] {
            assert_eq!(c_value_at(p, Method::default()).unwrap(), formula::cluster_variable(p), "{p}");
        }
    }

    #[test]
    fn self_intersecting_points_are_skipped() {
        assert!(matches!(core_for_point(lp(0, 0, 3)), Err(DimerError::SkippedSelfIntersecting(_))));
    }

    #[test]
    fn recurrence_r4_at_origin() {
        assert!(check_recurrence(lp(0, 0, 0), (-1, 2, 1), Method::default()).unwrap());
    }

    #[test]
    fn kuo_precondition_reports_colour() {
        let inst = build_kuo_instance(lp(-3, -2, 1), lp(-2, -1, 0)).unwrap();
        let mut pts = inst.points;
        pts.swap(0, 1);
        let wrong = if inst.variant == KuoVariant::Balanced { KuoVariant::Balanced } else { KuoVariant::Monochromatic };
        assert!(matches!(
            kuo_check(&inst.graph, &pts, wrong, Method::default()),
            Err(DimerError::PreconditionViolated(_))
        ));
    }
}
