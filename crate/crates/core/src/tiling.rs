//! The dP3 brane tiling and the subgraphs cut out of it by contours.
//!
//! The tiling is a subdivided triangular lattice. White hexavalent vertices sit
//! on lattice points (u, v); every lattice edge carries a black vertex at its
//! midpoint; every unit triangle carries a trivalent white vertex at its
//! center. Each triangle splits into three quadrilateral faces, one at each
//! corner. Up triangles {(u,v), (u+1,v), (u,v+1)} carry labels 1, 5, 4 at
//! those corners; down triangles {(u,v+1), (u+1,v+1), (u+1,v)} carry 6, 2, 3.
//! An edge bordering faces i and j has weight 1/(x_i x_j).

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::contour::{SixTuple, DIRECTIONS, SIDE_NAMES};
use crate::error::TilingError;
use crate::laurent::{ExponentVector, LaurentPoly, NVARS};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Orient {
    Up,
    Down,
}

/// A unit triangle, named by its lower-left lattice point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Triangle {
    pub u: i64,
    pub v: i64,
    pub orient: Orient,
}

impl Triangle {
    pub const fn up(u: i64, v: i64) -> Self {
        Self { u, v, orient: Orient::Up }
    }

    pub const fn down(u: i64, v: i64) -> Self {
        Self { u, v, orient: Orient::Down }
    }

    pub fn corners(&self) -> [(i64, i64); 3] {
        let (u, v) = (self.u, self.v);
        match self.orient {
            Orient::Up => [(u, v), (u + 1, v), (u, v + 1)],
            Orient::Down => [(u, v + 1), (u + 1, v + 1), (u + 1, v)],
        }
    }

    /// Face labels at the corners, in the order of [`Triangle::corners`].
    pub fn labels(&self) -> [u8; 3] {
        match self.orient {
            Orient::Up => [1, 5, 4],
            Orient::Down => [6, 2, 3],
        }
    }

    pub fn label_at(&self, p: (i64, i64)) -> Option<u8> {
        let c = self.corners();
        (0..3).find(|&n| c[n] == p).map(|n| self.labels()[n])
    }

    pub fn center(&self) -> Node {
        Node::Tri(*self)
    }

    pub fn mids(&self) -> [Node; 3] {
        let (u, v) = (self.u, self.v);
        match self.orient {
            Orient::Up => [Node::Mid(u, v, 0), Node::Mid(u, v, 1), Node::Mid(u + 1, v, 2)],
            Orient::Down => [Node::Mid(u, v + 1, 0), Node::Mid(u + 1, v, 1), Node::Mid(u + 1, v, 2)],
        }
    }

    /// Tiling vertices on the closed triangle.
    pub fn nodes(&self) -> [Node; 7] {
        let c = self.corners();
        let m = self.mids();
        [
            Node::Hex(c[0].0, c[0].1),
            Node::Hex(c[1].0, c[1].1),
            Node::Hex(c[2].0, c[2].1),
            m[0],
            m[1],
            m[2],
            self.center(),
        ]
    }

    /// Centroid in lattice coordinates scaled by 3.
    fn centroid3(&self) -> (i64, i64) {
        match self.orient {
            Orient::Up => (3 * self.u + 1, 3 * self.v + 1),
            Orient::Down => (3 * self.u + 2, 3 * self.v + 2),
        }
    }

    /// Exponents of the three faces.
    pub fn face_monomial(&self) -> ExponentVector {
        let mut e = [0; NVARS];
        for l in self.labels() {
            e[l as usize - 1] += 1;
        }
        e
    }
}

/// A tiling vertex. `Mid(u, v, t)` is the black vertex on the lattice edge from
/// (u, v) towards (u+1, v), (u, v+1) or (u-1, v+1) for t = 0, 1, 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Node {
    Hex(i64, i64),
    Mid(i64, i64, u8),
    Tri(Triangle),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Color {
    White,
    Black,
}

/// Vertex classes: hexavalent white, trivalent white of either triangle
/// orientation, tetravalent black.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DegreeClass {
    White6,
    White3Up,
    White3Down,
    Black4,
}

const MID_STEPS: [(i64, i64); 3] = [(1, 0), (0, 1), (-1, 1)];

impl Node {
    pub fn color(&self) -> Color {
        match self {
            Node::Mid(..) => Color::Black,
            _ => Color::White,
        }
    }

    pub fn degree_class(&self) -> DegreeClass {
        match self {
            Node::Hex(..) => DegreeClass::White6,
            Node::Mid(..) => DegreeClass::Black4,
            Node::Tri(t) if t.orient == Orient::Up => DegreeClass::White3Up,
            Node::Tri(_) => DegreeClass::White3Down,
        }
    }

    /// The black vertex on the lattice edge between neighbouring points p and q.
    pub fn mid_between(p: (i64, i64), q: (i64, i64)) -> Node {
        let d = (q.0 - p.0, q.1 - p.1);
        for (t, s) in MID_STEPS.iter().enumerate() {
            if d == *s {
                return Node::Mid(p.0, p.1, t as u8);
            }
            if d == (-s.0, -s.1) {
                return Node::Mid(q.0, q.1, t as u8);
            }
        }
        panic!("{p:?} and {q:?} are not lattice neighbours")
    }

    /// Endpoints of the lattice edge of a black vertex.
    pub fn mid_endpoints(&self) -> Option<[(i64, i64); 2]> {
        match *self {
            Node::Mid(u, v, t) => {
                let s = MID_STEPS[t as usize];
                Some([(u, v), (u + s.0, v + s.1)])
            }
            _ => None,
        }
    }

    /// The two triangles sharing the lattice edge of a black vertex.
    pub fn mid_triangles(&self) -> Option<[Triangle; 2]> {
        match *self {
            Node::Mid(u, v, 0) => Some([Triangle::up(u, v), Triangle::down(u, v - 1)]),
            Node::Mid(u, v, 1) => Some([Triangle::up(u, v), Triangle::down(u - 1, v)]),
            Node::Mid(u, v, 2) => Some([Triangle::up(u - 1, v), Triangle::down(u - 1, v)]),
            _ => None,
        }
    }

    /// All neighbours in the infinite tiling.
    pub fn neighbors(&self) -> Vec<Node> {
        match *self {
            Node::Hex(u, v) => {
                let mut out = Vec::with_capacity(6);
                for s in MID_STEPS {
                    out.push(Node::mid_between((u, v), (u + s.0, v + s.1)));
                    out.push(Node::mid_between((u, v), (u - s.0, v - s.1)));
                }
                out
            }
            Node::Mid(..) => {
                let [p, q] = self.mid_endpoints().unwrap();
                let [t1, t2] = self.mid_triangles().unwrap();
                vec![Node::Hex(p.0, p.1), Node::Hex(q.0, q.1), Node::Tri(t1), Node::Tri(t2)]
            }
            Node::Tri(t) => t.mids().to_vec(),
        }
    }

    /// Position in lattice coordinates scaled by 6.
    pub fn position6(&self) -> (i64, i64) {
        match *self {
            Node::Hex(u, v) => (6 * u, 6 * v),
            Node::Mid(u, v, t) => {
                let s = MID_STEPS[t as usize];
                (6 * u + 3 * s.0, 6 * v + 3 * s.1)
            }
            Node::Tri(t) => {
                let (x, y) = t.centroid3();
                (2 * x, 2 * y)
            }
        }
    }

    /// Lattice anchor used to compare graphs up to translation.
    fn anchor(&self) -> (i64, i64) {
        match *self {
            Node::Hex(u, v) | Node::Mid(u, v, _) => (u, v),
            Node::Tri(t) => (t.u, t.v),
        }
    }

    fn translate(&self, du: i64, dv: i64) -> Node {
        match *self {
            Node::Hex(u, v) => Node::Hex(u + du, v + dv),
            Node::Mid(u, v, t) => Node::Mid(u + du, v + dv, t),
            Node::Tri(t) => Node::Tri(Triangle { u: t.u + du, v: t.v + dv, orient: t.orient }),
        }
    }
}

/// Face labels on both sides of the edge between a black vertex and one of
/// its white neighbours, in increasing order.
pub fn edge_faces(black: Node, white: Node) -> (u8, u8) {
    let [t1, t2] = black.mid_triangles().expect("first argument must be black");
    let [p, q] = black.mid_endpoints().unwrap();
    let (i, j) = match white {
        Node::Hex(u, v) => (t1.label_at((u, v)).unwrap(), t2.label_at((u, v)).unwrap()),
        Node::Tri(t) => (t.label_at(p).unwrap(), t.label_at(q).unwrap()),
        Node::Mid(..) => panic!("black vertices are not adjacent"),
    };
    (i.min(j), i.max(j))
}

/// Weight 1/(x_i x_j) of an edge as an exponent vector.
pub fn edge_weight(black: Node, white: Node) -> ExponentVector {
    let (i, j) = edge_faces(black, white);
    let mut e = [0; NVARS];
    e[i as usize - 1] -= 1;
    e[j as usize - 1] -= 1;
    e
}

fn hex_norm(p: (i64, i64)) -> i64 {
    p.0.abs().max(p.1.abs()).max((p.0 + p.1).abs())
}

/// A finite window of the tiling: every triangle whose corners lie within
/// hexagonal distance `radius` of the origin.
#[derive(Clone, Debug)]
pub struct TilingGraph {
    radius: i64,
    triangles: Vec<Triangle>,
    vertices: BTreeSet<Node>,
}

/// One tiling edge: a black vertex, a white vertex and the two faces it borders.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub black: Node,
    pub white: Node,
    pub faces: (u8, u8),
}

/// One quadrilateral face: the corner of a triangle it sits in, and its label.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Face {
    pub triangle: Triangle,
    pub corner: (i64, i64),
    pub label: u8,
}

pub fn build_window(radius: i64) -> TilingGraph {
    assert!(radius >= 1, "window radius must be positive");
    let mut triangles = Vec::new();
    for u in -radius..=radius {
        for v in -radius..=radius {
            for t in [Triangle::up(u, v), Triangle::down(u, v)] {
                if t.corners().iter().all(|&c| hex_norm(c) <= radius) {
                    triangles.push(t);
                }
            }
        }
    }
    let vertices = triangles.iter().flat_map(|t| t.nodes()).collect();
    TilingGraph { radius, triangles, vertices }
}

impl TilingGraph {
    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn vertices(&self) -> &BTreeSet<Node> {
        &self.vertices
    }

    pub fn contains(&self, n: &Node) -> bool {
        self.vertices.contains(n)
    }

    /// Edges with both ends in the window.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for &b in self.vertices.iter().filter(|n| n.color() == Color::Black) {
            for w in b.neighbors() {
                if self.vertices.contains(&w) {
                    out.push(Edge { black: b, white: w, faces: edge_faces(b, w) });
                }
            }
        }
        out
    }

    pub fn faces(&self) -> Vec<Face> {
        self.triangles
            .iter()
            .flat_map(|t| {
                let c = t.corners();
                let l = t.labels();
                (0..3).map(move |n| Face { triangle: *t, corner: c[n], label: l[n] })
            })
            .collect()
    }

    /// Window radius needed to cut `t` anchored at the origin.
    pub fn radius_needed(t: &SixTuple) -> i64 {
        t.corners((0, 0)).iter().map(|&c| hex_norm(c)).max().unwrap_or(0) + 1
    }
}

/// Winding number of a closed lattice polygon around a point, all in lattice
/// coordinates scaled by 3.
fn winding(poly: &[(i64, i64)], q: (i64, i64)) -> i64 {
    let mut w = 0;
    for s in poly.windows(2) {
        let (a, b) = (s[0], s[1]);
        let cross = (b.0 - a.0) * (q.1 - a.1) - (q.0 - a.0) * (b.1 - a.1);
        if a.1 <= q.1 {
            if b.1 > q.1 && cross > 0 {
                w += 1;
            }
        } else if b.1 <= q.1 && cross < 0 {
            w -= 1;
        }
    }
    w
}

/// A subgraph cut out of the tiling by a contour: either the raw cut or its
/// core with forced edges taken out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSubgraph {
    pub contour: SixTuple,
    region: Vec<Triangle>,
    nodes: BTreeSet<Node>,
    removed: Vec<Node>,
    forced: Vec<(Node, Node)>,
    is_core: bool,
}

/// Cuts `t` out of the window `g`, anchoring the start of side a at the origin.
pub fn cut(t: &SixTuple, g: &TilingGraph) -> Result<CutSubgraph, TilingError> {
    if !t.closes_up() {
        return Err(TilingError::NotClosed(*t));
    }
    if t.is_self_intersecting() {
        return Err(TilingError::SelfIntersecting(*t));
    }
    let needed = TilingGraph::radius_needed(t);
    if needed > g.radius {
        return Err(TilingError::WindowTooSmall { contour: *t, needed, radius: g.radius });
    }
    CutSubgraph::raw(t)
}

/// Cuts `t` out of a window just large enough for it.
pub fn cut_contour(t: &SixTuple) -> Result<CutSubgraph, TilingError> {
    cut(t, &build_window(TilingGraph::radius_needed(t).max(1)))
}

/// Raw cut followed by forced-edge removal.
pub fn core_of(t: &SixTuple) -> Result<CutSubgraph, TilingError> {
    cut_contour(t)?.core()
}

impl CutSubgraph {
    fn raw(t: &SixTuple) -> Result<Self, TilingError> {
        let path = t.path((0, 0));
        let poly3: Vec<(i64, i64)> = path.points.iter().map(|&(u, v)| (3 * u, 3 * v)).collect();
        let (umin, umax) = minmax(path.points.iter().map(|p| p.0));
        let (vmin, vmax) = minmax(path.points.iter().map(|p| p.1));
        let mut region = Vec::new();
        for u in umin - 1..=umax {
            for v in vmin - 1..=vmax {
                for tri in [Triangle::up(u, v), Triangle::down(u, v)] {
                    if winding(&poly3, tri.centroid3()) != 0 {
                        region.push(tri);
                    }
                }
            }
        }
        let mut nodes: BTreeSet<Node> = region.iter().flat_map(|tri| tri.nodes()).collect();
        let mut removed = Vec::new();
        let mut drop = |n: Node, nodes: &mut BTreeSet<Node>| {
            if nodes.remove(&n) {
                removed.push(n);
            }
        };
        let corners = t.corners((0, 0));
        for s in 0..6 {
            let n = t.side(s);
            let steps: Vec<usize> = (0..path.sides.len()).filter(|&m| path.sides[m] == s).collect();
            if n > 0 {
                for m in steps {
                    drop(Node::mid_between(path.points[m], path.points[m + 1]), &mut nodes);
                }
            } else if n < 0 {
                drop(Node::Hex(corners[s].0, corners[s].1), &mut nodes);
                for m in steps {
                    let p = path.points[m + 1];
                    drop(Node::Hex(p.0, p.1), &mut nodes);
                }
            }
        }
        // runs of zero-length sides collapse to a single corner
        for start in 0..6 {
            if t.side(start) == 0 || t.side((start + 1) % 6) != 0 {
                continue;
            }
            let mut run = 0;
            while run < 6 && t.side((start + 1 + run) % 6) == 0 {
                run += 1;
            }
            let after = t.side((start + 1 + run) % 6);
            if t.side(start) < 0 || after < 0 {
                continue;
            }
            match run {
                1 => {}
                3 => {
                    let c = corners[(start + 1) % 6];
                    drop(Node::Hex(c.0, c.1), &mut nodes);
                }
                _ => return Err(TilingError::UnsupportedZeroRun { contour: *t, run }),
            }
        }
        region.sort();
        Ok(Self { contour: *t, region, nodes, removed, forced: Vec::new(), is_core: false })
    }

    pub fn is_core(&self) -> bool {
        self.is_core
    }

    pub fn nodes(&self) -> &BTreeSet<Node> {
        &self.nodes
    }

    pub fn contains(&self, n: &Node) -> bool {
        self.nodes.contains(n)
    }

    pub fn region(&self) -> &[Triangle] {
        &self.region
    }

    /// Boundary vertices dropped by the cut.
    pub fn removed(&self) -> &[Node] {
        &self.removed
    }

    /// Edges matched by force while reducing to the core, as (black, white).
    pub fn forced_edges(&self) -> &[(Node, Node)] {
        &self.forced
    }

    pub fn num_vertices(&self) -> usize {
        self.nodes.len()
    }

    pub fn color_counts(&self) -> (usize, usize) {
        let white = self.nodes.iter().filter(|n| n.color() == Color::White).count();
        (white, self.nodes.len() - white)
    }

    pub fn is_balanced(&self) -> bool {
        let (w, b) = self.color_counts();
        w == b
    }

    pub fn neighbors_in(&self, n: &Node) -> Vec<Node> {
        n.neighbors().into_iter().filter(|m| self.nodes.contains(m)).collect()
    }

    pub fn degree(&self, n: &Node) -> usize {
        n.neighbors().iter().filter(|m| self.nodes.contains(m)).count()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for &b in self.nodes.iter().filter(|n| n.color() == Color::Black) {
            for w in self.neighbors_in(&b) {
                out.push(Edge { black: b, white: w, faces: edge_faces(b, w) });
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// Faces enclosed by the contour, counted by label.
    pub fn face_counts(&self) -> [u32; NVARS] {
        let mut out = [0; NVARS];
        for tri in &self.region {
            for l in tri.labels() {
                out[l as usize - 1] += 1;
            }
        }
        out
    }

    /// Exponent vector of the covering monomial: enclosed faces, divided by
    /// x_i x_j for every forced edge.
    pub fn covering_exponents(&self) -> ExponentVector {
        let mut e = [0i32; NVARS];
        for tri in &self.region {
            for (v, x) in tri.face_monomial().iter().enumerate() {
                e[v] += x;
            }
        }
        for &(b, w) in &self.forced {
            let (i, j) = edge_faces(b, w);
            e[i as usize - 1] -= 1;
            e[j as usize - 1] -= 1;
        }
        e
    }

    pub fn covering_monomial(&self) -> LaurentPoly {
        LaurentPoly::monomial(self.covering_exponents(), 1.into())
    }

    /// Product of the weights of the forced edges.
    pub fn forced_weight(&self) -> ExponentVector {
        let mut e = [0; NVARS];
        for &(b, w) in &self.forced {
            for (v, x) in edge_weight(b, w).iter().enumerate() {
                e[v] += x;
            }
        }
        e
    }

    /// Matches degree-one vertices with their unique neighbour until none are
    /// left. A graph that has shrunk to a single edge is its own core.
    pub fn core(&self) -> Result<CutSubgraph, TilingError> {
        let mut g = self.clone();
        g.propagate_forced()?;
        g.is_core = true;
        Ok(g)
    }

    fn propagate_forced(&mut self) -> Result<(), TilingError> {
        let mut queue: Vec<Node> = self.nodes.iter().copied().collect();
        while let Some(n) = queue.pop() {
            if !self.nodes.contains(&n) {
                continue;
            }
            let nb = self.neighbors_in(&n);
            match nb.len() {
                0 => return Err(TilingError::NoPerfectMatching),
                1 => {
                    if self.nodes.len() == 2 {
                        return Ok(());
                    }
                    let m = nb[0];
                    self.nodes.remove(&n);
                    self.nodes.remove(&m);
                    let pair = if n.color() == Color::Black { (n, m) } else { (m, n) };
                    self.forced.push(pair);
                    queue.extend(m.neighbors().into_iter().filter(|x| self.nodes.contains(x)));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Deletes `v` and reduces to the core again.
    pub fn remove_point(&self, v: &Node) -> Result<CutSubgraph, TilingError> {
        self.remove_points(std::slice::from_ref(v))
    }

    pub fn remove_points(&self, vs: &[Node]) -> Result<CutSubgraph, TilingError> {
        let mut g = self.clone();
        for v in vs {
            if !g.nodes.remove(v) {
                return Err(TilingError::MissingVertex);
            }
        }
        g.propagate_forced()?;
        g.is_core = true;
        Ok(g)
    }

    /// Vertex set translated so that its least anchor sits at the origin.
    pub fn normalized_nodes(&self) -> BTreeSet<Node> {
        let Some((du, dv)) = self.nodes.iter().map(|n| n.anchor()).min() else {
            return BTreeSet::new();
        };
        self.nodes.iter().map(|n| n.translate(-du, -dv)).collect()
    }

    /// Same vertex set up to a lattice translation.
    pub fn same_shape(&self, other: &CutSubgraph) -> bool {
        self.normalized_nodes() == other.normalized_nodes()
    }

    /// The `index`-th special point (1-based) of side `side` (0 = a).
    ///
    /// Each unit step of the side bounds one enclosed triangle. For a positive
    /// side the point is the black vertex on that triangle's edge from the
    /// step's start to the apex; for a negative side it is the white vertex at
    /// the apex.
    pub fn special_point(&self, side: usize, index: usize) -> Result<Node, TilingError> {
        let n = self.contour.side(side);
        let len = n.unsigned_abs() as usize;
        if index == 0 || index > len {
            return Err(TilingError::IndexOutOfRange { side: SIDE_NAMES[side], index, length: n });
        }
        let path = self.contour.path((0, 0));
        let m = (0..path.sides.len())
            .filter(|&m| path.sides[m] == side)
            .nth(index - 1)
            .ok_or(TilingError::MissingVertex)?;
        let (q0, q1) = (path.points[m], path.points[m + 1]);
        let mid = Node::mid_between(q0, q1);
        let tris = mid.mid_triangles().unwrap();
        let inside: Vec<&Triangle> = tris.iter().filter(|t| self.region.binary_search(t).is_ok()).collect();
        let [tri] = inside[..] else {
            return Err(TilingError::MissingVertex);
        };
        let apex = *tri.corners().iter().find(|&&c| c != q0 && c != q1).unwrap();
        Ok(if n > 0 { Node::mid_between(q0, apex) } else { Node::Hex(apex.0, apex.1) })
    }

    /// SVG drawing: faces shaded by label, retained vertices solid, removed
    /// boundary vertices ghosted, contour overlaid.
    pub fn to_svg(&self, scale: f64) -> String {
        let h = 3f64.sqrt() / 2.0;
        let pt = |x6: (i64, i64)| -> (f64, f64) {
            let (u, v) = (x6.0 as f64 / 6.0, x6.1 as f64 / 6.0);
            ((u + v / 2.0) * scale, -(v * h) * scale)
        };
        let corners = self.contour.corners((0, 0));
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for tri in &self.region {
            for c in tri.corners() {
                let (x, y) = pt((6 * c.0, 6 * c.1));
                xs.push(x);
                ys.push(y);
            }
        }
        for c in corners {
            let (x, y) = pt((6 * c.0, 6 * c.1));
            xs.push(x);
            ys.push(y);
        }
        let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
        let pad = scale;
        let (x0, x1) = (fold(&xs, f64::min, 0.0) - pad, fold(&xs, f64::max, 0.0) + pad);
        let (y0, y1) = (fold(&ys, f64::min, 0.0) - pad, fold(&ys, f64::max, 0.0) + pad);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.2} {:.2} {:.2} {:.2}" width="{:.0}" height="{:.0}">"#,
            x0,
            y0,
            x1 - x0,
            y1 - y0,
            x1 - x0,
            y1 - y0
        );
        let _ = writeln!(s, "<title>{}</title>", self.contour);
        const FILL: [&str; 6] = ["#f4cccc", "#fce5cd", "#fff2cc", "#d9ead3", "#cfe2f3", "#d9d2e9"];
        for tri in &self.region {
            let c = tri.corners();
            let center = tri.center().position6();
            for n in 0..3 {
                let p = (6 * c[n].0, 6 * c[n].1);
                let m1 = Node::mid_between(c[n], c[(n + 1) % 3]).position6();
                let m2 = Node::mid_between(c[n], c[(n + 2) % 3]).position6();
                let pts: Vec<String> = [p, m1, center, m2]
                    .iter()
                    .map(|&q| {
                        let (x, y) = pt(q);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let label = tri.labels()[n];
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{}" stroke="none"><title>{}</title></polygon>"#,
                    pts.join(" "),
                    FILL[label as usize - 1],
                    label
                );
            }
        }
        for e in self.edges() {
            let (a, b) = (pt(e.black.position6()), pt(e.white.position6()));
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#333" stroke-width="{:.2}"/>"##,
                a.0,
                a.1,
                b.0,
                b.1,
                scale / 30.0
            );
        }
        let r = scale / 14.0;
        for n in &self.nodes {
            let (x, y) = pt(n.position6());
            let fill = if n.color() == Color::Black { "#000" } else { "#fff" };
            let _ = writeln!(
                s,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="#000" stroke-width="{:.2}"/>"##,
                r / 3.0
            );
        }
        for n in &self.removed {
            let (x, y) = pt(n.position6());
            let _ = writeln!(
                s,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="none" stroke="#999" stroke-dasharray="{:.2}" stroke-width="{:.2}"/>"##,
                r / 2.0,
                r / 3.0
            );
        }
        let poly: Vec<String> = corners
            .iter()
            .map(|c| {
                let (x, y) = pt((6 * c.0, 6 * c.1));
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#c00" stroke-width="{:.2}"/>"##,
            poly.join(" "),
            scale / 15.0
        );
        s.push_str("</svg>\n");
        s
    }
}

fn minmax(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Change of the six-tuple when the special point of `side` is removed:
/// black points move along +v, white points along -v.
pub fn special_shift(side: usize, black: bool) -> SixTuple {
    const V: [[i64; 6]; 6] = [
        [-1, 1, 0, 0, 0, 1],
        [1, -1, 1, 0, 0, 0],
        [0, 1, -1, 1, 0, 0],
        [0, 0, 1, -1, 1, 0],
        [0, 0, 0, 1, -1, 1],
        [1, 0, 0, 0, 1, -1],
    ];
    let v = SixTuple(V[side]);
    if black {
        v
    } else {
        v.negate()
    }
}

/// Face label t_X attached to the special point of a side: the label x_t the
/// removal divides out of the c-value ratio.
pub fn special_label(side: usize, black: bool) -> u8 {
    const WHITE: [u8; 6] = [2, 5, 3, 1, 6, 4];
    const BLACK: [u8; 6] = [5, 3, 1, 6, 4, 2];
    if black {
        BLACK[side]
    } else {
        WHITE[side]
    }
}

/// Unit direction of side `s` in lattice coordinates.
pub fn side_direction(s: usize) -> (i64, i64) {
    DIRECTIONS[s]
}

/// Every point of the cut, for tests that need a vertex set.
pub fn node_set(g: &CutSubgraph) -> HashSet<Node> {
    g.nodes.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::phi;
    use crate::walk::LatticePoint;

    fn six(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> SixTuple {
        SixTuple::new(a, b, c, d, e, f)
    }

    #[test]
    fn hexavalent_face_order() {
        let h = Node::Hex(0, 0);
        let pairs: HashSet<(u8, u8)> = h.neighbors().iter().map(|&m| edge_faces(m, h)).collect();
        let expect: HashSet<(u8, u8)> = [(1, 6), (4, 6), (2, 4), (2, 5), (3, 5), (1, 3)].into_iter().collect();
        assert_eq!(pairs, expect);
    }

    #[test]
    fn trivalent_and_black_face_sets() {
        let up = Node::Tri(Triangle::up(0, 0));
        let labels: BTreeSet<u8> = up.neighbors().iter().flat_map(|&m| {
            let (i, j) = edge_faces(m, up);
            [i, j]
        }).collect();
        assert_eq!(labels, [1, 4, 5].into_iter().collect());
        for t in 0..3u8 {
            let b = Node::Mid(0, 0, t);
            let mut l: Vec<u8> = b.neighbors().iter().flat_map(|&w| {
                let (i, j) = edge_faces(b, w);
                [i, j]
            }).collect();
            l.sort();
            l.dedup();
            assert_eq!(l.len(), 4);
        }
    }

    #[test]
    fn fundamental_domain_counts() {
        // one up and one down triangle per lattice point
        let g = build_window(6);
        let interior = |n: &Node| hex_norm(n.anchor()) <= 2;
        let cell: Vec<Node> = g.vertices().iter().copied().filter(|n| n.anchor() == (0, 0)).collect();
        let whites = cell.iter().filter(|n| n.color() == Color::White).count();
        assert_eq!((whites, cell.len() - whites), (3, 3));
        let edges = g.edges().into_iter().filter(|e| e.black.anchor() == (0, 0)).count();
        assert_eq!(edges, 12);
        let faces = g.faces();
        let mut by_label = [0; 6];
        for f in faces.iter().filter(|f| f.triangle.u == 0 && f.triangle.v == 0) {
            by_label[f.label as usize - 1] += 1;
        }
        assert_eq!(by_label, [1; 6]);
        assert!(g.vertices().iter().filter(|n| interior(n)).all(|n| n
            .neighbors()
            .iter()
            .all(|m| g.contains(m))));
    }

    #[test]
    fn first_base_case_is_one_edge() {
        let g = cut_contour(&six(0, 0, 1, -1, 1, 0)).unwrap();
        assert_eq!(g.num_vertices(), 2);
        let e = g.edges();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].faces, (4, 5));
        assert_eq!(g.covering_monomial(), "x1*x4*x5".parse().unwrap());
        let c = g.core().unwrap();
        assert_eq!(c.num_vertices(), 2);
    }

    #[test]
    fn base_case_covering_monomials() {
        let prism = [(0, -1, 1), (0, -1, 0), (-1, 0, 0), (-1, 0, 1), (0, 0, 1), (0, 0, 0)];
        let expect = ["x1*x4*x5", "x2*x3*x6", "x2*x3*x6", "x1*x4*x5", "x1*x4*x5", "x2*x3*x6"];
        for (p, m) in prism.iter().zip(expect) {
            let g = cut_contour(&phi(LatticePoint::new(p.0, p.1, p.2))).unwrap();
            assert_eq!(g.covering_monomial(), m.parse().unwrap(), "{p:?}");
        }
    }

    #[test]
    fn window_checks() {
        let t = phi(LatticePoint::new(1, 3, -1));
        let small = build_window(2);
        assert!(matches!(cut(&t, &small), Err(TilingError::WindowTooSmall { .. })));
        assert!(cut(&t, &build_window(12)).is_ok());
        let bad = phi(LatticePoint::new(0, 0, 3));
        assert_eq!(cut(&bad, &build_window(12)), Err(TilingError::SelfIntersecting(bad)));
        let open = six(1, 0, 0, 0, 0, 0);
        assert_eq!(cut(&open, &build_window(4)), Err(TilingError::NotClosed(open)));
    }

    #[test]
    fn two_zero_run_folds_back() {
        // two zeros between positive sides join anti-parallel sides
        let t = six(1, 1, 0, 0, 2, -1);
        assert!(t.closes_up());
        assert_eq!(cut_contour(&t), Err(TilingError::SelfIntersecting(t)));
    }

    #[test]
    fn three_zero_run_drops_the_corner() {
        let t = six(5, -5, 5, 0, 0, 0);
        let g = cut_contour(&t).unwrap();
        let corner = t.corners((0, 0))[3];
        assert!(g.removed().contains(&Node::Hex(corner.0, corner.1)));
    }

    #[test]
    fn special_point_colors_and_range() {
        let g = core_of(&phi(LatticePoint::new(1, 3, -1))).unwrap();
        assert_eq!(g.special_point(0, 1).unwrap().color(), Color::Black);
        assert_eq!(g.special_point(1, 3).unwrap().color(), Color::White);
        assert!(matches!(g.special_point(2, 1), Err(TilingError::IndexOutOfRange { side: 'c', .. })));
        assert!(matches!(g.special_point(1, 4), Err(TilingError::IndexOutOfRange { .. })));
    }

    #[test]
    fn svg_is_deterministic() {
        let g = core_of(&phi(LatticePoint::new(0, 1, 1))).unwrap();
        let a = g.to_svg(40.0);
        assert_eq!(a, g.to_svg(40.0));
        assert!(a.starts_with("<svg"));
        assert!(a.contains("<polyline"));
    }
}
