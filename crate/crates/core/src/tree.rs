//! Finitely generated metric trees.
//!
//! A [`MetricTree`] is a weighted graph-theoretic tree whose edges are glued
//! real intervals. Points are addressed combinatorially by [`TreePoint`]: either
//! a vertex, or an edge together with an arclength offset measured from the
//! edge's canonical origin (the endpoint whose id sorts first). Vertex-to-vertex
//! distances use weighted depths and a binary-lifting LCA table, so no query
//! sums a path.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

pub type VertexId = usize;
pub type EdgeId = usize;

/// An edge in canonical orientation: `id(u) < id(v)` lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: f64,
}

/// On-disk description of a tree.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    pub w: f64,
}

impl TreeSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn edge(mut self, u: impl Into<String>, v: impl Into<String>, w: f64) -> Self {
        self.edges.push(EdgeSpec {
            u: u.into(),
            v: v.into(),
            w,
        });
        self
    }

    pub fn root(mut self, id: impl Into<String>) -> Self {
        self.root = Some(id.into());
        self
    }
}

/// A location in a tree.
///
/// Interior offsets lie strictly inside `(0, w)` and are measured from the
/// canonical origin `edge.u`, so two equal locations compare equal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TreePoint {
    Vertex(VertexId),
    Interior { edge: EdgeId, offset: f64 },
}

/// A maximal straight run of a segment inside one edge, traversed from
/// offset `from` to offset `to` (canonical coordinates).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub edge: EdgeId,
    pub from: f64,
    pub to: f64,
}

impl Piece {
    pub fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }

    pub fn lo(&self) -> f64 {
        self.from.min(self.to)
    }

    pub fn hi(&self) -> f64 {
        self.from.max(self.to)
    }

    fn reversed(&self) -> Piece {
        Piece {
            edge: self.edge,
            from: self.to,
            to: self.from,
        }
    }
}

/// The unique geodesic between two tree points.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: TreePoint,
    pub end: TreePoint,
    pub pieces: Vec<Piece>,
    pub length: f64,
}

impl Segment {
    pub fn reversed(&self) -> Segment {
        Segment {
            start: self.end,
            end: self.start,
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
            length: self.length,
        }
    }
}

/// Up to two (vertex, distance) exits from a point.
#[derive(Clone, Copy)]
struct Anchors {
    items: [(VertexId, f64); 2],
    len: usize,
}

impl Anchors {
    fn iter(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.items[..self.len].iter().copied()
    }
}

/// An immutable, validated metric tree.
#[derive(Clone, Debug)]
pub struct MetricTree {
    ids: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
    root: VertexId,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    depth: Vec<f64>,
    level: Vec<usize>,
    up: Vec<Vec<VertexId>>,
    order: Vec<VertexId>,
}

impl MetricTree {
    /// Validates a description and precomputes depth and ancestor tables.
    pub fn build(spec: &TreeSpec) -> Result<Self> {
        if spec.vertices.is_empty() {
            return Err(Error::EmptyTree);
        }
        let mut index = HashMap::with_capacity(spec.vertices.len());
        for (i, id) in spec.vertices.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let n = spec.vertices.len();
        let lookup = |id: &str| -> Result<VertexId> {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };

        // union-find for cycle detection
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }

        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut adj = vec![Vec::new(); n];
        let mut edge_index = HashMap::with_capacity(spec.edges.len());
        for e in &spec.edges {
            let a = lookup(&e.u)?;
            let b = lookup(&e.v)?;
            if !(e.w.is_finite() && e.w > 0.0) {
                return Err(Error::NonPositiveWeight {
                    u: e.u.clone(),
                    v: e.v.clone(),
                    w: e.w,
                });
            }
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                return Err(Error::CycleDetected {
                    u: e.u.clone(),
                    v: e.v.clone(),
                });
            }
            uf[ra] = rb;
            let (u, v) = if spec.vertices[a] < spec.vertices[b] {
                (a, b)
            } else {
                (b, a)
            };
            let id = edges.len();
            edges.push(Edge { u, v, w: e.w });
            adj[u].push((v, id));
            adj[v].push((u, id));
            edge_index.insert((u, v), id);
            edge_index.insert((v, u), id);
        }
        if edges.len() + 1 != n {
            return Err(Error::Disconnected {
                vertices: n,
                edges: edges.len(),
            });
        }

        let root = match &spec.root {
            Some(r) => lookup(r)?,
            None => 0,
        };

        let mut parent = vec![None; n];
        let mut depth = vec![0.0; n];
        let mut level = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, e));
                    depth[y] = depth[x] + edges[e].w;
                    level[y] = level[x] + 1;
                    order.push(y);
                }
            }
        }

        let mut log = 1;
        while (1usize << log) < n {
            log += 1;
        }
        let mut up = vec![vec![root; n]; log];
        for v in 0..n {
            up[0][v] = parent[v].map_or(root, |(p, _)| p);
        }
        for k in 1..log {
            for v in 0..n {
                up[k][v] = up[k - 1][up[k - 1][v]];
            }
        }

        Ok(Self {
            ids: spec.vertices.clone(),
            index,
            edges,
            adj,
            edge_index,
            root,
            parent,
            depth,
            level,
            up,
            order,
        })
    }

    pub fn to_spec(&self) -> TreeSpec {
        TreeSpec {
            vertices: self.ids.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    u: self.ids[e.u].clone(),
                    v: self.ids[e.v].clone(),
                    w: e.w,
                })
                .collect(),
            root: Some(self.ids[self.root].clone()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_id(&self, v: VertexId) -> &str {
        &self.ids[v]
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn parent(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.parent[v]
    }

    pub fn depth(&self, v: VertexId) -> f64 {
        self.depth[v]
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<VertexId> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&(a, b)).copied()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn vertex(&self, id: &str) -> Result<TreePoint> {
        Ok(TreePoint::Vertex(self.vertex_index(id)?))
    }

    /// The point at distance `t` from `from` along the edge `from`-`to`.
    pub fn point_on_edge(&self, from: &str, to: &str, t: f64) -> Result<TreePoint> {
        let a = self.vertex_index(from)?;
        let b = self.vertex_index(to)?;
        let e = self
            .edge_between(a, b)
            .ok_or_else(|| Error::NoSuchEdge(from.to_string(), to.to_string()))?;
        let w = self.edges[e].w;
        if !(t.is_finite() && t >= -DEFAULT_TOL && t <= w + DEFAULT_TOL) {
            return Err(Error::PointNotOnTree(format!(
                "offset {t} outside [0, {w}] on edge {from}-{to}"
            )));
        }
        let offset = if self.edges[e].u == a { t } else { w - t };
        Ok(self.edge_point(e, offset))
    }

    /// Canonical point at `offset` (from `edge.u`); offsets at or beyond the
    /// endpoints, up to rounding, collapse to the vertex.
    pub fn edge_point(&self, e: EdgeId, offset: f64) -> TreePoint {
        let edge = &self.edges[e];
        let snap = 1e-12 * edge.w.max(1.0);
        if offset <= snap {
            TreePoint::Vertex(edge.u)
        } else if offset >= edge.w - snap {
            TreePoint::Vertex(edge.v)
        } else {
            TreePoint::Interior { edge: e, offset }
        }
    }

    pub fn check_point(&self, p: &TreePoint) -> Result<()> {
        match *p {
            TreePoint::Vertex(v) if v < self.ids.len() => Ok(()),
            TreePoint::Vertex(v) => Err(Error::PointNotOnTree(format!("vertex index {v}"))),
            TreePoint::Interior { edge, offset } => match self.edges.get(edge) {
                Some(e) if offset > 0.0 && offset < e.w => Ok(()),
                Some(e) => Err(Error::PointNotOnTree(format!(
                    "offset {offset} not inside (0, {}) on edge {edge}",
                    e.w
                ))),
                None => Err(Error::PointNotOnTree(format!("edge index {edge}"))),
            },
        }
    }

    fn anchors(&self, p: &TreePoint) -> Anchors {
        match *p {
            TreePoint::Vertex(v) => Anchors {
                items: [(v, 0.0), (v, 0.0)],
                len: 1,
            },
            TreePoint::Interior { edge, offset } => {
                let e = &self.edges[edge];
                Anchors {
                    items: [(e.u, offset), (e.v, e.w - offset)],
                    len: 2,
                }
            }
        }
    }

    pub fn lca(&self, a: VertexId, b: VertexId) -> VertexId {
        let (mut a, mut b) = if self.level[a] < self.level[b] {
            (b, a)
        } else {
            (a, b)
        };
        let mut diff = self.level[a] - self.level[b];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.up[k][a];
            }
            diff >>= 1;
            k += 1;
        }
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        self.up[0][a]
    }

    pub fn vertex_distance(&self, a: VertexId, b: VertexId) -> f64 {
        if a == b {
            return 0.0;
        }
        let c = self.lca(a, b);
        (self.depth[a] - self.depth[c]) + (self.depth[b] - self.depth[c])
    }

    /// Distance between two points already known to lie on this tree.
    pub fn dist(&self, p: &TreePoint, q: &TreePoint) -> f64 {
        if let (
            TreePoint::Interior {
                edge: e1,
                offset: t1,
            },
            TreePoint::Interior {
                edge: e2,
                offset: t2,
            },
        ) = (p, q)
        {
            if e1 == e2 {
                return (t1 - t2).abs();
            }
        }
        let (ap, aq) = (self.anchors(p), self.anchors(q));
        let mut best = f64::INFINITY;
        for (a, da) in ap.iter() {
            for (b, db) in aq.iter() {
                best = best.min(da + self.vertex_distance(a, b) + db);
            }
        }
        best
    }

    /// Geodesic distance; validates both points.
    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.dist(p, q))
    }

    /// Depth of a point below the root.
    pub fn point_depth(&self, p: &TreePoint) -> f64 {
        self.dist(&TreePoint::Vertex(self.root), p)
    }

    fn vertex_path(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let c = self.lca(a, b);
        let mut left = vec![a];
        let mut x = a;
        while x != c {
            x = self.parent[x].expect("non-root has parent").0;
            left.push(x);
        }
        let mut right = Vec::new();
        let mut y = b;
        while y != c {
            right.push(y);
            y = self.parent[y].expect("non-root has parent").0;
        }
        left.extend(right.into_iter().rev());
        left
    }

    fn endpoint_offset(&self, e: EdgeId, v: VertexId) -> f64 {
        if self.edges[e].u == v {
            0.0
        } else {
            self.edges[e].w
        }
    }

    /// The unique segment `[p, q]` as a chain of edge pieces.
    pub fn segment(&self, p: &TreePoint, q: &TreePoint) -> Result<Segment> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.segment_unchecked(p, q))
    }

    pub(crate) fn segment_unchecked(&self, p: &TreePoint, q: &TreePoint) -> Segment {
        let length = self.dist(p, q);
        let mut pieces = Vec::new();
        if p == q {
            return Segment {
                start: *p,
                end: *q,
                pieces,
                length: 0.0,
            };
        }
        if let (
            TreePoint::Interior {
                edge: e1,
                offset: t1,
            },
            TreePoint::Interior {
                edge: e2,
                offset: t2,
            },
        ) = (p, q)
        {
            if e1 == e2 {
                pieces.push(Piece {
                    edge: *e1,
                    from: *t1,
                    to: *t2,
                });
                return Segment {
                    start: *p,
                    end: *q,
                    pieces,
                    length,
                };
            }
        }
        let (ap, aq) = (self.anchors(p), self.anchors(q));
        let mut best = (f64::INFINITY, 0, 0);
        for (a, da) in ap.iter() {
            for (b, db) in aq.iter() {
                let d = da + self.vertex_distance(a, b) + db;
                if d < best.0 {
                    best = (d, a, b);
                }
            }
        }
        let (_, a, b) = best;
        if let TreePoint::Interior { edge, offset } = *p {
            pieces.push(Piece {
                edge,
                from: offset,
                to: self.endpoint_offset(edge, a),
            });
        }
        let path = self.vertex_path(a, b);
        for pair in path.windows(2) {
            let e = self.edge_between(pair[0], pair[1]).expect("adjacent");
            pieces.push(Piece {
                edge: e,
                from: self.endpoint_offset(e, pair[0]),
                to: self.endpoint_offset(e, pair[1]),
            });
        }
        if let TreePoint::Interior { edge, offset } = *q {
            pieces.push(Piece {
                edge,
                from: self.endpoint_offset(edge, b),
                to: offset,
            });
        }
        Segment {
            start: *p,
            end: *q,
            pieces,
            length,
        }
    }

    /// The point of `seg` at the given arclength from its start.
    pub fn point_at(&self, seg: &Segment, arclength: f64) -> Result<TreePoint> {
        if !(arclength >= -DEFAULT_TOL && arclength <= seg.length + DEFAULT_TOL) {
            return Err(Error::OutOfRange {
                what: "arclength",
                value: arclength,
            });
        }
        Ok(self.point_at_unchecked(seg, arclength))
    }

    pub(crate) fn point_at_unchecked(&self, seg: &Segment, arclength: f64) -> TreePoint {
        if arclength <= 0.0 {
            return seg.start;
        }
        if arclength >= seg.length {
            return seg.end;
        }
        let mut acc = 0.0;
        for piece in &seg.pieces {
            let len = piece.len();
            if arclength <= acc + len {
                let step = arclength - acc;
                let offset = if piece.to >= piece.from {
                    piece.from + step
                } else {
                    piece.from - step
                };
                return self.edge_point(piece.edge, offset);
            }
            acc += len;
        }
        seg.end
    }

    pub fn midpoint(&self, p: &TreePoint, q: &TreePoint) -> Result<TreePoint> {
        let seg = self.segment(p, q)?;
        Ok(self.point_at_unchecked(&seg, seg.length / 2.0))
    }

    /// The unique point lying on all three pairwise segments.
    pub fn median(&self, x: &TreePoint, y: &TreePoint, z: &TreePoint) -> Result<TreePoint> {
        for p in [x, y, z] {
            self.check_point(p)?;
        }
        Ok(self.median_unchecked(x, y, z))
    }

    pub(crate) fn median_unchecked(
        &self,
        x: &TreePoint,
        y: &TreePoint,
        z: &TreePoint,
    ) -> TreePoint {
        let (dxy, dxz, dyz) = (self.dist(x, y), self.dist(x, z), self.dist(y, z));
        // Gromov product (y|z)_x locates the branch point along [x, y].
        let along = ((dxy + dxz - dyz) / 2.0).clamp(0.0, dxy);
        let seg = self.segment_unchecked(x, y);
        self.point_at_unchecked(&seg, along)
    }

    /// True iff `y` lies on `[x, z]`, i.e. `xz = xy + yz` within `tol`.
    pub fn is_between(
        &self,
        x: &TreePoint,
        y: &TreePoint,
        z: &TreePoint,
        tol: f64,
    ) -> Result<bool> {
        for p in [x, y, z] {
            self.check_point(p)?;
        }
        Ok((self.dist(x, z) - self.dist(x, y) - self.dist(y, z)).abs() <= tol)
    }

    /// Degree-one vertices.
    pub fn leaves(&self) -> Vec<TreePoint> {
        (0..self.ids.len())
            .filter(|&v| self.adj[v].len() == 1)
            .map(TreePoint::Vertex)
            .collect()
    }

    /// Largest distance between two points of the tree (attained at vertices).
    pub fn diameter(&self) -> f64 {
        let far = |from: VertexId| {
            (0..self.ids.len())
                .map(|v| (self.vertex_distance(from, v), v))
                .fold((0.0, from), |acc, x| if x.0 > acc.0 { x } else { acc })
        };
        let (_, a) = far(self.root);
        far(a).0
    }

    /// All vertices plus, on each edge of weight `w`, the interior points that
    /// split it into `ceil(w / delta)` equal parts.
    pub fn skeleton(&self, delta: f64) -> Result<Vec<TreePoint>> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::OutOfRange {
                what: "delta",
                value: delta,
            });
        }
        let mut pts: Vec<TreePoint> = (0..self.ids.len()).map(TreePoint::Vertex).collect();
        for (e, edge) in self.edges.iter().enumerate() {
            let parts = (edge.w / delta).ceil().max(1.0) as usize;
            let step = edge.w / parts as f64;
            for k in 1..parts {
                pts.push(TreePoint::Interior {
                    edge: e,
                    offset: step * k as f64,
                });
            }
        }
        Ok(pts)
    }

    /// A point drawn uniformly with respect to arclength.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> TreePoint {
        if self.edges.is_empty() {
            return TreePoint::Vertex(0);
        }
        let mut target = rng.gen::<f64>() * self.total_length();
        for (e, edge) in self.edges.iter().enumerate() {
            if target < edge.w {
                return self.edge_point(e, target);
            }
            target -= edge.w;
        }
        TreePoint::Vertex(self.edges[self.edges.len() - 1].v)
    }

    /// Renders `v:<id>` or `e:<u>-<v>@<offset>` with `u` the canonical origin.
    pub fn format_point(&self, p: &TreePoint) -> String {
        match *p {
            TreePoint::Vertex(v) => format!("v:{}", self.ids[v]),
            TreePoint::Interior { edge, offset } => {
                let e = &self.edges[edge];
                format!("e:{}-{}@{}", self.ids[e.u], self.ids[e.v], offset)
            }
        }
    }

    /// Parses a point literal; edge offsets are measured from the first
    /// endpoint as written.
    pub fn parse_point(&self, s: &str) -> Result<TreePoint> {
        let s = s.trim();
        if let Some(id) = s.strip_prefix("v:") {
            return self.vertex(id);
        }
        if let Some(rest) = s.strip_prefix("e:") {
            let (ends, off) = rest
                .rsplit_once('@')
                .ok_or_else(|| Error::Parse(format!("missing `@offset` in `{s}`")))?;
            let (u, v) = ends
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("expected `<u>-<v>` in `{s}`")))?;
            let t: f64 = off
                .parse()
                .map_err(|_| Error::Parse(format!("bad offset `{off}` in `{s}`")))?;
            if !t.is_finite() {
                return Err(Error::Parse(format!("non-finite offset in `{s}`")));
            }
            return self.point_on_edge(u, v, t);
        }
        Err(Error::Parse(format!(
            "point literal `{s}` must start with `v:` or `e:`"
        )))
    }
}

/// Characters a vertex id may not contain, so that point literals stay
/// unambiguous.
pub const RESERVED_ID_CHARS: &[char] = &['-', '@', ':', ','];

impl TreeSpec {
    /// Parses a JSON tree description and checks id syntax.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: TreeSpec = serde_json::from_str(text)?;
        for id in &spec.vertices {
            if id.is_empty()
                || id
                    .chars()
                    .any(|c| c.is_whitespace() || RESERVED_ID_CHARS.contains(&c))
            {
                return Err(Error::Parse(format!(
                    "vertex id `{id}` is empty or contains whitespace or one of - @ : ,"
                )));
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreePoint::Vertex(v) => write!(f, "#{v}"),
            TreePoint::Interior { edge, offset } => write!(f, "#e{edge}@{offset}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_spider;

    fn path3() -> MetricTree {
        MetricTree::build(
            &TreeSpec::new()
                .vertex("a")
                .vertex("b")
                .vertex("c")
                .edge("a", "b", 1.0)
                .edge("b", "c", 1.0),
        )
        .unwrap()
    }

    #[test]
    fn single_edge() {
        let t = MetricTree::build(&TreeSpec::new().vertex("x").vertex("y").edge("x", "y", 1.0))
            .unwrap();
        assert_eq!(t.diameter(), 1.0);
        assert_eq!(t.leaves().len(), 2);
    }

    #[test]
    fn build_errors() {
        let cycle = TreeSpec::new()
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("a", "b", 1.0)
            .edge("b", "c", 1.0)
            .edge("c", "a", 1.0);
        assert!(matches!(
            MetricTree::build(&cycle),
            Err(Error::CycleDetected { .. })
        ));
        let split = TreeSpec::new()
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("a", "b", 1.0);
        assert!(matches!(
            MetricTree::build(&split),
            Err(Error::Disconnected { .. })
        ));
        let neg = TreeSpec::new().vertex("a").vertex("b").edge("a", "b", -1.0);
        assert!(matches!(
            MetricTree::build(&neg),
            Err(Error::NonPositiveWeight { .. })
        ));
        let nan = TreeSpec::new()
            .vertex("a")
            .vertex("b")
            .edge("a", "b", f64::NAN);
        assert!(MetricTree::build(&nan).is_err());
        let dup = TreeSpec::new().vertex("a").vertex("a");
        assert!(matches!(
            MetricTree::build(&dup),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            MetricTree::build(&TreeSpec::new()),
            Err(Error::EmptyTree)
        ));
    }

    #[test]
    fn degenerate_single_vertex() {
        let t = MetricTree::build(&TreeSpec::new().vertex("solo")).unwrap();
        let p = t.vertex("solo").unwrap();
        assert_eq!(t.distance(&p, &p).unwrap(), 0.0);
        assert_eq!(t.midpoint(&p, &p).unwrap(), p);
        assert!(t.leaves().is_empty());
        assert_eq!(t.diameter(), 0.0);
        assert_eq!(t.skeleton(0.1).unwrap(), vec![p]);
    }

    #[test]
    fn spider_radial_distances() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let p = t.point_on_edge("o", "1", 0.3).unwrap();
        let q = t.point_on_edge("o", "2", 0.5).unwrap();
        let r = t.point_on_edge("o", "1", 0.5).unwrap();
        assert!((t.distance(&p, &q).unwrap() - 0.8).abs() < 1e-12);
        assert!((t.distance(&p, &r).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(t.distance(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn canonical_orientation() {
        let t = path3();
        let a = t.point_on_edge("a", "b", 0.25).unwrap();
        let b = t.point_on_edge("b", "a", 0.75).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            t.point_on_edge("a", "b", 0.0).unwrap(),
            t.vertex("a").unwrap()
        );
        assert_eq!(
            t.point_on_edge("a", "b", 1.0).unwrap(),
            t.vertex("b").unwrap()
        );
        assert!(t.point_on_edge("a", "c", 0.5).is_err());
        assert!(t.point_on_edge("a", "b", 1.5).is_err());
    }

    #[test]
    fn path_segment_pieces() {
        let t = path3();
        let (a, c) = (t.vertex("a").unwrap(), t.vertex("c").unwrap());
        let seg = t.segment(&a, &c).unwrap();
        assert_eq!(seg.pieces.len(), 2);
        assert_eq!(seg.length, 2.0);
        let mid = t.midpoint(&a, &c).unwrap();
        assert_eq!(mid, t.vertex("b").unwrap());
        let degenerate = t.segment(&a, &a).unwrap();
        assert!(degenerate.pieces.is_empty());
        assert_eq!(degenerate.length, 0.0);
    }

    #[test]
    fn tripod_segment_through_center() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let (x, y) = (t.vertex("1").unwrap(), t.vertex("2").unwrap());
        let seg = t.segment(&x, &y).unwrap();
        assert_eq!(seg.length, 2.0);
        assert_eq!(t.point_at(&seg, 1.0).unwrap(), t.vertex("o").unwrap());
        assert_eq!(t.point_at(&seg, 0.0).unwrap(), x);
        assert_eq!(t.point_at(&seg, 2.0).unwrap(), y);
        assert!(t.point_at(&seg, 2.5).is_err());
        assert_eq!(seg.reversed(), t.segment(&y, &x).unwrap());
    }

    #[test]
    fn interval_midpoint() {
        let t = MetricTree::build(&TreeSpec::new().vertex("l").vertex("r").edge("l", "r", 1.0))
            .unwrap();
        let m = t
            .midpoint(&t.vertex("l").unwrap(), &t.vertex("r").unwrap())
            .unwrap();
        assert_eq!(m, t.point_on_edge("l", "r", 0.5).unwrap());
    }

    #[test]
    fn medians_and_betweenness() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let ends: Vec<_> = ["1", "2", "3"]
            .iter()
            .map(|s| t.vertex(s).unwrap())
            .collect();
        let o = t.vertex("o").unwrap();
        assert_eq!(t.median(&ends[0], &ends[1], &ends[2]).unwrap(), o);
        assert!(t.is_between(&ends[0], &o, &ends[1], DEFAULT_TOL).unwrap());
        assert!(!t
            .is_between(&ends[0], &ends[2], &ends[1], DEFAULT_TOL)
            .unwrap());

        let p = path3();
        let (a, b, c) = (
            p.vertex("a").unwrap(),
            p.vertex("b").unwrap(),
            p.vertex("c").unwrap(),
        );
        assert_eq!(p.median(&a, &b, &c).unwrap(), b);
        let m = p.midpoint(&a, &c).unwrap();
        assert!(p.is_between(&a, &m, &c, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn leaves_of_spider() {
        let t = gen_spider(&[1.0, 2.0, 0.5, 1.0, 3.0]).unwrap();
        let leaves = t.leaves();
        assert_eq!(leaves.len(), 5);
        assert!(!leaves.contains(&t.vertex("o").unwrap()));
    }

    #[test]
    fn skeleton_counts() {
        let t = MetricTree::build(&TreeSpec::new().vertex("l").vertex("r").edge("l", "r", 1.0))
            .unwrap();
        let sk = t.skeleton(0.5).unwrap();
        assert_eq!(sk.len(), 3);
        assert!(sk.contains(&t.point_on_edge("l", "r", 0.5).unwrap()));
        assert_eq!(t.skeleton(2.0).unwrap().len(), 2);
        let tripod = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(tripod.skeleton(0.25).unwrap().len(), 13);
        assert!(t.skeleton(0.0).is_err());
    }

    #[test]
    fn point_literals() {
        let t = path3();
        let p = t.parse_point("e:b-a@0.25").unwrap();
        assert_eq!(p, t.point_on_edge("a", "b", 0.75).unwrap());
        assert_eq!(t.parse_point(&t.format_point(&p)).unwrap(), p);
        assert_eq!(t.parse_point("v:c").unwrap(), t.vertex("c").unwrap());
        assert!(t.parse_point("e:a-b@NaN").is_err());
        assert!(t.parse_point("x:a").is_err());
        assert!(t.parse_point("v:zz").is_err());
    }

    #[test]
    fn tree_file_rejects_bad_input() {
        assert!(TreeSpec::from_json(
            r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","w":-1}]}"#
        )
        .map(|s| MetricTree::build(&s))
        .unwrap()
        .is_err());
        assert!(TreeSpec::from_json(r#"{"vertices":["a-b"],"edges":[]}"#).is_err());
        assert!(TreeSpec::from_json(
            r#"{"vertices":["a","b"],"edges":[{"u":"a","v":"b","w":NaN}]}"#
        )
        .is_err());
    }
}
