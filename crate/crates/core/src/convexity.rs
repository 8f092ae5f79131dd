//! Closed metrically convex subsets of a finitely generated tree.
//!
//! A [`ConvexSubtree`] stores, per edge, the closure of its intersection with
//! the open edge (or nothing), together with explicit vertex membership. For a
//! closed convex set every interval touching an edge endpoint has that vertex
//! flagged. Balls, segments, hulls and finite intersections of balls are all
//! exactly of this form.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{EdgeId, MetricTree, TreePoint, TreeSpec, VertexId, DEFAULT_TOL};

/// Closed offset interval `[lo, hi]` in canonical edge coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexSubtree {
    intervals: Vec<Option<Interval>>,
    vertices: Vec<bool>,
}

impl ConvexSubtree {
    pub fn empty(t: &MetricTree) -> Self {
        Self {
            intervals: vec![None; t.edge_count()],
            vertices: vec![false; t.vertex_count()],
        }
    }

    pub fn whole(t: &MetricTree) -> Self {
        Self {
            intervals: t
                .edges()
                .iter()
                .map(|e| Some(Interval { lo: 0.0, hi: e.w }))
                .collect(),
            vertices: vec![true; t.vertex_count()],
        }
    }

    pub fn singleton(t: &MetricTree, p: &TreePoint) -> Self {
        let mut s = Self::empty(t);
        match *p {
            TreePoint::Vertex(v) => s.vertices[v] = true,
            TreePoint::Interior { edge, offset } => {
                s.intervals[edge] = Some(Interval {
                    lo: offset,
                    hi: offset,
                })
            }
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.iter().all(Option::is_none) && !self.vertices.iter().any(|&b| b)
    }

    pub fn interval(&self, e: EdgeId) -> Option<Interval> {
        self.intervals[e]
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices[v]
    }

    pub fn vertex_flags(&self) -> &[bool] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.intervals.iter().flatten().map(|i| i.hi - i.lo).sum()
    }

    pub fn contains(&self, p: &TreePoint, tol: f64) -> bool {
        match *p {
            TreePoint::Vertex(v) => self.vertices[v],
            TreePoint::Interior { edge, offset } => {
                self.intervals[edge].is_some_and(|i| offset >= i.lo - tol && offset <= i.hi + tol)
            }
        }
    }

    /// Snaps near-endpoint interval ends and drops intervals that only touch
    /// an endpoint (already represented by the vertex flag).
    fn normalize(&mut self, t: &MetricTree, tol: f64) {
        for (e, slot) in self.intervals.iter_mut().enumerate() {
            let Some(mut iv) = *slot else { continue };
            let edge = t.edge(e);
            if iv.lo <= tol {
                iv.lo = 0.0;
                self.vertices[edge.u] = true;
            }
            if iv.hi >= edge.w - tol {
                iv.hi = edge.w;
                self.vertices[edge.v] = true;
            }
            let touches = iv.lo == 0.0 || iv.hi == edge.w;
            *slot = if touches && iv.hi - iv.lo <= tol {
                None
            } else {
                Some(iv)
            };
        }
    }

    /// Exact per-edge intersection.
    pub fn intersect(&self, other: &ConvexSubtree, t: &MetricTree) -> ConvexSubtree {
        let mut out = ConvexSubtree::empty(t);
        for (v, flag) in out.vertices.iter_mut().enumerate() {
            *flag = self.vertices[v] && other.vertices[v];
        }
        for e in 0..t.edge_count() {
            if let (Some(a), Some(b)) = (self.intervals[e], other.intervals[e]) {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if lo <= hi + DEFAULT_TOL {
                    let (lo, hi) = if lo > hi {
                        let m = (lo + hi) / 2.0;
                        (m, m)
                    } else {
                        (lo, hi)
                    };
                    out.intervals[e] = Some(Interval { lo, hi });
                }
            }
        }
        out.normalize_keep_flags(t);
        out
    }

    fn normalize_keep_flags(&mut self, t: &MetricTree) {
        for (e, slot) in self.intervals.iter_mut().enumerate() {
            let Some(mut iv) = *slot else { continue };
            let edge = t.edge(e);
            if iv.lo <= DEFAULT_TOL && self.vertices[edge.u] {
                iv.lo = 0.0;
            }
            if iv.hi >= edge.w - DEFAULT_TOL && self.vertices[edge.v] {
                iv.hi = edge.w;
            }
            let touches = iv.lo == 0.0 || iv.hi == edge.w;
            *slot = if touches && iv.hi - iv.lo <= DEFAULT_TOL {
                None
            } else {
                Some(iv)
            };
        }
    }

    /// Leaf-ends of the subtree: interval ends inside an edge, and member
    /// vertices with at most one incident member edge.
    pub fn extreme_points(&self, t: &MetricTree) -> Vec<TreePoint> {
        let mut out = Vec::new();
        for (e, iv) in self.intervals.iter().enumerate() {
            let Some(iv) = iv else { continue };
            let w = t.edge(e).w;
            if iv.lo > 0.0 {
                out.push(TreePoint::Interior {
                    edge: e,
                    offset: iv.lo,
                });
            }
            if iv.hi < w && iv.hi > iv.lo {
                out.push(TreePoint::Interior {
                    edge: e,
                    offset: iv.hi,
                });
            }
        }
        for v in 0..t.vertex_count() {
            if !self.vertices[v] {
                continue;
            }
            let degree = t
                .neighbors(v)
                .iter()
                .filter(|&&(_, e)| {
                    self.intervals[e].is_some_and(|iv| {
                        let edge = t.edge(e);
                        if edge.u == v {
                            iv.lo == 0.0
                        } else {
                            iv.hi == edge.w
                        }
                    })
                })
                .count();
            if degree <= 1 {
                out.push(TreePoint::Vertex(v));
            }
        }
        out
    }

    /// Largest distance between two members (0 for empty or singleton sets).
    pub fn diameter(&self, t: &MetricTree) -> f64 {
        diameter(t, &self.extreme_points(t))
    }

    /// Uniform point with respect to length; falls back to an isolated
    /// member when the set has zero length.
    pub fn sample_point<R: Rng + ?Sized>(&self, t: &MetricTree, rng: &mut R) -> Option<TreePoint> {
        let total = self.length();
        if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            for (e, iv) in self.intervals.iter().enumerate() {
                let Some(iv) = iv else { continue };
                let len = iv.hi - iv.lo;
                if target <= len {
                    return Some(t.edge_point(e, iv.lo + target));
                }
                target -= len;
            }
        }
        self.extreme_points(t).first().copied()
    }

    /// Skeleton of the set: member vertices and interval points spaced at
    /// most `delta` apart.
    pub fn skeleton(&self, t: &MetricTree, delta: f64) -> Vec<TreePoint> {
        let mut out: Vec<TreePoint> = (0..t.vertex_count())
            .filter(|&v| self.vertices[v])
            .map(TreePoint::Vertex)
            .collect();
        for (e, iv) in self.intervals.iter().enumerate() {
            let Some(iv) = iv else { continue };
            let len = iv.hi - iv.lo;
            let parts = (len / delta).ceil().max(1.0) as usize;
            for k in 0..=parts {
                let off = iv.lo + len * k as f64 / parts as f64;
                let p = t.edge_point(e, off);
                if matches!(p, TreePoint::Interior { .. }) && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// The set as a metric tree of its own, with a map back into `t`.
    pub fn induced_tree(&self, t: &MetricTree) -> Option<InducedTree> {
        if self.is_empty() {
            return None;
        }
        let mut spec = TreeSpec::new();
        let mut points = Vec::new();
        let mut node_of_vertex = vec![usize::MAX; t.vertex_count()];
        for (v, node) in node_of_vertex.iter_mut().enumerate() {
            if self.vertices[v] {
                *node = points.len();
                points.push(TreePoint::Vertex(v));
                spec = spec.vertex(t.vertex_id(v));
            }
        }
        let mut edge_origin = Vec::new();
        for (e, iv) in self.intervals.iter().enumerate() {
            let Some(iv) = iv else { continue };
            let edge = t.edge(e);
            let mut endpoint = |off: f64, tag: &str, spec: &mut TreeSpec| -> String {
                if off == 0.0 {
                    t.vertex_id(edge.u).to_string()
                } else if off == edge.w {
                    t.vertex_id(edge.v).to_string()
                } else {
                    let id = format!("~e{e}{tag}");
                    spec.vertices.push(id.clone());
                    points.push(TreePoint::Interior {
                        edge: e,
                        offset: off,
                    });
                    id
                }
            };
            let a = endpoint(iv.lo, "a", &mut spec);
            if iv.hi > iv.lo {
                let b = endpoint(iv.hi, "b", &mut spec);
                spec = spec.edge(a, b, iv.hi - iv.lo);
                edge_origin.push(e);
            }
        }
        let tree = MetricTree::build(&spec).ok()?;
        Some(InducedTree {
            tree,
            points,
            edge_origin,
        })
    }

    /// Serializable form: member vertex ids and per-edge intervals.
    pub fn to_record(&self, t: &MetricTree) -> ConvexSubtreeRecord {
        ConvexSubtreeRecord {
            vertices: (0..t.vertex_count())
                .filter(|&v| self.vertices[v])
                .map(|v| t.vertex_id(v).to_string())
                .collect(),
            intervals: self
                .intervals
                .iter()
                .enumerate()
                .filter_map(|(e, iv)| {
                    iv.map(|iv| EdgeInterval {
                        u: t.vertex_id(t.edge(e).u).to_string(),
                        v: t.vertex_id(t.edge(e).v).to_string(),
                        lo: iv.lo,
                        hi: iv.hi,
                    })
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeInterval {
    pub u: String,
    pub v: String,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexSubtreeRecord {
    pub vertices: Vec<String>,
    pub intervals: Vec<EdgeInterval>,
}

/// A convex subtree rebuilt as a standalone tree. Node `k` of `tree` is the
/// original point `points[k]`; edge `k` lies inside original edge
/// `edge_origin[k]`.
#[derive(Clone, Debug)]
pub struct InducedTree {
    pub tree: MetricTree,
    points: Vec<TreePoint>,
    edge_origin: Vec<EdgeId>,
}

impl InducedTree {
    /// Maps a point of the induced tree back into the original tree.
    pub fn to_original(&self, t: &MetricTree, p: &TreePoint) -> TreePoint {
        match *p {
            TreePoint::Vertex(v) => self.points[v],
            TreePoint::Interior { edge, offset } => {
                let e = self.edge_origin[edge];
                let ne = self.tree.edge(edge);
                let orig = t.edge(e);
                let off = |q: &TreePoint| match *q {
                    TreePoint::Vertex(v) if v == orig.u => 0.0,
                    TreePoint::Vertex(_) => orig.w,
                    TreePoint::Interior { offset, .. } => offset,
                };
                let (a, b) = (off(&self.points[ne.u]), off(&self.points[ne.v]));
                let o = if b >= a { a + offset } else { a - offset };
                t.edge_point(e, o)
            }
        }
    }
}

/// Closed ball `{x : d(center, x) <= r}`.
pub fn ball(t: &MetricTree, center: &TreePoint, r: f64) -> Result<ConvexSubtree> {
    t.check_point(center)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::OutOfRange {
            what: "radius",
            value: r,
        });
    }
    let tol = DEFAULT_TOL;
    let mut s = ConvexSubtree::empty(t);
    for v in 0..t.vertex_count() {
        s.vertices[v] = t.dist(center, &TreePoint::Vertex(v)) <= r + tol;
    }
    for (e, edge) in t.edges().iter().enumerate() {
        let iv = match *center {
            TreePoint::Interior { edge: ce, offset } if ce == e => Some(Interval {
                lo: (offset - r).max(0.0),
                hi: (offset + r).min(edge.w),
            }),
            _ => {
                let du = t.dist(center, &TreePoint::Vertex(edge.u));
                let dv = t.dist(center, &TreePoint::Vertex(edge.v));
                if du <= dv {
                    (r + tol >= du).then(|| Interval {
                        lo: 0.0,
                        hi: (r - du).clamp(0.0, edge.w),
                    })
                } else {
                    (r + tol >= dv).then(|| Interval {
                        lo: (edge.w - (r - dv)).clamp(0.0, edge.w),
                        hi: edge.w,
                    })
                }
            }
        };
        s.intervals[e] = iv;
    }
    s.normalize(t, tol);
    Ok(s)
}

/// Intersection of a nonempty family.
pub fn intersect(t: &MetricTree, sets: &[ConvexSubtree]) -> Result<ConvexSubtree> {
    let (first, rest) = sets
        .split_first()
        .ok_or_else(|| Error::InvalidParameter("intersection of an empty family".into()))?;
    Ok(rest
        .iter()
        .fold(first.clone(), |acc, s| acc.intersect(s, t)))
}

/// Smallest closed convex set containing `pts`: the union of the segments
/// from the first point to every other.
pub fn convex_hull(t: &MetricTree, pts: &[TreePoint]) -> Result<ConvexSubtree> {
    for p in pts {
        t.check_point(p)?;
    }
    let Some(first) = pts.first() else {
        return Ok(ConvexSubtree::empty(t));
    };
    let mut s = ConvexSubtree::singleton(t, first);
    for p in &pts[1..] {
        if let TreePoint::Vertex(v) = *p {
            s.vertices[v] = true;
        }
        let seg = t.segment_unchecked(first, p);
        if seg.pieces.is_empty() {
            continue;
        }
        for piece in &seg.pieces {
            let (lo, hi) = (piece.lo(), piece.hi());
            let slot = &mut s.intervals[piece.edge];
            *slot = Some(match *slot {
                Some(iv) => Interval {
                    lo: iv.lo.min(lo),
                    hi: iv.hi.max(hi),
                },
                None => Interval { lo, hi },
            });
            let edge = t.edge(piece.edge);
            if lo == 0.0 {
                s.vertices[edge.u] = true;
            }
            if hi == edge.w {
                s.vertices[edge.v] = true;
            }
        }
    }
    s.normalize_keep_flags(t);
    Ok(s)
}

/// Largest pairwise distance of a point list.
pub fn diameter(t: &MetricTree, pts: &[TreePoint]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.max(t.dist(&pts[i], &pts[j]));
        }
    }
    best
}

/// Center and radius of the smallest enclosing ball: the midpoint of a
/// diametral pair and half the diameter. Ties pick the lexicographically
/// smallest index pair.
pub fn chebyshev_center(t: &MetricTree, pts: &[TreePoint]) -> Result<(TreePoint, f64)> {
    if pts.is_empty() {
        return Err(Error::InvalidParameter(
            "Chebyshev center of an empty set".into(),
        ));
    }
    for p in pts {
        t.check_point(p)?;
    }
    let mut best = (0.0f64, 0, 0);
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = t.dist(&pts[i], &pts[j]);
            if d > best.0 + DEFAULT_TOL {
                best = (d, i, j);
            }
        }
    }
    let (d, i, j) = best;
    let seg = t.segment_unchecked(&pts[i], &pts[j]);
    let center = t.point_at_unchecked(&seg, seg.length / 2.0);
    Ok((center, d / 2.0))
}

/// Chebyshev center of a convex set, computed over its extreme points.
pub fn chebyshev_center_of_set(t: &MetricTree, s: &ConvexSubtree) -> Result<(TreePoint, f64)> {
    chebyshev_center(t, &s.extreme_points(t))
}

/// Nearest point (gate) of `s` to `y`.
pub fn project(t: &MetricTree, y: &TreePoint, s: &ConvexSubtree) -> Result<TreePoint> {
    t.check_point(y)?;
    if s.contains(y, DEFAULT_TOL) {
        return Ok(*y);
    }
    let target = *s
        .extreme_points(t)
        .first()
        .ok_or_else(|| Error::InvalidParameter("projection onto an empty set".into()))?;
    let seg = t.segment_unchecked(y, &target);
    for piece in &seg.pieces {
        let edge = t.edge(piece.edge);
        let start_vertex = if piece.from == 0.0 {
            Some(edge.u)
        } else if piece.from == edge.w {
            Some(edge.v)
        } else {
            None
        };
        if let Some(v) = start_vertex.filter(|&v| s.has_vertex(v)) {
            return Ok(TreePoint::Vertex(v));
        }
        if let Some(iv) = s.interval(piece.edge) {
            let lo = piece.lo().max(iv.lo);
            let hi = piece.hi().min(iv.hi);
            if lo <= hi + DEFAULT_TOL {
                let entry = if piece.to >= piece.from { lo } else { hi };
                return Ok(t.edge_point(piece.edge, entry));
            }
        }
        let end_vertex = if piece.to == 0.0 {
            Some(edge.u)
        } else if piece.to == edge.w {
            Some(edge.v)
        } else {
            None
        };
        if let Some(v) = end_vertex.filter(|&v| s.has_vertex(v)) {
            return Ok(TreePoint::Vertex(v));
        }
    }
    Ok(target)
}

/// Points with positive weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPoints {
    points: Vec<TreePoint>,
    weights: Vec<f64>,
}

impl WeightedPoints {
    pub fn new(points: Vec<TreePoint>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} points with {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(&w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::OutOfRange {
                what: "weight",
                value: w,
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange {
                what: "weight sum",
                value: total,
            });
        }
        Ok(Self { points, weights })
    }

    pub fn uniform(points: Vec<TreePoint>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0 / n as f64; n])
    }

    pub fn points(&self) -> &[TreePoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_k α_k d(x_k, x)`.
    pub fn mean_distance(&self, t: &MetricTree, x: &TreePoint) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * t.dist(p, x))
            .sum()
    }
}

/// The barycenter set `{x0 : d(x0, x) <= Σ α_k d(x_k, x) for all x}`,
/// computed as the intersection of the leaf-constraint balls.
pub fn barycenter_set(t: &MetricTree, wp: &WeightedPoints) -> Result<ConvexSubtree> {
    for p in wp.points() {
        t.check_point(p)?;
    }
    let leaves = t.leaves();
    if leaves.is_empty() {
        return Ok(ConvexSubtree::whole(t));
    }
    let radii: Vec<f64> = leaves.iter().map(|l| wp.mean_distance(t, l)).collect();
    barycenter_set_from_radii(t, &leaves, &radii)
}

/// `⋂_i B(center_i, r_i)`.
pub fn barycenter_set_from_radii(
    t: &MetricTree,
    centers: &[TreePoint],
    radii: &[f64],
) -> Result<ConvexSubtree> {
    if centers.len() != radii.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} centers with {} radii",
            centers.len(),
            radii.len()
        )));
    }
    let balls = centers
        .iter()
        .zip(radii)
        .map(|(c, &r)| ball(t, c, r))
        .collect::<Result<Vec<_>>>()?;
    if balls.is_empty() {
        return Ok(ConvexSubtree::whole(t));
    }
    intersect(t, &balls)
}
