//! Isometric embeddings of finitely generated trees into finite-dimensional
//! ℓ1 and ℓ∞, the weighted four-atom tripod construction, and distortion
//! checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::checks::FiniteMetric;
use crate::error::{Error, Result};
use crate::generators::{gen_spider, spider_point};
use crate::tree::{MetricTree, TreePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    Linf,
}

impl Norm {
    /// `Σ w_i |a_i - b_i|` for ℓ1 (unit weights when absent), `max |a_i - b_i|`
    /// for ℓ∞. Weights are ignored by ℓ∞.
    pub fn distance(self, a: &[f64], b: &[f64], weights: Option<&[f64]>) -> f64 {
        match self {
            Norm::L1 => match weights {
                Some(w) => a
                    .iter()
                    .zip(b)
                    .zip(w)
                    .map(|((x, y), w)| w * (x - y).abs())
                    .sum(),
                None => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            },
            Norm::Linf => a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs())),
        }
    }

    pub fn length(self, a: &[f64], weights: Option<&[f64]>) -> f64 {
        self.distance(a, &vec![0.0; a.len()], weights)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPoint {
    pub label: String,
    pub coords: Vec<f64>,
}

/// Images of labeled points in a normed coordinate space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPointSet {
    pub norm: Norm,
    pub coord_labels: Vec<String>,
    pub weights: Option<Vec<f64>>,
    pub points: Vec<EmbeddedPoint>,
}

impl EmbeddedPointSet {
    pub fn new(
        norm: Norm,
        coord_labels: Vec<String>,
        weights: Option<Vec<f64>>,
        points: Vec<EmbeddedPoint>,
    ) -> Result<Self> {
        let dim = coord_labels.len();
        if let Some(w) = &weights {
            if w.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "{} weights for {dim} coordinates",
                    w.len()
                )));
            }
            if let Some(&x) = w.iter().find(|&&x| !(x.is_finite() && x > 0.0)) {
                return Err(Error::OutOfRange {
                    what: "coordinate weight",
                    value: x,
                });
            }
        }
        if let Some(p) = points.iter().find(|p| p.coords.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "point `{}` has {} coordinates, expected {dim}",
                p.label,
                p.coords.len()
            )));
        }
        Ok(Self {
            norm,
            coord_labels,
            weights,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.coord_labels.len()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.norm.distance(
            &self.points[i].coords,
            &self.points[j].coords,
            self.weights.as_deref(),
        )
    }

    /// Pairwise image distances as a finite metric.
    pub fn to_finite_metric(&self) -> FiniteMetric {
        let mut m = FiniteMetric::from_fn(self.points.len(), |i, j| self.distance(i, j));
        m.labels = self.points.iter().map(|p| p.label.clone()).collect();
        m
    }

    /// Plain-text listing: a header line per attribute, then one line per point.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "norm {}\n",
            match self.norm {
                Norm::L1 => "l1",
                Norm::Linf => "linf",
            }
        );
        s += &format!("coords {}\n", self.coord_labels.join(" "));
        if let Some(w) = &self.weights {
            let w: Vec<String> = w.iter().map(|x| format!("{x}")).collect();
            s += &format!("weights {}\n", w.join(" "));
        }
        for p in &self.points {
            let c: Vec<String> = p.coords.iter().map(|x| format!("{x}")).collect();
            s += &format!("{} {}\n", p.label, c.join(" "));
        }
        s
    }
}

/// A map from the points of a tree into a normed coordinate space.
pub trait TreeEmbedding {
    fn tree(&self) -> &MetricTree;
    fn norm(&self) -> Norm;
    fn coord_labels(&self) -> Vec<String>;
    fn weights(&self) -> Option<Vec<f64>> {
        None
    }
    fn embed(&self, p: &TreePoint) -> Result<Vec<f64>>;

    fn embed_all(&self, pts: &[TreePoint]) -> Result<EmbeddedPointSet> {
        let points = pts
            .iter()
            .map(|p| {
                Ok(EmbeddedPoint {
                    label: self.tree().format_point(p),
                    coords: self.embed(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EmbeddedPointSet::new(self.norm(), self.coord_labels(), self.weights(), points)
    }
}

fn edge_label(t: &MetricTree, e: usize) -> String {
    let edge = t.edge(e);
    format!("{}-{}", t.vertex_id(edge.u), t.vertex_id(edge.v))
}

/// `U(x)_e = |[root, x] ∩ e|`, one coordinate per edge. An interior root
/// splits its edge into two coordinates, one per side.
#[derive(Clone, Debug)]
pub struct L1Embedding<'a> {
    tree: &'a MetricTree,
    root: TreePoint,
}

pub fn embed_l1(t: &MetricTree, root: TreePoint) -> Result<L1Embedding<'_>> {
    t.check_point(&root)?;
    Ok(L1Embedding { tree: t, root })
}

impl TreeEmbedding for L1Embedding<'_> {
    fn tree(&self) -> &MetricTree {
        self.tree
    }

    fn norm(&self) -> Norm {
        Norm::L1
    }

    fn coord_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = (0..self.tree.edge_count())
            .map(|e| edge_label(self.tree, e))
            .collect();
        if let TreePoint::Interior { edge, offset } = self.root {
            labels[edge] = format!("{}@0..{offset}", labels[edge]);
            labels.push(format!(
                "{}@{offset}..{}",
                edge_label(self.tree, edge),
                self.tree.edge(edge).w
            ));
        }
        labels
    }

    fn embed(&self, p: &TreePoint) -> Result<Vec<f64>> {
        let seg = self.tree.segment(&self.root, p)?;
        let split = match self.root {
            TreePoint::Interior { edge, offset } => Some((edge, offset)),
            TreePoint::Vertex(_) => None,
        };
        let mut v = vec![0.0; self.tree.edge_count() + split.is_some() as usize];
        for piece in &seg.pieces {
            match split {
                Some((e, offset)) if e == piece.edge && piece.hi() > offset => {
                    v[self.tree.edge_count()] += piece.len();
                }
                _ => v[piece.edge] += piece.len(),
            }
        }
        Ok(v)
    }
}

/// `J(x)_m = d(x, m) - d(base, m)` over a list of landmarks.
#[derive(Clone, Debug)]
pub struct LinfEmbedding<'a> {
    tree: &'a MetricTree,
    base: TreePoint,
    landmarks: Vec<TreePoint>,
}

impl LinfEmbedding<'_> {
    pub fn landmarks(&self) -> &[TreePoint] {
        &self.landmarks
    }
}

/// Landmarks default to the leaves, which makes the map isometric.
pub fn embed_linf(
    t: &MetricTree,
    base: TreePoint,
    landmarks: Option<Vec<TreePoint>>,
) -> Result<LinfEmbedding<'_>> {
    t.check_point(&base)?;
    let landmarks = match landmarks {
        Some(l) => {
            for p in &l {
                t.check_point(p)?;
            }
            l
        }
        None => {
            let leaves = t.leaves();
            if leaves.is_empty() {
                vec![TreePoint::Vertex(t.root())]
            } else {
                leaves
            }
        }
    };
    if landmarks.is_empty() {
        return Err(Error::InvalidParameter("landmark list is empty".into()));
    }
    Ok(LinfEmbedding {
        tree: t,
        base,
        landmarks,
    })
}

impl TreeEmbedding for LinfEmbedding<'_> {
    fn tree(&self) -> &MetricTree {
        self.tree
    }

    fn norm(&self) -> Norm {
        Norm::Linf
    }

    fn coord_labels(&self) -> Vec<String> {
        self.landmarks
            .iter()
            .map(|m| self.tree.format_point(m))
            .collect()
    }

    fn embed(&self, p: &TreePoint) -> Result<Vec<f64>> {
        self.tree.check_point(p)?;
        Ok(self
            .landmarks
            .iter()
            .map(|m| self.tree.dist(p, m) - self.tree.dist(&self.base, m))
            .collect())
    }
}

/// The unit spider with `2^N` legs mapped into ℓ∞^N by `(i, t) ↦ t·v_i`,
/// where `v_i` runs over the sign vectors `{-1, 1}^N`.
#[derive(Clone, Debug)]
pub struct SpiderCube {
    tree: MetricTree,
    dim: usize,
}

pub const MAX_CUBE_DIM: usize = 16;

pub fn embed_spider_cube(n: usize) -> Result<SpiderCube> {
    if n == 0 || n > MAX_CUBE_DIM {
        return Err(Error::InvalidParameter(format!(
            "cube dimension {n} must be in 1..={MAX_CUBE_DIM}"
        )));
    }
    let tree = gen_spider(&vec![1.0; 1 << n])?;
    Ok(SpiderCube { tree, dim: n })
}

impl SpiderCube {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn legs(&self) -> usize {
        1 << self.dim
    }

    /// Sign vector of leg `i` (1-based): bit `k` of `i - 1` set means `-1`.
    pub fn vertex(&self, leg: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|k| if (leg - 1) >> k & 1 == 1 { -1.0 } else { 1.0 })
            .collect()
    }

    pub fn point(&self, leg: usize, t: f64) -> Result<TreePoint> {
        spider_point(&self.tree, leg, t)
    }

    /// `(leg, t)` coordinates of a spider point; the center is `(1, 0)`.
    fn leg_coords(&self, p: &TreePoint) -> (usize, f64) {
        let center = self.tree.root();
        let (e, t) = match *p {
            TreePoint::Vertex(v) if v == center => return (1, 0.0),
            TreePoint::Vertex(v) => (self.tree.parent(v).map(|(_, e)| e).unwrap_or(0), 1.0),
            TreePoint::Interior { edge, .. } => {
                (edge, self.tree.dist(p, &TreePoint::Vertex(center)))
            }
        };
        let edge = self.tree.edge(e);
        let tip = if edge.u == center { edge.v } else { edge.u };
        let leg = self.tree.vertex_id(tip).parse().unwrap_or(1);
        (leg, t)
    }
}

impl TreeEmbedding for SpiderCube {
    fn tree(&self) -> &MetricTree {
        &self.tree
    }

    fn norm(&self) -> Norm {
        Norm::Linf
    }

    fn coord_labels(&self) -> Vec<String> {
        (1..=self.dim).map(|k| format!("x{k}")).collect()
    }

    fn embed(&self, p: &TreePoint) -> Result<Vec<f64>> {
        self.tree.check_point(p)?;
        let (leg, t) = self.leg_coords(p);
        Ok(self.vertex(leg).into_iter().map(|s| s * t).collect())
    }
}

/// Four weighted atoms modelling step functions on `(0, 2]`, with the three
/// unit vectors `f_i`, their mean `g` and the distances `d_i = ‖f_i - g‖`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripodWitness {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub a: f64,
    pub weights: [f64; 4],
    pub f: [[f64; 4]; 3],
    pub g: [f64; 4],
    pub d: [f64; 3],
}

impl TripodWitness {
    pub fn norm(&self, x: &[f64; 4]) -> f64 {
        Norm::L1.length(x, Some(&self.weights))
    }

    pub fn dist(&self, x: &[f64; 4], y: &[f64; 4]) -> f64 {
        Norm::L1.distance(x, y, Some(&self.weights))
    }

    /// Atom boundaries in `[0, 2]`.
    pub fn breakpoints(&self) -> [f64; 5] {
        [0.0, self.c / 2.0, 1.0 - self.c / 2.0, 1.0, 2.0]
    }
}

pub fn tripod_witness_l1(alpha: f64, beta: f64) -> Result<TripodWitness> {
    if !(alpha.is_finite() && beta.is_finite() && 0.0 <= alpha && alpha <= beta && beta < 1.0 / 3.0)
    {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= alpha <= beta < 1/3, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let c = 1.0 - 3.0 * beta;
    let a = (1.0 - 3.0 * alpha) / c;
    let h = 1.0 - a * c / 2.0;
    let weights = [c / 2.0, 1.0 - c, c / 2.0, 1.0];
    let f = [[1.0, 1.0, 1.0, 0.0], [-a, 0.0, 0.0, h], [0.0, 0.0, -a, -h]];
    let mut g = [0.0; 4];
    for k in 0..4 {
        g[k] = (f[0][k] + f[1][k] + f[2][k]) / 3.0;
    }
    let mut w = TripodWitness {
        alpha,
        beta,
        c,
        a,
        weights,
        f,
        g,
        d: [0.0; 3],
    };
    for i in 0..3 {
        w.d[i] = w.dist(&w.f[i], &w.g);
    }
    Ok(w)
}

/// A step function on consecutive intervals `[breaks[k], breaks[k+1])`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || breaks.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "step function needs sorted breaks, one more than values".into(),
            ));
        }
        Ok(Self { breaks, values })
    }

    fn value_at(&self, x: f64) -> f64 {
        self.breaks
            .windows(2)
            .position(|w| w[0] <= x && x < w[1])
            .map_or(0.0, |k| self.values[k])
    }

    /// `∫ |f - g|` computed exactly over the merged breakpoints.
    pub fn l1_distance(&self, other: &StepFunction) -> f64 {
        let mut xs: Vec<f64> = self.breaks.iter().chain(&other.breaks).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                (w[1] - w[0]) * (self.value_at(mid) - other.value_at(mid)).abs()
            })
            .sum()
    }
}

/// The spider with `n` unit legs sent into `L1(1, n + 1)` by
/// `(i, t) ↦ χ_(i, i + t)`.
#[derive(Clone, Debug)]
pub struct SpiderIntervalEmbedding {
    tree: MetricTree,
    n: usize,
}

pub fn spider_interval_embedding(n: usize) -> Result<SpiderIntervalEmbedding> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "spider needs at least one leg".into(),
        ));
    }
    Ok(SpiderIntervalEmbedding {
        tree: gen_spider(&vec![1.0; n])?,
        n,
    })
}

impl SpiderIntervalEmbedding {
    pub fn tree(&self) -> &MetricTree {
        &self.tree
    }

    pub fn legs(&self) -> usize {
        self.n
    }

    pub fn image(&self, p: &TreePoint) -> Result<StepFunction> {
        self.tree.check_point(p)?;
        let center = TreePoint::Vertex(self.tree.root());
        let t = self.tree.dist(p, &center);
        if t == 0.0 {
            return StepFunction::new(vec![1.0, 1.0], vec![0.0]);
        }
        let e = match *p {
            TreePoint::Vertex(v) => self.tree.parent(v).map(|(_, e)| e).unwrap_or(0),
            TreePoint::Interior { edge, .. } => edge,
        };
        let edge = self.tree.edge(e);
        let tip = if edge.u == self.tree.root() {
            edge.v
        } else {
            edge.u
        };
        let leg: f64 = self.tree.vertex_id(tip).parse().unwrap_or(1.0);
        StepFunction::new(vec![leg, leg + t], vec![1.0])
    }

    /// Mean of the leg endpoints: the constant `1/n` on `[1, n + 1)`.
    pub fn barycenter(&self) -> StepFunction {
        let breaks = (1..=self.n + 1).map(|k| k as f64).collect();
        StepFunction::new(breaks, vec![1.0 / self.n as f64; self.n]).expect("sorted breaks")
    }

    pub fn distance_to_barycenter(&self, p: &TreePoint) -> Result<f64> {
        Ok(self.image(p)?.l1_distance(&self.barycenter()))
    }
}

/// Worst additive error and distortion of an embedding on a point sample.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport {
    pub max_additive_error: f64,
    pub worst_pair: Option<(TreePoint, TreePoint)>,
    pub lipschitz_constant: f64,
    pub pairs_checked: usize,
}

/// Compares image and tree distances on all pairs of `pts`, or on `sample`
/// seeded random pairs when given.
pub fn verify_isometry<E: TreeEmbedding + ?Sized>(
    emb: &E,
    pts: &[TreePoint],
    sample: Option<usize>,
    seed: u64,
) -> Result<IsometryReport> {
    let t = emb.tree();
    let images = emb.embed_all(pts)?;
    let pairs: Vec<(usize, usize)> = match sample {
        None => (0..pts.len())
            .flat_map(|i| (i + 1..pts.len()).map(move |j| (i, j)))
            .collect(),
        Some(k) => {
            if pts.len() < 2 {
                Vec::new()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..k)
                    .map(|_| (rng.gen_range(0..pts.len()), rng.gen_range(0..pts.len())))
                    .collect()
            }
        }
    };
    let mut report = IsometryReport {
        max_additive_error: 0.0,
        worst_pair: None,
        lipschitz_constant: 1.0,
        pairs_checked: pairs.len(),
    };
    let (mut expand, mut contract) = (0.0f64, 0.0f64);
    for &(i, j) in &pairs {
        let d = t.dist(&pts[i], &pts[j]);
        let e = images.distance(i, j);
        let err = (e - d).abs();
        if report.worst_pair.is_none() || err > report.max_additive_error {
            report.max_additive_error = err;
            report.worst_pair = Some((pts[i], pts[j]));
        }
        if d > 0.0 {
            if e == 0.0 {
                contract = f64::INFINITY;
            } else {
                expand = expand.max(e / d);
                contract = contract.max(d / e);
            }
        }
    }
    if contract.is_infinite() {
        report.lipschitz_constant = f64::INFINITY;
    } else if expand > 0.0 {
        report.lipschitz_constant = expand * contract;
    }
    Ok(report)
}

/// `sup d'(x,y)/d(x,y) · sup d(x,y)/d'(x,y)` over distinct pairs.
pub fn lipschitz_constant(source: &FiniteMetric, target: &FiniteMetric) -> Result<f64> {
    let n = source.len();
    if target.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "source has {n} points, target has {}",
            target.len()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    let (mut expand, mut contract) = (0.0f64, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let (d, e) = (source.d(i, j), target.d(i, j));
            if d == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "source points {i} and {j} coincide"
                )));
            }
            if e == 0.0 {
                return Err(Error::Collapsed { i, j });
            }
            expand = expand.max(e / d);
            contract = contract.max(d / e);
        }
    }
    Ok(expand * contract)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_random_tree;

    #[test]
    fn l1_on_spider() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let u = embed_l1(&t, t.vertex("o").unwrap()).unwrap();
        let p = spider_point(&t, 1, 0.3).unwrap();
        let q = spider_point(&t, 2, 0.5).unwrap();
        let s = u.embed_all(&[p, q, t.vertex("o").unwrap()]).unwrap();
        assert!((s.distance(0, 1) - 0.8).abs() < 1e-15);
        assert!(s.points[2].coords.iter().all(|&x| x == 0.0));
        assert_eq!(s.points[0].coords.iter().filter(|&&x| x != 0.0).count(), 1);
    }

    #[test]
    fn linf_on_tripod() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let j = embed_linf(&t, t.vertex("o").unwrap(), None).unwrap();
        let s = j
            .embed_all(&[
                t.vertex("1").unwrap(),
                t.vertex("2").unwrap(),
                t.vertex("o").unwrap(),
            ])
            .unwrap();
        assert_eq!(s.distance(0, 1), 2.0);
        assert!(s.points[2].coords.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn random_trees_are_exact() {
        for seed in 0..5 {
            let t = gen_random_tree(30, seed, (0.1, 2.0)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<TreePoint> = (0..40).map(|_| t.sample_point(&mut rng)).collect();
            let root = pts[0];
            let r1 = verify_isometry(&embed_l1(&t, root).unwrap(), &pts, Some(200), seed).unwrap();
            let r2 = verify_isometry(&embed_linf(&t, root, None).unwrap(), &pts, Some(200), seed)
                .unwrap();
            assert!(r1.max_additive_error < 1e-9, "{r1:?}");
            assert!(r2.max_additive_error < 1e-9, "{r2:?}");
        }
    }

    #[test]
    fn base_only_landmark_is_degenerate() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let o = t.vertex("o").unwrap();
        let j = embed_linf(&t, o, Some(vec![o])).unwrap();
        let pts = vec![t.vertex("1").unwrap(), t.vertex("2").unwrap()];
        let r = verify_isometry(&j, &pts, None, 0).unwrap();
        assert_eq!(r.max_additive_error, 2.0);
        assert_eq!(r.lipschitz_constant, f64::INFINITY);
    }

    #[test]
    fn cube_examples() {
        let c = embed_spider_cube(2).unwrap();
        let p = c.point(1, 0.25).unwrap();
        let q = c.point(2, 0.5).unwrap();
        let r = c.point(1, 0.75).unwrap();
        let s = c.embed_all(&[p, q, r]).unwrap();
        assert_eq!(s.distance(0, 1), 0.75);
        assert_eq!(s.distance(0, 2), 0.5);
        assert!(embed_spider_cube(0).is_err());
    }

    #[test]
    fn tripod_witness_identities() {
        let w = tripod_witness_l1(0.1, 0.2).unwrap();
        assert!((w.d[0] - 0.9).abs() < 1e-12);
        assert!((w.d[1] - 1.2).abs() < 1e-12);
        assert!((w.d[2] - 1.2).abs() < 1e-12);
        for i in 0..3 {
            assert!((w.norm(&w.f[i]) - 1.0).abs() < 1e-12);
            for j in 0..3 {
                if i != j {
                    assert!((w.dist(&w.f[i], &w.f[j]) - 2.0).abs() < 1e-12);
                    assert!((0..4).all(|k| w.f[i][k] * w.f[j][k] <= 0.0));
                }
            }
        }
        let z = tripod_witness_l1(0.0, 0.0).unwrap();
        assert_eq!((z.c, z.a), (1.0, 1.0));
        assert!(z.d.iter().all(|d| (d - 1.0).abs() < 1e-15));
        assert!(tripod_witness_l1(0.2, 0.1).is_err());
        assert!(tripod_witness_l1(0.0, 1.0 / 3.0).is_err());
    }

    #[test]
    fn interval_embedding_distances() {
        let s = spider_interval_embedding(3).unwrap();
        let t = s.tree();
        assert!((s.distance_to_barycenter(&t.vertex("o").unwrap()).unwrap() - 1.0).abs() < 1e-15);
        let tip = t.vertex("1").unwrap();
        assert!((s.distance_to_barycenter(&tip).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        let p = spider_point(t, 2, 0.6).unwrap();
        assert!((s.distance_to_barycenter(&p).unwrap() - (0.6 / 3.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_examples() {
        let m = FiniteMetric::from_fn(4, |i, j| (i as f64 - j as f64).abs());
        assert_eq!(lipschitz_constant(&m, &m).unwrap(), 1.0);
        let scaled = FiniteMetric::from_fn(4, |i, j| 3.0 * m.d(i, j));
        assert!((lipschitz_constant(&m, &scaled).unwrap() - 1.0).abs() < 1e-15);
        let collapsed = FiniteMetric::from_fn(4, |i, j| if i + j == 1 { 0.0 } else { m.d(i, j) });
        assert!(matches!(
            lipschitz_constant(&m, &collapsed),
            Err(Error::Collapsed { .. })
        ));
    }
}
