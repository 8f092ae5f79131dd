//! Covering, net and packing numbers of subsets of a tree and of the whole
//! tree, covering profiles, the convex-hull covering bound, brackets for
//! Kolmogorov widths, and measures of non-compactness.
//!
//! Since trees are centered, a finite set fits in a closed ball of radius ε
//! exactly when its diameter is at most 2ε, so the partition number 𝒩_ε and
//! the net number 𝒦_ε agree. Both are computed exactly: by branch and bound
//! for small sets and by a deepest-point greedy otherwise. The greedy places a
//! center ε toward the root from the deepest uncovered point; an exchange
//! argument shows no optimal cover does better.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::convexity::{ball, convex_hull, diameter};
use crate::error::{Error, Result};
use crate::tree::{MetricTree, TreePoint, DEFAULT_TOL};

/// Largest subset handled by the exact partition search.
pub const EXACT_PARTITION_LIMIT: usize = 15;
/// Largest subset handled by the exact independent-set search.
pub const EXACT_PACKING_LIMIT: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMethod {
    BranchAndBound,
    TreeGreedy,
    ContinuumGreedy,
    IndependentSet,
    DeepestFirst,
}

/// A cover or packing together with its certificate. For covers, `centers`
/// are ball centers and `parts` the indices each ball is charged with; for
/// packings, `parts` holds the chosen indices as singletons.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverResult {
    pub epsilon: f64,
    pub count: usize,
    pub centers: Vec<TreePoint>,
    pub parts: Vec<Vec<usize>>,
    pub exact: bool,
    pub method: CoverMethod,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "epsilon",
            value: eps,
        })
    }
}

fn check_points(t: &MetricTree, a: &[TreePoint]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("point set is empty".into()));
    }
    a.iter().try_for_each(|p| t.check_point(p))
}

fn pairwise(t: &MetricTree, a: &[TreePoint]) -> Vec<Vec<f64>> {
    a.iter()
        .map(|p| a.iter().map(|q| t.dist(p, q)).collect())
        .collect()
}

/// Point at arclength `min(s, depth)` from `p` toward the root.
fn toward_root(t: &MetricTree, p: &TreePoint, s: f64) -> TreePoint {
    let seg = t.segment_unchecked(p, &TreePoint::Vertex(t.root()));
    t.point_at_unchecked(&seg, s.min(seg.length))
}

fn deepest_order(t: &MetricTree, a: &[TreePoint]) -> Vec<usize> {
    let depth: Vec<f64> = a.iter().map(|p| t.point_depth(p)).collect();
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| depth[j].total_cmp(&depth[i]).then(i.cmp(&j)));
    order
}

/// Minimum number of closed ε-balls (centers anywhere on the tree) covering
/// `a`, by the deepest-point greedy.
pub fn net_cover_subset(t: &MetricTree, a: &[TreePoint], eps: f64) -> Result<CoverResult> {
    check_eps(eps)?;
    check_points(t, a)?;
    let tol = DEFAULT_TOL;
    let mut covered = vec![false; a.len()];
    let mut centers = Vec::new();
    let mut parts = Vec::new();
    for i in deepest_order(t, a) {
        if covered[i] {
            continue;
        }
        let c = toward_root(t, &a[i], eps);
        let mut part = Vec::new();
        for (j, p) in a.iter().enumerate() {
            if !covered[j] && t.dist(&c, p) <= eps + tol {
                covered[j] = true;
                part.push(j);
            }
        }
        centers.push(c);
        parts.push(part);
    }
    Ok(CoverResult {
        epsilon: eps,
        count: centers.len(),
        centers,
        parts,
        exact: true,
        method: CoverMethod::TreeGreedy,
    })
}

struct PartitionSearch<'a> {
    d: &'a [Vec<f64>],
    limit: f64,
    groups: Vec<Vec<usize>>,
    best: Vec<Vec<usize>>,
}

impl PartitionSearch<'_> {
    fn run(&mut self, i: usize) {
        if self.groups.len() >= self.best.len() {
            return;
        }
        if i == self.d.len() {
            self.best = self.groups.clone();
            return;
        }
        for g in 0..self.groups.len() {
            if self.groups[g].iter().all(|&j| self.d[i][j] <= self.limit) {
                self.groups[g].push(i);
                self.run(i + 1);
                self.groups[g].pop();
            }
        }
        self.groups.push(vec![i]);
        self.run(i + 1);
        self.groups.pop();
    }
}

/// Minimum partition of `a` into parts of diameter at most 2ε, by exhaustive
/// branch and bound seeded with the greedy cover.
pub fn partition_cover_exact(t: &MetricTree, a: &[TreePoint], eps: f64) -> Result<CoverResult> {
    let greedy = net_cover_subset(t, a, eps)?;
    let d = pairwise(t, a);
    let mut search = PartitionSearch {
        d: &d,
        limit: 2.0 * eps + DEFAULT_TOL,
        groups: Vec::new(),
        best: greedy.parts.clone(),
    };
    // Any strictly better partition replaces the greedy one.
    search.best.push(Vec::new());
    search.run(0);
    let parts = if search.best.len() > greedy.parts.len() {
        greedy.parts
    } else {
        search.best
    };
    let centers = parts
        .iter()
        .map(|part| {
            let pts: Vec<TreePoint> = part.iter().map(|&j| a[j]).collect();
            crate::convexity::chebyshev_center(t, &pts).map(|(c, _)| c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverResult {
        epsilon: eps,
        count: parts.len(),
        centers,
        parts,
        exact: true,
        method: CoverMethod::BranchAndBound,
    })
}

/// 𝒩_ε(A) = 𝒦_ε(A): branch and bound up to [`EXACT_PARTITION_LIMIT`]
/// points, the deepest-point greedy above.
pub fn cover_number_subset(t: &MetricTree, a: &[TreePoint], eps: f64) -> Result<CoverResult> {
    if a.len() <= EXACT_PARTITION_LIMIT {
        partition_cover_exact(t, a, eps)
    } else {
        net_cover_subset(t, a, eps)
    }
}

/// True when every part has diameter at most 2ε and lies in its ball.
pub fn verify_cover(t: &MetricTree, a: &[TreePoint], cover: &CoverResult, tol: f64) -> bool {
    let mut seen = vec![false; a.len()];
    for (c, part) in cover.centers.iter().zip(&cover.parts) {
        for &i in part {
            if seen[i] || t.dist(c, &a[i]) > cover.epsilon + tol {
                return false;
            }
            seen[i] = true;
            if part
                .iter()
                .any(|&j| t.dist(&a[i], &a[j]) > 2.0 * cover.epsilon + tol)
            {
                return false;
            }
        }
    }
    seen.iter().all(|&s| s) && cover.count == cover.parts.len()
}

/// Minimum number of closed ε-balls covering the whole tree.
///
/// One bottom-up pass: each subtree reports the depth of its farthest
/// uncovered point below the current position and the remaining reach of the
/// nearest center already placed. A center goes in exactly when the uncovered
/// depth would otherwise exceed ε.
pub fn cover_number_tree(t: &MetricTree, eps: f64) -> Result<CoverResult> {
    check_eps(eps)?;
    let tol = DEFAULT_TOL;
    let n = t.vertex_count();
    let mut need: Vec<Option<f64>> = vec![None; n];
    let mut reach: Vec<Option<f64>> = vec![None; n];
    let mut centers = Vec::new();
    let max_opt = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    };
    for &v in t.bfs_order().iter().rev() {
        let mut nd = need[v];
        let mut rc = reach[v];
        if let (Some(x), Some(r)) = (nd, rc) {
            if r + tol >= x {
                nd = None;
            }
        }
        if rc.is_none_or(|r| r < -tol) {
            nd = max_opt(nd, Some(0.0));
        }
        let parent = t.parent(v);
        if nd.is_some_and(|x| x >= eps - tol) || (parent.is_none() && nd.is_some()) {
            centers.push(TreePoint::Vertex(v));
            nd = None;
            rc = Some(eps);
        }
        let Some((parent, e)) = parent else {
            continue;
        };
        let edge = t.edge(e);
        let w = edge.w;
        let at = |s: f64| {
            let s = s.clamp(0.0, w);
            t.edge_point(e, if edge.u == v { s } else { w - s })
        };
        let mut pos = 0.0;
        while pos < w {
            match nd {
                None => {
                    let r = rc.unwrap_or(f64::NEG_INFINITY);
                    if r + tol >= w - pos {
                        rc = Some(r - (w - pos));
                        pos = w;
                    } else {
                        let adv = r.max(0.0);
                        pos += adv;
                        rc = rc.map(|r| r - adv);
                        nd = Some(0.0);
                    }
                }
                Some(x) => {
                    let step = (eps - x).max(0.0);
                    if pos + step < w {
                        pos += step;
                        centers.push(at(pos));
                        nd = None;
                        rc = Some(eps);
                    } else {
                        nd = Some(x + (w - pos));
                        rc = rc.map(|r| r - (w - pos));
                        pos = w;
                    }
                }
            }
        }
        need[parent] = max_opt(need[parent], nd);
        reach[parent] = max_opt(reach[parent], rc);
    }
    Ok(CoverResult {
        epsilon: eps,
        count: centers.len(),
        centers,
        parts: Vec::new(),
        exact: true,
        method: CoverMethod::ContinuumGreedy,
    })
}

/// True when the closed ε-balls around `centers` cover every point of `t`.
pub fn covers_tree(t: &MetricTree, centers: &[TreePoint], eps: f64, tol: f64) -> Result<bool> {
    let balls = centers
        .iter()
        .map(|c| ball(t, c, eps + tol))
        .collect::<Result<Vec<_>>>()?;
    for v in 0..t.vertex_count() {
        if !balls.iter().any(|b| b.has_vertex(v)) {
            return Ok(false);
        }
    }
    for (e, edge) in t.edges().iter().enumerate() {
        let mut ivs: Vec<(f64, f64)> = balls
            .iter()
            .filter_map(|b| b.interval(e).map(|iv| (iv.lo, iv.hi)))
            .collect();
        ivs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut reached = 0.0;
        for (lo, hi) in ivs {
            if lo > reached + tol {
                return Ok(false);
            }
            reached = f64::max(reached, hi);
        }
        if reached < edge.w - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

struct PackingSearch {
    conflicts: Vec<u32>,
    best: u32,
}

impl PackingSearch {
    fn run(&mut self, chosen: u32, open: u32) {
        if open == 0 {
            if chosen.count_ones() > self.best.count_ones() {
                self.best = chosen;
            }
            return;
        }
        if chosen.count_ones() + open.count_ones() <= self.best.count_ones() {
            return;
        }
        let v = open.trailing_zeros();
        let bit = 1u32 << v;
        self.run(chosen | bit, open & !bit & !self.conflicts[v as usize]);
        if self.conflicts[v as usize] & open != 0 {
            self.run(chosen, open & !bit);
        }
    }
}

fn separated_deepest_first(t: &MetricTree, a: &[TreePoint], eps: f64) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in deepest_order(t, a) {
        if chosen
            .iter()
            .all(|&c| t.dist(&a[c], &a[i]) >= eps - DEFAULT_TOL)
        {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// ℳ_ε(A): the largest subset with pairwise distances at least ε. Exact
/// independent-set search up to [`EXACT_PACKING_LIMIT`] points, the
/// deepest-first greedy above (a lower bound).
pub fn separated_max(t: &MetricTree, a: &[TreePoint], eps: f64) -> Result<CoverResult> {
    check_eps(eps)?;
    check_points(t, a)?;
    let (chosen, exact, method) = if a.len() <= EXACT_PACKING_LIMIT {
        let d = pairwise(t, a);
        let conflicts = (0..a.len())
            .map(|i| {
                (0..a.len())
                    .filter(|&j| j != i && d[i][j] < eps - DEFAULT_TOL)
                    .fold(0u32, |m, j| m | 1 << j)
            })
            .collect();
        let greedy = separated_deepest_first(t, a, eps);
        let mut search = PackingSearch {
            conflicts,
            best: greedy.iter().fold(0u32, |m, &j| m | 1 << j),
        };
        search.run(0, (1u32 << a.len()) - 1);
        let chosen = (0..a.len())
            .filter(|&j| search.best >> j & 1 == 1)
            .collect();
        (chosen, true, CoverMethod::IndependentSet)
    } else {
        (
            separated_deepest_first(t, a, eps),
            false,
            CoverMethod::DeepestFirst,
        )
    };
    Ok(CoverResult {
        epsilon: eps,
        count: chosen.len(),
        centers: chosen.iter().map(|&j| a[j]).collect(),
        parts: chosen.iter().map(|&j| vec![j]).collect(),
        exact,
        method,
    })
}

/// Offset of the doubled packing scale in a profile row. It must exceed the
/// separation tolerance, or a pair at distance exactly 2ε still counts.
pub const DOUBLE_SCALE_MARGIN: f64 = 1e-6;

/// What a profile or width computation measures.
#[derive(Clone, Debug, PartialEq)]
pub enum EntropyTarget {
    Points(Vec<TreePoint>),
    /// The whole tree; packings use a skeleton of mesh `delta`.
    WholeTree {
        delta: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub epsilon: f64,
    pub n_cover: usize,
    pub k_net: usize,
    pub m_sep: usize,
    /// ℳ at scale 2ε + [`DOUBLE_SCALE_MARGIN`].
    pub m_sep_double: usize,
    pub chain_holds: bool,
    /// 𝒦_ε < ℳ_ε, recorded rather than treated as an error.
    pub net_below_packing: bool,
}

/// One row per ε. For the whole tree, 𝒩 and 𝒦 both come from the continuum
/// cover and ℳ is computed on the skeleton.
pub fn covering_profile(
    t: &MetricTree,
    target: &EntropyTarget,
    grid: &[f64],
) -> Result<Vec<ProfileRow>> {
    let skeleton;
    let pts: &[TreePoint] = match target {
        EntropyTarget::Points(p) => p,
        EntropyTarget::WholeTree { delta } => {
            skeleton = t.skeleton(*delta)?;
            &skeleton
        }
    };
    grid.iter()
        .map(|&eps| {
            let (n_cover, k_net) = match target {
                EntropyTarget::Points(_) => (
                    cover_number_subset(t, pts, eps)?.count,
                    net_cover_subset(t, pts, eps)?.count,
                ),
                EntropyTarget::WholeTree { .. } => {
                    let k = cover_number_tree(t, eps)?.count;
                    (k, k)
                }
            };
            let m_sep = separated_max(t, pts, eps)?.count;
            let m_sep_double = separated_max(t, pts, 2.0 * eps + DOUBLE_SCALE_MARGIN)?.count;
            Ok(ProfileRow {
                epsilon: eps,
                n_cover,
                k_net,
                m_sep,
                m_sep_double,
                chain_holds: n_cover == k_net && k_net <= m_sep && m_sep_double <= n_cover,
                net_below_packing: k_net < m_sep,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullCoverCheck {
    pub lhs: usize,
    pub subset_cover: usize,
    pub multiplier: usize,
    pub rhs: usize,
    pub diameter: f64,
    pub holds: bool,
}

/// Compares 𝒩_{ε1+ε2}(conv S), computed exactly on the hull as a tree, with
/// 𝒩_{ε1}(S)·max(1, ⌈diam S / (4ε2)⌉).
pub fn hull_cover_check(
    t: &MetricTree,
    s: &[TreePoint],
    eps1: f64,
    eps2: f64,
) -> Result<HullCoverCheck> {
    check_eps(eps1)?;
    check_eps(eps2)?;
    check_points(t, s)?;
    let hull = convex_hull(t, s)?;
    let induced = hull
        .induced_tree(t)
        .ok_or_else(|| Error::InvalidParameter("hull of a nonempty set is empty".into()))?;
    let lhs = cover_number_tree(&induced.tree, eps1 + eps2)?.count;
    let subset_cover = cover_number_subset(t, s, eps1)?.count;
    let diam = diameter(t, s);
    let multiplier = ((diam / (4.0 * eps2)).ceil() as usize).max(1);
    let rhs = subset_cover * multiplier;
    Ok(HullCoverCheck {
        lhs,
        subset_cover,
        multiplier,
        rhs,
        diameter: diam,
        holds: lhs <= rhs,
    })
}

/// The bracket `[c2/2, c1]` around the n-th width.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WidthBounds {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub c1: f64,
    pub c2: f64,
    pub diagnostic: Option<String>,
}

const BISECTION_STEPS: usize = 200;

/// Smallest x in `(lo, hi]` with `ok(x)`, assuming `ok(hi)` and monotonicity.
fn bisect_min(mut lo: f64, mut hi: f64, ok: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// c1 = inf{ε : 𝒦_ε ≤ n} and c2 = sup{ε : ℳ_ε ≥ n + 1}.
///
/// For a finite set both are attained among pairwise distances (halved for
/// c1). For the whole tree c1 is found by bisection on the continuum cover
/// and c2 by bisection on the skeleton, so c2 carries an error of order δ.
pub fn width_bounds(t: &MetricTree, target: &EntropyTarget, n: usize) -> Result<WidthBounds> {
    WidthContext::new(t, target)?.bounds(n)
}

/// Data shared by the brackets of one target across all `n`.
enum WidthContext<'a> {
    Points {
        t: &'a MetricTree,
        a: &'a [TreePoint],
        dists: Vec<f64>,
        distinct: usize,
    },
    WholeTree {
        t: &'a MetricTree,
        order: Vec<usize>,
        d: Vec<Vec<f64>>,
    },
}

impl<'a> WidthContext<'a> {
    fn new(t: &'a MetricTree, target: &'a EntropyTarget) -> Result<Self> {
        Ok(match target {
            EntropyTarget::Points(a) => {
                check_points(t, a)?;
                let d = pairwise(t, a);
                WidthContext::Points {
                    t,
                    a,
                    dists: sorted_unique(
                        d.iter().flatten().copied().filter(|&x| x > 0.0).collect(),
                    ),
                    distinct: separated_max_small_eps(t, a)?,
                }
            }
            EntropyTarget::WholeTree { delta } => {
                let skeleton = t.skeleton(*delta)?;
                WidthContext::WholeTree {
                    t,
                    order: deepest_order(t, &skeleton),
                    d: pairwise(t, &skeleton),
                }
            }
        })
    }

    fn bounds(&self, n: usize) -> Result<WidthBounds> {
        let (c1, c2) = if n == 0 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            match self {
                WidthContext::Points {
                    t,
                    a,
                    dists,
                    distinct,
                } => {
                    let mut c1 = if *distinct <= n { 0.0 } else { f64::INFINITY };
                    if c1 > 0.0 {
                        for &x in dists {
                            if net_cover_subset(t, a, x / 2.0)?.count <= n {
                                c1 = x / 2.0;
                                break;
                            }
                        }
                    }
                    let mut c2 = 0.0;
                    for &x in dists.iter().rev() {
                        if separated_max(t, a, x)?.count > n {
                            c2 = x;
                            break;
                        }
                    }
                    (c1, c2)
                }
                WidthContext::WholeTree { t, order, d } => {
                    let diam = t.diameter();
                    let c1 = if diam == 0.0 {
                        0.0
                    } else {
                        bisect_min(0.0, diam / 2.0, |eps| {
                            Ok(cover_number_tree(t, eps)?.count <= n)
                        })?
                    };
                    let packs = |eps: f64| greedy_packing_exceeds(order, d, eps, n);
                    let c2 = if diam == 0.0 || !packs(f64::MIN_POSITIVE) {
                        0.0
                    } else if packs(diam) {
                        diam
                    } else {
                        // Largest feasible scale: bisect on the failing side.
                        bisect_min(0.0, diam, |eps| Ok(!packs(eps)))?
                    };
                    (c1, c2)
                }
            }
        };
        let lower = c2 / 2.0;
        let diagnostic = (lower > c1 + 1e-9)
            .then(|| format!("lower bound c2/2 = {lower} exceeds upper bound c1 = {c1}"));
        Ok(WidthBounds {
            n,
            lower,
            upper: c1,
            c1,
            c2,
            diagnostic,
        })
    }
}

/// Whether deepest-first selection over a precomputed distance matrix finds
/// more than `n` points with pairwise distances at least `eps`.
fn greedy_packing_exceeds(order: &[usize], d: &[Vec<f64>], eps: f64, n: usize) -> bool {
    let mut chosen: Vec<usize> = Vec::with_capacity(n + 1);
    for &i in order {
        if chosen.iter().all(|&c| d[c][i] >= eps - DEFAULT_TOL) {
            chosen.push(i);
            if chosen.len() > n {
                return true;
            }
        }
    }
    false
}

/// Number of distinct points of `a`.
fn separated_max_small_eps(t: &MetricTree, a: &[TreePoint]) -> Result<usize> {
    let mut reps: Vec<TreePoint> = Vec::new();
    for p in a {
        if reps.iter().all(|q| t.dist(p, q) > DEFAULT_TOL) {
            reps.push(*p);
        }
    }
    Ok(reps.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoncompactRow {
    pub k: usize,
    /// Least achievable maximum part diameter with at most k parts.
    pub alpha: f64,
    /// Least radius admitting a cover by at most k balls.
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoncompactProfile {
    pub rows: Vec<NoncompactRow>,
    pub alpha_limit: f64,
    pub beta_limit: f64,
}

/// α_k from minimum partitions and β_k from minimum ball covers, for
/// `k = 1..=k_max`; the limits are the values at `k = |A|`.
pub fn noncompactness_profiles(
    t: &MetricTree,
    a: &[TreePoint],
    k_max: usize,
) -> Result<NoncompactProfile> {
    check_points(t, a)?;
    let d = pairwise(t, a);
    let dists = sorted_unique(d.iter().flatten().copied().collect());
    let alpha = |k: usize| -> Result<f64> {
        for &x in &dists {
            if x == 0.0 {
                if separated_max_small_eps(t, a)? <= k {
                    return Ok(0.0);
                }
                continue;
            }
            if cover_number_subset(t, a, x / 2.0)?.count <= k {
                return Ok(x);
            }
        }
        Ok(*dists.last().unwrap_or(&0.0))
    };
    let beta = |k: usize| -> Result<f64> {
        for &x in &dists {
            if x == 0.0 {
                if separated_max_small_eps(t, a)? <= k {
                    return Ok(0.0);
                }
                continue;
            }
            if net_cover_subset(t, a, x / 2.0)?.count <= k {
                return Ok(x / 2.0);
            }
        }
        Ok(dists.last().unwrap_or(&0.0) / 2.0)
    };
    let rows = (1..=k_max)
        .map(|k| {
            Ok(NoncompactRow {
                k,
                alpha: alpha(k)?,
                beta: beta(k)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NoncompactProfile {
        rows,
        alpha_limit: alpha(a.len())?,
        beta_limit: beta(a.len())?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WidthLimitReport {
    pub rows: Vec<WidthBounds>,
    pub upper_nonincreasing: bool,
    pub final_upper: f64,
}

/// Brackets for `n = 1..=n_max` and whether the upper ends decrease.
pub fn width_limit_check(
    t: &MetricTree,
    target: &EntropyTarget,
    n_max: usize,
) -> Result<WidthLimitReport> {
    let ctx = WidthContext::new(t, target)?;
    let rows = (1..=n_max)
        .map(|n| ctx.bounds(n))
        .collect::<Result<Vec<_>>>()?;
    let upper_nonincreasing = rows.windows(2).all(|w| w[1].upper <= w[0].upper + 1e-12);
    let final_upper = rows.last().map_or(f64::INFINITY, |r| r.upper);
    Ok(WidthLimitReport {
        rows,
        upper_nonincreasing,
        final_upper,
    })
}

/// An affine subspace of ℝ^m: `origin + span(basis)` with orthonormal basis.
#[derive(Clone, Debug)]
pub struct AffineSpan {
    pub origin: DVector<f64>,
    pub basis: Vec<DVector<f64>>,
}

impl AffineSpan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// ℓ∞ norm of the residual after orthogonal projection onto the span;
    /// an upper bound on the ℓ∞ distance to the span.
    pub fn sup_residual(&self, x: &[f64]) -> f64 {
        let mut r = DVector::from_column_slice(x) - &self.origin;
        for b in &self.basis {
            let c = b.dot(&r);
            r -= b * c;
        }
        r.amax()
    }
}

/// Affine span of a point cloud, with rank decided at relative tolerance
/// `1e-10`.
pub fn affine_span(points: &[Vec<f64>]) -> Result<AffineSpan> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidParameter("point cloud is empty".into()))?;
    let m = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} among length {m}",
            p.len()
        )));
    }
    let origin = DVector::from_column_slice(first);
    if points.len() == 1 || m == 0 {
        return Ok(AffineSpan {
            origin,
            basis: Vec::new(),
        });
    }
    let diffs = DMatrix::from_fn(m, points.len() - 1, |i, j| points[j + 1][i] - first[i]);
    let svd = diffs.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.max();
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1e-10 * smax.max(1.0))
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    Ok(AffineSpan { origin, basis })
}

/// Dimension of the affine span of `points` and the largest ℓ∞ residual of
/// `points` against it.
pub fn affine_span_sup_distance(points: &[Vec<f64>]) -> Result<(usize, f64)> {
    let span = affine_span(points)?;
    let sup = points
        .iter()
        .map(|p| span.sup_residual(p))
        .fold(0.0, f64::max);
    Ok((span.dim(), sup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_path, gen_random_tree, gen_spider, spider_point};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tripod() -> MetricTree {
        gen_spider(&[1.0, 1.0, 1.0]).unwrap()
    }

    fn tips(t: &MetricTree) -> Vec<TreePoint> {
        ["1", "2", "3"]
            .iter()
            .map(|v| t.vertex(v).unwrap())
            .collect()
    }

    #[test]
    fn subset_cover_examples() {
        let t = tripod();
        let a = tips(&t);
        assert_eq!(cover_number_subset(&t, &a, 0.5).unwrap().count, 3);
        let one = cover_number_subset(&t, &a, 1.0).unwrap();
        assert_eq!(one.count, 1);
        assert!(verify_cover(&t, &a, &one, 1e-9));
        assert_eq!(cover_number_subset(&t, &a[..1], 0.01).unwrap().count, 1);
        assert!(cover_number_subset(&t, &a, 0.0).is_err());
    }

    #[test]
    fn tree_cover_examples() {
        let t = tripod();
        assert_eq!(cover_number_tree(&t, 0.5).unwrap().count, 3);
        assert_eq!(cover_number_tree(&t, 1.0).unwrap().count, 1);
        // Tip balls reach only [0.2, 1] of each leg; o needs a fourth.
        assert_eq!(cover_number_tree(&t, 0.4).unwrap().count, 4);
        let p = gen_path(1.0, 7).unwrap();
        for k in 1..=12 {
            let eps = 0.05 * k as f64;
            let c = cover_number_tree(&p, eps).unwrap();
            assert_eq!(
                c.count,
                (1.0 / (2.0 * eps) - 1e-9).ceil() as usize,
                "eps {eps}"
            );
            assert!(covers_tree(&p, &c.centers, eps, 1e-9).unwrap());
        }
    }

    #[test]
    fn tree_cover_is_certified_on_random_trees() {
        for seed in 0..20 {
            let t = gen_random_tree(15, seed, (0.1, 1.0)).unwrap();
            for eps in [0.1, 0.3, 0.7, 1.5] {
                let c = cover_number_tree(&t, eps).unwrap();
                assert!(covers_tree(&t, &c.centers, eps, 1e-9).unwrap());
                // Each ε-ball holds at most one point of a (2ε+)-separated set.
                let skel = t.skeleton(0.01).unwrap();
                let lower = separated_max_greedy_bound(&t, &skel, 2.0 * eps + 0.02);
                assert!(lower <= c.count);
            }
        }
    }

    fn separated_max_greedy_bound(t: &MetricTree, a: &[TreePoint], eps: f64) -> usize {
        separated_deepest_first(t, a, eps).len()
    }

    #[test]
    fn separated_examples() {
        let t = tripod();
        let a = tips(&t);
        assert_eq!(separated_max(&t, &a, 2.0).unwrap().count, 3);
        assert_eq!(separated_max(&t, &a, 2.01).unwrap().count, 1);
        let same = vec![a[0]; 4];
        assert_eq!(separated_max(&t, &same, 0.3).unwrap().count, 1);
    }

    #[test]
    fn greedy_matches_branch_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..30 {
            let t = gen_random_tree(12, seed, (0.2, 1.5)).unwrap();
            let a: Vec<TreePoint> = (0..10).map(|_| t.sample_point(&mut rng)).collect();
            for eps in [0.2, 0.5, 1.0, 2.0] {
                let g = net_cover_subset(&t, &a, eps).unwrap();
                let b = partition_cover_exact(&t, &a, eps).unwrap();
                assert_eq!(g.count, b.count);
                assert!(verify_cover(&t, &a, &g, 1e-9));
                assert!(verify_cover(&t, &a, &b, 1e-9));
                let greedy_pack = separated_deepest_first(&t, &a, eps).len();
                assert_eq!(greedy_pack, separated_max(&t, &a, eps).unwrap().count);
            }
        }
    }

    #[test]
    fn profile_on_tripod() {
        let t = tripod();
        let grid = [0.4, 0.5, 1.0];
        let rows = covering_profile(&t, &EntropyTarget::Points(tips(&t)), &grid).unwrap();
        let k: Vec<usize> = rows.iter().map(|r| r.k_net).collect();
        assert_eq!(k, vec![3, 3, 1]);
        assert!(rows.iter().all(|r| r.chain_holds), "{rows:?}");
        let whole = covering_profile(&t, &EntropyTarget::WholeTree { delta: 0.05 }, &grid).unwrap();
        let k: Vec<usize> = whole.iter().map(|r| r.k_net).collect();
        assert_eq!(k, vec![4, 3, 1]);
    }

    #[test]
    fn hull_cover_examples() {
        let t = tripod();
        let r = hull_cover_check(&t, &tips(&t), 0.5, 0.5).unwrap();
        assert_eq!((r.lhs, r.rhs), (1, 3));
        let s = hull_cover_check(&t, &tips(&t)[..1], 0.3, 0.3).unwrap();
        assert_eq!((s.lhs, s.multiplier, s.rhs), (1, 1, 1));
    }

    #[test]
    fn path_widths() {
        let p = gen_path(1.0, 10).unwrap();
        for n in [1usize, 2, 3, 5, 8] {
            let w = width_bounds(&p, &EntropyTarget::WholeTree { delta: 1e-3 }, n).unwrap();
            let target = 1.0 / (2.0 * n as f64);
            assert!((w.upper - target).abs() < 1e-3, "{w:?}");
            assert!((w.lower - target).abs() < 1e-3, "{w:?}");
        }
    }

    #[test]
    fn spider_widths_stay_at_one() {
        let t = gen_spider(&[1.0; 8]).unwrap();
        for n in 1..=7 {
            let w = width_bounds(&t, &EntropyTarget::WholeTree { delta: 0.05 }, n).unwrap();
            assert!((w.lower - 1.0).abs() < 1e-9, "{w:?}");
        }
    }

    #[test]
    fn noncompactness_on_tripod() {
        let t = tripod();
        let prof = noncompactness_profiles(&t, &tips(&t), 3).unwrap();
        assert_eq!((prof.rows[0].alpha, prof.rows[0].beta), (2.0, 1.0));
        assert_eq!((prof.rows[2].alpha, prof.rows[2].beta), (0.0, 0.0));
        assert_eq!(prof.alpha_limit, 0.0);
    }

    #[test]
    fn subset_widths_and_singleton() {
        let t = tripod();
        let one = vec![spider_point(&t, 1, 0.5).unwrap()];
        let w = width_bounds(&t, &EntropyTarget::Points(one), 1).unwrap();
        assert_eq!((w.lower, w.upper), (0.0, 0.0));
        let w = width_bounds(&t, &EntropyTarget::Points(tips(&t)), 2).unwrap();
        assert_eq!((w.c1, w.c2), (1.0, 2.0));
    }

    #[test]
    fn affine_span_of_a_plane() {
        let pts = vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 2.0, 1.0],
            vec![3.0, -1.0, 1.0],
        ];
        let (dim, sup) = affine_span_sup_distance(&pts).unwrap();
        assert_eq!(dim, 2);
        assert!(sup < 1e-12);
        let span = affine_span(&pts[..2]).unwrap();
        assert!((span.sup_residual(&[0.0, 1.0, 1.0]) - 1.0).abs() < 1e-12);
    }
}
