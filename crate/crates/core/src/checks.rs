//! Verifiers for metric inequalities on finite configurations.
//!
//! Quadruple checks enumerate ordered quadruples with repetition (repeats are
//! vacuous), exhaustively up to [`EXHAUSTIVE_QUADRUPLE_LIMIT`] points and by
//! seeded sampling above that.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convexity::ball;
use crate::error::{Error, Result};
use crate::generators::gen_spider;
use crate::tree::{MetricTree, TreePoint, DEFAULT_TOL};

pub const EXHAUSTIVE_QUADRUPLE_LIMIT: usize = 40;
pub const SAMPLED_QUADRUPLES: usize = 100_000;

/// Labeled points with a symmetric distance matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetric {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

impl FiniteMetric {
    /// Checks shape and finiteness only; metric axioms are left to
    /// [`check_metric_axioms`].
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "{n} labels need an {n}x{n} distance matrix"
            )));
        }
        if let Some(x) = dist.iter().flatten().find(|x| !x.is_finite()) {
            return Err(Error::Parse(format!("non-finite distance {x}")));
        }
        Ok(Self { labels, dist })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let dist = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { f(i, j) }).collect())
            .collect();
        Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
            dist,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FiniteMetric = serde_json::from_str(text)?;
        Self::new(raw.labels, raw.dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    /// Relabels so that new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            labels: perm.iter().map(|&i| self.labels[i].clone()).collect(),
            dist: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| self.dist[i][j]).collect())
                .collect(),
        }
    }

    pub fn ensure_symmetric(&self, tol: f64) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if (self.dist[i][j] - self.dist[j][i]).abs() > tol {
                    return Err(Error::Asymmetric { i, j });
                }
            }
        }
        Ok(())
    }
}

/// Pairwise distances of tree points, labeled by their literals.
pub fn distance_matrix(t: &MetricTree, pts: &[TreePoint]) -> Result<FiniteMetric> {
    for p in pts {
        t.check_point(p)?;
    }
    let n = pts.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = t.dist(&pts[i], &pts[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    Ok(FiniteMetric {
        labels: pts.iter().map(|p| t.format_point(p)).collect(),
        dist,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of an inequality check: `holds` iff `worst_margin <= tol`, and a
/// witness is attached exactly when it does not hold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub worst_margin: f64,
}

impl InequalityReport {
    fn from_worst(worst: Option<(f64, Witness)>, tol: f64) -> Self {
        match worst {
            None => Self {
                holds: true,
                witness: None,
                worst_margin: f64::NEG_INFINITY,
            },
            Some((margin, w)) => {
                let holds = margin <= tol;
                Self {
                    holds,
                    witness: (!holds).then_some(w),
                    worst_margin: margin,
                }
            }
        }
    }
}

/// Largest violation of zero diagonal, nonnegativity, symmetry and the
/// triangle inequality.
pub fn check_metric_axioms(m: &FiniteMetric, tol: f64) -> InequalityReport {
    let n = m.len();
    let mut worst: Option<(f64, Witness)> = None;
    let mut consider = |margin: f64, indices: Vec<usize>, lhs: f64, rhs: f64| {
        if worst.as_ref().is_none_or(|(w, _)| margin > *w) {
            worst = Some((margin, Witness { indices, lhs, rhs }));
        }
    };
    for i in 0..n {
        consider(m.d(i, i).abs(), vec![i, i], m.d(i, i).abs(), 0.0);
        for j in 0..n {
            if i != j {
                consider(-m.d(i, j), vec![i, j], 0.0, m.d(i, j));
                consider(
                    (m.d(i, j) - m.d(j, i)).abs(),
                    vec![i, j],
                    m.d(i, j),
                    m.d(j, i),
                );
            }
            for k in 0..n {
                let lhs = m.d(i, k);
                let rhs = m.d(i, j) + m.d(j, k);
                consider(lhs - rhs, vec![i, j, k], lhs, rhs);
            }
        }
    }
    InequalityReport::from_worst(worst, tol)
}

/// How quadruples are visited.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadrupleOptions {
    pub tol: f64,
    pub seed: u64,
    /// `None`: exhaustive up to the limit, [`SAMPLED_QUADRUPLES`] above it.
    pub samples: Option<usize>,
}

impl Default for QuadrupleOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            seed: 0,
            samples: None,
        }
    }
}

fn scan_quadruples(
    m: &FiniteMetric,
    opts: &QuadrupleOptions,
    sides: impl Fn(&FiniteMetric, usize, usize, usize, usize) -> (f64, f64),
) -> Result<InequalityReport> {
    m.ensure_symmetric(opts.tol)?;
    let n = m.len();
    if n == 0 {
        return Ok(InequalityReport::from_worst(None, opts.tol));
    }
    let mut worst: Option<(f64, Witness)> = None;
    let mut visit = |i: usize, j: usize, k: usize, l: usize| {
        let (lhs, rhs) = sides(m, i, j, k, l);
        let margin = lhs - rhs;
        if worst.as_ref().is_none_or(|(w, _)| margin > *w) {
            worst = Some((
                margin,
                Witness {
                    indices: vec![i, j, k, l],
                    lhs,
                    rhs,
                },
            ));
        }
    };
    let sampled = match opts.samples {
        Some(s) => Some(s),
        None if n > EXHAUSTIVE_QUADRUPLE_LIMIT => Some(SAMPLED_QUADRUPLES),
        None => None,
    };
    match sampled {
        None => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            visit(i, j, k, l);
                        }
                    }
                }
            }
        }
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..count {
                let q: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
                visit(q[0], q[1], q[2], q[3]);
            }
        }
    }
    Ok(InequalityReport::from_worst(worst, opts.tol))
}

/// `d12 + d34 <= max(d13 + d24, d14 + d23)` over quadruples.
pub fn check_four_point(m: &FiniteMetric, opts: &QuadrupleOptions) -> Result<InequalityReport> {
    scan_quadruples(m, opts, |m, i, j, k, l| {
        let lhs = m.d(i, j) + m.d(k, l);
        let rhs = (m.d(i, k) + m.d(j, l)).max(m.d(i, l) + m.d(j, k));
        (lhs, rhs)
    })
}

/// `d12² + d34² <= d13² + d24² + d14² + d23²` over quadruples.
pub fn check_reshetnyak(m: &FiniteMetric, opts: &QuadrupleOptions) -> Result<InequalityReport> {
    scan_quadruples(m, opts, |m, i, j, k, l| {
        let sq = |a: usize, b: usize| m.d(a, b) * m.d(a, b);
        let lhs = sq(i, j) + sq(k, l);
        let rhs = sq(i, k) + sq(j, l) + sq(i, l) + sq(j, k);
        (lhs, rhs)
    })
}

/// Midpoint comparison `d(x0,y)² <= d(x0,x1)²/2 + d(x0,x2)²/2 - d(x1,x2)²/4`
/// with `y` the midpoint of `[x1, x2]`.
pub fn check_cn_midpoint(
    t: &MetricTree,
    x0: &TreePoint,
    x1: &TreePoint,
    x2: &TreePoint,
    tol: f64,
) -> Result<InequalityReport> {
    let y = t.midpoint(x1, x2)?;
    t.check_point(x0)?;
    let lhs = t.dist(x0, &y).powi(2);
    let rhs =
        t.dist(x0, x1).powi(2) / 2.0 + t.dist(x0, x2).powi(2) / 2.0 - t.dist(x1, x2).powi(2) / 4.0;
    Ok(InequalityReport::from_worst(
        Some((
            lhs - rhs,
            Witness {
                indices: vec![0, 1, 2],
                lhs,
                rhs,
            },
        )),
        tol,
    ))
}

/// Result of [`modulus_convexity_probe`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityProbe {
    /// Smallest observed `1 - d(a, m)/R`; `None` when no admissible pair was found.
    pub observed_min: Option<f64>,
    /// The guaranteed lower bound `ε/2`, attained on a straight segment.
    pub bound: f64,
    pub admissible_pairs: usize,
}

/// Samples chords `x1, x2` of the ball `B(a, R)` with `d(x1, x2) >= Rε` and
/// records the smallest pull-in `1 - d(a, midpoint)/R`.
///
/// Candidates are the extreme points of the ball plus `samples` uniform
/// points; all pairs among extremes are tried, then `samples` random pairs.
/// `ε = 0` returns 1 without sampling.
pub fn modulus_convexity_probe(
    t: &MetricTree,
    a: &TreePoint,
    radius: f64,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<ConvexityProbe> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::OutOfRange {
            what: "R",
            value: radius,
        });
    }
    if !(0.0..=2.0).contains(&eps) {
        return Err(Error::OutOfRange {
            what: "epsilon",
            value: eps,
        });
    }
    t.check_point(a)?;
    let bound = eps / 2.0;
    if eps == 0.0 {
        return Ok(ConvexityProbe {
            observed_min: Some(1.0),
            bound,
            admissible_pairs: 0,
        });
    }
    let region = ball(t, a, radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extremes = region.extreme_points(t);
    let mut pool = extremes.clone();
    for _ in 0..samples {
        if let Some(p) = region.sample_point(t, &mut rng) {
            pool.push(p);
        }
    }

    let mut min: Option<f64> = None;
    let mut count = 0usize;
    let mut try_pair = |x1: &TreePoint, x2: &TreePoint| {
        if t.dist(x1, x2) < radius * eps - DEFAULT_TOL {
            return;
        }
        let m = t.midpoint(x1, x2).expect("pool points lie on the tree");
        let value = 1.0 - t.dist(a, &m) / radius;
        count += 1;
        min = Some(min.map_or(value, |v: f64| v.min(value)));
    };
    for i in 0..extremes.len() {
        for j in (i + 1)..extremes.len() {
            try_pair(&extremes[i], &extremes[j]);
        }
    }
    if pool.len() >= 2 {
        for _ in 0..samples {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            try_pair(&pool[i], &pool[j]);
        }
    }
    Ok(ConvexityProbe {
        observed_min: min,
        bound,
        admissible_pairs: count,
    })
}

/// Outcome of the fixed-exponent negative-type test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegTypeReport {
    pub p: f64,
    pub holds: bool,
    pub max_projected_eigenvalue: f64,
    /// Zero-sum unit vector with positive form value, present iff the test fails.
    pub witness_vector: Option<Vec<f64>>,
    pub form_value: Option<f64>,
}

/// `Σ_ij ξ_i ξ_j d_ij^p`.
pub fn power_form(m: &FiniteMetric, p: f64, xi: &[f64]) -> f64 {
    let n = m.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += xi[i] * xi[j] * m.d(i, j).powf(p);
            }
        }
    }
    acc
}

/// Decides whether `(d_ij^p)` is conditionally negative definite by the top
/// eigenvalue of `P C P`, `P` the centering projector.
pub fn negative_type_test(m: &FiniteMetric, p: f64, tol: f64) -> Result<NegTypeReport> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
        });
    }
    m.ensure_symmetric(DEFAULT_TOL)?;
    let n = m.len();
    if n < 2 {
        return Ok(NegTypeReport {
            p,
            holds: true,
            max_projected_eigenvalue: 0.0,
            witness_vector: None,
            form_value: None,
        });
    }
    let c = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { m.d(i, j).powf(p) });
    let proj = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    let mut pcp = &proj * &c * &proj;
    // symmetrize rounding
    pcp = (&pcp + pcp.transpose()) * 0.5;
    let eig = SymmetricEigen::new(pcp);
    let (top, lambda) =
        eig.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    if lambda <= tol {
        return Ok(NegTypeReport {
            p,
            holds: true,
            max_projected_eigenvalue: lambda,
            witness_vector: None,
            form_value: None,
        });
    }
    let v = eig.eigenvectors.column(top);
    let mut xi: Vec<f64> = (&proj * v).iter().copied().collect();
    let mean = xi.iter().sum::<f64>() / n as f64;
    xi.iter_mut().for_each(|x| *x -= mean);
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    xi.iter_mut().for_each(|x| *x /= norm);
    let form = power_form(m, p, &xi);
    Ok(NegTypeReport {
        p,
        holds: false,
        max_projected_eigenvalue: lambda,
        witness_vector: Some(xi),
        form_value: Some(form),
    })
}

/// One row of [`spider_negative_type_scan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiderScanRow {
    pub n: usize,
    /// Form of `ξ = (-n, 1, ..., 1)` evaluated on the matrix.
    pub uniform_form: f64,
    /// Closed form `n (c (n-1) - 2n)`, `c = 2^p`.
    pub closed_form: f64,
    /// `uniform_form <= tol`.
    pub holds: bool,
    /// `c / (c - 2)` when `c > 2`.
    pub threshold: Option<f64>,
    /// Top projected eigenvalue of the full test.
    pub max_projected_eigenvalue: f64,
    /// `2a(n+1) - 4n`, the closed form stated for the witness `η`.
    pub eta_claimed_form: f64,
    /// That witness's form `<Aη, η>` evaluated directly.
    pub eta_direct_form: f64,
}

/// Uniform-witness scan of the unit spider `{center, n tips}` at exponent `p`.
pub fn spider_negative_type_scan(max_n: usize, p: f64, tol: f64) -> Result<Vec<SpiderScanRow>> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
        });
    }
    let c = 2f64.powf(p);
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let t = gen_spider(&vec![1.0; n])?;
        let pts: Vec<TreePoint> = (0..=n)
            .map(|k| {
                if k == 0 {
                    t.vertex("o")
                } else {
                    t.vertex(&k.to_string())
                }
            })
            .collect::<Result<_>>()?;
        let m = distance_matrix(&t, &pts)?;
        let mut xi = vec![1.0; n + 1];
        xi[0] = -(n as f64);
        let uniform_form = power_form(&m, p, &xi);
        let nf = n as f64;
        let closed_form = nf * (c * (nf - 1.0) - 2.0 * nf);
        let full = negative_type_test(&m, p, tol)?;

        // A = -(C - cD)/(c-1) with D the all-ones matrix.
        let a_diag = c / (c - 1.0);
        let a_entry = |i: usize, j: usize| -(m.d(i, j).powf(p) - c) / (c - 1.0);
        let s = (2.0 * nf).sqrt();
        let mut eta = vec![0.0; n + 1];
        eta[0] = s;
        if n >= 1 {
            eta[1] = -s;
        }
        let mut direct = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                direct += eta[i] * eta[j] * a_entry(i, j);
            }
        }
        rows.push(SpiderScanRow {
            n,
            uniform_form,
            closed_form,
            holds: uniform_form <= tol,
            threshold: (c > 2.0).then(|| c / (c - 2.0)),
            max_projected_eigenvalue: full.max_projected_eigenvalue,
            eta_claimed_form: 2.0 * a_diag * (nf + 1.0) - 4.0 * nf,
            eta_direct_form: direct,
        });
    }
    Ok(rows)
}

/// Sums for the cube inequality of metric type `p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type2Report {
    pub holds: bool,
    /// `Σ_ε d(f(ε), f(-ε))²`.
    pub lhs: f64,
    /// `K k^{1/p - 1/2} Σ_ε Σ_i d(f(ε), f(ε^{[i]}))²`.
    pub rhs: f64,
    pub worst_margin: f64,
}

impl Type2Report {
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 {
            0.0
        } else if self.rhs == 0.0 {
            f64::INFINITY
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Evaluates the cube inequality for `f : {-1,1}^k -> points`, where sign
/// vector `ε` is encoded as the bitmask whose bit `i` is set iff `ε_{i+1} = -1`.
pub fn metric_type2_test(
    m: &FiniteMetric,
    f: &[usize],
    k: u32,
    constant: f64,
    p: f64,
    tol: f64,
) -> Result<Type2Report> {
    if k == 0 || k > 20 {
        return Err(Error::InvalidParameter(format!("cube dimension k = {k}")));
    }
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
        });
    }
    if !(constant.is_finite() && constant > 0.0) {
        return Err(Error::OutOfRange {
            what: "K",
            value: constant,
        });
    }
    let corners = 1usize << k;
    if f.len() != corners {
        return Err(Error::DimensionMismatch(format!(
            "map has {} values, cube has {corners} corners",
            f.len()
        )));
    }
    if let Some(&bad) = f.iter().find(|&&x| x >= m.len()) {
        return Err(Error::InvalidParameter(format!(
            "map value {bad} out of range"
        )));
    }
    let (lhs, edges) = cube_sums(m, f, k);
    let rhs = constant * (k as f64).powf(1.0 / p - 0.5) * edges;
    Ok(Type2Report {
        holds: lhs <= rhs + tol,
        lhs,
        rhs,
        worst_margin: lhs - rhs,
    })
}

fn cube_sums(m: &FiniteMetric, f: &[usize], k: u32) -> (f64, f64) {
    let full = (1usize << k) - 1;
    let mut diag = 0.0;
    let mut edges = 0.0;
    for (eps, &x) in f.iter().enumerate() {
        diag += m.d(x, f[eps ^ full]).powi(2);
        for i in 0..k {
            edges += m.d(x, f[eps ^ (1 << i)]).powi(2);
        }
    }
    (diag, edges)
}

/// Worst ratio found by [`metric_type2_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Type2Search {
    pub worst_ratio: f64,
    pub arg_map: Vec<usize>,
    pub exhaustive: bool,
    pub maps_checked: u64,
}

/// Maximizes `lhs / rhs` (with `K = 1`, `p = 2`) over maps into the space:
/// exhaustive when `n^(2^k) <= budget`, else `budget` seeded random maps.
pub fn metric_type2_search(
    m: &FiniteMetric,
    k: u32,
    budget: u64,
    seed: u64,
) -> Result<Type2Search> {
    if k == 0 || k > 20 {
        return Err(Error::InvalidParameter(format!("cube dimension k = {k}")));
    }
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty metric".into()));
    }
    let corners = 1usize << k;
    let total = (n as f64).powi(corners as i32);
    let exhaustive = total <= budget as f64;
    let mut best = Type2Search {
        worst_ratio: 0.0,
        arg_map: vec![0; corners],
        exhaustive,
        maps_checked: 0,
    };
    let consider = |f: &[usize], best: &mut Type2Search| {
        let (lhs, edges) = cube_sums(m, f, k);
        let rhs = edges; // K = 1, k^{1/2 - 1/2} = 1
        let ratio = if lhs == 0.0 {
            0.0
        } else if rhs == 0.0 {
            f64::INFINITY
        } else {
            lhs / rhs
        };
        best.maps_checked += 1;
        if ratio > best.worst_ratio {
            best.worst_ratio = ratio;
            best.arg_map = f.to_vec();
        }
    };
    let mut f = vec![0usize; corners];
    if exhaustive {
        loop {
            consider(&f, &mut best);
            let mut pos = 0;
            loop {
                if pos == corners {
                    return Ok(best);
                }
                f[pos] += 1;
                if f[pos] < n {
                    break;
                }
                f[pos] = 0;
                pos += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        f.iter_mut().for_each(|x| *x = rng.gen_range(0..n));
        consider(&f, &mut best);
    }
    Ok(best)
}

/// Radial metric on the plane: Euclidean along a line through the origin,
/// `|x| + |y|` otherwise.
pub fn radial_distance(x: [f64; 2], y: [f64; 2]) -> f64 {
    let nx = x[0].hypot(x[1]);
    let ny = y[0].hypot(y[1]);
    let cross = x[0] * y[1] - x[1] * y[0];
    if cross.abs() <= 1e-12 * (nx * ny).max(1e-300) || nx == 0.0 || ny == 0.0 {
        (x[0] - y[0]).hypot(x[1] - y[1])
    } else {
        nx + ny
    }
}

/// `n` seeded plane points under the radial metric. Directions come from a
/// small set of rays (and their opposites) so collinear pairs occur.
pub fn gen_radial_sample(n: usize, seed: u64) -> (Vec<[f64; 2]>, FiniteMetric) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rays = 5;
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let angle = std::f64::consts::PI * rng.gen_range(0..2 * rays) as f64 / rays as f64;
            let r = rng.gen_range(0.0..2.0);
            [r * angle.cos(), r * angle.sin()]
        })
        .collect();
    let mut m = FiniteMetric::from_fn(n, |i, j| radial_distance(pts[i], pts[j]));
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            m.dist[i][j] = m.dist[j][i];
        }
    }
    (pts, m)
}

/// Random symmetric weights repaired into a metric by shortest-path completion.
pub fn gen_completed_metric(n: usize, seed: u64) -> FiniteMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = FiniteMetric::from_fn(n, |_, _| 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rng.gen_range(0.1..3.0);
            m.dist[i][j] = w;
            m.dist[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = m.dist[i][k] + m.dist[k][j];
                if via < m.dist[i][j] {
                    m.dist[i][j] = via;
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_random_tree, spider_point};

    fn c4() -> FiniteMetric {
        FiniteMetric::from_fn(4, |i, j| {
            let k = (i as i64 - j as i64).rem_euclid(4);
            if k == 2 {
                2.0
            } else {
                1.0
            }
        })
    }

    fn square() -> FiniteMetric {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        FiniteMetric::from_fn(4, |i, j| {
            let (a, b): ([f64; 2], [f64; 2]) = (pts[i], pts[j]);
            (a[0] - b[0]).hypot(a[1] - b[1])
        })
    }

    #[test]
    fn tripod_distance_matrix() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let pts: Vec<_> = ["o", "1", "2", "3"]
            .iter()
            .map(|s| t.vertex(s).unwrap())
            .collect();
        let m = distance_matrix(&t, &pts).unwrap();
        for j in 1..4 {
            assert_eq!(m.d(0, j), 1.0);
            for k in 1..4 {
                if j != k {
                    assert_eq!(m.d(j, k), 2.0);
                }
            }
        }
        let single = distance_matrix(&t, &pts[..1]).unwrap();
        assert_eq!(single.dist, vec![vec![0.0]]);
    }

    #[test]
    fn path_distance_matrix() {
        let t = crate::generators::gen_path(2.0, 2).unwrap();
        let pts = t.skeleton(1.0).unwrap();
        let m = distance_matrix(&t, &pts).unwrap();
        assert_eq!(
            m.dist,
            vec![
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0]
            ]
        );
    }

    #[test]
    fn four_point_on_c4_and_square() {
        let opts = QuadrupleOptions::default();
        let r = check_four_point(&c4(), &opts).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.lhs, w.rhs), (4.0, 2.0));
        let r = check_four_point(&square(), &opts).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!((w.lhs - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((w.rhs - 2.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let mut m = c4();
        m.dist[0][1] = 1.5;
        assert!(matches!(
            check_four_point(&m, &QuadrupleOptions::default()),
            Err(Error::Asymmetric { .. })
        ));
    }

    #[test]
    fn reshetnyak_cases() {
        let opts = QuadrupleOptions::default();
        let r = check_reshetnyak(&square(), &opts).unwrap();
        assert!(r.holds);
        let two = FiniteMetric::from_fn(2, |_, _| 3.0);
        assert!(check_reshetnyak(&two, &opts).unwrap().holds);
    }

    #[test]
    fn tree_samples_satisfy_quadruple_inequalities() {
        let t = gen_random_tree(25, 11, (0.2, 2.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<_> = (0..12).map(|_| t.sample_point(&mut rng)).collect();
        let m = distance_matrix(&t, &pts).unwrap();
        let opts = QuadrupleOptions::default();
        assert!(check_four_point(&m, &opts).unwrap().holds);
        assert!(check_reshetnyak(&m, &opts).unwrap().holds);
        assert!(check_metric_axioms(&m, DEFAULT_TOL).holds);
    }

    #[test]
    fn large_inputs_are_sampled() {
        let t = gen_random_tree(60, 4, (0.2, 2.0)).unwrap();
        let pts: Vec<_> = (0..60).map(TreePoint::Vertex).collect();
        let m = distance_matrix(&t, &pts).unwrap();
        let opts = QuadrupleOptions {
            seed: 5,
            ..Default::default()
        };
        let a = check_four_point(&m, &opts).unwrap();
        let b = check_four_point(&m, &opts).unwrap();
        assert!(a.holds);
        assert_eq!(a, b);
    }

    #[test]
    fn metric_axioms_catch_triangle_violation() {
        let bad = FiniteMetric::from_fn(3, |i, j| if i + j == 1 { 5.0 } else { 1.0 });
        let r = check_metric_axioms(&bad, DEFAULT_TOL);
        assert!(!r.holds);
        assert!((r.worst_margin - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cn_inequality_cases() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let (e1, e2, e3) = (
            t.vertex("1").unwrap(),
            t.vertex("2").unwrap(),
            t.vertex("3").unwrap(),
        );
        let r = check_cn_midpoint(&t, &e3, &e1, &e2, DEFAULT_TOL).unwrap();
        assert!(r.holds);
        assert!((r.worst_margin - (1.0 - 3.0)).abs() < 1e-12);
        // x0 = x1: equality
        let r = check_cn_midpoint(&t, &e1, &e1, &e2, DEFAULT_TOL).unwrap();
        assert!(r.holds);
        assert!(r.worst_margin.abs() < 1e-12);
    }

    #[test]
    fn convexity_probe_cases() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let o = t.vertex("o").unwrap();
        let r = modulus_convexity_probe(&t, &o, 1.0, 1.0, 500, 3).unwrap();
        assert!(r.admissible_pairs > 0);
        assert!(r.observed_min.unwrap() >= 0.5 - 1e-9);
        let r = modulus_convexity_probe(&t, &o, 1.0, 2.0, 200, 3).unwrap();
        assert!(r.observed_min.unwrap() >= 1.0 - 1e-9);
        let r = modulus_convexity_probe(&t, &o, 1.0, 0.5, 1000, 3).unwrap();
        let min = r.observed_min.unwrap();
        assert!((0.25 - 1e-9..0.75).contains(&min), "{min}");
        let r = modulus_convexity_probe(&t, &o, 1.0, 0.0, 200, 3).unwrap();
        assert_eq!(r.observed_min, Some(1.0));
        assert!(modulus_convexity_probe(&t, &o, 0.0, 1.0, 10, 3).is_err());
        assert!(modulus_convexity_probe(&t, &o, 1.0, 2.5, 10, 3).is_err());
        // a ball that is a short stub admits no long chord
        let tip = spider_point(&t, 1, 1.0).unwrap();
        let r = modulus_convexity_probe(&t, &tip, 0.1, 1.9, 100, 1).unwrap();
        assert_eq!(r.observed_min, None);
        assert_eq!(r.admissible_pairs, 0);
    }

    #[test]
    fn negative_type_cases() {
        let two = FiniteMetric::from_fn(2, |_, _| 1.7);
        for p in [0.5, 1.0, 2.0, 3.0] {
            assert!(negative_type_test(&two, p, 1e-9).unwrap().holds);
        }
        assert!(negative_type_test(&two, 0.0, 1e-9).is_err());

        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        let pts: Vec<_> = ["o", "1", "2", "3"]
            .iter()
            .map(|s| t.vertex(s).unwrap())
            .collect();
        let m = distance_matrix(&t, &pts).unwrap();
        let r = negative_type_test(&m, 2.0, 1e-9).unwrap();
        assert!(!r.holds);
        let xi = r.witness_vector.unwrap();
        assert!(xi.iter().sum::<f64>().abs() < 1e-12);
        assert!(r.form_value.unwrap() > 0.0);
        assert_eq!(power_form(&m, 2.0, &[-3.0, 1.0, 1.0, 1.0]), 6.0);
        assert!(negative_type_test(&c4(), 1.0, 1e-9).unwrap().holds);
    }

    #[test]
    fn spider_scan_threshold() {
        let rows = spider_negative_type_scan(6, 2.0, 1e-9).unwrap();
        assert_eq!(rows[1].uniform_form, 0.0);
        assert!(rows[1].holds);
        assert_eq!(rows[2].uniform_form, 6.0);
        assert!(!rows[2].holds);
        for r in &rows {
            assert!((r.uniform_form - r.closed_form).abs() < 1e-9);
            assert_eq!(r.holds, (r.n as f64) <= r.threshold.unwrap());
            // the `η` witness: direct value 4n(a-1)
            let a = 4.0 / 3.0;
            assert!((r.eta_direct_form - 4.0 * r.n as f64 * (a - 1.0)).abs() < 1e-9);
        }
        let rows = spider_negative_type_scan(10, 1.0, 1e-9).unwrap();
        assert!(rows.iter().all(|r| r.holds && r.threshold.is_none()));
        assert!(rows
            .iter()
            .all(|r| (r.uniform_form + 2.0 * r.n as f64).abs() < 1e-9));
    }

    #[test]
    fn type2_cases() {
        let m = c4();
        // gray-code labeling of the square's corners
        let f = [0, 1, 3, 2];
        let r = metric_type2_test(&m, &f, 2, 1.0, 2.0, 1e-9).unwrap();
        assert_eq!((r.lhs, r.rhs), (16.0, 8.0));
        assert!(!r.holds);
        let constant = metric_type2_test(&m, &[2; 4], 2, 1.0, 2.0, 1e-9).unwrap();
        assert!(constant.holds);
        assert_eq!((constant.lhs, constant.rhs), (0.0, 0.0));
        assert!(metric_type2_test(&m, &[0; 3], 2, 1.0, 2.0, 1e-9).is_err());

        let s = metric_type2_search(&m, 2, 1_000, 1).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.worst_ratio, 2.0);
        let one = FiniteMetric::from_fn(1, |_, _| 0.0);
        assert_eq!(
            metric_type2_search(&one, 2, 100, 1).unwrap().worst_ratio,
            0.0
        );
    }

    #[test]
    fn radial_metric() {
        assert!((radial_distance([1.0, 0.0], [3.0, 0.0]) - 2.0).abs() < 1e-12);
        assert!((radial_distance([1.0, 0.0], [-2.0, 0.0]) - 3.0).abs() < 1e-12);
        assert!((radial_distance([1.0, 0.0], [0.0, 2.0]) - 3.0).abs() < 1e-12);
        let (_, m) = gen_radial_sample(1, 0);
        assert_eq!(m.dist, vec![vec![0.0]]);
        let (_, m) = gen_radial_sample(30, 8);
        assert!(check_metric_axioms(&m, 1e-9).holds);
        assert!(
            check_four_point(&m, &QuadrupleOptions::default())
                .unwrap()
                .holds
        );
    }
}
