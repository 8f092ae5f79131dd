//! The acceptance suite: fourteen seeded checks over bundled fixtures,
//! rendered as a deterministic report.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::checks::{
    check_four_point, check_reshetnyak, distance_matrix, gen_completed_metric, metric_type2_search,
    metric_type2_test, negative_type_test, spider_negative_type_scan, FiniteMetric,
    QuadrupleOptions,
};
use crate::compactness::{
    affine_span_sup_distance, cover_number_tree, covering_profile, covers_tree, hull_cover_check,
    noncompactness_profiles, width_bounds, width_limit_check, EntropyTarget,
};
use crate::convexity::{
    barycenter_set, barycenter_set_from_radii, chebyshev_center, convex_hull, diameter, project,
    WeightedPoints,
};
use crate::embeddings::{
    embed_l1, embed_linf, embed_spider_cube, spider_interval_embedding, tripod_witness_l1,
    verify_isometry, TreeEmbedding,
};
use crate::error::{Error, Result};
use crate::generators::{gen_path, gen_spider, random_tree_with, spider_point};
use crate::tree::{MetricTree, TreePoint, TreeSpec, DEFAULT_TOL};

pub const SUITE_NAME: &str = "paper-acceptance";

const TRIPOD_FIXTURE: &str = include_str!("../fixtures/tripod.json");
const C4_FIXTURE: &str = include_str!("../fixtures/c4.json");
const SQUARE_FIXTURE: &str = include_str!("../fixtures/square.json");
const TREE_FIXTURES: [(&str, &str); 2] = [
    (
        "tree_caterpillar",
        include_str!("../fixtures/tree_caterpillar.json"),
    ),
    ("tree_tripod", include_str!("../fixtures/tree_tripod.json")),
];

/// Inputs read by the suite. Every `tree_*` metric is expected to satisfy
/// the four-point condition.
#[derive(Clone, Debug)]
pub struct Fixtures {
    pub tripod: MetricTree,
    pub c4: FiniteMetric,
    pub square: FiniteMetric,
    pub tree_metrics: Vec<(String, FiniteMetric)>,
}

impl Fixtures {
    pub fn bundled() -> Self {
        Self {
            tripod: TreeSpec::from_json(TRIPOD_FIXTURE)
                .and_then(|s| MetricTree::build(&s))
                .expect("bundled tripod fixture"),
            c4: FiniteMetric::from_json(C4_FIXTURE).expect("bundled c4 fixture"),
            square: FiniteMetric::from_json(SQUARE_FIXTURE).expect("bundled square fixture"),
            tree_metrics: TREE_FIXTURES
                .iter()
                .map(|(name, text)| {
                    (
                        name.to_string(),
                        FiniteMetric::from_json(text).expect("bundled tree fixture"),
                    )
                })
                .collect(),
        }
    }

    /// Reads `tripod.json`, `c4.json`, `square.json` and every `tree_*.json`
    /// from `dir`.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut names: Vec<String> = fs::read_dir(dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".json"))
            .collect();
        if names.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "fixture directory {} contains no .json fixtures",
                dir.display()
            )));
        }
        names.sort();
        let read = |name: &str| -> Result<String> {
            fs::read_to_string(dir.join(name)).map_err(|e| {
                Error::InvalidParameter(format!("fixture {}: {e}", dir.join(name).display()))
            })
        };
        let tree_metrics = names
            .iter()
            .filter(|n| n.starts_with("tree_"))
            .map(|n| {
                Ok((
                    n.trim_end_matches(".json").to_string(),
                    FiniteMetric::from_json(&read(n)?)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            tripod: MetricTree::build(&TreeSpec::from_json(&read("tripod.json")?)?)?,
            c4: FiniteMetric::from_json(&read("c4.json")?)?,
            square: FiniteMetric::from_json(&read("square.json")?)?,
            tree_metrics,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub time_limit_secs: f64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn within_time(&self) -> bool {
        self.elapsed.as_secs_f64() < self.time_limit_secs
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:02} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub tolerance: f64,
    pub criteria: Vec<CriterionResult>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    /// One line per criterion plus a summary; contains no timings.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite {} seed {} tol {:e}\n",
            self.suite, self.seed, self.tolerance
        );
        for c in &self.criteria {
            s += &c.line();
            s.push('\n');
        }
        let passed = self.criteria.iter().filter(|c| c.passed).count();
        s += &format!("{passed}/{} criteria passed\n", self.criteria.len());
        s
    }
}

pub const CRITERIA: [(u32, &str, f64); 14] = [
    (1, "tree axioms and hyperbolicity", 5.0),
    (2, "four-point implies Reshetnyak", 10.0),
    (3, "embedding exactness", 5.0),
    (4, "tripod witness", 1.0),
    (5, "big_set barycenter example", 1.0),
    (6, "negative type", 10.0),
    (7, "metric type 2 with constant 1", 5.0),
    (8, "covering profiles", 10.0),
    (9, "width brackets", 10.0),
    (10, "hull covering bound", 30.0),
    (11, "centeredness", 20.0),
    (12, "projection stability", 20.0),
    (13, "dist_to_tree example", 1.0),
    (14, "determinism", 120.0),
];

/// Independent stream per criterion so each one can run alone.
fn criterion_rng(seed: u64, id: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

fn random_points<R: Rng>(t: &MetricTree, rng: &mut R, k: usize) -> Vec<TreePoint> {
    (0..k).map(|_| t.sample_point(rng)).collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

pub fn run_criterion(id: u32, fx: &Fixtures, seed: u64) -> Result<CriterionResult> {
    let &(_, title, limit) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidParameter(format!("no criterion {id}")))?;
    let start = Instant::now();
    let mut rng = criterion_rng(seed, id);
    let out = match id {
        1 => tree_axioms(fx, &mut rng),
        2 => four_point_implies_reshetnyak(&mut rng),
        3 => embedding_exactness(&mut rng),
        4 => tripod_witness(fx),
        5 => big_set(),
        6 => negative_type(fx, &mut rng),
        7 => type2(fx, &mut rng),
        8 => covering(&mut rng),
        9 => widths(),
        10 => hull_cover(&mut rng),
        11 => centeredness(&mut rng),
        12 => projection_stability(&mut rng),
        13 => dist_to_tree(),
        _ => determinism(fx, seed),
    }?;
    Ok(CriterionResult {
        id,
        title: title.to_string(),
        passed: out.passed,
        detail: out.detail,
        time_limit_secs: limit,
        elapsed: start.elapsed(),
    })
}

fn run_pass(fx: &Fixtures, seed: u64) -> Result<Vec<CriterionResult>> {
    (1..=13).map(|id| run_criterion(id, fx, seed)).collect()
}

pub fn run_paper_acceptance(fx: &Fixtures, seed: u64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut criteria = run_pass(fx, seed)?;
    let first = start.elapsed();
    let again = Instant::now();
    let second = run_pass(fx, seed)?;
    let render =
        |rows: &[CriterionResult]| rows.iter().map(|c| c.line() + "\n").collect::<String>();
    let identical = render(&criteria) == render(&second);
    criteria.push(CriterionResult {
        id: 14,
        title: CRITERIA[13].1.to_string(),
        passed: identical,
        detail: format!(
            "second pass over criteria 1-13 {} the first",
            if identical {
                "reproduces byte for byte"
            } else {
                "DIFFERS from"
            }
        ),
        time_limit_secs: CRITERIA[13].2,
        elapsed: first + again.elapsed(),
    });
    Ok(SuiteReport {
        suite: SUITE_NAME.to_string(),
        seed,
        tolerance: DEFAULT_TOL,
        criteria,
        wall_time: start.elapsed(),
    })
}

/// Criterion 14 on its own: the suite body run twice and compared.
fn determinism(fx: &Fixtures, seed: u64) -> Result<Outcome> {
    let a = run_pass(fx, seed)?;
    let b = run_pass(fx, seed)?;
    let same = a.iter().zip(&b).all(|(x, y)| x.line() == y.line());
    outcome(same, format!("repeat pass identical: {same}"))
}

fn tree_axioms(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10 {
        let n = rng.gen_range(5..=50);
        let t = random_tree_with(rng, n, (0.1, 2.0))?;
        let mut pts: Vec<TreePoint> = (0..t.vertex_count()).map(TreePoint::Vertex).collect();
        pts.extend(random_points(&t, rng, 20));
        let m = distance_matrix(&t, &pts)?;
        let opts = QuadrupleOptions {
            tol: DEFAULT_TOL,
            seed: rng.gen(),
            samples: Some(1000),
        };
        worst = worst.max(check_four_point(&m, &opts)?.worst_margin);
    }
    let exhaustive = QuadrupleOptions::default();
    let c4 = check_four_point(&fx.c4, &exhaustive)?;
    let sq = check_four_point(&fx.square, &exhaustive)?;
    let witness = |r: &crate::checks::InequalityReport| r.witness.as_ref().map(|w| (w.lhs, w.rhs));
    let c4_ok =
        matches!(witness(&c4), Some((l, r)) if (l - 4.0).abs() < 1e-12 && (r - 2.0).abs() < 1e-12);
    let sq_ok = matches!(witness(&sq), Some((l, r)) if (l - 2.0 * 2f64.sqrt()).abs() < 1e-12 && (r - 2.0).abs() < 1e-12);
    let mut bad_fixtures = Vec::new();
    for (name, m) in &fx.tree_metrics {
        if !check_four_point(m, &exhaustive)?.holds {
            bad_fixtures.push(name.clone());
        }
    }
    let passed = worst <= DEFAULT_TOL && c4_ok && sq_ok && bad_fixtures.is_empty();
    let mut detail = format!(
        "random trees worst margin {worst:.3e}; c4 witness {:?}; square witness {:?}; {} tree fixtures",
        witness(&c4).map(|(l, r)| format!("{l} > {r}")),
        witness(&sq).map(|(l, r)| format!("{l:.6} > {r}")),
        fx.tree_metrics.len()
    );
    if !bad_fixtures.is_empty() {
        detail += &format!("; four-point FAILS on {}", bad_fixtures.join(", "));
    }
    outcome(passed, detail)
}

fn four_point_implies_reshetnyak(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (mut four_point, mut violations) = (0, 0);
    let total = 1200;
    for i in 0..total {
        let m = if i % 2 == 0 {
            gen_completed_metric(rng.gen_range(4..=7), rng.gen())
        } else {
            let n = rng.gen_range(2..=10);
            let t = random_tree_with(rng, n, (0.1, 2.0))?;
            let k = rng.gen_range(4..=7);
            distance_matrix(&t, &random_points(&t, rng, k))?
        };
        let opts = QuadrupleOptions::default();
        if check_four_point(&m, &opts)?.holds {
            four_point += 1;
            if !check_reshetnyak(&m, &opts)?.holds {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{total} metrics, {four_point} satisfy four-point, {violations} of those fail Reshetnyak"),
    )
}

fn embedding_exactness(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (mut l1, mut linf) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let n = rng.gen_range(5..=40);
        let t = random_tree_with(rng, n, (0.1, 2.0))?;
        let pts = random_points(&t, rng, 60);
        let root = t.sample_point(rng);
        let s = rng.gen();
        l1 = l1.max(verify_isometry(&embed_l1(&t, root)?, &pts, Some(200), s)?.max_additive_error);
        linf = linf.max(
            verify_isometry(&embed_linf(&t, root, None)?, &pts, Some(200), s)?.max_additive_error,
        );
    }
    let mut cube = 0.0f64;
    for dim in 1..=6 {
        let c = embed_spider_cube(dim)?;
        let t = c.tree();
        let vertices: Vec<TreePoint> = (0..t.vertex_count()).map(TreePoint::Vertex).collect();
        cube = cube.max(verify_isometry(&c, &vertices, None, 0)?.max_additive_error);
        let interior = random_points(t, rng, 100);
        cube = cube.max(verify_isometry(&c, &interior, Some(50), rng.gen())?.max_additive_error);
    }
    outcome(
        l1 < 1e-9 && linf < 1e-9 && cube < 1e-9,
        format!("max additive error l1 {l1:.3e}, linf {linf:.3e}, spider cube N<=6 {cube:.3e}"),
    )
}

fn leg_offset(t: &MetricTree, p: &TreePoint, center: &TreePoint) -> f64 {
    t.dist(p, center)
}

fn tripod_witness(fx: &Fixtures) -> Result<Outcome> {
    let w = tripod_witness_l1(0.1, 0.2)?;
    let mut pair_err = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                pair_err = pair_err.max((w.dist(&w.f[i], &w.f[j]) - 2.0).abs());
            }
        }
    }
    let target = [0.9, 1.2, 1.2];
    let d_err = (0..3)
        .map(|i| (w.d[i] - target[i]).abs())
        .fold(0.0, f64::max);
    let t = &fx.tripod;
    let o = t.vertex("o")?;
    let leaves = ["1", "2", "3"]
        .iter()
        .map(|v| t.vertex(v))
        .collect::<Result<Vec<_>>>()?;
    let s = barycenter_set_from_radii(t, &leaves, &w.d)?;
    let mut ext: Vec<f64> = s
        .extreme_points(t)
        .iter()
        .map(|p| leg_offset(t, p, &o))
        .collect();
    ext.sort_by(f64::total_cmp);
    let on_leg1 = s
        .extreme_points(t)
        .iter()
        .all(|p| (t.dist(p, &leaves[0]) + t.dist(p, &o) - 1.0).abs() < 1e-9);
    let interval_ok = ext.len() == 2
        && (ext[0] - 0.1).abs() < 1e-9
        && (ext[1] - 0.2).abs() < 1e-9
        && on_leg1
        && (s.length() - 0.1).abs() < 1e-9;
    outcome(
        pair_err < 1e-12 && d_err < 1e-12 && interval_ok,
        format!(
            "pairwise |f_i - f_j| error {pair_err:.1e}; d = ({:.12}, {:.12}, {:.12}); set = leg 1 over {:?}",
            w.d[0], w.d[1], w.d[2],
            ext.iter().map(|x| format!("{x:.9}")).collect::<Vec<_>>()
        ),
    )
}

fn big_set() -> Result<Outcome> {
    let t = gen_spider(&[1.0; 4])?;
    let o = t.vertex("o")?;
    let xs = (1..=3)
        .map(|i| spider_point(&t, i, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let c = barycenter_set(&t, &WeightedPoints::uniform(xs)?)?;
    let ext = c.extreme_points(&t);
    let third = 1.0 / 3.0;
    let radii_ok = ext.len() == 4 && ext.iter().all(|p| (t.dist(p, &o) - third).abs() < 1e-9);
    let distinct_legs = ext.iter().enumerate().all(|(i, p)| {
        ext[i + 1..]
            .iter()
            .all(|q| (t.dist(p, q) - 2.0 * third).abs() < 1e-9)
    });
    let four_ok = radii_ok
        && distinct_legs
        && c.contains(&o, 1e-9)
        && (c.length() - 4.0 * third).abs() < 1e-9;

    let x1 = spider_point(&t, 1, 1.0)?;
    let x2 = spider_point(&t, 2, 0.5)?;
    let mid = t.midpoint(&x1, &x2)?;
    let pair = barycenter_set(&t, &WeightedPoints::uniform(vec![x1, x2])?)?;
    let singleton = pair.length() < 1e-9
        && pair.contains(&mid, 1e-9)
        && pair
            .extreme_points(&t)
            .iter()
            .all(|p| t.dist(p, &mid) < 1e-9);
    outcome(
        four_ok && singleton,
        format!(
            "n=3: {} extreme points at radius {:?}, total length {:.9}; n=2: singleton at midpoint {}",
            ext.len(),
            ext.iter().map(|p| format!("{:.9}", t.dist(p, &o))).collect::<Vec<_>>(),
            c.length(),
            singleton
        ),
    )
}

fn negative_type(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let t = random_tree_with(rng, n, (0.1, 2.0))?;
        let k = rng.gen_range(2..=8);
        let m = distance_matrix(&t, &random_points(&t, rng, k))?;
        let r = negative_type_test(&m, 1.0, 1e-8)?;
        worst = worst.max(r.max_projected_eigenvalue);
        failures += !r.holds as usize;
    }
    let t = &fx.tripod;
    let pts = ["o", "1", "2", "3"]
        .iter()
        .map(|v| t.vertex(v))
        .collect::<Result<Vec<_>>>()?;
    let tri = negative_type_test(&distance_matrix(t, &pts)?, 2.0, DEFAULT_TOL)?;
    let tri_ok = !tri.holds && tri.form_value.is_some_and(|f| f > 0.0);
    let scan = spider_negative_type_scan(3, 2.0, DEFAULT_TOL)?;
    let (r2, r3) = (&scan[1], &scan[2]);
    let scan_ok = r2.holds
        && r2.uniform_form.abs() < 1e-12
        && !r3.holds
        && (r3.uniform_form - 6.0).abs() < 1e-12
        && r3.threshold == Some(2.0);
    outcome(
        failures == 0 && worst <= 1e-8 && tri_ok && scan_ok,
        format!(
            "p=1: 500 configurations, {failures} failures, max eigenvalue {worst:.3e}; tripod p=2 form {:.6}; spider scan forms n=2 {}, n=3 {}, threshold {:?}",
            tri.form_value.unwrap_or(0.0),
            r2.uniform_form,
            r3.uniform_form,
            r3.threshold
        ),
    )
}

fn type2(fx: &Fixtures, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = &fx.tripod;
    let mut pts = ["o", "1", "2", "3"]
        .iter()
        .map(|v| t.vertex(v))
        .collect::<Result<Vec<_>>>()?;
    pts.push(t.point_on_edge("o", "1", 0.5)?);
    let m = distance_matrix(t, &pts)?;
    let search = metric_type2_search(&m, 2, 625, rng.gen())?;
    let c4 = metric_type2_test(&fx.c4, &[0, 1, 3, 2], 2, 1.0, 2.0, DEFAULT_TOL)?;
    let passed = search.exhaustive
        && search.maps_checked == 625
        && search.worst_ratio <= 1.0 + 1e-12
        && !c4.holds
        && c4.lhs == 16.0
        && c4.rhs == 8.0;
    outcome(
        passed,
        format!(
            "{} maps checked (exhaustive {}), worst ratio {:.12}; c4 identity lhs/rhs = {}/{}",
            search.maps_checked, search.exhaustive, search.worst_ratio, c4.lhs, c4.rhs
        ),
    )
}

fn covering(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let path = gen_path(1.0, 10)?;
    let mut path_ok = true;
    let mut counts = Vec::new();
    for k in 1..=12usize {
        let eps = 0.05 * k as f64;
        let c = cover_number_tree(&path, eps)?;
        let expected = 10usize.div_ceil(k);
        path_ok &= c.count == expected && covers_tree(&path, &c.centers, eps, DEFAULT_TOL)?;
        counts.push(c.count);
    }
    let tripod = gen_spider(&[1.0; 3])?;
    let k_half = cover_number_tree(&tripod, 0.5)?.count;
    let (mut rows, mut broken, mut below) = (0, 0, 0);
    for _ in 0..20 {
        let n = rng.gen_range(4..=15);
        let t = random_tree_with(rng, n, (0.1, 1.5))?;
        let k = rng.gen_range(3..=12);
        let a = random_points(&t, rng, k);
        for r in covering_profile(&t, &EntropyTarget::Points(a), &[0.1, 0.25, 0.5, 1.0, 2.0])? {
            rows += 1;
            broken += !r.chain_holds as usize;
            below += r.net_below_packing as usize;
        }
    }
    outcome(
        path_ok && k_half == 3 && broken == 0,
        format!(
            "path profile {counts:?}; tripod K_0.5 = {k_half}; {rows} random rows, {broken} chain violations, {below} rows with K < M"
        ),
    )
}

fn widths() -> Result<Outcome> {
    let path = gen_path(1.0, 10)?;
    let target = EntropyTarget::WholeTree { delta: 1e-3 };
    let report = width_limit_check(&path, &target, 20)?;
    let path_err = report
        .rows
        .iter()
        .map(|w| {
            let exact = 1.0 / (2.0 * w.n as f64);
            (w.lower - exact).abs().max((w.upper - exact).abs())
        })
        .fold(0.0, f64::max);
    let spider = gen_spider(&[1.0; 8])?;
    let mut spider_lower = f64::INFINITY;
    for n in 1..=7 {
        spider_lower = spider_lower
            .min(width_bounds(&spider, &EntropyTarget::WholeTree { delta: 0.05 }, n)?.lower);
    }
    let cube = embed_spider_cube(3)?;
    let skel = cube.tree().skeleton(0.1)?;
    let image = cube.embed_all(&skel)?;
    let coords: Vec<Vec<f64>> = image.points.into_iter().map(|p| p.coords).collect();
    let (dim, sup) = affine_span_sup_distance(&coords)?;
    let tripod = gen_spider(&[1.0; 3])?;
    let tips = ["1", "2", "3"]
        .iter()
        .map(|v| tripod.vertex(v))
        .collect::<Result<Vec<_>>>()?;
    let finite = width_limit_check(&tripod, &EntropyTarget::Points(tips), 4)?;
    let finite_zero = finite.rows[2..]
        .iter()
        .all(|w| w.upper == 0.0 && w.lower == 0.0);
    let passed = path_err <= 1e-3
        && report.upper_nonincreasing
        && finite.upper_nonincreasing
        && finite_zero
        && spider_lower >= 1.0 - 1e-9
        && dim == 3
        && sup < 1e-9;
    outcome(
        passed,
        format!(
            "path n<=20 max bracket error {path_err:.3e}, upper nonincreasing {}, last upper {:.6}; 8-leg spider min lower {spider_lower:.9}; cube image span dim {dim}, sup distance {sup:.1e}; tripod tips brackets vanish from n=3: {finite_zero}",
            report.upper_nonincreasing, report.final_upper
        ),
    )
}

fn hull_cover(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut failures = 0;
    let mut tight = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=25);
        let t = random_tree_with(rng, n, (0.1, 2.0))?;
        let k = rng.gen_range(1..=12);
        let s = random_points(&t, rng, k);
        let (e1, e2) = (rng.gen_range(0.05..1.5), rng.gen_range(0.05..1.5));
        let r = hull_cover_check(&t, &s, e1, e2)?;
        failures += !r.holds as usize;
        tight += (r.lhs == r.rhs) as usize;
    }
    outcome(
        failures == 0,
        format!("100 instances, {failures} violations, {tight} with equality"),
    )
}

fn centeredness(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let delta = 1e-3;
    let (mut radius_err, mut slack, mut beat, mut ratio_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let t = random_tree_with(rng, n, (0.1, 1.0))?;
        let k = rng.gen_range(1..=8);
        let a = random_points(&t, rng, k);
        let (c, r) = chebyshev_center(&t, &a)?;
        let diam = diameter(&t, &a);
        radius_err = radius_err.max((r - diam / 2.0).abs());
        slack = slack.max(a.iter().map(|p| t.dist(&c, p)).fold(0.0, f64::max) - r);
        let best = t
            .skeleton(delta)?
            .iter()
            .map(|s| a.iter().map(|p| t.dist(s, p)).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        beat = beat.max(r - best);
        let prof = noncompactness_profiles(&t, &a, a.len())?;
        for row in &prof.rows {
            ratio_err = ratio_err.max((row.alpha - 2.0 * row.beta).abs());
        }
    }
    outcome(
        radius_err <= 1e-12 && slack <= 1e-9 && beat <= delta && ratio_err <= 1e-12,
        format!(
            "200 subsets: |radius - diam/2| <= {radius_err:.1e}, coverage slack {slack:.1e}, skeleton improvement {beat:.1e}, max |alpha_k - 2 beta_k| {ratio_err:.1e}"
        ),
    )
}

fn projection_stability(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (mut checked, mut escapes) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let t = random_tree_with(rng, n, (0.2, 1.5))?;
        let k = rng.gen_range(2..=5);
        let xs = random_points(&t, rng, k);
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let wp = WeightedPoints::new(xs.clone(), raw.iter().map(|w| w / total).collect())?;
        let cstar = barycenter_set(&t, &wp)?;
        let hull = convex_hull(&t, &xs)?;
        for x0 in cstar.skeleton(&t, 0.05) {
            checked += 1;
            if !cstar.contains(&project(&t, &x0, &hull)?, 1e-9) {
                escapes += 1;
            }
        }
    }
    outcome(
        escapes == 0,
        format!("{checked} skeleton points projected, {escapes} left the barycenter set"),
    )
}

fn dist_to_tree() -> Result<Outcome> {
    let e = spider_interval_embedding(3)?;
    let t = e.tree();
    let o = t.vertex("o")?;
    let mut best = (f64::INFINITY, o);
    for p in t.skeleton(1e-2)? {
        let d = e.distance_to_barycenter(&p)?;
        if d < best.0 {
            best = (d, p);
        }
    }
    let at_o = t.dist(&best.1, &o) < 1e-12;
    outcome(
        best.0 >= 1.0 - 1e-9 && at_o,
        format!(
            "min distance to barycenter {:.12} at {}",
            best.0,
            t.format_point(&best.1)
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures_parse() {
        let fx = Fixtures::bundled();
        assert_eq!(fx.tripod.vertex_count(), 4);
        assert_eq!(fx.tree_metrics.len(), 2);
    }

    #[test]
    fn cheap_criteria_pass() {
        let fx = Fixtures::bundled();
        for id in [4, 5, 7, 13] {
            let r = run_criterion(id, &fx, 42).unwrap();
            assert!(r.passed, "{}", r.line());
        }
    }
}
