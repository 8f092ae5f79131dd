use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use metric_tree::checks::{
    check_cn_midpoint, check_four_point, check_reshetnyak, distance_matrix, metric_type2_search,
    metric_type2_test, modulus_convexity_probe, negative_type_test, FiniteMetric, InequalityReport,
    QuadrupleOptions,
};
use metric_tree::compactness::{
    cover_number_subset, cover_number_tree, covering_profile, hull_cover_check,
    noncompactness_profiles, separated_max, width_limit_check, CoverResult, EntropyTarget,
};
use metric_tree::convexity::{
    ball, barycenter_set, chebyshev_center, convex_hull, diameter, intersect, project,
    ConvexSubtree, WeightedPoints,
};
use metric_tree::embeddings::{
    embed_l1, embed_linf, embed_spider_cube, lipschitz_constant, verify_isometry, TreeEmbedding,
};
use metric_tree::generators::{gen_binary_tree, gen_path, gen_random_tree, gen_spider};
use metric_tree::suite::{run_paper_acceptance, Fixtures};
use metric_tree::{MetricTree, TreePoint, TreeSpec, DEFAULT_TOL};

/// Exact geometry, embeddings, covering numbers and metric inequalities on
/// finite metric trees.
///
/// Trees are JSON files `{"vertices": [...], "edges": [{"u", "v", "w"}], "root"}`.
/// Finite metrics are JSON files `{"labels": [...], "dist": [[...], ...]}`.
/// Points are written `v:<id>` for a vertex or `e:<u>-<v>@<t>` for the point
/// at distance `t` from `u` on edge `u-v`. A point list is comma separated,
/// or `@FILE` to read literals from a file.
///
/// Exit status: 0 on success or when a checked inequality holds, 1 when a
/// violation is found, 2 on bad input.
#[derive(Parser, Debug)]
#[command(name = "mtree", version)]
struct Cli {
    /// Seed for every random choice made by the command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Absolute tolerance for comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TreeArg {
    /// Tree description (JSON).
    #[arg(long)]
    tree: PathBuf,
}

#[derive(Args, Debug)]
struct TreePoints {
    #[command(flatten)]
    tree: TreeArg,
    /// Point list: comma separated literals or @FILE.
    #[arg(long)]
    points: String,
}

#[derive(Args, Debug)]
struct Target {
    #[command(flatten)]
    tree: TreeArg,
    /// Finite subset to measure; the whole tree when omitted.
    #[arg(long)]
    points: Option<String>,
    /// Skeleton mesh used for packings of the whole tree.
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
}

#[derive(Args, Debug)]
struct MetricSource {
    /// Finite metric (JSON).
    #[arg(long, conflicts_with = "tree")]
    metric: Option<PathBuf>,
    /// Tree description (JSON); the metric is the distance matrix of --points.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Points of --tree; defaults to all vertices and edge midpoints.
    #[arg(long, requires = "tree")]
    points: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EmbedKind {
    L1,
    Linf,
    Cube,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Landmarks {
    Leaves,
    AllVertices,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Tree description (JSON); not used with --kind cube.
    #[arg(long, required_if_eq_any = [("kind", "l1"), ("kind", "linf")])]
    tree: Option<PathBuf>,
    /// Target: weighted ℓ1 over edges, ℓ∞ over landmark distances, or the
    /// spider with 2^N legs sent to the cube {-1,1}^N.
    #[arg(long, value_enum)]
    kind: EmbedKind,
    /// Root (ℓ1) or base point (ℓ∞); defaults to the tree root.
    #[arg(long)]
    root: Option<String>,
    /// ℓ∞ landmark set.
    #[arg(long, value_enum, default_value = "leaves")]
    landmarks: Landmarks,
    /// Cube dimension N for --kind cube.
    #[arg(long, required_if_eq("kind", "cube"))]
    n: Option<usize>,
    /// Points to embed; defaults to all vertices.
    #[arg(long)]
    points: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two points: --points P,Q.
    Dist(TreePoints),
    /// Geodesic between two points, listed edge by edge: --points P,Q.
    Segment(TreePoints),
    /// Median of three points, the common point of their three geodesics.
    Median(TreePoints),
    /// Convex hull of a point list as per-edge intervals.
    Hull(TreePoints),
    /// Chebyshev center and radius of a point list; the radius equals half
    /// the diameter on a tree.
    Center(TreePoints),
    /// Barycenter set C*(q) of a weighted point list: the intersection of the
    /// balls around each leaf ℓ of radius Σ_k α_k d(x_k, ℓ).
    Barycenter {
        #[command(flatten)]
        input: TreePoints,
        /// Nonnegative weights summing to 1; uniform when omitted.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Nearest-point projection of --point onto the convex hull of --points.
    Project {
        #[command(flatten)]
        input: TreePoints,
        /// Point to project.
        #[arg(long)]
        point: String,
    },
    /// Intersection of the closed balls B(points[i], radii[i]).
    BallIntersect {
        #[command(flatten)]
        input: TreePoints,
        /// Comma separated radii, one per point.
        #[arg(long)]
        radii: String,
    },
    /// Isometric image of tree points in ℓ1 or ℓ∞; the text report lists the
    /// coordinate labels, weights and one vector per point.
    Embed(EmbedArgs),
    /// Worst additive error and distortion of an embedding, or the Lipschitz
    /// constant between two finite metrics aligned by index (--metric, --target).
    VerifyIsometry {
        #[command(flatten)]
        embed: Option<EmbedArgs>,
        /// Source metric for the two-metric mode.
        #[arg(long, requires = "target", conflicts_with = "kind")]
        metric: Option<PathBuf>,
        /// Target metric for the two-metric mode.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Check this many seeded random pairs instead of all pairs.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Minimum number of ε-balls covering --points, or the whole tree.
    Cover {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        eps: f64,
    },
    /// Largest ε-separated subset of --points, or of a whole-tree skeleton.
    Sep {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        eps: f64,
    },
    /// Cover, net and packing numbers over a grid of scales, with the chain
    /// 𝒩_ε = 𝒦_ε ≤ ℳ_ε and ℳ_2ε ≤ 𝒩_ε checked per row.
    Profile {
        #[command(flatten)]
        target: Target,
        /// Comma separated scales.
        #[arg(long)]
        eps_grid: String,
    },
    /// Brackets [c2/2, c1] around the widths δ_1 .. δ_n.
    Widths {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        n: usize,
    },
    /// Checks 𝒩_{ε1+ε2}(conv S) ≤ 𝒩_{ε1}(S)·max(1, ⌈diam S / 4ε2⌉).
    Hullcover {
        #[command(flatten)]
        input: TreePoints,
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
    },
    /// Partition (α_k) and ball (β_k) noncompactness profiles; on trees α_k = 2β_k.
    Noncompact {
        #[command(flatten)]
        input: TreePoints,
        #[arg(long)]
        kmax: usize,
    },
    /// Metric inequality verifiers.
    #[command(subcommand)]
    Check(Check),
    /// Writes a generated tree description as JSON.
    #[command(subcommand)]
    Gen(Gen),
    /// Runs a named test suite.
    #[command(subcommand)]
    Suite(Suite),
}

#[derive(Subcommand, Debug)]
enum Check {
    /// d12 + d34 ≤ max(d13 + d24, d14 + d23) over all (or --sample) quadruples.
    FourPoint {
        #[command(flatten)]
        source: MetricSource,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// d12² + d34² ≤ d13² + d24² + d14² + d23² over all (or --sample) quadruples.
    Reshetnyak {
        #[command(flatten)]
        source: MetricSource,
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Midpoint inequality d(x0,m)² ≤ d(x0,x1)²/2 + d(x0,x2)²/2 - d(x1,x2)²/4
    /// for --points X0,X1,X2 with m the midpoint of [x1,x2].
    Cn(TreePoints),
    /// Whether (d_ij^p) is conditionally negative definite.
    Negtype {
        #[command(flatten)]
        source: MetricSource,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
    /// Cube inequality Σ d(f(ε), f(-ε))² ≤ K k^{1/p-1/2} Σ_ε Σ_i d(f(ε), f(ε^i))².
    /// With --map the given map is tested; otherwise maps {-1,1}^k → points
    /// are searched (K = 1, p = 2) and the worst one is reported.
    Type2 {
        #[command(flatten)]
        source: MetricSource,
        /// Cube dimension.
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Point indices f(ε), ε as a bitmask with bit i set iff ε_{i+1} = -1.
        #[arg(long)]
        map: Option<String>,
        /// Constant K.
        #[arg(long = "K", default_value_t = 1.0)]
        constant: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Largest number of maps tried; exhaustive when all maps fit.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Smallest pull-in 1 - d(a, m)/R over sampled chords of B(a, R) of
    /// length ≥ Rε; fails if it drops below ε/2.
    ConvexityModulus {
        #[command(flatten)]
        tree: TreeArg,
        /// Ball center a.
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Spider with center `o` and tips `1..=n`.
    Spider {
        /// Comma separated leg lengths.
        #[arg(long)]
        legs: String,
    },
    /// Interval [0, L] cut into equal edges.
    Path {
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 1)]
        segments: usize,
    },
    /// Binary tree of sign sequences with unit edges.
    Binary {
        #[arg(long)]
        height: i32,
    },
    /// Random recursive tree on n vertices, weights uniform in [wmin, wmax].
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        wmin: f64,
        #[arg(long, default_value_t = 1.0)]
        wmax: f64,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Every acceptance criterion of the library, one pass/fail line each.
    PaperAcceptance {
        /// Directory with tripod.json, c4.json, square.json and tree_*.json;
        /// the bundled fixtures when omitted.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

struct Outcome {
    text: String,
    result: Value,
    violation: bool,
    /// Text output is the body alone, without the report header.
    raw: bool,
}

impl Outcome {
    fn new(text: String, result: Value) -> Self {
        Self {
            text,
            result,
            violation: false,
            raw: false,
        }
    }

    fn violated(mut self, v: bool) -> Self {
        self.violation = v;
        self
    }

    fn raw(mut self) -> Self {
        self.raw = true;
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = if cli.json {
        let v = json!({
            "command": echo,
            "seed": cli.seed,
            "tolerance": cli.tol,
            "status": if outcome.violation { "violation" } else { "ok" },
            "result": outcome.result,
        });
        serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
    } else if outcome.raw {
        outcome.text
    } else {
        format!(
            "# mtree {echo}\n# seed {} tol {:e}\n{}",
            cli.seed, cli.tol, outcome.text
        )
    };
    let written = match &cli.out {
        Some(path) => {
            fs::write(path, report).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{report}");
            Ok(())
        }
    };
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(if outcome.violation { 1 } else { 0 })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_tree(path: &Path) -> Result<MetricTree> {
    let spec =
        TreeSpec::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    MetricTree::build(&spec).with_context(|| format!("building tree from {}", path.display()))
}

fn load_metric(path: &Path) -> Result<FiniteMetric> {
    FiniteMetric::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn split_list(list: &str) -> Result<Vec<String>> {
    let body = match list.strip_prefix('@') {
        Some(file) => read(Path::new(file))?,
        None => list.to_string(),
    };
    let items: Vec<String> = body
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    ensure!(!items.is_empty(), "empty list `{list}`");
    Ok(items)
}

fn parse_numbers(list: &str) -> Result<Vec<f64>> {
    split_list(list)?
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .with_context(|| format!("bad number `{s}`"))
        })
        .collect()
}

fn parse_points(t: &MetricTree, list: &str) -> Result<Vec<TreePoint>> {
    split_list(list)?
        .iter()
        .map(|s| Ok(t.parse_point(s)?))
        .collect()
}

fn exactly<const N: usize>(pts: Vec<TreePoint>) -> Result<[TreePoint; N]> {
    let n = pts.len();
    pts.try_into()
        .map_err(|_| anyhow::anyhow!("expected {N} points, got {n}"))
}

fn all_vertices(t: &MetricTree) -> Vec<TreePoint> {
    (0..t.vertex_count()).map(TreePoint::Vertex).collect()
}

fn vertices_and_midpoints(t: &MetricTree) -> Vec<TreePoint> {
    let mut pts = all_vertices(t);
    pts.extend((0..t.edge_count()).map(|e| t.edge_point(e, t.edge(e).w / 2.0)));
    pts
}

fn fmt_points(t: &MetricTree, pts: &[TreePoint]) -> Vec<String> {
    pts.iter().map(|p| t.format_point(p)).collect()
}

fn subtree_text(t: &MetricTree, s: &ConvexSubtree) -> String {
    if s.is_empty() {
        return "empty\n".into();
    }
    let rec = s.to_record(t);
    let mut out = match rec.vertices.is_empty() {
        true => "vertices: none\n".to_string(),
        false => format!("vertices: {}\n", rec.vertices.join(" ")),
    };
    for iv in &rec.intervals {
        out += &format!("edge {}-{}: [{}, {}]\n", iv.u, iv.v, iv.lo, iv.hi);
    }
    out += &format!("length: {}\n", s.length());
    out
}

fn subtree_json(t: &MetricTree, s: &ConvexSubtree) -> Value {
    json!({
        "empty": s.is_empty(),
        "set": s.to_record(t),
        "length": s.length(),
        "extreme_points": fmt_points(t, &s.extreme_points(t)),
    })
}

fn cover_outcome(t: &MetricTree, c: &CoverResult, what: &str) -> Outcome {
    let centers = fmt_points(t, &c.centers);
    let text = format!(
        "{what} {} at eps {} ({}, {})\n{}\n",
        c.count,
        c.epsilon,
        serde_json::to_value(c.method)
            .expect("method serializes")
            .as_str()
            .unwrap_or(""),
        if c.exact { "exact" } else { "bound" },
        centers.join("\n")
    );
    Outcome::new(
        text,
        json!({
            "epsilon": c.epsilon,
            "count": c.count,
            "exact": c.exact,
            "method": c.method,
            "centers": centers,
            "parts": c.parts,
        }),
    )
}

fn entropy_target(t: &MetricTree, target: &Target) -> Result<EntropyTarget> {
    Ok(match &target.points {
        Some(list) => EntropyTarget::Points(parse_points(t, list)?),
        None => EntropyTarget::WholeTree {
            delta: target.delta,
        },
    })
}

fn source_metric(src: &MetricSource) -> Result<FiniteMetric> {
    match (&src.metric, &src.tree) {
        (Some(m), _) => load_metric(m),
        (None, Some(tp)) => {
            let t = load_tree(tp)?;
            let pts = match &src.points {
                Some(list) => parse_points(&t, list)?,
                None => vertices_and_midpoints(&t),
            };
            Ok(distance_matrix(&t, &pts)?)
        }
        (None, None) => bail!("one of --metric or --tree is required"),
    }
}

fn inequality_outcome(name: &str, labels: &[String], r: &InequalityReport) -> Outcome {
    let mut text = format!(
        "{name}: {} (worst margin {:e})\n",
        if r.holds { "holds" } else { "violated" },
        r.worst_margin
    );
    if let Some(w) = &r.witness {
        let named: Vec<&str> = w.indices.iter().map(|&i| labels[i].as_str()).collect();
        text += &format!(
            "witness {}: lhs {} > rhs {}\n",
            named.join(" "),
            w.lhs,
            w.rhs
        );
    }
    Outcome::new(
        text,
        json!({ "check": name, "labels": labels, "report": r }),
    )
    .violated(!r.holds)
}

fn embed_points(t: &MetricTree, list: &Option<String>) -> Result<Vec<TreePoint>> {
    match list {
        Some(l) => parse_points(t, l),
        None => Ok(all_vertices(t)),
    }
}

fn base_point(t: &MetricTree, root: &Option<String>) -> Result<TreePoint> {
    match root {
        Some(r) => Ok(t.parse_point(r)?),
        None => Ok(TreePoint::Vertex(t.root())),
    }
}

/// Runs `f` on the embedding selected by `args` along with the points to map.
fn with_embedding<R>(
    args: &EmbedArgs,
    f: impl FnOnce(&dyn TreeEmbedding, &[TreePoint]) -> Result<R>,
) -> Result<R> {
    if let EmbedKind::Cube = args.kind {
        let n = args.n.context("--n is required for --kind cube")?;
        let cube = embed_spider_cube(n)?;
        let pts = embed_points(cube.tree(), &args.points)?;
        return f(&cube, &pts);
    }
    let t = load_tree(args.tree.as_deref().context("--tree is required")?)?;
    let pts = embed_points(&t, &args.points)?;
    let base = base_point(&t, &args.root)?;
    match args.kind {
        EmbedKind::L1 => f(&embed_l1(&t, base)?, &pts),
        EmbedKind::Linf => {
            let landmarks = match args.landmarks {
                Landmarks::Leaves => None,
                Landmarks::AllVertices => Some(all_vertices(&t)),
            };
            f(&embed_linf(&t, base, landmarks)?, &pts)
        }
        EmbedKind::Cube => unreachable!(),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    ensure!(
        tol.is_finite() && tol >= 0.0,
        "--tol must be a nonnegative number"
    );
    let seed = cli.seed;
    match &cli.command {
        Command::Dist(a) => {
            let t = load_tree(&a.tree.tree)?;
            let [p, q] = exactly(parse_points(&t, &a.points)?)?;
            let d = t.distance(&p, &q)?;
            Ok(Outcome::new(format!("{d}\n"), json!({ "distance": d })))
        }
        Command::Segment(a) => {
            let t = load_tree(&a.tree.tree)?;
            let [p, q] = exactly(parse_points(&t, &a.points)?)?;
            let s = t.segment(&p, &q)?;
            let pieces: Vec<Value> = s
                .pieces
                .iter()
                .map(|pc| {
                    let e = t.edge(pc.edge);
                    json!({
                        "u": t.vertex_id(e.u),
                        "v": t.vertex_id(e.v),
                        "from": pc.from,
                        "to": pc.to,
                    })
                })
                .collect();
            let mut text = String::new();
            for pc in &pieces {
                text += &format!(
                    "edge {}-{}: {} -> {}\n",
                    pc["u"].as_str().unwrap_or(""),
                    pc["v"].as_str().unwrap_or(""),
                    pc["from"],
                    pc["to"]
                );
            }
            let mid = t.format_point(&t.midpoint(&p, &q)?);
            text += &format!("length: {}\nmidpoint: {mid}\n", s.length);
            Ok(Outcome::new(
                text,
                json!({ "length": s.length, "pieces": pieces, "midpoint": mid }),
            ))
        }
        Command::Median(a) => {
            let t = load_tree(&a.tree.tree)?;
            let [x, y, z] = exactly(parse_points(&t, &a.points)?)?;
            let m = t.format_point(&t.median(&x, &y, &z)?);
            Ok(Outcome::new(format!("{m}\n"), json!({ "median": m })))
        }
        Command::Hull(a) => {
            let t = load_tree(&a.tree.tree)?;
            let pts = parse_points(&t, &a.points)?;
            let h = convex_hull(&t, &pts)?;
            let diam = diameter(&t, &pts);
            let mut result = subtree_json(&t, &h);
            result["diameter"] = json!(diam);
            Ok(Outcome::new(
                subtree_text(&t, &h) + &format!("diameter: {diam}\n"),
                result,
            ))
        }
        Command::Center(a) => {
            let t = load_tree(&a.tree.tree)?;
            let pts = parse_points(&t, &a.points)?;
            let (c, r) = chebyshev_center(&t, &pts)?;
            let diam = diameter(&t, &pts);
            let c = t.format_point(&c);
            Ok(Outcome::new(
                format!("center: {c}\nradius: {r}\ndiameter: {diam}\n"),
                json!({ "center": c, "radius": r, "diameter": diam }),
            ))
        }
        Command::Barycenter { input, weights } => {
            let t = load_tree(&input.tree.tree)?;
            let pts = parse_points(&t, &input.points)?;
            let wp = match weights {
                Some(w) => WeightedPoints::new(pts, parse_numbers(w)?)?,
                None => WeightedPoints::uniform(pts)?,
            };
            let set = barycenter_set(&t, &wp)?;
            let mut result = subtree_json(&t, &set);
            result["weights"] = json!(wp.weights());
            Ok(Outcome::new(subtree_text(&t, &set), result))
        }
        Command::Project { input, point } => {
            let t = load_tree(&input.tree.tree)?;
            let pts = parse_points(&t, &input.points)?;
            let y = t.parse_point(point)?;
            let hull = convex_hull(&t, &pts)?;
            let p = project(&t, &y, &hull)?;
            let d = t.dist(&y, &p);
            let p = t.format_point(&p);
            Ok(Outcome::new(
                format!("projection: {p}\ndistance: {d}\n"),
                json!({ "projection": p, "distance": d }),
            ))
        }
        Command::BallIntersect { input, radii } => {
            let t = load_tree(&input.tree.tree)?;
            let pts = parse_points(&t, &input.points)?;
            let radii = parse_numbers(radii)?;
            ensure!(
                pts.len() == radii.len(),
                "{} points but {} radii",
                pts.len(),
                radii.len()
            );
            let balls = pts
                .iter()
                .zip(&radii)
                .map(|(p, &r)| ball(&t, p, r))
                .collect::<metric_tree::Result<Vec<_>>>()?;
            let set = intersect(&t, &balls)?;
            Ok(Outcome::new(subtree_text(&t, &set), subtree_json(&t, &set)))
        }
        Command::Embed(args) => with_embedding(args, |emb, pts| {
            let set = emb.embed_all(pts)?;
            Ok(Outcome::new(set.to_text(), serde_json::to_value(&set)?).raw())
        }),
        Command::VerifyIsometry {
            embed,
            metric,
            target,
            sample,
        } => {
            if let (Some(m), Some(tg)) = (metric, target) {
                let (src, dst) = (load_metric(m)?, load_metric(tg)?);
                let lip = lipschitz_constant(&src, &dst)?;
                ensure!(src.len() == dst.len(), "metrics have different sizes");
                let mut worst = 0.0f64;
                for i in 0..src.len() {
                    for j in 0..src.len() {
                        worst = worst.max((src.d(i, j) - dst.d(i, j)).abs());
                    }
                }
                return Ok(Outcome::new(
                    format!("lipschitz constant: {lip}\nmax additive error: {worst:e}\n"),
                    json!({ "lipschitz_constant": lip, "max_additive_error": worst }),
                )
                .violated(worst > tol));
            }
            let args = embed
                .as_ref()
                .context("give --kind with a tree, or --metric with --target")?;
            with_embedding(args, |emb, pts| {
                let r = verify_isometry(emb, pts, *sample, seed)?;
                let t = emb.tree();
                let worst = r
                    .worst_pair
                    .as_ref()
                    .map(|(p, q)| vec![t.format_point(p), t.format_point(q)]);
                let mut text = format!(
                    "pairs checked: {}\nmax additive error: {:e}\nlipschitz constant: {}\n",
                    r.pairs_checked, r.max_additive_error, r.lipschitz_constant
                );
                if let Some(w) = &worst {
                    text += &format!("worst pair: {} {}\n", w[0], w[1]);
                }
                Ok(Outcome::new(
                    text,
                    json!({
                        "pairs_checked": r.pairs_checked,
                        "max_additive_error": r.max_additive_error,
                        "lipschitz_constant": r.lipschitz_constant,
                        "worst_pair": worst,
                    }),
                )
                .violated(r.max_additive_error > tol))
            })
        }
        Command::Cover { target, eps } => {
            let t = load_tree(&target.tree.tree)?;
            let c = match entropy_target(&t, target)? {
                EntropyTarget::Points(pts) => cover_number_subset(&t, &pts, *eps)?,
                EntropyTarget::WholeTree { .. } => cover_number_tree(&t, *eps)?,
            };
            Ok(cover_outcome(&t, &c, "cover"))
        }
        Command::Sep { target, eps } => {
            let t = load_tree(&target.tree.tree)?;
            let pts = match entropy_target(&t, target)? {
                EntropyTarget::Points(pts) => pts,
                EntropyTarget::WholeTree { delta } => t.skeleton(delta)?,
            };
            let c = separated_max(&t, &pts, *eps)?;
            Ok(cover_outcome(&t, &c, "separated"))
        }
        Command::Profile { target, eps_grid } => {
            let t = load_tree(&target.tree.tree)?;
            let grid = parse_numbers(eps_grid)?;
            let rows = covering_profile(&t, &entropy_target(&t, target)?, &grid)?;
            let mut text = "eps N K M M2eps chain\n".to_string();
            for r in &rows {
                text += &format!(
                    "{} {} {} {} {} {}\n",
                    r.epsilon,
                    r.n_cover,
                    r.k_net,
                    r.m_sep,
                    r.m_sep_double,
                    if r.chain_holds { "ok" } else { "FAIL" }
                );
            }
            let failed = rows.iter().any(|r| !r.chain_holds);
            Ok(Outcome::new(text, json!({ "rows": rows })).violated(failed))
        }
        Command::Widths { target, n } => {
            let t = load_tree(&target.tree.tree)?;
            ensure!(*n >= 1, "--n must be at least 1");
            let r = width_limit_check(&t, &entropy_target(&t, target)?, *n)?;
            let mut text = "n lower upper\n".to_string();
            for row in &r.rows {
                text += &format!("{} {} {}\n", row.n, row.lower, row.upper);
            }
            text += &format!("upper nonincreasing: {}\n", r.upper_nonincreasing);
            Ok(Outcome::new(text, serde_json::to_value(&r)?))
        }
        Command::Hullcover { input, eps1, eps2 } => {
            let t = load_tree(&input.tree.tree)?;
            let pts = parse_points(&t, &input.points)?;
            let r = hull_cover_check(&t, &pts, *eps1, *eps2)?;
            let text = format!(
                "hull cover {} <= {} x {} = {}: {}\n",
                r.lhs,
                r.subset_cover,
                r.multiplier,
                r.rhs,
                if r.holds { "holds" } else { "violated" }
            );
            Ok(Outcome::new(text, serde_json::to_value(&r)?).violated(!r.holds))
        }
        Command::Noncompact { input, kmax } => {
            let t = load_tree(&input.tree.tree)?;
            let pts = parse_points(&t, &input.points)?;
            let p = noncompactness_profiles(&t, &pts, *kmax)?;
            let mut text = "k alpha beta\n".to_string();
            for r in &p.rows {
                text += &format!("{} {} {}\n", r.k, r.alpha, r.beta);
            }
            let ratio_holds = p.rows.iter().all(|r| (r.alpha - 2.0 * r.beta).abs() <= tol);
            text += &format!("alpha = 2 beta: {ratio_holds}\n");
            let mut result = serde_json::to_value(&p)?;
            result["alpha_equals_twice_beta"] = json!(ratio_holds);
            Ok(Outcome::new(text, result).violated(!ratio_holds))
        }
        Command::Check(c) => run_check(c, seed, tol),
        Command::Gen(g) => {
            let t = match g {
                Gen::Spider { legs } => gen_spider(&parse_numbers(legs)?)?,
                Gen::Path { length, segments } => gen_path(*length, *segments)?,
                Gen::Binary { height } => gen_binary_tree(*height)?,
                Gen::Random { n, wmin, wmax } => gen_random_tree(*n, seed, (*wmin, *wmax))?,
            };
            let spec = serde_json::to_value(t.to_spec())?;
            let text = serde_json::to_string_pretty(&spec)? + "\n";
            Ok(Outcome::new(text, spec).raw())
        }
        Command::Suite(Suite::PaperAcceptance { fixtures }) => {
            let fx = match fixtures {
                Some(dir) => Fixtures::load(dir)
                    .with_context(|| format!("loading fixtures from {}", dir.display()))?,
                None => Fixtures::bundled(),
            };
            let report = run_paper_acceptance(&fx, seed)?;
            Ok(
                Outcome::new(report.to_text(), serde_json::to_value(&report)?)
                    .raw()
                    .violated(!report.all_passed()),
            )
        }
    }
}

fn run_check(c: &Check, seed: u64, tol: f64) -> Result<Outcome> {
    match c {
        Check::FourPoint { source, sample } | Check::Reshetnyak { source, sample } => {
            let m = source_metric(source)?;
            let opts = QuadrupleOptions {
                tol,
                seed,
                samples: *sample,
            };
            let (name, r) = if matches!(c, Check::FourPoint { .. }) {
                ("four-point", check_four_point(&m, &opts)?)
            } else {
                ("reshetnyak", check_reshetnyak(&m, &opts)?)
            };
            Ok(inequality_outcome(name, &m.labels, &r))
        }
        Check::Cn(a) => {
            let t = load_tree(&a.tree.tree)?;
            let pts = parse_points(&t, &a.points)?;
            let labels = fmt_points(&t, &pts);
            let [x0, x1, x2] = exactly(pts)?;
            let r = check_cn_midpoint(&t, &x0, &x1, &x2, tol)?;
            Ok(inequality_outcome("cn", &labels, &r))
        }
        Check::Negtype { source, p } => {
            let m = source_metric(source)?;
            let r = negative_type_test(&m, *p, tol)?;
            let mut text = format!(
                "negative type p = {}: {} (max projected eigenvalue {:e})\n",
                r.p,
                if r.holds { "holds" } else { "violated" },
                r.max_projected_eigenvalue
            );
            if let (Some(v), Some(f)) = (&r.witness_vector, r.form_value) {
                let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                text += &format!("witness [{}] form value {f}\n", v.join(", "));
            }
            Ok(Outcome::new(text, serde_json::to_value(&r)?).violated(!r.holds))
        }
        Check::Type2 {
            source,
            k,
            map,
            constant,
            p,
            budget,
        } => {
            let m = source_metric(source)?;
            match map {
                Some(list) => {
                    let f = split_list(list)?
                        .iter()
                        .map(|s| {
                            s.parse::<usize>()
                                .with_context(|| format!("bad index `{s}`"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let r = metric_type2_test(&m, &f, *k, *constant, *p, tol)?;
                    let text = format!(
                        "type 2: {} (lhs {} rhs {} ratio {})\n",
                        if r.holds { "holds" } else { "violated" },
                        r.lhs,
                        r.rhs,
                        r.ratio()
                    );
                    let mut result = serde_json::to_value(&r)?;
                    result["map"] = json!(f);
                    Ok(Outcome::new(text, result).violated(!r.holds))
                }
                None => {
                    let s = metric_type2_search(&m, *k, *budget, seed)?;
                    let r = metric_type2_test(&m, &s.arg_map, *k, *constant, *p, tol)?;
                    let labels: Vec<&str> =
                        s.arg_map.iter().map(|&i| m.labels[i].as_str()).collect();
                    let text = format!(
                        "type 2: {} over {} maps ({})\nworst map: {}\nlhs {} rhs {} ratio {}\n",
                        if r.holds { "holds" } else { "violated" },
                        s.maps_checked,
                        if s.exhaustive {
                            "exhaustive"
                        } else {
                            "sampled"
                        },
                        labels.join(" "),
                        r.lhs,
                        r.rhs,
                        r.ratio()
                    );
                    Ok(Outcome::new(text, json!({ "search": s, "worst": r })).violated(!r.holds))
                }
            }
        }
        Check::ConvexityModulus {
            tree,
            center,
            radius,
            eps,
            samples,
        } => {
            let t = load_tree(&tree.tree)?;
            let a = t.parse_point(center)?;
            let r = modulus_convexity_probe(&t, &a, *radius, *eps, *samples, seed)?;
            let (text, failed) = match r.observed_min {
                Some(min) => (
                    format!(
                        "observed minimum {min} over {} pairs, bound {}\n",
                        r.admissible_pairs, r.bound
                    ),
                    min < r.bound - tol,
                ),
                None => ("no admissible pair\n".to_string(), false),
            };
            Ok(Outcome::new(text, serde_json::to_value(&r)?).violated(failed))
        }
    }
}
