//! Standard families of finitely generated trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tree::{MetricTree, TreePoint, TreeSpec};

/// Id of the spider's center.
pub const SPIDER_CENTER: &str = "o";

/// Spider with one leg per entry of `lengths`, center `o`, leg tips `1..=n`.
pub fn gen_spider(lengths: &[f64]) -> Result<MetricTree> {
    let mut spec = TreeSpec::new().vertex(SPIDER_CENTER).root(SPIDER_CENTER);
    for (i, &len) in lengths.iter().enumerate() {
        let tip = (i + 1).to_string();
        spec = spec.vertex(tip.clone()).edge(SPIDER_CENTER, tip, len);
    }
    MetricTree::build(&spec)
}

/// The point `(leg, t)` of a spider built by [`gen_spider`]; `t = 0` is `o`.
pub fn spider_point(tree: &MetricTree, leg: usize, t: f64) -> Result<TreePoint> {
    tree.point_on_edge(SPIDER_CENTER, &leg.to_string(), t)
}

/// Interval `[0, length]` cut into `segments` equal edges.
pub fn gen_path(length: f64, segments: usize) -> Result<MetricTree> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::OutOfRange {
            what: "path length",
            value: length,
        });
    }
    if segments == 0 {
        return Err(Error::InvalidParameter(
            "path needs at least one segment".into(),
        ));
    }
    let width = segments.to_string().len();
    let id = |k: usize| format!("p{k:0width$}");
    let w = length / segments as f64;
    let mut spec = TreeSpec::new().root(id(0));
    for k in 0..=segments {
        spec = spec.vertex(id(k));
    }
    for k in 0..segments {
        spec = spec.edge(id(k), id(k + 1), w);
    }
    MetricTree::build(&spec)
}

/// Vertex id of a sign sequence in [`gen_binary_tree`]: `r` followed by `p`
/// for +1 and `m` for -1.
pub fn binary_vertex_id(signs: &[i8]) -> String {
    let mut s = String::with_capacity(signs.len() + 1);
    s.push('r');
    for &x in signs {
        s.push(if x > 0 { 'p' } else { 'm' });
    }
    s
}

/// Binary tree of the given height with unit edges joining each sequence to
/// its one-sign extensions.
pub fn gen_binary_tree(height: i32) -> Result<MetricTree> {
    if height < 0 {
        return Err(Error::InvalidParameter(format!(
            "binary tree height {height} is negative"
        )));
    }
    let mut spec = TreeSpec::new().vertex("r").root("r");
    let mut frontier = vec![String::from("r")];
    for _ in 0..height {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for parent in &frontier {
            for c in ['p', 'm'] {
                let child = format!("{parent}{c}");
                spec = spec
                    .vertex(child.clone())
                    .edge(parent.clone(), child.clone(), 1.0);
                next.push(child);
            }
        }
        frontier = next;
    }
    MetricTree::build(&spec)
}

/// Random recursive tree: vertex `k` attaches to a uniform earlier vertex with
/// a weight uniform in `weights`.
pub fn gen_random_tree(n: usize, seed: u64, weights: (f64, f64)) -> Result<MetricTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(&mut rng, n, weights)
}

pub fn random_tree_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    (lo, hi): (f64, f64),
) -> Result<MetricTree> {
    if n == 0 {
        return Err(Error::EmptyTree);
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidParameter(format!(
            "weight range [{lo}, {hi}] must be positive and ordered"
        )));
    }
    let width = n.to_string().len();
    let id = |k: usize| format!("v{k:0width$}");
    let mut spec = TreeSpec::new();
    for k in 0..n {
        spec = spec.vertex(id(k));
    }
    for k in 1..n {
        let parent = rng.gen_range(0..k);
        let w = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        spec = spec.edge(id(parent), id(k), w);
    }
    MetricTree::build(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hyperbolic distance `k + l - 2s` on sign sequences.
    fn hyperbolic(a: &[i8], b: &[i8]) -> f64 {
        let s = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        (a.len() + b.len() - 2 * s) as f64
    }

    fn sequences(height: usize) -> Vec<Vec<i8>> {
        let mut all = vec![vec![]];
        let mut level = vec![vec![]];
        for _ in 0..height {
            let mut next = Vec::new();
            for s in &level {
                for x in [1i8, -1] {
                    let mut t: Vec<i8> = s.clone();
                    t.push(x);
                    next.push(t);
                }
            }
            all.extend(next.iter().cloned());
            level = next;
        }
        all
    }

    #[test]
    fn binary_tree_matches_hyperbolic_distance() {
        for h in 0..=4 {
            let t = gen_binary_tree(h).unwrap();
            assert_eq!(t.vertex_count(), (1usize << (h + 1)) - 1);
            let seqs = sequences(h as usize);
            for a in &seqs {
                for b in &seqs {
                    let pa = t.vertex(&binary_vertex_id(a)).unwrap();
                    let pb = t.vertex(&binary_vertex_id(b)).unwrap();
                    assert_eq!(t.distance(&pa, &pb).unwrap(), hyperbolic(a, b));
                }
            }
        }
    }

    #[test]
    fn binary_tree_examples() {
        let t = gen_binary_tree(2).unwrap();
        let d = |a: &[i8], b: &[i8]| {
            t.distance(
                &t.vertex(&binary_vertex_id(a)).unwrap(),
                &t.vertex(&binary_vertex_id(b)).unwrap(),
            )
            .unwrap()
        };
        assert_eq!(d(&[1, 1], &[1, -1]), 2.0);
        assert_eq!(d(&[], &[1, 1]), 2.0);
        assert!(gen_binary_tree(-1).is_err());
    }

    #[test]
    fn spider_tripod() {
        let t = gen_spider(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(t.diameter(), 2.0);
        assert!(gen_spider(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn spider_radial_case_split() {
        let lengths = [1.0, 2.0, 0.5, 1.5];
        let t = gen_spider(&lengths).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let i = rng.gen_range(0..4);
            let j = rng.gen_range(0..4);
            let s = rng.gen::<f64>() * lengths[i];
            let r = rng.gen::<f64>() * lengths[j];
            let p = spider_point(&t, i + 1, s).unwrap();
            let q = spider_point(&t, j + 1, r).unwrap();
            let expected = if i == j { (s - r).abs() } else { s + r };
            assert!((t.distance(&p, &q).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn path_and_random() {
        let p = gen_path(1.0, 12).unwrap();
        assert_eq!(p.edge_count(), 12);
        assert!((p.diameter() - 1.0).abs() < 1e-12);
        assert!(gen_path(0.0, 3).is_err());
        let r1 = gen_random_tree(30, 9, (0.5, 2.0)).unwrap();
        let r2 = gen_random_tree(30, 9, (0.5, 2.0)).unwrap();
        assert_eq!(r1.to_spec(), r2.to_spec());
        assert!(r1.edges().iter().all(|e| (0.5..2.0).contains(&e.w)));
    }
}
