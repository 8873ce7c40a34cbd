#![allow(dead_code)]

use lyapmin::{Axis, MapSystem};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Built-in maps used by the randomized checks.
pub fn zoo() -> Vec<(&'static str, MapSystem<f64>)> {
    vec![
        ("doubling", MapSystem::doubling()),
        ("perturbed_doubling_0.05", MapSystem::perturbed_doubling(0.05).unwrap()),
        ("perturbed_doubling_0.15", MapSystem::perturbed_doubling(0.15).unwrap()),
        ("tripling", MapSystem::linear_circle(3)),
        ("flip", MapSystem::linear_circle(-2)),
        ("cat", MapSystem::cat_map()),
        ("toral_3x3", MapSystem::toral_endomorphism(vec![vec![2, 1, 0], vec![1, 1, 1], vec![0, 1, 2]]).unwrap()),
        ("product", MapSystem::product(MapSystem::doubling(), MapSystem::linear_circle(3)).unwrap()),
        ("intermittent", MapSystem::intermittent()),
        ("cubic_interval", MapSystem::polynomial(vec![0.1, 0.5, 0.3, -0.2], Axis::Interval { lo: 0.0, hi: 1.0 }).unwrap()),
    ]
}

pub fn random_point(rng: &mut ChaCha8Rng, sys: &MapSystem<f64>) -> Vec<f64> {
    sys.axes()
        .iter()
        .map(|a| {
            let (lo, hi) = a.bounds();
            rng.gen_range(lo..hi)
        })
        .collect()
}

pub fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return v;
        }
    }
}

/// Random multigraph edge list with at most `max_nodes` nodes and `max_edges` edges.
pub fn random_edges(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> (usize, Vec<(usize, usize, f64)>) {
    let n = rng.gen_range(1..=max_nodes);
    let m = rng.gen_range(1..=max_edges);
    let edges = (0..m)
        .map(|_| {
            // Small integer grid plus noise produces many exact ties.
            let w = if rng.gen_bool(0.5) { rng.gen_range(-3..=3) as f64 } else { rng.gen_range(-3.0..3.0) };
            (rng.gen_range(0..n), rng.gen_range(0..n), w)
        })
        .collect();
    (n, edges)
}

/// Every simple cycle of the graph, each starting at its smallest node, with
/// the best parallel-edge weight chosen by `pick`.
pub fn simple_cycle_means(n: usize, edges: &[(usize, usize, f64)], pick: fn(f64, f64) -> f64) -> Vec<(Vec<usize>, f64)> {
    let mut w: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for &(u, v, x) in edges {
        w[u][v] = Some(w[u][v].map_or(x, |y| pick(x, y)));
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut path = vec![s];
        let mut on = vec![false; n];
        on[s] = true;
        dfs(s, s, &w, &mut path, &mut on, 0.0, &mut out);
    }
    out
}

fn dfs(
    s: usize,
    u: usize,
    w: &[Vec<Option<f64>>],
    path: &mut Vec<usize>,
    on: &mut [bool],
    acc: f64,
    out: &mut Vec<(Vec<usize>, f64)>,
) {
    for v in s..w.len() {
        let Some(x) = w[u][v] else { continue };
        if v == s {
            out.push((path.clone(), (acc + x) / path.len() as f64));
        } else if !on[v] {
            on[v] = true;
            path.push(v);
            dfs(s, v, w, path, on, acc + x, out);
            path.pop();
            on[v] = false;
        }
    }
}
