//! Extremal mean-weight cycles: Karp's recurrence on every strongly connected
//! component, then a canonical witness among the optimal cycles.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

use super::graph::{EdgeStats, TransitionGraph};
use super::partition::Resolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalCycleResult<T> {
    /// Mean of the cycle's edge weights (`w_min` for a minimum, `w_max` for a maximum).
    pub value: T,
    /// Simple cycle, starting at its smallest node; the closing edge is implicit.
    pub cycle: Vec<usize>,
    pub kind: Extremum,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<Resolution>,
}

/// Strongly connected components (iterative Tarjan). Each component is
/// returned sorted ascending; components are ordered by smallest member.
pub fn strongly_connected_components<T: Real>(g: &TransitionGraph<T>) -> Vec<Vec<usize>> {
    let n = g.node_count();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    let adj: Vec<Vec<usize>> = (0..n).map(|u| g.out_edges(u).map(|(v, _)| v).collect()).collect();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if *pos < adj[u].len() {
                let v = adj[u][*pos];
                *pos += 1;
                if index[v] == UNSEEN {
                    index[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// A component re-indexed locally; local order matches global order.
struct Component<T> {
    nodes: Vec<usize>,
    adj: Vec<Vec<(usize, T)>>,
}

struct KarpOutcome<T> {
    mean: T,
    potential: Vec<T>,
    tol: T,
}

fn karp<T: Real>(c: &Component<T>) -> KarpOutcome<T> {
    let k = c.nodes.len();
    let inf = T::infinity();
    let mut dist = vec![inf; (k + 1) * k];
    dist[0] = T::zero();
    for step in 1..=k {
        let (prev, cur) = dist.split_at_mut(step * k);
        let prev = &prev[(step - 1) * k..];
        let cur = &mut cur[..k];
        for u in 0..k {
            let du = prev[u];
            if du == inf {
                continue;
            }
            for &(v, w) in &c.adj[u] {
                let cand = du + w;
                if cand < cur[v] {
                    cur[v] = cand;
                }
            }
        }
    }
    let row = |i: usize| &dist[i * k..(i + 1) * k];
    let mut mean = inf;
    for v in 0..k {
        let dk = row(k)[v];
        if dk == inf {
            continue;
        }
        let mut worst = -inf;
        for i in 0..k {
            let di = row(i)[v];
            if di != inf {
                worst = worst.max((dk - di) / T::from_usize(k - i));
            }
        }
        mean = mean.min(worst);
    }
    let potential = (0..k)
        .map(|v| {
            (0..k)
                .filter(|&i| row(i)[v] != inf)
                .map(|i| row(i)[v] - T::from_usize(i) * mean)
                .fold(inf, T::min)
        })
        .collect();
    let max_abs = c.adj.iter().flatten().map(|&(_, w)| w.abs()).fold(T::zero(), T::max);
    let kf = T::from_usize(k + 1);
    let tol = T::lit(64.0) * kf * T::epsilon() * (T::one() + kf * max_abs);
    KarpOutcome { mean, potential, tol }
}

/// Shortest, then lexicographically smallest, cycle of the subgraph of tight
/// edges. Only strictly shorter cycles can beat one found from a smaller start.
fn canonical_tight_cycle<T: Real>(c: &Component<T>, k: &KarpOutcome<T>, tol: T) -> Option<Vec<usize>> {
    let n = c.nodes.len();
    let tight: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            c.adj[u]
                .iter()
                .filter(|&&(v, w)| k.potential[u] + w - k.mean - k.potential[v] <= tol)
                .map(|&(v, _)| v)
                .collect()
        })
        .collect();
    let mut best: Option<Vec<usize>> = None;
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for s in 0..n {
        let limit = best.as_ref().map_or(usize::MAX, |b| b.len() - 1);
        if limit == 0 {
            break;
        }
        for &t in &touched {
            parent[t] = usize::MAX;
            depth[t] = usize::MAX;
        }
        touched.clear();
        let mut queue = VecDeque::from([s]);
        depth[s] = 0;
        touched.push(s);
        while let Some(u) = queue.pop_front() {
            if depth[u] >= limit {
                break;
            }
            if tight[u].contains(&s) {
                let mut cyc = vec![u];
                let mut x = u;
                while x != s {
                    x = parent[x];
                    cyc.push(x);
                }
                cyc.reverse();
                best = Some(cyc);
                break;
            }
            for &v in &tight[u] {
                if v > s && depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    touched.push(v);
                    queue.push_back(v);
                }
            }
        }
    }
    best
}

fn cycle_mean<T: Real>(g: &TransitionGraph<T>, cycle: &[usize], pick: fn(&EdgeStats<T>) -> T) -> T {
    let len = cycle.len();
    let sum: T = (0..len)
        .map(|i| pick(g.edge(cycle[i], cycle[(i + 1) % len]).expect("cycle edge present")))
        .sum();
    sum / T::from_usize(len)
}

fn extremal_cycle<T: Real>(g: &TransitionGraph<T>, kind: Extremum) -> Result<ExtremalCycleResult<T>> {
    let signed = |s: &EdgeStats<T>| match kind {
        Extremum::Min => s.w_min,
        Extremum::Max => -s.w_max,
    };
    let comps: Vec<Component<T>> = strongly_connected_components(g)
        .into_iter()
        .filter(|nodes| nodes.len() > 1 || g.edge(nodes[0], nodes[0]).is_some())
        .map(|nodes| {
            let local = |v: usize| nodes.binary_search(&v).ok();
            let adj = nodes
                .iter()
                .map(|&u| g.out_edges(u).filter_map(|(v, s)| Some((local(v)?, signed(s)))).collect())
                .collect();
            Component { nodes, adj }
        })
        .collect();
    if comps.is_empty() {
        return Err(Error::AcyclicGraph);
    }
    let outcomes: Vec<KarpOutcome<T>> = comps.par_iter().map(karp).collect();
    let best_mean = outcomes.iter().map(|o| o.mean).fold(T::infinity(), T::min);

    let mut witness: Option<Vec<usize>> = None;
    for (c, o) in comps.iter().zip(&outcomes) {
        if o.mean > best_mean + o.tol {
            continue;
        }
        let mut tol = o.tol;
        let local = loop {
            if let Some(cyc) = canonical_tight_cycle(c, o, tol) {
                break cyc;
            }
            tol = tol * T::lit(16.0);
        };
        let global: Vec<usize> = local.iter().map(|&i| c.nodes[i]).collect();
        let better = match &witness {
            None => true,
            Some(w) => (global.len(), &global) < (w.len(), w),
        };
        if better {
            witness = Some(global);
        }
    }
    let cycle = witness.expect("at least one cyclic component");
    let value = match kind {
        Extremum::Min => cycle_mean(g, &cycle, |s| s.w_min),
        Extremum::Max => cycle_mean(g, &cycle, |s| s.w_max),
    };
    Ok(ExtremalCycleResult { value, cycle, kind, resolution: None })
}

/// Minimum mean cycle over `w_min` weights.
pub fn min_mean_cycle<T: Real>(g: &TransitionGraph<T>) -> Result<ExtremalCycleResult<T>> {
    extremal_cycle(g, Extremum::Min)
}

/// Maximum mean cycle over `w_max` weights.
pub fn max_mean_cycle<T: Real>(g: &TransitionGraph<T>) -> Result<ExtremalCycleResult<T>> {
    extremal_cycle(g, Extremum::Max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_loops() -> TransitionGraph<f64> {
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        TransitionGraph::from_samples(2, [(0, 0, l2), (1, 1, l3), (0, 1, 10.0), (1, 0, 10.0)]).unwrap()
    }

    #[test]
    fn self_loops() {
        let g = two_loops();
        let lo = min_mean_cycle(&g).unwrap();
        assert_eq!((lo.value, lo.cycle.clone()), (2f64.ln(), vec![0]));
        let hi = max_mean_cycle(&g).unwrap();
        assert_eq!(hi.cycle, vec![0, 1]);
        assert_eq!(hi.value, 10.0);
    }

    #[test]
    fn two_cycle_mean() {
        let g = TransitionGraph::from_samples(2, [(0, 1, 0.2), (1, 0, 0.4)]).unwrap();
        let r = min_mean_cycle(&g).unwrap();
        assert!((r.value - 0.3f64).abs() < 1e-15);
        assert_eq!(r.cycle, vec![0, 1]);
    }

    #[test]
    fn max_of_self_loop_graph_without_cross_edges() {
        let (l2, l3) = (2f64.ln(), 3f64.ln());
        let g = TransitionGraph::from_samples(2, [(0, 0, l2), (1, 1, l3), (0, 1, 0.0)]).unwrap();
        let r = max_mean_cycle(&g).unwrap();
        assert_eq!((r.value, r.cycle), (l3, vec![1]));
    }

    #[test]
    fn acyclic_graph_is_an_error() {
        let g = TransitionGraph::from_samples(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(min_mean_cycle(&g), Err(Error::AcyclicGraph));
    }

    #[test]
    fn ties_prefer_short_then_lexicographic() {
        // Cycles 1→2→1 and 0→3→4→0 and 3→3 all have mean 1.
        let g = TransitionGraph::from_samples(
            5,
            [(1, 2, 1.0), (2, 1, 1.0), (0, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0), (3, 3, 1.0), (2, 0, 5.0)],
        )
        .unwrap();
        assert_eq!(min_mean_cycle(&g).unwrap().cycle, vec![3]);
        let g = TransitionGraph::from_samples(
            4,
            [(2, 3, 1.0), (3, 2, 1.0), (0, 1, 1.0), (1, 0, 1.0)],
        )
        .unwrap();
        assert_eq!(min_mean_cycle(&g).unwrap().cycle, vec![0, 1]);
    }

    #[test]
    fn scc_decomposition() {
        let g = TransitionGraph::from_samples(5, [(0, 1, 0.0), (1, 0, 0.0), (1, 2, 0.0), (2, 3, 0.0), (3, 2, 0.0), (4, 4, 0.0)])
            .unwrap();
        assert_eq!(strongly_connected_components(&g), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }
}
