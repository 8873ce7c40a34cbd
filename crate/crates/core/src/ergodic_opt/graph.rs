//! Weighted transition graphs induced by the lifted dynamics on a partition.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::MapSystem;
use crate::error::{Error, Result};
use crate::lowdisc;
use crate::real::Real;
use crate::sphere_bundle::lift_with_phi;

use super::partition::SpherePartition;

/// Merged statistics of all samples realizing one edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeStats<T> {
    pub w_min: T,
    pub w_max: T,
    pub samples: u64,
}

/// Directed graph in compressed adjacency form; out-edges of each node are
/// sorted by target and parallel samples are merged.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionGraph<T> {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    stats: Vec<EdgeStats<T>>,
}

impl<T: Real> TransitionGraph<T> {
    /// Assemble from `(src, dst, weight)` samples.
    pub fn from_samples<I>(node_count: usize, samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut per_node: Vec<Vec<(usize, T)>> = vec![Vec::new(); node_count];
        for (src, dst, w) in samples {
            if src >= node_count || dst >= node_count {
                return Err(Error::InvalidParameter(format!(
                    "edge {src} -> {dst} outside {node_count} nodes"
                )));
            }
            per_node[src].push((dst, w));
        }
        Self::from_adjacency(per_node)
    }

    fn from_adjacency(per_node: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(per_node.len() + 1);
        let mut targets = Vec::new();
        let mut stats: Vec<EdgeStats<T>> = Vec::new();
        offsets.push(0);
        for mut out in per_node {
            out.sort_by_key(|&(dst, _)| dst);
            let start = targets.len();
            for (dst, w) in out {
                if !w.is_finite() {
                    return Err(Error::InvalidParameter("edge weights must be finite".into()));
                }
                if targets.len() > start && *targets.last().unwrap() == dst {
                    let s = stats.last_mut().unwrap();
                    s.w_min = s.w_min.min(w);
                    s.w_max = s.w_max.max(w);
                    s.samples += 1;
                } else {
                    targets.push(dst);
                    stats.push(EdgeStats { w_min: w, w_max: w, samples: 1 });
                }
            }
            offsets.push(targets.len());
        }
        Ok(TransitionGraph { offsets, targets, stats })
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = (usize, &EdgeStats<T>)> + '_ {
        let r = self.offsets[node]..self.offsets[node + 1];
        self.targets[r.clone()].iter().copied().zip(&self.stats[r])
    }

    /// Statistics of the edge `src → dst`, if present.
    pub fn edge(&self, src: usize, dst: usize) -> Option<&EdgeStats<T>> {
        let r = self.offsets[src]..self.offsets[src + 1];
        let pos = self.targets[r.clone()].binary_search(&dst).ok()?;
        Some(&self.stats[r.start + pos])
    }

    /// All edges `(src, dst, stats)` in source-major, target-minor order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &EdgeStats<T>)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.out_edges(u).map(move |(v, s)| (u, v, s)))
    }

    /// Smallest `w_min` and largest `w_max` over all edges.
    pub fn weight_range(&self) -> Option<(T, T)> {
        self.stats.iter().fold(None, |acc, s| {
            Some(match acc {
                None => (s.w_min, s.w_max),
                Some((lo, hi)) => (lo.min(s.w_min), hi.max(s.w_max)),
            })
        })
    }

    /// Largest spread of sampled weights leaving a single node.
    pub fn max_node_spread(&self) -> T {
        (0..self.node_count())
            .filter_map(|u| {
                self.out_edges(u).fold(None, |acc: Option<(T, T)>, (_, s)| {
                    Some(match acc {
                        None => (s.w_min, s.w_max),
                        Some((lo, hi)) => (lo.min(s.w_min), hi.max(s.w_max)),
                    })
                })
            })
            .map(|(lo, hi)| hi - lo)
            .fold(T::zero(), T::max)
    }

    /// Edge list with columns `src, dst, w_min, w_max, samples`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["src", "dst", "w_min", "w_max", "samples"])?;
        for (u, v, s) in self.edges() {
            w.write_record([
                u.to_string(),
                v.to_string(),
                s.w_min.to_string(),
                s.w_max.to_string(),
                s.samples.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sample every cell at its center plus `samples_per_cell − 1` low-discrepancy
/// offsets, push each sample through the lift and record an edge into the
/// image cell weighted by `φ` at the sample.
pub fn build_graph<T: Real>(
    sys: &MapSystem<T>,
    part: &SpherePartition<T>,
    samples_per_cell: usize,
    seed: u64,
) -> Result<TransitionGraph<T>> {
    if sys.dim() != part.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), got: part.dim() });
    }
    if !(1..=2).contains(&sys.dim()) {
        return Err(Error::DimensionUnsupported { dim: sys.dim() });
    }
    if samples_per_cell == 0 {
        return Err(Error::InvalidParameter("samples_per_cell must be at least 1".into()));
    }
    let offsets = lowdisc::offsets(part.offset_dim(), samples_per_cell, seed);
    let per_node: Vec<Vec<(usize, T)>> = (0..part.cell_count())
        .into_par_iter()
        .map(|cell| {
            offsets
                .iter()
                .map(|u| {
                    let p = part.sample(cell, u)?;
                    let (q, phi) = lift_with_phi(sys, &p).map_err(|e| e.in_cell(cell))?;
                    Ok((part.locate(&q)?, phi))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    TransitionGraph::from_adjacency(per_node)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_parallel_edges() {
        let g = TransitionGraph::from_samples(2, [(0, 1, 0.5), (0, 1, 0.2), (1, 0, 1.0), (0, 0, 3.0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        let e = g.edge(0, 1).unwrap();
        assert_eq!((e.w_min, e.w_max, e.samples), (0.2, 0.5, 2));
        let order: Vec<(usize, usize)> = g.edges().map(|(u, v, _)| (u, v)).collect();
        assert_eq!(order, vec![(0, 0), (0, 1), (1, 0)]);
        assert!(TransitionGraph::from_samples(2, [(0, 2, 0.0)]).is_err());
        assert!(TransitionGraph::from_samples(1, [(0, 0, f64::NAN)]).is_err());
    }

    #[test]
    fn doubling_graph_has_constant_weights() {
        let d = MapSystem::<f64>::doubling();
        let part = SpherePartition::new(&d, 8, 0).unwrap();
        let g = build_graph(&d, &part, 1, 0).unwrap();
        assert_eq!(g.node_count(), 16);
        assert!(g.edges().all(|(_, _, s)| s.w_min == std::f64::consts::LN_2 && s.w_max == s.w_min));
        assert!((0..16).all(|u| g.out_edges(u).count() >= 1));
    }

    #[test]
    fn product_map_weights_between_log2_and_log3() {
        let prod = MapSystem::<f64>::product(MapSystem::doubling(), MapSystem::linear_circle(3)).unwrap();
        let part = SpherePartition::new(&prod, 6, 12).unwrap();
        let g = build_graph(&prod, &part, 3, 0).unwrap();
        let (lo, hi) = g.weight_range().unwrap();
        assert!(lo >= 2f64.ln() - 1e-12 && hi <= 3f64.ln() + 1e-12);
    }

    #[test]
    fn critical_cell_is_reported() {
        use crate::dynamics::Axis;
        let sq = MapSystem::<f64>::polynomial(vec![0.0, 0.0, 1.0], Axis::Interval { lo: -1.0, hi: 1.0 }).unwrap();
        // One cell on [-1, 1]: its center is the critical point 0.
        let single = SpherePartition::new(&sq, 1, 0).unwrap();
        let err = build_graph(&sq, &single, 1, 0).unwrap_err();
        assert!(matches!(err, Error::CriticalPointEncountered { cell: Some(0), .. }));
        let part = SpherePartition::new(&sq, 2, 0).unwrap();
        assert!(build_graph(&sq, &part, 1, 0).is_ok());
    }
}
