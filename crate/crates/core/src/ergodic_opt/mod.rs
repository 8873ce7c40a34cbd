//! Grid realization of the minimum principle: discretize the lifted system,
//! take extremal mean cycles of `φ`, cross-check against periodic orbits.

mod graph;
mod mean_cycle;
mod partition;
mod periodic;

pub use graph::{build_graph, EdgeStats, TransitionGraph};
pub use mean_cycle::{
    max_mean_cycle, min_mean_cycle, strongly_connected_components, ExtremalCycleResult, Extremum,
};
pub use partition::{DirectionCells, Resolution, SpherePartition};
pub use periodic::{enumerate_periodic_orbits, PeriodicOrbit};

use serde::{Deserialize, Serialize};

use crate::dynamics::MapSystem;
use crate::error::{Error, Result};
use crate::real::Real;

/// Default number of samples per cell for grid estimates.
pub const DEFAULT_SAMPLES_PER_CELL: usize = 4;

/// Grid estimate of the extremal Lyapunov exponents. Sampling-based, not an enclosure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalEstimate<T> {
    pub min_estimate: T,
    pub max_estimate: T,
    pub min_cycle: ExtremalCycleResult<T>,
    pub max_cycle: ExtremalCycleResult<T>,
    pub resolution: Resolution,
    /// Largest spread of sampled `φ` values on the edges leaving a single cell.
    pub cell_phi_spread: T,
    pub nature: String,
}

/// [`estimate_extremal_exponents_seeded`] with seed 0.
pub fn estimate_extremal_exponents<T: Real>(
    sys: &MapSystem<T>,
    part: &SpherePartition<T>,
    samples_per_cell: usize,
) -> Result<ExtremalEstimate<T>> {
    estimate_extremal_exponents_seeded(sys, part, samples_per_cell, 0)
}

/// Builds the transition graph and returns its minimum and maximum mean cycles.
pub fn estimate_extremal_exponents_seeded<T: Real>(
    sys: &MapSystem<T>,
    part: &SpherePartition<T>,
    samples_per_cell: usize,
    seed: u64,
) -> Result<ExtremalEstimate<T>> {
    let g = build_graph(sys, part, samples_per_cell, seed)?;
    estimate_from_graph(&g, part, samples_per_cell, seed)
}

/// Extremal mean cycles of an already built graph.
pub fn estimate_from_graph<T: Real>(
    g: &TransitionGraph<T>,
    part: &SpherePartition<T>,
    samples_per_cell: usize,
    seed: u64,
) -> Result<ExtremalEstimate<T>> {
    let resolution = Resolution {
        base_resolution: part.base_resolution(),
        direction_cells: part.direction_cells(),
        samples_per_cell,
        seed,
        node_count: g.node_count(),
        edge_count: g.edge_count(),
    };
    let mut min_cycle = min_mean_cycle(g)?;
    let mut max_cycle = max_mean_cycle(g)?;
    min_cycle.resolution = Some(resolution.clone());
    max_cycle.resolution = Some(resolution.clone());
    Ok(ExtremalEstimate {
        min_estimate: min_cycle.value,
        max_estimate: max_cycle.value,
        min_cycle,
        max_cycle,
        resolution,
        cell_phi_spread: g.max_node_spread(),
        nature: "estimate".into(),
    })
}

/// One rung of a refinement ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow<T> {
    pub resolution: usize,
    pub min_estimate: T,
    pub max_estimate: T,
}

/// Extremal estimates at each base resolution in `base_resolutions`.
pub fn refinement_ladder<T: Real>(
    sys: &MapSystem<T>,
    base_resolutions: &[usize],
    direction_resolution: usize,
    samples_per_cell: usize,
    seed: u64,
) -> Result<Vec<(RefinementRow<T>, ExtremalEstimate<T>)>> {
    base_resolutions
        .iter()
        .map(|&r| {
            let part = SpherePartition::new(sys, r, direction_resolution)?;
            let est = estimate_extremal_exponents_seeded(sys, &part, samples_per_cell, seed)?;
            let row = RefinementRow { resolution: r, min_estimate: est.min_estimate, max_estimate: est.max_estimate };
            Ok((row, est))
        })
        .collect()
}

/// Comparison of a grid minimum with the periodic-orbit oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimumPrincipleCheck<T> {
    pub min_estimate: T,
    /// Smallest exponent over all enumerated periodic orbits.
    pub oracle_min: T,
    pub gap: T,
    /// Allowed slack below the estimate: the per-cell spread of sampled `φ`.
    pub delta: T,
    pub orbit_count: usize,
    /// Orbits whose smallest exponent is below `min_estimate − delta`, up to a few ulps of rounding.
    pub violations: usize,
    /// Whether every orbit's smallest exponent is at least `min_estimate`.
    pub all_orbits_above: bool,
}

pub fn check_minimum_principle<T: Real>(
    est: &ExtremalEstimate<T>,
    orbits: &[PeriodicOrbit<T>],
) -> Result<MinimumPrincipleCheck<T>> {
    if orbits.is_empty() {
        return Err(Error::InvalidParameter("no periodic orbits to compare against".into()));
    }
    let oracle_min = orbits.iter().map(|o| o.min_exponent()).fold(T::infinity(), T::min);
    let delta = est.cell_phi_spread;
    let rounding = T::epsilon() * T::lit(64.0) * est.min_estimate.abs().max(T::one());
    let floor = est.min_estimate - delta - rounding;
    let violations = orbits.iter().filter(|o| o.min_exponent() < floor).count();
    Ok(MinimumPrincipleCheck {
        min_estimate: est.min_estimate,
        oracle_min,
        gap: (est.min_estimate - oracle_min).abs(),
        delta,
        orbit_count: orbits.len(),
        violations,
        all_orbits_above: orbits.iter().all(|o| o.min_exponent() >= est.min_estimate),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_estimate_is_exact() {
        let d = MapSystem::<f64>::doubling();
        for r in [1, 7, 64] {
            let part = SpherePartition::new(&d, r, 0).unwrap();
            let est = estimate_extremal_exponents(&d, &part, 3).unwrap();
            assert_eq!(est.min_estimate, std::f64::consts::LN_2);
            assert_eq!(est.max_estimate, std::f64::consts::LN_2);
            assert_eq!(est.cell_phi_spread, 0.0);
        }
        let part = SpherePartition::new(&d, 64, 0).unwrap();
        let est = estimate_extremal_exponents(&d, &part, 1).unwrap();
        let orbits = enumerate_periodic_orbits(&d, 8).unwrap();
        let chk = check_minimum_principle(&est, &orbits).unwrap();
        assert_eq!(chk.delta, 0.0);
        assert_eq!(chk.violations, 0);
        assert!(chk.gap < 1e-15);
    }

    #[test]
    fn cat_map_estimates_bracket_eigenvalues() {
        let cat = MapSystem::<f64>::cat_map();
        let part = SpherePartition::new(&cat, 16, 64).unwrap();
        let est = estimate_extremal_exponents(&cat, &part, DEFAULT_SAMPLES_PER_CELL).unwrap();
        assert!(est.min_estimate <= -0.95, "{}", est.min_estimate);
        assert!(est.max_estimate >= 0.95, "{}", est.max_estimate);
        let top = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(est.min_estimate >= -top - 1e-12 && est.max_estimate <= top + 1e-12);
    }

    #[test]
    fn min_not_above_max() {
        let pd = MapSystem::<f64>::perturbed_doubling(0.08).unwrap();
        let rows = refinement_ladder(&pd, &[8, 16, 32], 0, 2, 1).unwrap();
        for (row, _) in rows {
            assert!(row.min_estimate <= row.max_estimate);
        }
    }
}
