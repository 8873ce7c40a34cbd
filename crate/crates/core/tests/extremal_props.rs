use lyapmin::ergodic_opt::{
    check_minimum_principle, enumerate_periodic_orbits, estimate_extremal_exponents_seeded, SpherePartition,
};
use lyapmin::MapSystem;

const SEED: u64 = 11;

fn cases() -> Vec<(&'static str, MapSystem<f64>, [usize; 3], usize)> {
    vec![
        ("doubling", MapSystem::doubling(), [64, 128, 256], 0),
        ("perturbed_0.05", MapSystem::perturbed_doubling(0.05).unwrap(), [64, 128, 256], 0),
        ("perturbed_0.15", MapSystem::perturbed_doubling(0.15).unwrap(), [64, 128, 256], 0),
        ("tripling", MapSystem::linear_circle(3), [64, 128, 256], 0),
        ("cat", MapSystem::cat_map(), [4, 8, 16], 64),
    ]
}

#[test]
fn refinement_never_increases_gap_to_periodic_minimum() {
    for (name, sys, levels, dirs) in cases() {
        let period = if sys.dim() == 1 { 12 } else { 4 };
        let orbits = enumerate_periodic_orbits(&sys, period).unwrap();
        let oracle = orbits.iter().map(|o| o.min_exponent()).fold(f64::INFINITY, f64::min);
        let gaps: Vec<f64> = levels
            .iter()
            .map(|&r| {
                let part = SpherePartition::new(&sys, r, dirs).unwrap();
                let est = estimate_extremal_exponents_seeded(&sys, &part, 4, SEED).unwrap();
                (est.min_estimate - oracle).abs()
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{name}: gaps {gaps:?}");
    }
}

#[test]
fn periodic_orbits_respect_discrete_minimum_principle() {
    for (name, sys, levels, dirs) in cases() {
        let period = if sys.dim() == 1 { 10 } else { 3 };
        let orbits = enumerate_periodic_orbits(&sys, period).unwrap();
        let part = SpherePartition::new(&sys, levels[2], dirs).unwrap();
        let est = estimate_extremal_exponents_seeded(&sys, &part, 4, SEED).unwrap();
        let check = check_minimum_principle(&est, &orbits).unwrap();
        assert_eq!(check.violations, 0, "{name}: {check:?}");
        if name == "doubling" || name == "tripling" {
            assert_eq!(est.cell_phi_spread, 0.0, "{name}");
        }
    }
}
