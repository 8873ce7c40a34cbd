use lyapmin::certify::{
    certify_fibred_expansion, certify_uniform_expansion, Certification, EigenRole, GridSpec, Splitting, SplittingCheck,
};
use lyapmin::ergodic_opt::{estimate_extremal_exponents, SpherePartition};
use lyapmin::sphere_bundle::birkhoff_average_phi;
use lyapmin::{MapSystem, SpherePoint};

#[test]
fn grid_minimum_above_lambda_implies_certificate() {
    let (resolution, samples) = (256, 4);
    for sys in [
        MapSystem::<f64>::doubling(),
        MapSystem::perturbed_doubling(0.05).unwrap(),
        MapSystem::perturbed_doubling(0.1).unwrap(),
    ] {
        let part = SpherePartition::new(&sys, resolution, 0).unwrap();
        let est = estimate_extremal_exponents(&sys, &part, samples).unwrap();
        let lambda = est.min_estimate - 0.05;
        // Same sampling budget: one base point per graph sample.
        let grid = GridSpec::new(resolution * samples, 0);
        let out = certify_uniform_expansion(&sys, lambda, 10, None, &grid).unwrap();
        let cert = out.certificate().expect("certificate");
        assert!(cert.margin >= 0.0);
        assert!(cert.equivalent_constant > 0.0);
    }
}

#[test]
fn certificates_are_sound_on_recomputation() {
    let pd = MapSystem::<f64>::perturbed_doubling(0.1).unwrap();
    let grid = GridSpec { retain_point_margins: true, seed: 3, ..GridSpec::new(200, 0) };
    let out = certify_uniform_expansion(&pd, 0.45, 6, Some(40), &grid).unwrap();
    let cert = out.certificate().unwrap();
    let pms = cert.point_margins.as_ref().unwrap();
    assert_eq!(pms.len(), cert.grid_pairs);
    let worst = pms.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min);
    assert_eq!(worst, cert.margin);
    for pm in pms {
        let p = SpherePoint::new(pm.x.clone(), pm.v.clone()).unwrap();
        let again = birkhoff_average_phi(&pd, &p, pm.n).unwrap();
        assert!(again >= 0.45);
        assert!((again - 0.45 - pm.margin).abs() <= 1e-12);
    }
}

#[test]
fn counterexamples_are_valid_on_recomputation() {
    let cases = [
        (MapSystem::<f64>::cat_map(), 0.1, 10),
        (MapSystem::<f64>::intermittent(), 0.05, 5),
        (MapSystem::<f64>::perturbed_doubling(0.1).unwrap(), 0.6, 1),
    ];
    for (sys, lambda, n) in cases {
        let out = certify_uniform_expansion(&sys, lambda, n, None, &GridSpec::new(16, 16)).unwrap();
        let cx = out.counterexample().expect("counterexample");
        assert!(cx.observed < lambda && cx.n >= n && cx.n <= 10 * n);
        let p = SpherePoint::new(cx.x.clone(), cx.v.clone()).unwrap();
        assert_eq!(birkhoff_average_phi(&sys, &p, cx.n).unwrap(), cx.observed);
    }
}

#[test]
fn global_certificate_implies_fibred_certificate() {
    let prod = MapSystem::<f64>::product(MapSystem::doubling(), MapSystem::linear_circle(3)).unwrap();
    let grid = GridSpec::new(12, 24);
    let splittings = [
        Splitting::constant(vec![vec![0.0, 1.0]], vec![vec![1.0, 0.0]], 0.5).unwrap(),
        Splitting::constant(vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]], 0.5).unwrap(),
        Splitting::eigen(&prod, EigenRole::Stable, 0.5).unwrap(),
    ];
    for lambda in [0.3, 0.5, 0.65] {
        let global = certify_uniform_expansion(&prod, lambda, 1, Some(30), &grid).unwrap();
        assert!(matches!(global, Certification::Certificate(_)));
        for sp in &splittings {
            let fibred =
                certify_fibred_expansion(&prod, sp, lambda, 1, Some(30), &grid, SplittingCheck::default()).unwrap();
            let f = fibred.result.certificate().expect("fibred certificate");
            assert!(f.margin >= global.certificate().unwrap().margin - 1e-12);
        }
    }
}
