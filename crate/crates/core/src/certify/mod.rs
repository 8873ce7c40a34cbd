//! Sampling-based certification of uniform expansion in the `(N, λ)` form:
//! `(1/n) log |Df^n_x v| ≥ λ` for every grid pair `(x, v)` and every
//! `n ∈ [N, N_max]`, globally or for `v ∈ E¹_x`.
//!
//! Certificates are evidence on a finite grid, not proofs.

mod splitting;

pub use splitting::{Basis, BasisField, EigenRole, Splitting};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{MapSystem, Point};
use crate::ergodic_opt::{estimate_extremal_exponents_seeded, ExtremalEstimate, SpherePartition};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, max_principal_angle, min_principal_angle};
use crate::lowdisc;
use crate::real::{Real, CRITICAL_EPS};
use crate::sphere_bundle::{lift_with_phi, SpherePoint};

/// Finite sample of the unit tangent bundle used by the certifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Base points per axis.
    pub base_samples: usize,
    /// Uniform direction angles for `d = 2` (or within a 2-d `E¹`); ignored for `d = 1`.
    #[serde(default = "default_direction_samples")]
    pub direction_samples: usize,
    /// Append the eigendirections of a linear map to the uniform directions.
    #[serde(default = "default_true")]
    pub include_invariant_directions: bool,
    /// Seed 0 puts base points on cell left endpoints; other seeds shift them.
    #[serde(default)]
    pub seed: u64,
    /// Keep the worst margin of every grid pair in the certificate.
    #[serde(default)]
    pub retain_point_margins: bool,
}

fn default_direction_samples() -> usize {
    32
}

fn default_true() -> bool {
    true
}

impl GridSpec {
    pub fn new(base_samples: usize, direction_samples: usize) -> Self {
        GridSpec {
            base_samples,
            direction_samples,
            include_invariant_directions: true,
            seed: 0,
            retain_point_margins: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subspace {
    Full,
    E1,
}

/// Worst margin at one grid pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMargin<T> {
    pub x: Point<T>,
    pub v: Vec<T>,
    /// Time at which the margin is attained.
    pub n: usize,
    pub margin: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCertificate<T> {
    pub lambda: T,
    pub n: usize,
    pub n_max: usize,
    pub grid: GridSpec,
    pub subspace: Subspace,
    /// Number of `(x, v)` pairs tested.
    pub grid_pairs: usize,
    /// `min (1/n) log |Df^n_x v| − λ` over all tested triples.
    pub margin: T,
    /// `C = min(1, min_{1 ≤ n < N} |Df^n_x v| e^{−λn})` over the grid, so that
    /// `|Df^n_x v| ≥ C e^{λn}` for every tested `n ≤ N_max`.
    pub equivalent_constant: T,
    pub evidence_not_proof: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_margins: Option<Vec<PointMargin<T>>>,
}

/// The first grid triple, in (base, direction, time) order, that violates
/// the expansion bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample<T> {
    pub x: Point<T>,
    pub v: Vec<T>,
    pub n: usize,
    /// `(1/n) log |Df^n_x v|`, strictly below `lambda`.
    pub observed: T,
    pub lambda: T,
    pub base_index: usize,
    pub direction_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Certification<T> {
    Certificate(ExpansionCertificate<T>),
    Counterexample(Counterexample<T>),
}

impl<T> Certification<T> {
    pub fn certificate(&self) -> Option<&ExpansionCertificate<T>> {
        match self {
            Certification::Certificate(c) => Some(c),
            Certification::Counterexample(_) => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample<T>> {
        match self {
            Certification::Counterexample(c) => Some(c),
            Certification::Certificate(_) => None,
        }
    }
}

/// Per-pair outcome of the time scan.
struct PairScan<T> {
    worst_n: usize,
    worst_margin: T,
    violation: Option<(usize, T)>,
    constant: T,
}

fn scan_pair<T: Real>(sys: &MapSystem<T>, p: &SpherePoint<T>, lambda: T, n: usize, n_max: usize) -> Result<PairScan<T>> {
    let mut sum = T::zero();
    let mut cur = p.clone();
    let mut out = PairScan { worst_n: n, worst_margin: T::infinity(), violation: None, constant: T::one() };
    for k in 1..=n_max {
        let (next, phi) = lift_with_phi(sys, &cur).map_err(|e| e.at_step(k - 1))?;
        sum += phi;
        cur = next;
        let kf = T::from_usize(k);
        if k < n {
            out.constant = out.constant.min((sum - lambda * kf).exp());
            continue;
        }
        let observed = sum / kf;
        let margin = observed - lambda;
        if margin < out.worst_margin {
            out.worst_margin = margin;
            out.worst_n = k;
        }
        if observed < lambda && out.violation.is_none() {
            out.violation = Some((k, observed));
        }
    }
    Ok(out)
}

fn base_grid<T: Real>(sys: &MapSystem<T>, grid: &GridSpec) -> Vec<Point<T>> {
    let d = sys.dim();
    let b = grid.base_samples;
    let shift = lowdisc::shift(d, grid.seed);
    let total = b.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut coords = vec![T::zero(); d];
            for axis in (0..d).rev() {
                let i = idx % b;
                idx /= b;
                let (lo, hi) = sys.axes()[axis].bounds();
                coords[axis] = lo + (T::from_usize(i) + T::lit(shift[axis])) * (hi - lo) / T::from_usize(b);
            }
            Point::new(coords)
        })
        .collect()
}

fn circle_directions<T: Real>(m: usize) -> Vec<Vec<T>> {
    (0..m)
        .map(|j| {
            let theta = T::TAU() * T::from_usize(j) / T::from_usize(m);
            vec![theta.cos(), theta.sin()]
        })
        .collect()
}

fn full_directions<T: Real>(sys: &MapSystem<T>, grid: &GridSpec) -> Result<Vec<Vec<T>>> {
    match sys.dim() {
        1 => Ok(vec![vec![T::one()], vec![-T::one()]]),
        2 => {
            if grid.direction_samples == 0 {
                return Err(Error::InvalidParameter("direction_samples must be positive".into()));
            }
            let mut dirs = circle_directions(grid.direction_samples);
            if grid.include_invariant_directions {
                if let Ok(sp) = Splitting::eigen(sys, EigenRole::Stable, T::zero()) {
                    let (stable, unstable) = sp.bases_at(&Point::new(vec![T::zero(); 2]))?;
                    dirs.push(stable[0].clone());
                    dirs.push(unstable[0].clone());
                }
            }
            Ok(dirs)
        }
        d => Err(Error::DimensionUnsupported { dim: d }),
    }
}

fn check_problem<T: Real>(lambda: T, n: usize, n_max: Option<usize>, grid: &GridSpec) -> Result<usize> {
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    let n_max = n_max.unwrap_or(10 * n);
    if n_max < n {
        return Err(Error::InvalidParameter("N_max must be at least N".into()));
    }
    if grid.base_samples == 0 {
        return Err(Error::InvalidParameter("base_samples must be positive".into()));
    }
    Ok(n_max)
}

/// Scans every `(x, v)` of the grid, with directions supplied per base point.
fn run_grid<T, D>(
    sys: &MapSystem<T>,
    lambda: T,
    n: usize,
    n_max: usize,
    grid: &GridSpec,
    subspace: Subspace,
    directions_at: D,
) -> Result<Certification<T>>
where
    T: Real,
    D: Fn(&Point<T>) -> Result<Vec<Vec<T>>> + Sync,
{
    let bases = base_grid(sys, grid);
    let pairs: Vec<(usize, usize, SpherePoint<T>)> = bases
        .iter()
        .enumerate()
        .map(|(bi, x)| {
            let dirs = directions_at(x)?;
            dirs.into_iter()
                .enumerate()
                .map(|(di, v)| Ok((bi, di, SpherePoint::new(x.clone(), v)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let scans: Vec<Result<PairScan<T>>> =
        pairs.par_iter().map(|(_, _, p)| scan_pair(sys, p, lambda, n, n_max)).collect();

    let mut margin = T::infinity();
    let mut constant = T::one();
    let mut point_margins = grid.retain_point_margins.then(Vec::new);
    for ((bi, di, p), scan) in pairs.iter().zip(scans) {
        let scan = scan?;
        if let Some((k, observed)) = scan.violation {
            return Ok(Certification::Counterexample(Counterexample {
                x: p.base().clone(),
                v: p.direction().to_vec(),
                n: k,
                observed,
                lambda,
                base_index: *bi,
                direction_index: *di,
            }));
        }
        margin = margin.min(scan.worst_margin);
        constant = constant.min(scan.constant);
        if let Some(pm) = point_margins.as_mut() {
            pm.push(PointMargin {
                x: p.base().clone(),
                v: p.direction().to_vec(),
                n: scan.worst_n,
                margin: scan.worst_margin,
            });
        }
    }
    Ok(Certification::Certificate(ExpansionCertificate {
        lambda,
        n,
        n_max,
        grid: grid.clone(),
        subspace,
        grid_pairs: pairs.len(),
        margin,
        equivalent_constant: constant,
        evidence_not_proof: true,
        point_margins,
    }))
}

/// Tests `(1/n) log |Df^n_x v| ≥ λ` on the grid for `n ∈ [N, N_max]`
/// (`N_max` defaults to `10 N`).
pub fn certify_uniform_expansion<T: Real>(
    sys: &MapSystem<T>,
    lambda: T,
    n: usize,
    n_max: Option<usize>,
    grid: &GridSpec,
) -> Result<Certification<T>> {
    let n_max = check_problem(lambda, n, n_max, grid)?;
    let dirs = full_directions(sys, grid)?;
    run_grid(sys, lambda, n, n_max, grid, Subspace::Full, |_| Ok(dirs.clone()))
}

/// Worst invariance defect and separation of a splitting over sampled base points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport<T> {
    pub samples: usize,
    /// Largest principal angle between `Df_x E^i_x` and `E^i_{f(x)}`, radians.
    pub max_invariance_defect: T,
    pub worst_defect_point: Point<T>,
    /// Smallest principal angle between `E¹_x` and `E²_x`, radians.
    pub min_separation: T,
    pub worst_separation_point: Point<T>,
    pub tol_angle: T,
    pub declared_min_angle: T,
    pub passed: bool,
}

/// Checks invariance and angle separation of `sp` at `samples` low-discrepancy
/// base points.
pub fn check_splitting<T: Real>(
    sys: &MapSystem<T>,
    sp: &Splitting<T>,
    samples: usize,
    tol_angle: T,
) -> Result<SplittingReport<T>> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if sp.ambient_dim() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), got: sp.ambient_dim() });
    }
    let d = sys.dim();
    let points: Vec<Point<T>> = lowdisc::offsets(d, samples, 0)
        .into_iter()
        .map(|u| {
            let coords = sys
                .axes()
                .iter()
                .zip(u)
                .map(|(a, t)| {
                    let (lo, hi) = a.bounds();
                    lo + T::lit(t) * (hi - lo)
                })
                .collect();
            Point::new(coords)
        })
        .collect();
    let per_point: Vec<(T, T)> = points
        .par_iter()
        .map(|x| {
            let (e1, e2) = sp.bases_at(x)?;
            let fx = sys.evaluate(x)?;
            let (f1, f2) = sp.bases_at(&fx)?;
            let jac = sys.derivative(x)?;
            let mut defect = T::zero();
            for (e, f) in [(&e1, &f1), (&e2, &f2)] {
                let mut image: Vec<Vec<T>> = e.iter().map(|v| jac.apply(v)).collect();
                let diag = gram_schmidt(&mut image);
                if let Some(r) = diag.iter().find(|r| !(r.abs() > T::lit(CRITICAL_EPS))) {
                    return Err(Error::CriticalPointEncountered {
                        step: 0,
                        base: x.coords().iter().map(|c| c.as_f64()).collect(),
                        norm: r.abs().as_f64(),
                        cell: None,
                    });
                }
                defect = defect.max(max_principal_angle(&image, f));
            }
            Ok((defect, min_principal_angle(&e1, &e2)))
        })
        .collect::<Result<_>>()?;
    let mut worst_defect = (T::neg_infinity(), 0);
    let mut worst_sep = (T::infinity(), 0);
    for (i, &(defect, sep)) in per_point.iter().enumerate() {
        if defect > worst_defect.0 {
            worst_defect = (defect, i);
        }
        if sep < worst_sep.0 {
            worst_sep = (sep, i);
        }
    }
    Ok(SplittingReport {
        samples,
        max_invariance_defect: worst_defect.0,
        worst_defect_point: points[worst_defect.1].clone(),
        min_separation: worst_sep.0,
        worst_separation_point: points[worst_sep.1].clone(),
        tol_angle,
        declared_min_angle: sp.min_angle(),
        passed: worst_defect.0 <= tol_angle && worst_sep.0 >= sp.min_angle(),
    })
}

/// Sample count and angular tolerance for the splitting check run before
/// fibred certification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingCheck<T> {
    pub samples: usize,
    pub tol_angle: T,
}

impl<T: Real> Default for SplittingCheck<T> {
    fn default() -> Self {
        SplittingCheck { samples: 256, tol_angle: T::lit(1e-8) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibredCertification<T> {
    pub splitting: SplittingReport<T>,
    pub result: Certification<T>,
}

/// As [`certify_uniform_expansion`] with directions drawn from the unit
/// sphere of `E¹_x`: `±e¹(x)` when `dim E¹ = 1`, uniform angles in `E¹`
/// otherwise. Fails with `SplittingInvalid` if the splitting check fails.
pub fn certify_fibred_expansion<T: Real>(
    sys: &MapSystem<T>,
    sp: &Splitting<T>,
    lambda: T,
    n: usize,
    n_max: Option<usize>,
    grid: &GridSpec,
    check: SplittingCheck<T>,
) -> Result<FibredCertification<T>> {
    let n_max = check_problem(lambda, n, n_max, grid)?;
    let report = check_splitting(sys, sp, check.samples, check.tol_angle)?;
    if !report.passed {
        return Err(Error::SplittingInvalid {
            defect: report.max_invariance_defect.as_f64(),
            separation: report.min_separation.as_f64(),
        });
    }
    let k = sp.dims().0;
    if k > 2 {
        return Err(Error::DimensionUnsupported { dim: k });
    }
    if k == 2 && grid.direction_samples == 0 {
        return Err(Error::InvalidParameter("direction_samples must be positive".into()));
    }
    let angles: Vec<Vec<T>> = circle_directions(grid.direction_samples);
    let result = run_grid(sys, lambda, n, n_max, grid, Subspace::E1, |x| {
        let (e1, _) = sp.bases_at(x)?;
        Ok(match k {
            1 => vec![e1[0].clone(), e1[0].iter().map(|&c| -c).collect()],
            _ => angles
                .iter()
                .map(|cs| e1[0].iter().zip(&e1[1]).map(|(&a, &b)| cs[0] * a + cs[1] * b).collect())
                .collect(),
        })
    })?;
    Ok(FibredCertification { splitting: report, result })
}

/// Extremal exponents of `φ` restricted to the unit sphere bundle of `E¹`.
pub fn fibred_extremal_estimate<T: Real>(
    sys: &MapSystem<T>,
    sp: &Splitting<T>,
    base_resolution: usize,
    direction_resolution: usize,
    samples_per_cell: usize,
    seed: u64,
) -> Result<ExtremalEstimate<T>> {
    let part = SpherePartition::restricted(sys, sp, base_resolution, direction_resolution)?;
    estimate_extremal_exponents_seeded(sys, &part, samples_per_cell, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_bundle::birkhoff_average_phi;

    const LN2: f64 = std::f64::consts::LN_2;

    fn golden() -> f64 {
        ((3.0 + 5f64.sqrt()) / 2.0).ln()
    }

    #[test]
    fn doubling_certificate() {
        let d = MapSystem::<f64>::doubling();
        let grid = GridSpec { retain_point_margins: true, ..GridSpec::new(128, 0) };
        let out = certify_uniform_expansion(&d, 0.6, 1, Some(50), &grid).unwrap();
        let cert = out.certificate().unwrap();
        assert!((cert.margin - (LN2 - 0.6)).abs() < 1e-12);
        assert_eq!(cert.grid_pairs, 256);
        assert!(cert.evidence_not_proof);
        assert_eq!(cert.equivalent_constant, 1.0);
        // Soundness: every stored triple reproduces its margin.
        for pm in cert.point_margins.as_ref().unwrap() {
            let p = SpherePoint::new(pm.x.clone(), pm.v.clone()).unwrap();
            let again = birkhoff_average_phi(&d, &p, pm.n).unwrap() - 0.6;
            assert!((again - pm.margin).abs() < 1e-12 && again >= 0.0);
        }
    }

    #[test]
    fn equivalent_constant_for_late_start() {
        // Growth log 2 > λ from the first step, so C = 1.
        let d = MapSystem::<f64>::doubling();
        let out = certify_uniform_expansion(&d, 0.5, 4, Some(8), &GridSpec::new(4, 0)).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.n_max, 8);
        assert!((cert.equivalent_constant - 1.0).abs() < 1e-15);
        assert!(matches!(
            certify_uniform_expansion(&d, 1.0, 4, None, &GridSpec::new(4, 0)).unwrap(),
            Certification::Counterexample(Counterexample { n: 4, .. })
        ));
    }

    #[test]
    fn neutral_fixed_point_counterexample() {
        let f = MapSystem::<f64>::intermittent();
        let out = certify_uniform_expansion(&f, 0.1, 5, Some(100), &GridSpec::new(32, 0)).unwrap();
        let cx = out.counterexample().unwrap();
        assert_eq!(cx.x.coords(), &[0.0]);
        assert_eq!((cx.n, cx.observed, cx.base_index, cx.direction_index), (5, 0.0, 0, 0));
    }

    #[test]
    fn cat_map_counterexample_along_stable_direction() {
        let cat = MapSystem::<f64>::cat_map();
        let out = certify_uniform_expansion(&cat, 0.1, 10, Some(100), &GridSpec::new(4, 16)).unwrap();
        let cx = out.counterexample().unwrap();
        assert!((cx.observed + golden()).abs() < 1e-3, "{}", cx.observed);
        assert_eq!(cx.direction_index, 16);
        // Recomputation confirms the violation.
        let p = SpherePoint::new(cx.x.clone(), cx.v.clone()).unwrap();
        assert!(birkhoff_average_phi(&cat, &p, cx.n).unwrap() < 0.1);
    }

    #[test]
    fn splitting_reports() {
        let cat = MapSystem::<f64>::cat_map();
        let sp = Splitting::eigen(&cat, EigenRole::Unstable, 0.1).unwrap();
        let rep = check_splitting(&cat, &sp, 64, 1e-8).unwrap();
        assert!(rep.passed);
        assert!(rep.max_invariance_defect < 1e-12);
        // The symmetric cat matrix has orthogonal eigenvectors (1, φ⁻¹), (1, −φ).
        let (u, s) = ([1.0, (5f64.sqrt() - 1.0) / 2.0], [1.0, -(5f64.sqrt() + 1.0) / 2.0]);
        let cos = (u[0] * s[0] + u[1] * s[1]) / (u[0].hypot(u[1]) * s[0].hypot(s[1]));
        assert!((rep.min_separation - cos.abs().acos()).abs() < 1e-12);

        let t = 0.1f64;
        let (c, s) = (t.cos(), t.sin());
        let e1 = [u[0] / u[0].hypot(u[1]), u[1] / u[0].hypot(u[1])];
        let rot = vec![c * e1[0] - s * e1[1], s * e1[0] + c * e1[1]];
        let perp = vec![-rot[1], rot[0]];
        let bad = Splitting::constant(vec![rot], vec![perp], 0.1).unwrap();
        let rep = check_splitting(&cat, &bad, 16, 1e-8).unwrap();
        assert!(!rep.passed && rep.max_invariance_defect > 0.05);

        let prod = MapSystem::<f64>::product(MapSystem::doubling(), MapSystem::linear_circle(3)).unwrap();
        let sp = Splitting::constant(vec![vec![0.0, 1.0]], vec![vec![1.0, 0.0]], 0.5).unwrap();
        let rep = check_splitting(&prod, &sp, 32, 1e-12).unwrap();
        assert_eq!(rep.max_invariance_defect, 0.0);
        assert!((rep.min_separation - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn fibred_examples() {
        let cat = MapSystem::<f64>::cat_map();
        let grid = GridSpec::new(8, 0);
        let un = Splitting::eigen(&cat, EigenRole::Unstable, 0.1).unwrap();
        let out = certify_fibred_expansion(&cat, &un, 0.9, 1, Some(100), &grid, SplittingCheck::default()).unwrap();
        let cert = out.result.certificate().unwrap();
        assert!((cert.margin - (golden() - 0.9)).abs() < 1e-6);
        assert_eq!(cert.subspace, Subspace::E1);

        let st = Splitting::eigen(&cat, EigenRole::Stable, 0.1).unwrap();
        let out = certify_fibred_expansion(&cat, &st, 0.1, 1, Some(100), &grid, SplittingCheck::default()).unwrap();
        let cx = out.result.counterexample().unwrap();
        assert!((cx.observed + golden()).abs() < 1e-3);

        let prod = MapSystem::<f64>::product(MapSystem::doubling(), MapSystem::linear_circle(3)).unwrap();
        let sp = Splitting::constant(vec![vec![0.0, 1.0]], vec![vec![1.0, 0.0]], 0.5).unwrap();
        let out = certify_fibred_expansion(&prod, &sp, 1.0, 1, Some(50), &grid, SplittingCheck::default()).unwrap();
        assert!((out.result.certificate().unwrap().margin - (3f64.ln() - 1.0)).abs() < 1e-12);

        let est = fibred_extremal_estimate(&prod, &sp, 8, 8, 2, 0).unwrap();
        assert!((est.min_estimate - 3f64.ln()).abs() < 1e-12);
        assert!((est.max_estimate - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn invalid_splitting_is_rejected() {
        let cat = MapSystem::<f64>::cat_map();
        let axes = Splitting::constant(vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]], 0.1).unwrap();
        let err = certify_fibred_expansion(&cat, &axes, 0.1, 1, None, &GridSpec::new(4, 0), SplittingCheck::default());
        assert!(matches!(err, Err(Error::SplittingInvalid { .. })));
    }

    #[test]
    fn json_round_trip() {
        let d = MapSystem::<f64>::doubling();
        let out = certify_uniform_expansion(&d, 0.6, 1, Some(5), &GridSpec::new(8, 0)).unwrap();
        let s = serde_json::to_string(&out).unwrap();
        let back: Certification<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, out);
        assert!(s.contains("\"outcome\":\"certificate\""));
    }
}
