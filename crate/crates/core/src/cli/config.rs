//! JSON experiment configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::certify::{EigenRole, GridSpec, Splitting, SplittingCheck};
use crate::dynamics::{Axis, MapSystem};
use crate::error::{Error, Result};

/// Map definition; `kind` selects the family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Doubling,
    PerturbedDoubling {
        epsilon: f64,
    },
    ToralEndomorphism {
        matrix: Vec<Vec<i64>>,
    },
    /// `[[2, 1], [1, 1]]` on the 2-torus.
    #[serde(alias = "cat_map")]
    Cat,
    /// `x ↦ k x` on the circle.
    LinearCircle {
        factor: i64,
    },
    ProductMap {
        factors: Vec<MapSpec>,
    },
    CustomPolynomial {
        coefficients: Vec<f64>,
        #[serde(default)]
        domain: DomainSpec,
    },
    /// `x ↦ x + 3x² − 2x³` on the circle, neutral at 0.
    Intermittent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainSpec {
    Circle,
    Interval([f64; 2]),
}

impl Default for DomainSpec {
    fn default() -> Self {
        DomainSpec::Interval([0.0, 1.0])
    }
}

impl MapSpec {
    pub fn build(&self) -> Result<MapSystem<f64>> {
        match self {
            MapSpec::Doubling => Ok(MapSystem::doubling()),
            MapSpec::PerturbedDoubling { epsilon } => MapSystem::perturbed_doubling(*epsilon),
            MapSpec::ToralEndomorphism { matrix } => MapSystem::toral_endomorphism(matrix.clone()),
            MapSpec::Cat => Ok(MapSystem::cat_map()),
            MapSpec::LinearCircle { factor } => Ok(MapSystem::linear_circle(*factor)),
            MapSpec::ProductMap { factors } => match factors.as_slice() {
                [a, b] => MapSystem::product(a.build()?, b.build()?),
                _ => Err(Error::InvalidParameter("product_map needs exactly two factors".into())),
            },
            MapSpec::CustomPolynomial { coefficients, domain } => {
                let axis = match *domain {
                    DomainSpec::Circle => Axis::Circle,
                    DomainSpec::Interval([lo, hi]) => Axis::Interval { lo, hi },
                };
                MapSystem::polynomial(coefficients.clone(), axis)
            }
            MapSpec::Intermittent => Ok(MapSystem::intermittent()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitParams {
    pub x: Vec<f64>,
    /// Initial direction; defaults to the first coordinate vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    pub n: usize,
    /// Degree of the trig dictionary used for the weak-* self-distance
    /// between the first half and the whole orbit.
    #[serde(default = "default_degree")]
    pub degree: usize,
}

fn default_degree() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumParams {
    pub x: Vec<f64>,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtremalParams {
    /// Finest base resolution (cells per axis).
    pub base_resolution: usize,
    /// Number of ladder rungs; rung `i` uses `base_resolution / 2^(levels − 1 − i)`.
    #[serde(default = "one")]
    pub refinement_levels: usize,
    #[serde(default = "default_direction_resolution")]
    pub direction_resolution: usize,
    #[serde(default = "default_samples")]
    pub samples_per_cell: usize,
    /// Compare against periodic orbits up to this period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_period: Option<usize>,
    #[serde(default = "default_true")]
    pub dump_graph: bool,
}

fn one() -> usize {
    1
}

fn default_direction_resolution() -> usize {
    32
}

fn default_samples() -> usize {
    crate::ergodic_opt::DEFAULT_SAMPLES_PER_CELL
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyParams {
    pub lambda: f64,
    pub big_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub grid: GridSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SplittingSpec {
    /// Eigendirections of a 2-d linear map.
    Eigen { role: EigenRole, min_angle: f64 },
    /// Constant orthonormal bases.
    Constant { e1: Vec<Vec<f64>>, e2: Vec<Vec<f64>>, min_angle: f64 },
}

impl SplittingSpec {
    pub fn build(&self, sys: &MapSystem<f64>) -> Result<Splitting<f64>> {
        match self {
            SplittingSpec::Eigen { role, min_angle } => Splitting::eigen(sys, *role, *min_angle),
            SplittingSpec::Constant { e1, e2, min_angle } => Splitting::constant(e1.clone(), e2.clone(), *min_angle),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibredEstimateParams {
    pub base_resolution: usize,
    #[serde(default = "default_direction_resolution")]
    pub direction_resolution: usize,
    #[serde(default = "default_samples")]
    pub samples_per_cell: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibredParams {
    pub splitting: SplittingSpec,
    pub lambda: f64,
    pub big_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub grid: GridSpec,
    #[serde(default)]
    pub check: SplittingCheck<f64>,
    /// Restricted extremal estimate on the unit sphere bundle of `E¹`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<FibredEstimateParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AnalysisSpec {
    Orbit(OrbitParams),
    Spectrum(SpectrumParams),
    Extremal(ExtremalParams),
    Certify(CertifyParams),
    #[serde(alias = "fibred_certify")]
    Fibred(FibredParams),
}

impl AnalysisSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AnalysisSpec::Orbit(_) => "orbit",
            AnalysisSpec::Spectrum(_) => "spectrum",
            AnalysisSpec::Extremal(_) => "extremal",
            AnalysisSpec::Certify(_) => "certify",
            AnalysisSpec::Fibred(_) => "fibred",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub map: MapSpec,
    pub analysis: AnalysisSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub resolution: Option<usize>,
    pub lambda: Option<f64>,
    pub big_n: Option<usize>,
    pub max_period: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Applies command-line overrides; a flag that has no meaning for the
    /// configured analysis is an error.
    pub fn apply(&mut self, o: &Overrides) -> Result<(), String> {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.output_dir = Some(out.clone());
        }
        let name = self.analysis.name();
        let reject = |flag: &str| Err(format!("--{flag} does not apply to the {name} analysis"));
        if let Some(r) = o.resolution {
            match &mut self.analysis {
                AnalysisSpec::Extremal(p) => p.base_resolution = r,
                AnalysisSpec::Certify(p) => p.grid.base_samples = r,
                AnalysisSpec::Fibred(p) => p.grid.base_samples = r,
                _ => return reject("resolution"),
            }
        }
        if let Some(l) = o.lambda {
            match &mut self.analysis {
                AnalysisSpec::Certify(p) => p.lambda = l,
                AnalysisSpec::Fibred(p) => p.lambda = l,
                _ => return reject("lambda"),
            }
        }
        if let Some(n) = o.big_n {
            match &mut self.analysis {
                AnalysisSpec::Certify(p) => p.big_n = n,
                AnalysisSpec::Fibred(p) => p.big_n = n,
                _ => return reject("big-n"),
            }
        }
        if let Some(m) = o.max_period {
            match &mut self.analysis {
                AnalysisSpec::Extremal(p) => p.max_period = Some(m),
                _ => return reject("max-period"),
            }
        }
        Ok(())
    }

    /// Parameter checks that need no computation.
    pub fn validate(&self) -> Result<MapSystem<f64>, String> {
        let sys = self.map.build().map_err(|e| e.to_string())?;
        let positive = |what: &str, v: usize| if v == 0 { Err(format!("{what} must be at least 1")) } else { Ok(()) };
        let check_dim = |what: &str, v: &[f64]| {
            if v.len() == sys.dim() {
                Ok(())
            } else {
                Err(format!("{what} has {} coordinates, map has dimension {}", v.len(), sys.dim()))
            }
        };
        let check_lambda = |l: f64, n: usize, n_max: Option<usize>| {
            if !(l > 0.0 && l.is_finite()) {
                return Err("lambda must be positive".to_string());
            }
            positive("big_n", n)?;
            match n_max {
                Some(m) if m < n => Err("n_max must be at least big_n".into()),
                _ => Ok(()),
            }
        };
        match &self.analysis {
            AnalysisSpec::Orbit(p) => {
                check_dim("x", &p.x)?;
                if let Some(v) = &p.v {
                    check_dim("v", v)?;
                }
                positive("n", p.n)?;
                positive("degree", p.degree)?;
            }
            AnalysisSpec::Spectrum(p) => {
                check_dim("x", &p.x)?;
                positive("n", p.n)?;
            }
            AnalysisSpec::Extremal(p) => {
                positive("base_resolution", p.base_resolution)?;
                positive("refinement_levels", p.refinement_levels)?;
                positive("samples_per_cell", p.samples_per_cell)?;
                if sys.dim() > 2 {
                    return Err(format!("extremal analysis needs dimension 1 or 2, map has {}", sys.dim()));
                }
                if sys.dim() == 2 {
                    positive("direction_resolution", p.direction_resolution)?;
                }
                let coarsest = p.base_resolution >> (p.refinement_levels - 1).min(63);
                if coarsest == 0 || coarsest << (p.refinement_levels - 1) != p.base_resolution {
                    return Err("base_resolution must be divisible by 2^(refinement_levels − 1)".into());
                }
                if let Some(m) = p.max_period {
                    if !(1..=16).contains(&m) {
                        return Err("max_period must be in 1..=16".into());
                    }
                }
            }
            AnalysisSpec::Certify(p) => {
                check_lambda(p.lambda, p.big_n, p.n_max)?;
                positive("grid.base_samples", p.grid.base_samples)?;
                if sys.dim() == 2 {
                    positive("grid.direction_samples", p.grid.direction_samples)?;
                }
            }
            AnalysisSpec::Fibred(p) => {
                check_lambda(p.lambda, p.big_n, p.n_max)?;
                positive("grid.base_samples", p.grid.base_samples)?;
                positive("check.samples", p.check.samples)?;
                let sp = p.splitting.build(&sys).map_err(|e| e.to_string())?;
                if sp.ambient_dim() != sys.dim() {
                    return Err("splitting dimension does not match the map".into());
                }
                if let Some(e) = &p.estimate {
                    positive("estimate.base_resolution", e.base_resolution)?;
                    positive("estimate.samples_per_cell", e.samples_per_cell)?;
                }
            }
        }
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_configs_with_defaults() {
        let c = ExperimentConfig::from_json(
            r#"{"map":{"kind":"doubling"},"analysis":{"type":"extremal","base_resolution":64}}"#,
        )
        .unwrap();
        assert_eq!(c.seed, 0);
        match &c.analysis {
            AnalysisSpec::Extremal(p) => {
                assert_eq!((p.refinement_levels, p.samples_per_cell, p.max_period), (1, 4, None));
            }
            other => panic!("{other:?}"),
        }
        let c = ExperimentConfig::from_json(
            r#"{"map":{"kind":"cat_map"},"analysis":{"type":"fibred_certify","lambda":0.9,"big_n":1,
                "splitting":{"eigen":{"role":"unstable","min_angle":0.1}},"grid":{"base_samples":8}}}"#,
        )
        .unwrap();
        assert_eq!(c.map, MapSpec::Cat);
        assert_eq!(c.analysis.name(), "fibred");
        assert!(c.validate().is_ok());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"map":{"kind":"product_map","factors":[{"kind":"doubling"},{"kind":"linear_circle","factor":3}]},
            "analysis":{"type":"certify","lambda":0.5,"big_n":2,"n_max":7,"grid":{"base_samples":4,"direction_samples":8}},
            "seed":11,"output_dir":"somewhere"}"#;
        let c = ExperimentConfig::from_json(text).unwrap();
        let again = ExperimentConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn overrides_and_validation() {
        let mut c = ExperimentConfig::from_json(
            r#"{"map":{"kind":"custom_polynomial","coefficients":[0,0,1]},"analysis":{"type":"orbit","x":[0.0],"n":5}}"#,
        )
        .unwrap();
        assert!(c.validate().is_ok());
        assert!(c.apply(&Overrides { lambda: Some(0.2), ..Default::default() }).is_err());
        c.apply(&Overrides { seed: Some(9), ..Default::default() }).unwrap();
        assert_eq!(c.seed, 9);
        let bad = ExperimentConfig::from_json(
            r#"{"map":{"kind":"doubling"},"analysis":{"type":"orbit","x":[0.1,0.2],"n":5}}"#,
        )
        .unwrap();
        assert!(bad.validate().is_err());
        assert!(ExperimentConfig::from_json(r#"{"map":{"kind":"doubling"},"analysis":{"type":"nope"}}"#).is_err());
        let ladder = ExperimentConfig::from_json(
            r#"{"map":{"kind":"doubling"},"analysis":{"type":"extremal","base_resolution":12,"refinement_levels":4}}"#,
        )
        .unwrap();
        assert!(ladder.validate().is_err());
    }
}
