//! Report records written by the command-line front end.

use serde::{Deserialize, Serialize};

use crate::certify::{Certification, SplittingReport};
use crate::ergodic_opt::{ExtremalEstimate, MinimumPrincipleCheck, RefinementRow, Resolution};
use crate::sphere_bundle::SpherePoint;

use super::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nature {
    /// Finite-time or grid approximation of an asymptotic quantity.
    Estimate,
    /// Closed-form or exactly enumerated value, up to rounding.
    Exact,
    /// Sampling-based certificate or counterexample.
    Evidence,
}

/// A number with its nature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub nature: Nature,
}

impl Quantity {
    pub fn estimate(value: f64) -> Self {
        Quantity { value, nature: Nature::Estimate }
    }

    pub fn exact(value: f64) -> Self {
        Quantity { value, nature: Nature::Exact }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub n: usize,
    pub birkhoff_average: Quantity,
    pub growth_rate_direct: Quantity,
    /// `|birkhoff_average − growth_rate_direct|`.
    pub telescoping_defect: Quantity,
    /// `∫ φ dμ_n` for the empirical measure of the lifted orbit.
    pub integral_phi: Quantity,
    pub final_point: SpherePoint<f64>,
    pub bundle_atoms: usize,
    pub base_atoms: usize,
    /// Weak-* distance between the empirical measures of the first half and the whole orbit.
    pub weak_star_half_vs_full: Option<Quantity>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub n: usize,
    pub exponents: Vec<Quantity>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSummary {
    pub max_period: usize,
    pub orbit_count: usize,
    pub nature: Nature,
    pub check: MinimumPrincipleCheck<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub refinement: Vec<RefinementRow<f64>>,
    /// Estimates per rung, coarsest first.
    pub ladder: Vec<ExtremalEstimate<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<PeriodicSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyResult {
    pub nature: Nature,
    pub certification: Certification<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibredResult {
    pub nature: Nature,
    pub splitting: SplittingReport<f64>,
    pub certification: Certification<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted_estimate: Option<ExtremalEstimate<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "analysis", rename_all = "snake_case")]
pub enum AnalysisResult {
    Orbit(OrbitResult),
    Spectrum(SpectrumResult),
    Extremal(ExtremalResult),
    Certify(CertifyResult),
    Fibred(FibredResult),
}

impl AnalysisResult {
    pub fn certification(&self) -> Option<&Certification<f64>> {
        match self {
            AnalysisResult::Certify(c) => Some(&c.certification),
            AnalysisResult::Fibred(f) => Some(&f.certification),
            _ => None,
        }
    }
}

/// Run metadata that is allowed to differ between identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub wall_clock_seconds: f64,
    pub threads: usize,
    pub resolution_ladder: Vec<Resolution>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: AnalysisResult,
    pub provenance: Provenance,
}

/// The deterministic part of a report.
#[derive(Serialize)]
pub(crate) struct ResultsView<'a> {
    pub config: &'a ExperimentConfig,
    pub results: &'a AnalysisResult,
}
