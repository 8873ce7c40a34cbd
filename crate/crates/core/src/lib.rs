pub mod certify;
pub mod cli;
pub mod dynamics;
pub mod ergodic_opt;
pub mod error;
mod linalg;
mod lowdisc;
pub mod measures;
pub mod real;
pub mod sphere_bundle;

pub use dynamics::{Axis, Jacobian, MapKind, MapSystem, Point};
pub use error::{Error, Result};
pub use real::{Real, CRITICAL_EPS, MERGE_TOL};
pub use sphere_bundle::{LiftedOrbitRecord, SpherePoint};

pub type Point64 = Point<f64>;
pub type MapSystem64 = MapSystem<f64>;
pub type SpherePoint64 = SpherePoint<f64>;
pub type LiftedOrbitRecord64 = LiftedOrbitRecord<f64>;
pub type EmpiricalMeasure64 = measures::EmpiricalMeasure<f64>;
pub type TransitionGraph64 = ergodic_opt::TransitionGraph<f64>;
pub type Splitting64 = certify::Splitting<f64>;

pub type Point32 = Point<f32>;
pub type MapSystem32 = MapSystem<f32>;
pub type SpherePoint32 = SpherePoint<f32>;
