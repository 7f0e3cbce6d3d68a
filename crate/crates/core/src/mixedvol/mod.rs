//! Mixed volumes and atomic mixed area measures.
//!
//! An atom `(w, c)` of a length-weighted measure carries mass `c·|w|` at
//! `w/|w|`, so `∫ h dS = Σ c·h(w)` for every 1-homogeneous `h` and all
//! integrals of support functions stay rational.

mod engine;
mod measure;
mod projection;

pub use engine::{cone_volume_measure, mixed_area_measure, mixed_volume, surface_area_measure, Slot};
pub use measure::{Atom, AtomicSphericalMeasure, MeasureJson, Weighting};
pub use projection::{projection_identity_check, ProjectionReport};
