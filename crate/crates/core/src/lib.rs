//! Dynamic-isotropy analysis of actuated rigid-body morphologies.
//!
//! The crate models a robot's attainable center-of-mass acceleration set.
//! Joint efforts `τ` map linearly to CoM acceleration through a 3×n matrix,
//! `a_c = A τ`, with each effort bounded by a box constraint. For a query
//! direction `u` the largest reachable acceleration is the support function
//! of that box image, which has a closed form: bilateral actuators contribute
//! `|uᵀA_i|·τ_i_max`, thrust-only actuators `max(0, uᵀA_i)·τ_i_max`.
//!
//! On top of that model the crate provides:
//!
//! * [`sampling`] — deterministic direction sets on the unit sphere
//!   (fibonacci lattice or seeded random).
//! * [`morphology`] — declarative morphology descriptions (radial legs,
//!   multirotors, tensegrity frames, raw dynamics matrices) and their
//!   conversion to a canonical [`morphology::AccelerationMap`].
//! * [`isotropy`] — directional sensitivities, acceleration clouds, and the
//!   isotropy score `η = a_min / a_max` over a sampled direction set.
//! * [`ellipsoid`] — the quadratic shape matrix `Q = Σ τ_max²·A_iA_iᵀ`, its
//!   eigen-spectrum, stability margins, disturbance bounds, minimum-energy
//!   effort solutions, and redundancy comparisons.
//! * [`design`] — actuator layout synthesis: Thomson-energy minimization on
//!   the sphere, seeded random morphologies, and batch sweeps.

pub mod design;
pub mod ellipsoid;
pub mod error;
pub mod isotropy;
pub mod morphology;
pub mod rng;
pub mod sampling;

pub use error::Error;
pub use morphology::{AccelerationMap, ActuatorSpec, BoundKind, Family, Morphology};
pub use sampling::{DirectionSet, Sampler};
