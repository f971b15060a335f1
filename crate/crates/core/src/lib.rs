//! Kicked degenerate Hopf return maps and their singular-limit circle family.
//!
//! The crate is layered bottom-up:
//!
//! * [`family`], [`critical`], [`orbit`]: circle-map families and orbits.
//! * [`misiurewicz`]: Misiurewicz certificates, the two-parameter search and
//!   the rank-one checklist.
//! * [`hopf`]: kick map, relaxation, exact and integrated flows, return maps.
//! * [`diagnostics`]: Lyapunov exponents, occupation measures, correlations.

pub mod angle;
pub mod critical;
pub mod diagnostics;
pub mod error;
pub mod family;
pub mod fit;
pub mod hopf;
pub mod misiurewicz;
pub mod orbit;
pub mod roots;

pub use critical::{critical_points, CriticalStructure};
pub use error::{Error, Result};
pub use family::{Harmonic, OneDFamily, TrigPoly};
pub use orbit::{iterate_orbit, OrbitTrace};
