//! The kicked degenerate Hopf system: kick, relaxation, reduced and full
//! flows, resonant parameters and annulus return maps.

pub mod convergence;
pub mod flow;
pub mod kick;
pub mod ode;
pub mod resonance;
pub mod return_map;
pub mod system;

pub use convergence::{
    convergence_report, distortion_report, n_list_for_range, perturbation_fit, perturbation_magnitude,
    ConvergenceGrid, ConvergenceReport, DistortionReport, PerturbationOptions, PerturbationSample,
};
pub use flow::{
    full_flow, gronwall_bound, gronwall_check, reduced_flow, relaxation, relaxation_time, Relaxation,
};
pub use kick::{kick, kick_jacobian, kick_jacobian_det, kick_jacobian_det_published};
pub use resonance::{mu_sequence, xi, MuLadder};
pub use return_map::{annulus_grid, annulus_invariance, detect_mu_max, log_grid, MapKind, ReturnMap};
pub use system::{AnnulusPoint, HigherOrder, HopfSystem, Poly};
