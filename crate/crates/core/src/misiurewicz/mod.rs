//! Misiurewicz certificates, the constructive two-parameter search and the
//! rank-one checklist for circle families.

pub mod certificate;
pub mod checklist;
pub mod checks;
pub mod curves;
pub mod search;

pub use certificate::{auto_k, Evidence, MisiurewiczCertificate, DEFAULT_HORIZON, DEFAULT_K};
pub use checks::{
    check_critical_orbits, check_outside_expansion, local_distortion_ratio, recovery_estimate,
    CriticalOrbitReport, ExpansionReport, Recovery,
};
pub use curves::{critical_curve, gamma_jacobian, gamma_jacobian_at, CriticalOrbit};
pub use search::{find_misiurewicz_pair, seed_pair, SearchConfig, SearchOutcome, SearchRegion};
pub use checklist::{
    mixing_conditions, transversality_margin, turn_nondegeneracy, Mixing, RankOneReport, Transversality,
};
