//! Numerical proxies for the attractor properties of finite-μ return maps:
//! Lyapunov exponents, occupation measures, correlation decay, a central
//! limit check and basin statistics.

pub mod basin;
pub mod correlation;
pub mod lyapunov;
pub mod measure;
pub mod observable;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hopf::{AnnulusPoint, HopfSystem, ReturnMap};

pub use basin::{basin_sample, BasinReport};
pub use correlation::{autocorrelation, clt_check, clt_statistic, Autocorrelation, CltReport, Decay};
pub use lyapunov::{lyapunov_top, LyapunovEstimate};
pub use measure::{empirical_measure, Histogram};
pub use observable::Observable;

/// Default number of discarded iterates.
pub const DEFAULT_BURN_IN: usize = 10_000;

/// Generator for stream `stream` of experiment `seed`.
///
/// Streams are independent, so parallel work items draw from their own
/// stream regardless of scheduling.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform random point of `𝒜`.
pub fn random_point(system: &HopfSystem, rng: &mut impl Rng) -> AnnulusPoint {
    let (lo, hi) = system.annulus_bounds();
    AnnulusPoint::new(rng.gen_range(lo..=hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Iterates `map` from `p0`, discarding `burn_in` iterates, then calls
/// `visit(i, x_i)` for `i < n`. Returns `x_n`.
pub fn run_orbit<F>(map: &ReturnMap, p0: AnnulusPoint, n: usize, burn_in: usize, mut visit: F) -> Result<AnnulusPoint>
where
    F: FnMut(usize, AnnulusPoint),
{
    let mut p = p0;
    for i in 0..burn_in {
        p = step(map, p, i)?;
    }
    for i in 0..n {
        visit(i, p);
        p = step(map, p, burn_in + i)?;
    }
    Ok(p)
}

#[inline]
pub(crate) fn step(map: &ReturnMap, p: AnnulusPoint, iterate: usize) -> Result<AnnulusPoint> {
    map.apply(p).map_err(|e| match e {
        Error::LeftAnnulus { .. } => Error::Escaped { iterate },
        other => other,
    })
}

/// Everything measured along one orbit.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OrbitSummary {
    pub lyapunov: Option<LyapunovEstimate>,
    pub histogram: Option<Histogram>,
    pub autocorr: Option<Autocorrelation>,
    pub clt_statistic: Option<f64>,
    pub escaped: bool,
}
