//! Run configuration: a TOML document with one section per concern.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use rankone::diagnostics::{Observable, DEFAULT_BURN_IN};
use rankone::hopf::{ConvergenceGrid, HigherOrder, HopfSystem, MapKind, Poly};
use rankone::misiurewicz::{SearchConfig, DEFAULT_HORIZON};
use rankone::{critical_points, Harmonic, OneDFamily, TrigPoly};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(with = "seed_format")]
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
    pub system: SystemSpec,
    pub family: FamilySpec,
    pub search: SearchSpec,
    pub sweep: SweepSpec,
    pub converge: ConvergeSpec,
    pub diagnostics: DiagnosticsSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            workers: 1,
            out: PathBuf::from("runs"),
            system: SystemSpec::default(),
            family: FamilySpec::default(),
            search: SearchSpec::default(),
            sweep: SweepSpec::default(),
            converge: ConvergeSpec::default(),
            diagnostics: DiagnosticsSpec::default(),
        }
    }
}

/// Normal-form constants. `gamma` and `beta` are polynomials in `μ`,
/// lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSpec {
    pub omega: f64,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub rho1: f64,
    pub rho2: f64,
    pub k4: f64,
    pub l: f64,
    pub g: HigherOrder,
    pub h: HigherOrder,
}

impl Default for SystemSpec {
    fn default() -> Self {
        let s = HopfSystem::default();
        Self {
            omega: s.omega,
            beta: s.beta.coeffs,
            gamma: s.gamma.coeffs,
            rho1: s.rho1,
            rho2: s.rho2,
            k4: s.k4,
            l: s.l,
            g: s.g,
            h: s.h,
        }
    }
}

impl SystemSpec {
    pub fn build(&self) -> HopfSystem {
        HopfSystem {
            omega: self.omega,
            gamma: Poly { coeffs: self.gamma.clone() },
            beta: Poly { coeffs: self.beta.clone() },
            rho1: self.rho1,
            rho2: self.rho2,
            l: self.l,
            k4: self.k4,
            g: self.g,
            h: self.h,
        }
    }

    pub fn beta0(&self) -> f64 {
        self.beta.first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Sin,
    Cos,
    Harmonics,
}

/// Circle family `ζ + β₀LΦ(θ) + a`; `β₀` comes from the system section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySpec {
    pub profile: Profile,
    pub zeta: f64,
    /// Used when `profile = "harmonics"`.
    pub harmonics: Vec<Harmonic>,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self {
            profile: Profile::Sin,
            zeta: FRAC_PI_2,
            harmonics: Vec::new(),
        }
    }
}

impl FamilySpec {
    pub fn build(&self, beta0: f64) -> OneDFamily {
        let profile = match self.profile {
            Profile::Sin => TrigPoly::sin(),
            Profile::Cos => TrigPoly::cos(),
            Profile::Harmonics => TrigPoly::new(self.harmonics.clone()),
        };
        OneDFamily::new(self.zeta, profile, beta0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchSpec {
    pub l_lo: f64,
    pub k: Option<f64>,
    pub horizon_n: usize,
    pub max_depth: usize,
    pub beam: usize,
    pub min_k: f64,
    pub max_candidates: usize,
}

impl Default for SearchSpec {
    fn default() -> Self {
        let c = SearchConfig::default();
        Self {
            l_lo: 100.0,
            k: c.k,
            horizon_n: DEFAULT_HORIZON,
            max_depth: c.max_depth,
            beam: c.beam,
            min_k: c.min_k,
            max_candidates: c.max_candidates,
        }
    }
}

impl SearchSpec {
    pub fn build(&self) -> SearchConfig {
        SearchConfig {
            k: self.k,
            horizon_n: self.horizon_n,
            max_depth: self.max_depth,
            beam: self.beam,
            min_k: self.min_k,
            max_candidates: self.max_candidates,
            ..SearchConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindSpec {
    ReducedExact,
    FullIntegrated,
    SingularLimit,
}

/// Grid over `(a, L, n)`. Empty `a_grid`/`l_grid` mean "use the pair found
/// by an inline search". Explicit `n_list` overrides the log-`μ` grid, whose
/// points are snapped to the resonant ladder below `mu_top`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub kind: KindSpec,
    pub a_grid: Vec<f64>,
    pub l_grid: Vec<f64>,
    pub n_list: Vec<usize>,
    pub mu_top: f64,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub mu_count: usize,
    /// Two-seed histograms at the grid point with the largest `λ₁`.
    pub histogram: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            kind: KindSpec::ReducedExact,
            a_grid: Vec::new(),
            l_grid: Vec::new(),
            n_list: Vec::new(),
            mu_top: 0.5,
            mu_lo: 1e-12,
            mu_hi: 1e-2,
            mu_count: 200,
            histogram: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeSpec {
    pub kind: KindSpec,
    pub order: usize,
    pub mu_top: f64,
    /// Explicit resonant indices; otherwise `count` points over `[mu_lo, mu_hi]`.
    pub n_list: Vec<usize>,
    pub mu_lo: f64,
    pub mu_hi: f64,
    pub count: usize,
    pub grid_z: usize,
    pub grid_theta: usize,
    pub grid_a: usize,
    /// `μ` values for the higher-order decay fit; skipped when empty or
    /// when `g ≡ h ≡ 0`.
    pub perturbation_mus: Vec<f64>,
}

impl Default for ConvergeSpec {
    fn default() -> Self {
        let g = ConvergenceGrid::default();
        Self {
            kind: KindSpec::ReducedExact,
            order: 3,
            mu_top: 0.1,
            n_list: Vec::new(),
            mu_lo: 1e-6,
            mu_hi: 1e-3,
            count: 6,
            grid_z: g.z,
            grid_theta: g.theta,
            grid_a: g.a,
            perturbation_mus: vec![1e-9, 1e-8, 1e-7, 1e-6, 1e-5],
        }
    }
}

impl ConvergeSpec {
    pub fn grid(&self) -> ConvergenceGrid {
        ConvergenceGrid {
            z: self.grid_z,
            theta: self.grid_theta,
            a: self.grid_a,
        }
    }
}

/// Budgets for one-orbit diagnostics. `a`, `l`, `mu` locate the map for the
/// `lyapunov` subcommand; `mu` is used as is (its phase defines `a`) unless
/// `n` is set, in which case `μ(a, n)` is solved on the ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSpec {
    pub kind: KindSpec,
    pub a: f64,
    pub n: Option<usize>,
    pub mu: f64,
    pub mu_top: f64,
    pub iterates: usize,
    pub burn_in: usize,
    pub bins: [usize; 2],
    pub observable: String,
    pub max_lag: usize,
    pub block_len: usize,
    pub threshold: f64,
    pub ode_tol: f64,
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        Self {
            kind: KindSpec::ReducedExact,
            a: 0.0,
            n: None,
            mu: 1e-6,
            mu_top: 0.5,
            iterates: 1_000_000,
            burn_in: DEFAULT_BURN_IN,
            bins: [64, 256],
            observable: "sin_theta".into(),
            max_lag: 40,
            block_len: 1000,
            threshold: 0.0,
            ode_tol: 1e-10,
        }
    }
}

impl DiagnosticsSpec {
    pub fn map_kind(&self, kind: KindSpec) -> MapKind {
        match kind {
            KindSpec::ReducedExact => MapKind::ReducedExact,
            KindSpec::FullIntegrated => MapKind::FullIntegrated { tol: self.ode_tol },
            KindSpec::SingularLimit => MapKind::SingularLimit,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn hopf_system(&self) -> HopfSystem {
        self.system.build()
    }

    pub fn family(&self) -> OneDFamily {
        self.family.build(self.system.beta0())
    }

    pub fn observable(&self) -> Result<Observable, CliError> {
        Observable::parse(&self.diagnostics.observable)
            .ok_or_else(|| CliError::Config(format!("unknown observable {:?}", self.diagnostics.observable)))
    }

    /// Rejects configurations that violate the system constraints or are
    /// otherwise unusable, naming the violated constraint.
    pub fn validate(&self) -> Result<(), CliError> {
        self.hopf_system()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        critical_points(&self.family()).map_err(|e| CliError::Config(e.to_string()))?;
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.workers == 0 {
            return bad("workers ≥ 1 violated");
        }
        if !(self.search.l_lo > 0.0) {
            return bad("search.l_lo > 0 violated");
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        let s = &self.sweep;
        if !(positive(s.mu_lo) && s.mu_lo <= s.mu_hi && s.mu_hi <= s.mu_top) {
            return bad("sweep: 0 < mu_lo ≤ mu_hi ≤ mu_top violated");
        }
        if s.a_grid.iter().any(|a| !(0.0..std::f64::consts::TAU).contains(a)) {
            return bad("sweep.a_grid ⊂ [0, 2π) violated");
        }
        if s.l_grid.iter().any(|&l| !positive(l)) {
            return bad("sweep.l_grid > 0 violated");
        }
        let c = &self.converge;
        if !(positive(c.mu_lo) && c.mu_lo <= c.mu_hi && c.mu_hi <= c.mu_top) {
            return bad("converge: 0 < mu_lo ≤ mu_hi ≤ mu_top violated");
        }
        let d = &self.diagnostics;
        if d.bins[0] == 0 || d.bins[1] == 0 {
            return bad("diagnostics.bins > 0 violated");
        }
        if !positive(d.mu) || !positive(d.ode_tol) {
            return bad("diagnostics: mu > 0 and ode_tol > 0 violated");
        }
        self.observable()?;
        Ok(())
    }
}

/// TOML integers are signed, so seeds above `i64::MAX` are written as
/// decimal strings.
mod seed_format {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*seed) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&seed.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(v),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
