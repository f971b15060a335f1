//! Subcommand bodies. Each returns the run directory and a few summary
//! lines for the terminal.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rankone::diagnostics::{
    autocorrelation, clt_check, empirical_measure, lyapunov_top, random_point, rng_for, Decay, Histogram,
};
use rankone::hopf::{
    convergence_report, n_list_for_range, perturbation_fit, AnnulusPoint, HopfSystem, MapKind, MuLadder,
    PerturbationOptions, ReturnMap,
};
use rankone::misiurewicz::{find_misiurewicz_pair, SearchOutcome};
use rankone::{critical_points, Error};

use crate::config::RunConfig;
use crate::output::RunDir;
use crate::CliError;

pub const SWEEP_CSV: &str = "sweep.csv";
pub const CONVERGENCE_CSV: &str = "convergence.csv";
pub const PERTURBATION_CSV: &str = "perturbation.csv";
pub const LYAPUNOV_CSV: &str = "lyapunov.csv";
pub const AUTOCORR_CSV: &str = "autocorr.csv";
pub const CERTIFICATE: &str = "certificate.txt";
pub const SUMMARY: &str = "summary.txt";

#[derive(Debug)]
pub struct Outcome {
    pub dir: PathBuf,
    pub lines: Vec<String>,
}

/// Runs `f` on a pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn search(config: &RunConfig) -> Result<SearchOutcome, CliError> {
    let family = config.family();
    let critical = critical_points(&family)?;
    Ok(find_misiurewicz_pair(&family, &critical, config.search.l_lo, &config.search.build())?)
}

fn csv_bytes<R: Serialize>(header: &[&str], rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.serialize(r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// Runs the two-parameter search and writes the certificate.
pub fn cmd_find(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let outcome = with_workers(config.workers, || search(config))??;
    let mut dir = RunDir::create(config, "find")?;
    dir.write(CERTIFICATE, outcome.certificate.to_text().as_bytes())?;
    let mut s = String::new();
    let _ = writeln!(s, "a_star = {:.17e}", outcome.a_star);
    let _ = writeln!(s, "l_star = {:.17e}", outcome.l_star);
    let _ = writeln!(s, "l_lo = {}", config.search.l_lo);
    let _ = writeln!(s, "all_pass = {}", outcome.certificate.all_pass());
    let _ = writeln!(s, "min_distance = {:.9e}", outcome.orbit_report.min_distance);
    let _ = writeln!(s, "generations = {}", outcome.generations.len());
    let _ = writeln!(s, "landing_step = {}", outcome.landing.step);
    dir.write(SUMMARY, s.as_bytes())?;
    let lines = vec![
        format!("a* = {:.12}  L* = {:.12}", outcome.a_star, outcome.l_star),
        format!("certificate: {}", if outcome.certificate.all_pass() { "all checks pass" } else { "some checks fail" }),
    ];
    Ok(Outcome { dir: dir.finish()?, lines })
}

/// One row of `sweep.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub config_hash: String,
    pub a: f64,
    pub l: f64,
    pub n: usize,
    pub mu: f64,
    /// `pass`/`fail` at the certified pair, `none` elsewhere.
    pub certificate: String,
    pub lambda1: f64,
    pub stderr: f64,
    pub escaped: bool,
    pub error: String,
    pub seconds: f64,
}

pub const SWEEP_HEADER: [&str; 11] = [
    "config_hash", "a", "l", "n", "mu", "certificate", "lambda1", "stderr", "escaped", "error", "seconds",
];

struct Task {
    a: f64,
    ladder: usize,
    n: usize,
}

fn sweep_record(config: &RunConfig, hash: &str, ladder: &MuLadder, task: &Task, p0: AnnulusPoint, cert: &str) -> SweepRecord {
    let start = Instant::now();
    let kind = config.diagnostics.map_kind(config.sweep.kind);
    let mut rec = SweepRecord {
        config_hash: hash.to_string(),
        a: task.a,
        l: ladder.system.l,
        n: task.n,
        mu: f64::NAN,
        certificate: cert.to_string(),
        lambda1: f64::NAN,
        stderr: f64::NAN,
        escaped: false,
        error: String::new(),
        seconds: 0.0,
    };
    let run = ReturnMap::indexed(kind, ladder, task.n, task.a).and_then(|map| {
        rec.mu = map.mu;
        lyapunov_top(&map, p0, config.diagnostics.iterates, config.diagnostics.burn_in)
    });
    match run {
        Ok(est) => {
            rec.lambda1 = est.lambda1;
            rec.stderr = est.stderr;
        }
        Err(Error::Escaped { .. } | Error::LeftAnnulus { .. }) => rec.escaped = true,
        Err(e) => rec.error = e.to_string(),
    }
    rec.seconds = start.elapsed().as_secs_f64();
    rec
}

/// Fraction of finished records with `λ₁ > 0`, or `None` if none finished.
pub fn positive_fraction(records: &[SweepRecord]) -> Option<f64> {
    let done: Vec<&SweepRecord> = records.iter().filter(|r| r.lambda1.is_finite()).collect();
    (!done.is_empty()).then(|| done.iter().filter(|r| r.lambda1 > 0.0).count() as f64 / done.len() as f64)
}

/// Sweeps `(a, L, n)`, estimating `λ₁` at each grid point.
pub fn cmd_sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    with_workers(config.workers, || sweep_body(config))?
}

fn sweep_body(config: &RunConfig) -> Result<Outcome, CliError> {
    let s = &config.sweep;
    let certified = if s.a_grid.is_empty() || s.l_grid.is_empty() {
        Some(search(config)?)
    } else {
        None
    };
    let a_grid = if s.a_grid.is_empty() { vec![certified.as_ref().unwrap().a_star] } else { s.a_grid.clone() };
    let l_grid = if s.l_grid.is_empty() { vec![certified.as_ref().unwrap().l_star] } else { s.l_grid.clone() };
    let base = config.hopf_system();
    let ladders: Vec<MuLadder> = l_grid
        .iter()
        .map(|&l| MuLadder::new(&HopfSystem { l, ..base.clone() }, s.mu_top))
        .collect::<Result<_, _>>()?;
    let mut tasks = Vec::new();
    for &a in &a_grid {
        for (li, ladder) in ladders.iter().enumerate() {
            let ns = if !s.n_list.is_empty() {
                s.n_list.clone()
            } else if s.mu_count == 0 {
                Vec::new()
            } else {
                n_list_for_range(ladder, s.mu_lo, s.mu_hi, s.mu_count)?
            };
            tasks.extend(ns.into_iter().map(|n| Task { a, ladder: li, n }));
        }
    }
    let hash = config.hash();
    let p0 = random_point(&base, &mut rng_for(config.seed, 0));
    let cert_label = |a: f64, l: f64| match &certified {
        Some(c) if c.a_star == a && c.l_star == l => if c.certificate.all_pass() { "pass" } else { "fail" },
        _ => "none",
    };
    let records: Vec<SweepRecord> = tasks
        .par_iter()
        .map(|t| {
            let ladder = &ladders[t.ladder];
            sweep_record(config, &hash, ladder, t, p0, cert_label(t.a, ladder.system.l))
        })
        .collect();

    let mut dir = RunDir::create(config, "sweep")?;
    dir.write(SWEEP_CSV, &csv_bytes(&SWEEP_HEADER, &records)?)?;
    if let Some(c) = &certified {
        dir.write(CERTIFICATE, c.certificate.to_text().as_bytes())?;
    }
    let fraction = positive_fraction(&records);
    let mut summary = String::new();
    let _ = writeln!(summary, "config_hash = {hash}");
    let _ = writeln!(summary, "seed = {}", config.seed);
    let _ = writeln!(summary, "records = {}", records.len());
    let _ = writeln!(summary, "escaped = {}", records.iter().filter(|r| r.escaped).count());
    let _ = writeln!(summary, "errors = {}", records.iter().filter(|r| !r.error.is_empty()).count());
    let _ = writeln!(summary, "positive_fraction = {}", fraction.map_or("nan".into(), |f| f.to_string()));
    let best = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.lambda1.is_finite())
        .max_by(|a, b| a.1.lambda1.total_cmp(&b.1.lambda1));
    let mut lines = vec![format!(
        "{} records, fraction with λ₁ > 0: {}",
        records.len(),
        fraction.map_or("n/a".into(), |f| format!("{f:.4}"))
    )];
    if let (Some((i, r)), true) = (best, s.histogram) {
        let _ = writeln!(summary, "best = a {} l {} n {} mu {:e} lambda1 {}", r.a, r.l, r.n, r.mu, r.lambda1);
        let kind = config.diagnostics.map_kind(s.kind);
        let map = ReturnMap::indexed(kind, &ladders[tasks[i].ladder], r.n, r.a)?;
        let d = &config.diagnostics;
        let hists: Vec<Histogram> = (1..=2u64)
            .into_par_iter()
            .map(|stream| {
                let p = random_point(&map.system, &mut rng_for(config.seed, stream));
                empirical_measure(&map, p, d.iterates, d.burn_in, (d.bins[0], d.bins[1]))
            })
            .collect::<Result<_, _>>()?;
        let tv = hists[0].total_variation(&hists[1])?;
        for (k, h) in hists.iter().enumerate() {
            dir.write(&format!("histogram_stream{}.bin", k + 1), &h.to_bytes())?;
            dir.write(&format!("histogram_stream{}.txt", k + 1), h.sidecar().as_bytes())?;
        }
        let _ = writeln!(summary, "two_seed_tv = {tv}");
        lines.push(format!("two-seed TV distance at best point: {tv:.4}"));
    }
    dir.write(SUMMARY, summary.as_bytes())?;
    Ok(Outcome { dir: dir.finish()?, lines })
}

/// One row of `convergence.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCsvRow {
    pub n: usize,
    pub mu_n: f64,
    pub c0_dist: f64,
    pub c1_dist: f64,
    pub c2_dist: f64,
    pub c3_dist: f64,
    /// Fitted C⁰ rate over all rows.
    pub fitted_slope: f64,
}

pub const CONVERGENCE_HEADER: [&str; 7] = ["n", "mu_n", "c0_dist", "c1_dist", "c2_dist", "c3_dist", "fitted_slope"];
pub const PERTURBATION_HEADER: [&str; 3] = ["mu", "zeta", "theta_tilde"];

/// Convergence of the return maps to their singular limit, and the decay
/// of the higher-order terms.
pub fn cmd_converge(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    with_workers(config.workers, || converge_body(config))?
}

fn converge_body(config: &RunConfig) -> Result<Outcome, CliError> {
    let c = &config.converge;
    let system = config.hopf_system();
    let ladder = MuLadder::new(&system, c.mu_top)?;
    let n_list = if c.n_list.is_empty() {
        n_list_for_range(&ladder, c.mu_lo, c.mu_hi, c.count)?
    } else {
        c.n_list.clone()
    };
    let kind = config.diagnostics.map_kind(c.kind);
    let report = convergence_report(&ladder, kind, &n_list, c.order, c.grid())?;
    let slope = report.slopes[0].unwrap_or(f64::NAN);
    let rows: Vec<ConvergenceCsvRow> = report
        .rows
        .iter()
        .map(|r| ConvergenceCsvRow {
            n: r.n,
            mu_n: r.mu,
            c0_dist: r.dist[0],
            c1_dist: r.dist[1],
            c2_dist: r.dist[2],
            c3_dist: r.dist[3],
            fitted_slope: slope,
        })
        .collect();
    let mut dir = RunDir::create(config, "converge")?;
    dir.write(CONVERGENCE_CSV, &csv_bytes(&CONVERGENCE_HEADER, &rows)?)?;
    let fmt = |v: Option<f64>| v.map_or("nan".to_string(), |v| v.to_string());
    let mut summary = String::new();
    for (k, s) in report.slopes.iter().enumerate() {
        let _ = writeln!(summary, "c{k}_slope = {}", fmt(*s));
    }
    let _ = writeln!(summary, "predicted_c0_slope = {}", system.rho1 - system.rho2);
    let _ = writeln!(summary, "c0_inversions = {}", report.c0_inversions());
    let mut lines = vec![format!(
        "C⁰ slope {} over {} values of μ_n (rate ρ₁ − ρ₂ = {:.4})",
        fmt(report.slopes[0]),
        rows.len(),
        system.rho1 - system.rho2
    )];
    if system.has_higher_order() && !c.perturbation_mus.is_empty() {
        let fit = perturbation_fit(&system, &c.perturbation_mus, &PerturbationOptions::default())?;
        let prow: Vec<(f64, f64, f64)> = fit
            .samples
            .iter()
            .map(|s| (s.mu, s.zeta, s.theta_tilde.unwrap_or(f64::NAN)))
            .collect();
        dir.write(PERTURBATION_CSV, &csv_bytes(&PERTURBATION_HEADER, &prow)?)?;
        let _ = writeln!(summary, "zeta_exponent = {}", fmt(fit.zeta_exponent));
        let _ = writeln!(summary, "zeta_predicted = {}", fit.zeta_predicted);
        let _ = writeln!(summary, "theta_exponent = {}", fmt(fit.theta_exponent));
        let _ = writeln!(summary, "theta_predicted = {}", fit.theta_predicted);
        lines.push(format!(
            "ζ exponent {} (predicted {:.4})",
            fmt(fit.zeta_exponent),
            fit.zeta_predicted
        ));
    }
    dir.write(SUMMARY, summary.as_bytes())?;
    Ok(Outcome { dir: dir.finish()?, lines })
}

/// The map selected by the diagnostics section.
pub fn diagnostics_map(config: &RunConfig) -> Result<ReturnMap, CliError> {
    let d = &config.diagnostics;
    let system = config.hopf_system();
    let kind = d.map_kind(d.kind);
    Ok(match (kind, d.n) {
        (MapKind::SingularLimit, _) => ReturnMap::singular(&system, d.a),
        (_, Some(n)) => ReturnMap::indexed(kind, &MuLadder::new(&system, d.mu_top)?, n, d.a)?,
        (_, None) => ReturnMap::raw(kind, &system, d.mu)?,
    })
}

/// Lyapunov exponent, occupation histogram, autocorrelation and CLT
/// statistic along one orbit.
pub fn cmd_lyapunov(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    with_workers(config.workers, || lyapunov_body(config))?
}

fn lyapunov_body(config: &RunConfig) -> Result<Outcome, CliError> {
    let d = &config.diagnostics;
    let map = diagnostics_map(config)?;
    let obs = config.observable()?;
    let p0 = random_point(&map.system, &mut rng_for(config.seed, 0));
    let est = lyapunov_top(&map, p0, d.iterates, d.burn_in)?;
    let hist = empirical_measure(&map, p0, d.iterates, d.burn_in, (d.bins[0], d.bins[1]))?;
    let mut dir = RunDir::create(config, "lyapunov")?;
    let (decay, rate) = match autocorrelation(&map, obs, p0, d.iterates, d.max_lag, d.burn_in) {
        Ok(ac) => {
            dir.write(AUTOCORR_CSV, &csv_bytes(&["lag", "value"], &ac.values)?)?;
            match ac.decay {
                Decay::Exponential { rate } => ("exponential", rate),
                Decay::BelowNoise => ("below_noise", f64::NAN),
                Decay::NonDecaying => ("non_decaying", f64::NAN),
            }
        }
        Err(Error::DegenerateObservable) => ("degenerate_observable", f64::NAN),
        Err(e) => return Err(e.into()),
    };
    let (clt, clt_crit, clt_note) = match clt_check(&map, obs, p0, d.iterates, d.block_len, d.burn_in) {
        Ok(r) => (r.statistic, r.critical_value, "ok"),
        Err(Error::ZeroVariance { .. }) => (f64::NAN, f64::NAN, "zero_variance"),
        Err(Error::PreconditionViolated(_)) => (f64::NAN, f64::NAN, "too_few_blocks"),
        Err(e) => return Err(e.into()),
    };
    let header = [
        "config_hash", "a", "l", "mu", "lambda1", "stderr", "iterates", "decay", "decay_rate", "clt_statistic",
        "clt_critical", "clt_note",
    ];
    let row = (
        config.hash(), map.a, map.system.l, map.mu, est.lambda1, est.stderr, est.n, decay, rate, clt, clt_crit,
        clt_note,
    );
    dir.write(LYAPUNOV_CSV, &csv_bytes(&header, &[row])?)?;
    dir.write("histogram.bin", &hist.to_bytes())?;
    dir.write("histogram.txt", hist.sidecar().as_bytes())?;
    let lines = vec![
        format!("λ₁ = {:.6} ± {:.2e} over {} iterates", est.lambda1, est.stderr, est.n),
        format!("correlation decay: {decay}; CLT statistic {clt:.4} (5% critical {clt_crit:.4})"),
    ];
    Ok(Outcome { dir: dir.finish()?, lines })
}
