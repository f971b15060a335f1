//! Occupation histograms over `𝒜` and Birkhoff averages.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{AnnulusPoint, HopfSystem, ReturnMap};

use super::run_orbit;

/// File magic of the binary histogram format.
pub const MAGIC: [u8; 4] = *b"RKHG";
pub const FORMAT_VERSION: u32 = 1;

/// Birkhoff averages of the built-in observables.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Birkhoff {
    pub one: f64,
    pub sin_theta: f64,
    pub cos_theta: f64,
    pub z: f64,
}

/// Normalized occupation histogram on a `rows × cols` grid of `(z, θ)` bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub rows: usize,
    pub cols: usize,
    pub z_range: (f64, f64),
    /// Row-major masses, `z` along rows.
    pub mass: Vec<f64>,
    pub birkhoff: Birkhoff,
    pub samples: usize,
}

impl Histogram {
    pub fn empty(system: &HopfSystem, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            z_range: system.annulus_bounds(),
            mass: vec![0.0; rows * cols],
            birkhoff: Birkhoff::default(),
            samples: 0,
        }
    }

    pub fn bin_of(&self, p: AnnulusPoint) -> usize {
        let (lo, hi) = self.z_range;
        let r = (((p.z - lo) / (hi - lo)) * self.rows as f64).floor();
        let c = ((p.theta / TAU) * self.cols as f64).floor();
        let r = (r.max(0.0) as usize).min(self.rows - 1);
        let c = (c.max(0.0) as usize).min(self.cols - 1);
        r * self.cols + c
    }

    pub fn bin_center(&self, index: usize) -> AnnulusPoint {
        let (lo, hi) = self.z_range;
        let (r, c) = (index / self.cols, index % self.cols);
        AnnulusPoint::new(
            lo + (hi - lo) * (r as f64 + 0.5) / self.rows as f64,
            TAU * (c as f64 + 0.5) / self.cols as f64,
        )
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// `Σ φ(center)·mass`.
    pub fn integrate(&self, phi: impl Fn(AnnulusPoint) -> f64) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(|(i, m)| phi(self.bin_center(i)) * m)
            .sum()
    }

    /// `½ Σ |p − q|`.
    pub fn total_variation(&self, other: &Histogram) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::PreconditionViolated("histogram shapes differ".into()));
        }
        Ok(0.5 * self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).sum::<f64>())
    }

    /// Flat binary form: 16-byte header (magic, version, rows, cols as
    /// little-endian `u32`) followed by the masses as little-endian `f64`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 8 * self.mass.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for m in &self.mass {
            out.extend_from_slice(&m.to_le_bytes());
        }
        out
    }

    /// Reads the masses back; returns `(rows, cols, mass)`.
    pub fn from_bytes(bytes: &[u8]) -> Result<(usize, usize, Vec<f64>)> {
        let bad = |m: &str| Error::PreconditionViolated(format!("histogram file: {m}"));
        if bytes.len() < 16 || bytes[..4] != MAGIC {
            return Err(bad("bad header"));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
        if word(4) != FORMAT_VERSION as usize {
            return Err(bad("unsupported version"));
        }
        let (rows, cols) = (word(8), word(12));
        if bytes.len() != 16 + 8 * rows * cols {
            return Err(bad("length does not match shape"));
        }
        let mass = bytes[16..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok((rows, cols, mass))
    }

    /// Text descriptor written next to the binary file.
    pub fn sidecar(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "format = rankone-histogram");
        let _ = writeln!(s, "version = {FORMAT_VERSION}");
        let _ = writeln!(s, "header_bytes = 16");
        let _ = writeln!(s, "dtype = f64le");
        let _ = writeln!(s, "rows = {}", self.rows);
        let _ = writeln!(s, "cols = {}", self.cols);
        let _ = writeln!(s, "row_axis = z [{}, {}]", self.z_range.0, self.z_range.1);
        let _ = writeln!(s, "col_axis = theta [0, 2pi)");
        let _ = writeln!(s, "samples = {}", self.samples);
        s
    }

    /// Merges `other` into `self`, weighting by sample counts.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::PreconditionViolated("histogram shapes differ".into()));
        }
        let total = (self.samples + other.samples) as f64;
        if total == 0.0 {
            return Ok(());
        }
        let (wa, wb) = (self.samples as f64 / total, other.samples as f64 / total);
        for (a, b) in self.mass.iter_mut().zip(&other.mass) {
            *a = wa * *a + wb * b;
        }
        let mix = |a: f64, b: f64| wa * a + wb * b;
        self.birkhoff = Birkhoff {
            one: mix(self.birkhoff.one, other.birkhoff.one),
            sin_theta: mix(self.birkhoff.sin_theta, other.birkhoff.sin_theta),
            cos_theta: mix(self.birkhoff.cos_theta, other.birkhoff.cos_theta),
            z: mix(self.birkhoff.z, other.birkhoff.z),
        };
        self.samples += other.samples;
        Ok(())
    }
}

/// Occupation histogram of `n` iterates after `burn_in`.
pub fn empirical_measure(
    map: &ReturnMap,
    p0: AnnulusPoint,
    n: usize,
    burn_in: usize,
    bins: (usize, usize),
) -> Result<Histogram> {
    if n == 0 || bins.0 == 0 || bins.1 == 0 {
        return Err(Error::PreconditionViolated("empty histogram request".into()));
    }
    let mut h = Histogram::empty(&map.system, bins.0, bins.1);
    let mut counts = vec![0u64; bins.0 * bins.1];
    let (mut s, mut c, mut z) = (0.0, 0.0, 0.0);
    run_orbit(map, p0, n, burn_in, |_, p| {
        counts[h.bin_of(p)] += 1;
        let (sin, cos) = p.theta.sin_cos();
        s += sin;
        c += cos;
        z += p.z;
    })?;
    let total: u64 = counts.iter().sum();
    for (m, &k) in h.mass.iter_mut().zip(&counts) {
        *m = k as f64 / total as f64;
    }
    let nf = n as f64;
    h.birkhoff = Birkhoff {
        one: total as f64 / nf,
        sin_theta: s / nf,
        cos_theta: c / nf,
        z: z / nf,
    };
    h.samples = n;
    Ok(h)
}
