//! Simulation oracle for the analytic outage results.
//!
//! Trials are cut into fixed-size blocks. Block `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so a block's output
//! depends only on `(seed, b)`. Blocks run on the rayon pool and are reduced
//! in block order: estimates are bit-identical for any thread count.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{alignment_factor, typical_power_unchecked, ReceiverPlacement, SystemParams};
use crate::error::{invalid, require_non_negative, require_positive, Result};
use crate::stochastic::OutageQuery;

/// Trials per RNG stream.
pub const BLOCK_SIZE: usize = 8192;

/// Asymptotic 1% critical value of `√n · D_n` (Kolmogorov distribution).
pub const KS_CRITICAL_1PCT: f64 = 1.6276;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AngleMode {
    /// Transmitter angle drawn once per trial, receiver angles per receiver,
    /// all uniform on `[0, 2π)`.
    #[default]
    ExactRandom,
    /// Every neighbour has `I = 1`.
    UnitAlignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TypicalMode {
    /// `d₀` and `I₀` taken from the query.
    #[default]
    Fixed,
    /// `d₀` uniform in the disk, `I₀` from the query.
    UniformInDisk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: usize,
    pub seed: u64,
    pub angle_mode: AngleMode,
    pub typical_mode: TypicalMode,
}

impl SimConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            angle_mode: AngleMode::default(),
            typical_mode: TypicalMode::default(),
        }
    }

    pub fn with_angle_mode(self, angle_mode: AngleMode) -> Self {
        SimConfig { angle_mode, ..self }
    }

    pub fn with_typical_mode(self, typical_mode: TypicalMode) -> Self {
        SimConfig {
            typical_mode,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub trials: usize,
}

impl SimEstimate {
    fn from_count(hits: u64, trials: usize) -> Self {
        let n = trials as f64;
        let p = hits as f64 / n;
        SimEstimate {
            mean: p,
            standard_error: (p * (1.0 - p) / n).sqrt(),
            trials,
        }
    }
}

/// Sample mean of `e^{jtS}` with per-component standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate {
    pub t: f64,
    pub mean: Complex64,
    pub standard_error_re: f64,
    pub standard_error_im: f64,
}

fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Runs `trial` `trials` times over the block partition and returns the
/// per-block outputs in block order.
fn run_blocks<T, F>(trials: usize, seed: u64, block: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let blocks = trials.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = BLOCK_SIZE.min(trials - b * BLOCK_SIZE);
            block(&mut rng, len)
        })
        .collect()
}

fn count_hits<F>(sim: &SimConfig, hit: F) -> SimEstimate
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let hits: u64 = run_blocks(sim.trials, sim.seed, |rng, len| {
        (0..len).filter(|_| hit(rng)).count() as u64
    })
    .into_iter()
    .sum();
    SimEstimate::from_count(hits, sim.trials)
}

/// Point-count law of the cell: `None` when the cell is empty surely.
fn point_count(density: f64, rho: f64) -> Option<Poisson<f64>> {
    let mean = density * PI * rho * rho;
    (mean > 0.0).then(|| Poisson::new(mean).expect("finite positive Poisson mean"))
}

fn draw_count<R: Rng + ?Sized>(law: &Option<Poisson<f64>>, rng: &mut R) -> usize {
    law.as_ref().map_or(0, |p| p.sample(rng) as usize)
}

/// Radius of a point uniform in the disk; `1 − U ∈ (0, 1]` keeps it positive.
fn uniform_radius<R: Rng + ?Sized>(rng: &mut R, rho: f64) -> f64 {
    rho * (1.0 - rng.random::<f64>()).sqrt()
}

fn uniform_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>() * TAU
}

/// One draw of the receiver field. In exact mode `theta_t` is the
/// transmitter angle shared by all receivers of the draw; it is ignored in
/// unit-alignment mode.
pub fn sample_ppp<R: Rng + ?Sized>(
    rng: &mut R,
    density: f64,
    rho: f64,
    angle_mode: AngleMode,
    theta_t: f64,
    coil_constant: f64,
) -> Result<Vec<ReceiverPlacement>> {
    require_non_negative("density", density)?;
    require_positive("rho", rho)?;
    let n = draw_count(&point_count(density, rho), rng);
    (0..n)
        .map(|_| {
            let d = uniform_radius(rng, rho);
            match angle_mode {
                AngleMode::UnitAlignment => ReceiverPlacement::unit_aligned(coil_constant, d),
                AngleMode::ExactRandom => {
                    let rx = uniform_angle(rng);
                    ReceiverPlacement::from_geometry(coil_constant, theta_t, rx, d)
                }
            }
        })
        .collect()
}

/// `S = Σ I_k²/d_k⁶` of a placed field.
pub fn interference_sum(placements: &[ReceiverPlacement]) -> f64 {
    placements
        .iter()
        .map(|p| p.alignment * p.alignment / p.distance.powi(6))
        .sum()
}

/// One draw of `S` without materialising the placements. The transmitter
/// angle, drawn here in exact mode, is not consumed by anything else.
pub fn sample_s<R: Rng + ?Sized>(
    rng: &mut R,
    density: f64,
    rho: f64,
    angle_mode: AngleMode,
) -> Result<f64> {
    require_non_negative("density", density)?;
    require_positive("rho", rho)?;
    Ok(draw_s(rng, &point_count(density, rho), rho, angle_mode))
}

fn draw_s<R: Rng + ?Sized>(
    rng: &mut R,
    law: &Option<Poisson<f64>>,
    rho: f64,
    angle_mode: AngleMode,
) -> f64 {
    let theta_t = match angle_mode {
        AngleMode::ExactRandom => uniform_angle(rng),
        AngleMode::UnitAlignment => 0.0,
    };
    let n = draw_count(law, rng);
    let mut s = 0.0;
    for _ in 0..n {
        let d = uniform_radius(rng, rho);
        let i_sq = match angle_mode {
            AngleMode::UnitAlignment => 1.0,
            AngleMode::ExactRandom => alignment_factor(theta_t, uniform_angle(rng)).powi(2),
        };
        s += i_sq / d.powi(6);
    }
    s
}

/// `trials` draws of `S`, in deterministic order.
pub fn sample_s_many(density: f64, rho: f64, sim: &SimConfig) -> Result<Vec<f64>> {
    require_non_negative("density", density)?;
    require_positive("rho", rho)?;
    sim.validate()?;
    let law = point_count(density, rho);
    Ok(run_blocks(sim.trials, sim.seed, |rng, len| {
        (0..len)
            .map(|_| draw_s(rng, &law, rho, sim.angle_mode))
            .collect::<Vec<_>>()
    })
    .concat())
}

/// Sample mean of `e^{jtS}` at every `t`, all from one set of draws.
pub fn empirical_characteristic_fn(
    ts: &[f64],
    density: f64,
    rho: f64,
    sim: &SimConfig,
) -> Result<Vec<ComplexEstimate>> {
    let draws = sample_s_many(density, rho, sim)?;
    let n = draws.len() as f64;
    Ok(ts
        .iter()
        .map(|&t| {
            let (mut re, mut im, mut re2, mut im2) = (0.0, 0.0, 0.0, 0.0);
            for &s in &draws {
                let (sin, cos) = (t * s).sin_cos();
                re += cos;
                im += sin;
                re2 += cos * cos;
                im2 += sin * sin;
            }
            let (mre, mim) = (re / n, im / n);
            ComplexEstimate {
                t,
                mean: Complex64::new(mre, mim),
                standard_error_re: ((re2 / n - mre * mre).max(0.0) / n).sqrt(),
                standard_error_im: ((im2 / n - mim * mim).max(0.0) / n).sqrt(),
            }
        })
        .collect())
}

/// Fraction of trials in which the typical receiver, sharing the cell with a
/// Poisson field of receivers on the same load, harvests less than `τ`.
pub fn simulate_outage_strong(
    params: &SystemParams,
    q: &OutageQuery,
    sim: &SimConfig,
) -> Result<SimEstimate> {
    params.validate()?;
    q.validate()?;
    sim.validate()?;
    let fixed_distance = match sim.typical_mode {
        TypicalMode::Fixed => Some(q.require_distance()?),
        TypicalMode::UniformInDisk => None,
    };
    let rho = params.cell_radius;
    let law = point_count(params.density, rho);
    Ok(count_hits(sim, |rng| {
        let s = draw_s(rng, &law, rho, sim.angle_mode);
        let d0 = fixed_distance.unwrap_or_else(|| uniform_radius(rng, rho));
        typical_power_unchecked(params, q.alignment, d0, q.load, s) < q.threshold
    }))
}

/// Fraction of trials in which a lone receiver placed uniformly in the cell
/// harvests less than `τ` under the loosely coupled power law.
pub fn simulate_outage_loose(
    params: &SystemParams,
    q: &OutageQuery,
    sim: &SimConfig,
) -> Result<SimEstimate> {
    params.validate()?;
    q.validate()?;
    sim.validate()?;
    let rho = params.cell_radius;
    let r_x = params.rx_resistance + q.load;
    let gain = params.transmit_power * params.coupling_scale() * q.alignment.powi(2) * q.load
        / (params.tx_resistance * r_x * r_x);
    Ok(count_hits(sim, |rng| {
        let d0 = uniform_radius(rng, rho);
        gain / d0.powi(6) < q.threshold
    }))
}

/// `n` radii of points uniform in a disk of radius `rho`.
pub fn sample_radial_distances(rho: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    require_positive("rho", rho)?;
    Ok(run_blocks(n, seed, |rng, len| {
        (0..len)
            .map(|_| uniform_radius(rng, rho))
            .collect::<Vec<_>>()
    })
    .concat())
}

/// Kolmogorov-Smirnov distance `sup |F_n − F|` of the samples from `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

pub fn ks_critical_value_1pct(n: usize) -> f64 {
    KS_CRITICAL_1PCT / (n as f64).sqrt()
}
