//! Empirical upper bounds for `inf_{|z_k|=1} max_{ν=1..m} |S(ν)|`.
//!
//! Each restart draws uniform angles from its own stream `(seed, restart)`
//! and runs normalised gradient descent on the log-sum-exp smoothing
//!
//! ```text
//! L_τ(θ) = τ · log Σ_{ν=1..m} exp(|S(ν)|² / τ)
//! ```
//!
//! with geometric step decay and geometric cooling of `τ`. The reported value
//! of a restart is the exact (unsmoothed) `max |S(ν)|` at the best iterate it
//! visited, so every report is a genuine upper bound on the infimum. Nothing
//! here certifies global optimality.

use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_complex::Complex64;

use crate::bounds::{best_lower_bound, BoundResult};
use crate::construction::montgomery_system;
use crate::primes::is_prime;
use crate::rng::{self, unit_interval};
use crate::system::UnimodularSystem;
use crate::turns::{self, unit_power};
use crate::{Error, Result};

pub const DISCLAIMER: &str =
    "empirical upper bound on the infimum; no global optimality is certified";

/// Central-difference step, in turns, used by the gradient check.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct TemperatureSchedule {
    pub initial: f64,
    pub floor: f64,
    /// Factor applied every `interval` iterations.
    pub decay: f64,
    pub interval: u64,
}

impl Default for TemperatureSchedule {
    fn default() -> Self {
        Self {
            initial: 1.0,
            floor: 1e-3,
            decay: 0.7,
            interval: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct OptimizerConfig {
    pub n: u64,
    pub m: u64,
    pub restarts: u64,
    pub iterations: u64,
    /// Largest per-angle move in turns on the first iteration.
    pub step: f64,
    pub step_decay: f64,
    pub temperature: TemperatureSchedule,
    pub seed: u64,
    pub check_gradient: bool,
    /// Restart 0 starts from this system instead of a random draw.
    pub warm_start: Option<InitKind>,
}

impl OptimizerConfig {
    pub fn new(n: u64, m: u64) -> Self {
        Self {
            n,
            m,
            restarts: 64,
            iterations: 2000,
            step: 1e-2,
            step_decay: 0.999,
            temperature: TemperatureSchedule::default(),
            seed: 0,
            check_gradient: false,
            warm_start: None,
        }
    }

    /// Warm start from the Gauss-sum system when `n + 1` is prime.
    pub fn with_auto_warm_start(mut self) -> Self {
        self.warm_start = is_prime(self.n + 1).then_some(InitKind::Montgomery);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: u64) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.temperature;
        let checks: [(bool, &'static str); 10] = [
            (self.n >= 1, "n must be at least 1"),
            (self.m >= 1, "m must be at least 1"),
            (self.restarts >= 1, "restarts must be at least 1"),
            (
                self.step > 0.0 && self.step.is_finite(),
                "step must be positive",
            ),
            (
                self.step_decay > 0.0 && self.step_decay <= 1.0,
                "step decay must lie in (0, 1]",
            ),
            (
                t.initial > 0.0 && t.initial.is_finite(),
                "initial temperature must be positive",
            ),
            (t.floor > 0.0, "temperature floor must be positive"),
            (
                t.floor <= t.initial,
                "temperature floor exceeds initial temperature",
            ),
            (
                t.decay > 0.0 && t.decay < 1.0,
                "temperature decay must lie in (0, 1)",
            ),
            (t.interval >= 1, "temperature interval must be at least 1"),
        ];
        if let Some(&(_, why)) = checks.iter().find(|(ok, _)| !ok) {
            return Err(Error::InvalidConfig(why));
        }
        if let Some(kind) = self.warm_start {
            seeded_system(kind, self.n, self.seed)
                .map_err(|_| Error::InvalidConfig("warm start unavailable for this n"))?;
        }
        Ok(())
    }
}

/// Smoothed objective, its gradient in turns, and the exact `max |S(ν)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveValue {
    pub smoothed: f64,
    pub gradient: Vec<f64>,
    pub hard_max_sq: f64,
}

#[derive(Debug, Default)]
struct Workspace {
    sums: Vec<Complex64>,
    weights: Vec<f64>,
    steps: Vec<Complex64>,
    powers: Vec<Complex64>,
}

/// Combined sweep over `ν = 1..m`: `sums[ν-1] = S(ν)`.
fn fill_sums(angles: &[f64], m: u64, ws: &mut Workspace) {
    let system_sweep = crate::system::PowerSweep::new(None, angles, 1, m as i64);
    ws.sums.clear();
    ws.sums.extend(system_sweep.map(|(_, s)| s));
}

fn evaluate(angles: &[f64], m: u64, tau: f64, ws: &mut Workspace) -> ObjectiveValue {
    fill_sums(angles, m, ws);
    let hard_max_sq = ws.sums.iter().fold(0.0f64, |acc, s| acc.max(s.norm_sqr()));

    ws.weights.clear();
    ws.weights.extend(
        ws.sums
            .iter()
            .map(|s| libm::exp((s.norm_sqr() - hard_max_sq) / tau)),
    );
    let total: f64 = ws.weights.iter().sum();
    let smoothed = hard_max_sq + tau * libm::log(total);
    for w in ws.weights.iter_mut() {
        *w /= total;
    }

    // ∂|S(ν)|²/∂θ_k = 2 Re(conj(S(ν)) · 2πiν e(θ_k ν)) = 4πν Im(S(ν) conj(e(θ_k ν)))
    let mut gradient = alloc::vec![0.0; angles.len()];
    ws.steps.clear();
    ws.steps.extend(angles.iter().map(|&a| turns::unit(a)));
    ws.powers.clear();
    ws.powers.extend(ws.steps.iter().copied());
    for nu in 1..=m {
        let idx = (nu - 1) as usize;
        let weight = ws.weights[idx];
        if weight > 1e-17 {
            let s = ws.sums[idx];
            let scale = 2.0 * TAU * nu as f64 * weight;
            for (g, p) in gradient.iter_mut().zip(&ws.powers) {
                *g += scale * (s.im * p.re - s.re * p.im);
            }
        }
        if nu % crate::system::RESYNC_INTERVAL as u64 == 0 {
            for (p, &a) in ws.powers.iter_mut().zip(angles) {
                *p = unit_power(a, nu as i64 + 1);
            }
        } else {
            for (p, st) in ws.powers.iter_mut().zip(&ws.steps) {
                *p *= st;
            }
        }
    }

    ObjectiveValue {
        smoothed,
        gradient,
        hard_max_sq,
    }
}

/// `τ·log Σ_{ν=1..m} exp(|S(ν)|²/τ)` and its gradient with respect to the
/// angles (in turns).
pub fn objective(system: &UnimodularSystem, m: u64, tau: f64) -> (f64, Vec<f64>) {
    let v = objective_full(system.angles(), m, tau);
    (v.smoothed, v.gradient)
}

pub fn objective_full(angles: &[f64], m: u64, tau: f64) -> ObjectiveValue {
    evaluate(angles, m, tau, &mut Workspace::default())
}

/// Smoothed objective evaluated term by term, without the sweep.
pub fn smoothed_value_direct(angles: &[f64], m: u64, tau: f64) -> f64 {
    let values: Vec<f64> = (1..=m as i64)
        .map(|nu| {
            angles
                .iter()
                .map(|&a| unit_power(a, nu))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect();
    let top = values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    top + tau
        * libm::log(
            values
                .iter()
                .map(|v| libm::exp((v - top) / tau))
                .sum::<f64>(),
        )
}

/// Central differences of [`smoothed_value_direct`].
pub fn finite_difference_gradient(angles: &[f64], m: u64, tau: f64, step: f64) -> Vec<f64> {
    let mut probe = angles.to_vec();
    (0..angles.len())
        .map(|k| {
            probe[k] = angles[k] + step;
            let up = smoothed_value_direct(&probe, m, tau);
            probe[k] = angles[k] - step;
            let down = smoothed_value_direct(&probe, m, tau);
            probe[k] = angles[k];
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// `max_k |a_k − f_k| / max(|a_k|, |f_k|, 1)`.
pub fn gradient_relative_error(analytic: &[f64], reference: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(reference)
        .map(|(a, f)| (a - f).abs() / a.abs().max(f.abs()).max(1.0))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitKind {
    Random,
    RootsOfUnity,
    Montgomery,
}

/// Named starting systems.
pub fn seeded_system(kind: InitKind, n: u64, seed: u64) -> Result<UnimodularSystem> {
    if n == 0 {
        return Err(Error::EmptySystem);
    }
    match kind {
        InitKind::Random => {
            let mut r = rng::stream(seed, 0);
            UnimodularSystem::new((0..n).map(|_| unit_interval(&mut r)).collect())
        }
        InitKind::RootsOfUnity => {
            UnimodularSystem::new((1..=n).map(|k| k as f64 / n as f64).collect())
        }
        InitKind::Montgomery => {
            if !is_prime(n + 1) {
                return Err(Error::NotPrime(n + 1));
            }
            montgomery_system(n + 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct RestartOutcome {
    pub restart: u64,
    /// Exact `max_{ν=1..m} |S(ν)|` at `angles`.
    pub value: f64,
    pub angles: Vec<f64>,
    pub iterations: u64,
    pub best_iteration: u64,
    pub gradient_check: Option<f64>,
}

/// One descent run from the stream `(seed, restart)`, or from the warm start
/// for restart 0.
pub fn run_restart(config: &OptimizerConfig, restart: u64) -> RestartOutcome {
    let m = config.m;
    let mut r = rng::stream(config.seed, restart);
    let mut angles: Vec<f64> = match config.warm_start {
        Some(kind) if restart == 0 => seeded_system(kind, config.n, config.seed)
            .expect("validated warm start")
            .angles()
            .to_vec(),
        _ => (0..config.n).map(|_| unit_interval(&mut r)).collect(),
    };
    let mut ws = Workspace::default();

    let gradient_check = config.check_gradient.then(|| {
        let tau = config.temperature.initial;
        let analytic = evaluate(&angles, m, tau, &mut ws).gradient;
        let reference = finite_difference_gradient(&angles, m, tau, FD_STEP);
        gradient_relative_error(&analytic, &reference)
    });

    let mut step = config.step;
    let mut tau = config.temperature.initial;
    let mut best = (f64::INFINITY, angles.clone(), 0u64);
    let mut done = 0;
    for it in 0..config.iterations {
        let v = evaluate(&angles, m, tau, &mut ws);
        if v.hard_max_sq < best.0 {
            best = (v.hard_max_sq, angles.clone(), it);
        }
        let gmax = v.gradient.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        done = it + 1;
        if gmax == 0.0 {
            break;
        }
        for (a, g) in angles.iter_mut().zip(&v.gradient) {
            *a = turns::reduce(*a - step * g / gmax);
        }
        step *= config.step_decay;
        if done % config.temperature.interval == 0 {
            tau = (tau * config.temperature.decay).max(config.temperature.floor);
        }
    }
    fill_sums(&angles, m, &mut ws);
    let last = ws.sums.iter().fold(0.0f64, |acc, s| acc.max(s.norm_sqr()));
    if last < best.0 {
        best = (last, angles, done);
    }

    RestartOutcome {
        restart,
        value: libm::sqrt(best.0),
        angles: best.1,
        iterations: done,
        best_iteration: best.2,
        gradient_check,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct OptimizerReport {
    pub config: OptimizerConfig,
    pub best_angles: UnimodularSystem,
    pub best_value: f64,
    pub best_restart: u64,
    pub per_restart_values: Vec<f64>,
    pub lower_bound_used: BoundResult,
    /// `best_value ≥ lower bound − 1e-9`; false falsifies code or bound.
    pub sandwich_ok: bool,
    pub total_iterations: u64,
    pub gradient_check_max_error: Option<f64>,
    pub disclaimer: alloc::string::String,
}

/// Reduces restart outcomes, in any order, to a report. The best restart is
/// the one with the smallest value, ties going to the lower restart index.
pub fn assemble_report(
    config: &OptimizerConfig,
    mut outcomes: Vec<RestartOutcome>,
) -> OptimizerReport {
    outcomes.sort_by_key(|o| o.restart);
    let best = outcomes
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart");
    let lower = best_lower_bound(config.n, config.m);
    let sandwich_ok = best.value >= lower.value - 1e-9;
    let gradient_check_max_error = outcomes
        .iter()
        .filter_map(|o| o.gradient_check)
        .reduce(f64::max);
    OptimizerReport {
        config: config.clone(),
        best_angles: UnimodularSystem::new(best.angles.clone())
            .expect("angles from a valid system"),
        best_value: best.value,
        best_restart: best.restart,
        per_restart_values: outcomes.iter().map(|o| o.value).collect(),
        lower_bound_used: lower,
        sandwich_ok,
        total_iterations: outcomes.iter().map(|o| o.iterations).sum(),
        gradient_check_max_error,
        disclaimer: DISCLAIMER.into(),
    }
}

/// Runs every restart in sequence. Parallel drivers must produce the same
/// report by calling [`run_restart`] and [`assemble_report`].
pub fn minimize(config: &OptimizerConfig) -> Result<OptimizerReport> {
    config.validate()?;
    let outcomes = (0..config.restarts)
        .map(|r| run_restart(config, r))
        .collect();
    Ok(assemble_report(config, outcomes))
}
