//! Exponents and randomized identity checks computed entirely in Fock space.

use rand::Rng;
use serde::Serialize;

use super::{
    apply_attenuator_fock, apply_complementary_fock, entropy_fock, random_fock_state, relative_entropy_fock,
    thermal_cutoff, truncated_thermal, FockOperator, OracleConfig,
};
use crate::entropy::check_channel_params;
use crate::error::{Error, Result};
use crate::optimality::{summarize, tmsv_exponent, IlluminationParams, Sample, VerificationReport};
use crate::parallel::map_indexed;
use crate::sampling::{derive_seed, rng};

/// An oracle value together with the truncation it was computed at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockExponent {
    pub value: f64,
    /// `1 − tr` of the received state.
    pub trace_deficit: f64,
    /// Per-mode cutoffs of the received state.
    pub cutoffs: Vec<usize>,
}

/// `tr ρ ln ω^{⊗k}` over `modes`, with `ω` the untruncated thermal state whose
/// logarithm `ln(1−q) + n·ln q` is diagonal and known exactly.
fn thermal_log_expectation(rho: &FockOperator, modes: &[usize], n: f64) -> f64 {
    let q = n / (n + 1.0);
    let trace = rho.trace();
    modes
        .iter()
        .map(|&m| trace * (-q).ln_1p() + rho.mean_photons_of(&[m]) * q.ln())
        .sum()
}

/// `S(ρ_BM ‖ ω_B ⊗ ρ_M)` where `ρ_BM` is `rho` with mode `signal` attenuated.
///
/// Evaluated as `S(M) − S(BM) − tr ρ_B ln ω_B`, which equals the relative
/// entropy exactly because the reference is a product with `ρ_M` as one factor.
/// Diagonalizing `ω_B ⊗ ρ_M` directly would lose its eigenvalues below the
/// solver's absolute accuracy, and those carry real weight when `N_ω` is small.
pub fn exponent_with_memory_fock(
    rho: &FockOperator,
    signal: usize,
    eta: f64,
    n_b: f64,
    config: &OracleConfig,
) -> Result<FockExponent> {
    check_channel_params(eta, n_b)?;
    let n_modes = rho.mode_dims().len();
    if signal >= n_modes {
        return Err(Error::invalid(format!("signal mode {signal} out of range")));
    }
    let d_env = thermal_cutoff(n_b, config.deficit_tol);
    let d_out = rho.mode_dims()[signal] + d_env - 1;
    config.check_dim(rho.dim() / rho.mode_dims()[signal] * d_out)?;

    let out = apply_attenuator_fock(rho, signal, eta, n_b, d_env)?;
    let memory: Vec<usize> = (0..n_modes).filter(|&m| m != signal).collect();
    let s_m = if memory.is_empty() {
        0.0
    } else {
        entropy_fock(&out.partial_trace(&memory)?)
    };
    let value = s_m - entropy_fock(&out) - thermal_log_expectation(&out, &[signal], (1.0 - eta) * n_b);
    Ok(FockExponent {
        value: value.max(0.0),
        trace_deficit: out.trace_deficit(),
        cutoffs: out.mode_dims().to_vec(),
    })
}

/// `S(Φ^{⊗k}(ρ) ‖ ω_B^{⊗k})` with every mode of `rho` sent through the channel,
/// evaluated as `−S(Φ^{⊗k}(ρ)) − tr Φ^{⊗k}(ρ) ln ω_B^{⊗k}`.
pub fn exponent_no_memory_fock(rho: &FockOperator, eta: f64, n_b: f64, config: &OracleConfig) -> Result<FockExponent> {
    check_channel_params(eta, n_b)?;
    let d_env = thermal_cutoff(n_b, config.deficit_tol);
    config.check_dim(rho.mode_dims().iter().map(|d| d + d_env - 1).product())?;
    let mut out = rho.clone();
    for mode in 0..rho.mode_dims().len() {
        out = apply_attenuator_fock(&out, mode, eta, n_b, d_env)?;
    }
    let modes: Vec<usize> = (0..out.mode_dims().len()).collect();
    let value = -entropy_fock(&out) - thermal_log_expectation(&out, &modes, (1.0 - eta) * n_b);
    Ok(FockExponent {
        value: value.max(0.0),
        trace_deficit: out.trace_deficit(),
        cutoffs: out.mode_dims().to_vec(),
    })
}

/// Parameters of the randomized check of the complementary-channel identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Config {
    pub eta: f64,
    pub n_b: f64,
    /// Cutoff of the random input states.
    pub cutoff: usize,
    pub samples: usize,
    /// Random inputs carry between 0.05 and this many photons.
    pub max_energy: f64,
    pub max_rank: usize,
    pub tolerance: f64,
}

impl Default for Lemma1Config {
    fn default() -> Self {
        Self {
            eta: 0.6,
            n_b: 0.3,
            cutoff: 12,
            samples: 50,
            max_energy: 0.5,
            max_rank: 3,
            tolerance: 1e-5,
        }
    }
}

/// Deviation `|S(Φ̃(ρ)‖Φ̃(σ)) − [S(Φ̃(σ)) − S(Φ̃(ρ))]|` for `σ` thermal with
/// the photon number of `rho`. Both states are padded to a common cutoff large
/// enough for `σ`.
pub fn lemma1_deviation(rho: &FockOperator, eta: f64, n_b: f64, config: &OracleConfig) -> Result<f64> {
    if rho.mode_dims().len() != 1 {
        return Err(Error::invalid("identity check takes a single-mode state"));
    }
    let photons = rho.mean_photons_of(&[0]);
    let d = rho.dim().max(thermal_cutoff(photons, config.deficit_tol));
    let d_env = thermal_cutoff(n_b, config.deficit_tol);
    config.check_dim((d + d_env - 1) * d_env)?;
    let rho = rho.embed(0, d)?;
    let sigma = truncated_thermal(photons, d);
    let out_rho = apply_complementary_fock(&rho, eta, n_b, d_env)?;
    let out_sigma = apply_complementary_fock(&sigma, eta, n_b, d_env)?;
    let lhs = relative_entropy_fock(&out_rho, &out_sigma)?;
    let rhs = entropy_fock(&out_sigma) - entropy_fock(&out_rho);
    Ok((lhs - rhs).abs())
}

/// Draws random single-mode states and reports the largest identity deviation.
pub fn verify_lemma1(lemma: &Lemma1Config, seed: u64, config: &OracleConfig) -> Result<VerificationReport> {
    check_channel_params(lemma.eta, lemma.n_b)?;
    if lemma.samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if lemma.cutoff < 2 || !(lemma.max_energy > 0.05) {
        return Err(Error::invalid("need cutoff >= 2 and max_energy > 0.05"));
    }
    let results: Result<Vec<Sample>> = map_indexed(lemma.samples, |i| {
        let s = derive_seed(seed, i as u64);
        let mut r = rng(s);
        let target = r.random_range(0.05..lemma.max_energy);
        let rho = random_fock_state(&[lemma.cutoff], &[0], lemma.max_rank, target, &mut r)?;
        Ok(Sample {
            margin: lemma1_deviation(&rho, lemma.eta, lemma.n_b, config)?,
            seed: s,
        })
    })
    .into_iter()
    .collect();
    let params = IlluminationParams::new(lemma.eta, lemma.max_energy, lemma.n_b, 1)?;
    Ok(summarize(
        "lemma1",
        "random single-mode states of rank <= 3 on a truncated Fock space; energy of params is the upper end of the drawn range",
        params,
        lemma.samples,
        &results?,
        lemma.tolerance,
    ))
}

/// Parameters of the non-Gaussian spot check of TMSV optimality with memory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonGaussianConfig {
    pub eta: f64,
    pub energy: f64,
    pub n_b: f64,
    pub signal_cutoff: usize,
    pub memory_cutoff: usize,
    pub samples: usize,
    pub max_rank: usize,
    pub slack: f64,
}

impl Default for NonGaussianConfig {
    fn default() -> Self {
        Self {
            eta: 0.2,
            energy: 0.3,
            n_b: 0.4,
            signal_cutoff: 4,
            memory_cutoff: 4,
            samples: 100,
            max_rank: 3,
            slack: 1e-6,
        }
    }
}

/// Random non-Gaussian signal-memory states with `E` signal photons never beat
/// the TMSV exponent.
pub fn verify_theorem1_fock(check: &NonGaussianConfig, seed: u64, config: &OracleConfig) -> Result<VerificationReport> {
    let params = IlluminationParams::new(check.eta, check.energy, check.n_b, 1)?;
    if check.samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    if check.signal_cutoff < 2 || check.memory_cutoff < 1 {
        return Err(Error::invalid("need signal cutoff >= 2 and memory cutoff >= 1"));
    }
    let bound = tmsv_exponent(&params)?.total;
    let dims = [check.signal_cutoff, check.memory_cutoff];
    let results: Result<Vec<Sample>> = map_indexed(check.samples, |i| {
        let s = derive_seed(seed, i as u64);
        let rho = random_fock_state(&dims, &[0], check.max_rank, check.energy, &mut rng(s))?;
        let value = exponent_with_memory_fock(&rho, 0, check.eta, check.n_b, config)?.value;
        Ok(Sample {
            margin: value - bound,
            seed: s,
        })
    })
    .into_iter()
    .collect();
    Ok(summarize(
        "theorem1_fock",
        "non-Gaussian mixtures of rank <= 3 on a truncated signal and memory mode",
        params,
        check.samples,
        &results?,
        check.slack,
    ))
}
