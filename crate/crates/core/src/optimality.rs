//! Closed-form coherent and TMSV exponents, the dB comparison, the mode-count
//! estimate, and randomized checks of the optimality theorems.

use serde::{Deserialize, Serialize};

use crate::channel::GaussianChannel;
use crate::entropy::{self, check_channel_params, conditional_entropy, Exponent};
use crate::error::{Error, Result};
use crate::gaussian::{make_coherent, make_thermal, make_tmsv_power, random_pure_probe, GaussianState};
use crate::linalg::C64;
use crate::parallel::map_indexed;
use crate::sampling::{self, derive_seed, SampleRng};

/// Default tolerance (nats) on theorem inequalities.
pub const DEFAULT_SLACK: f64 = 1e-9;
/// Default safety factor turning `n ≫ N_B/(ηE)` into a number.
pub const DEFAULT_MODE_MARGIN: f64 = 100.0;
/// Above this many signal modes the TMSV exponent uses additivity instead of
/// building the full tensor power.
const TMSV_DIRECT_MODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IlluminationParams {
    pub eta: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "N_B")]
    pub n_b: f64,
    pub n_signal: usize,
}

/// Which textbook regime the parameters sit in. Informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeFlags {
    pub low_reflectivity: bool,
    pub bright_noise: bool,
    pub faint_probe: bool,
}

impl IlluminationParams {
    pub fn new(eta: f64, energy: f64, n_b: f64, n_signal: usize) -> Result<Self> {
        let p = Self {
            eta,
            energy,
            n_b,
            n_signal,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_channel_params(self.eta, self.n_b)?;
        if !(self.energy >= 0.0) || !self.energy.is_finite() {
            return Err(Error::invalid(format!("signal energy must be >= 0, got {}", self.energy)));
        }
        if self.n_signal == 0 {
            return Err(Error::invalid("need at least one signal mode"));
        }
        Ok(())
    }

    /// Mean photons per mode of the background reference `ω_B`.
    pub fn background_photons(&self) -> f64 {
        (1.0 - self.eta) * self.n_b
    }

    /// Thresholds: η < 0.1, N_B > 10, E < 0.1.
    pub fn regime(&self) -> RegimeFlags {
        RegimeFlags {
            low_reflectivity: self.eta < 0.1,
            bright_noise: self.n_b > 10.0,
            faint_probe: self.energy < 0.1,
        }
    }

    fn signal_modes(&self) -> Vec<usize> {
        (0..self.n_signal).collect()
    }
}

/// `n·η·E·ln(1 + 1/((1−η)N_B))`.
pub fn coherent_exponent(p: &IlluminationParams) -> Result<Exponent> {
    p.validate()?;
    let per_mode = p.eta * p.energy * (1.0 / p.background_photons()).ln_1p();
    Ok(Exponent::new(per_mode * p.n_signal as f64, p.n_signal))
}

/// Exponent of `tmsv(E)^{⊗n}` with the signal halves attenuated.
pub fn tmsv_exponent(p: &IlluminationParams) -> Result<Exponent> {
    p.validate()?;
    if p.n_signal > TMSV_DIRECT_MODES {
        let one = IlluminationParams { n_signal: 1, ..*p };
        let single = tmsv_exponent(&one)?;
        return Ok(Exponent::new(single.total * p.n_signal as f64, p.n_signal));
    }
    let probe = make_tmsv_power(p.n_signal, p.energy)?;
    entropy::exponent_with_memory(&probe, &p.signal_modes(), p.eta, p.n_b)
}

/// `10·log₁₀(tmsv / coherent)`; `None` when the coherent exponent vanishes.
pub fn advantage_db(p: &IlluminationParams) -> Result<Option<f64>> {
    let coherent = coherent_exponent(p)?.total;
    if !(coherent > 0.0) {
        return Ok(None);
    }
    let tmsv = tmsv_exponent(p)?.total;
    Ok(Some(10.0 * (tmsv / coherent).log10()))
}

/// `⌈margin·N_B/(ηE)⌉`; `None` when the bound is unbounded or overflows `u64`.
pub fn modes_required(p: &IlluminationParams, margin: f64) -> Result<Option<u64>> {
    if !(margin >= 1.0) || !margin.is_finite() {
        return Err(Error::invalid(format!("margin must be >= 1, got {margin}")));
    }
    if !(p.n_b >= 0.0) || !(p.eta >= 0.0) || !(p.energy >= 0.0) {
        return Err(Error::invalid("parameters must be non-negative"));
    }
    let ratio = margin * p.n_b / (p.eta * p.energy);
    if !ratio.is_finite() || ratio >= u64::MAX as f64 {
        return Ok(None);
    }
    // Values within rounding of an integer are not bumped to the next one.
    let nearest = ratio.round();
    let count = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    Ok(Some(count as u64))
}

/// Outcome of a randomized theorem or identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub samples: usize,
    pub max_violation: f64,
    pub worst_case_seed: u64,
    pub params: IlluminationParams,
    pub slack: f64,
    pub passed: bool,
    pub scope: String,
}

impl VerificationReport {
    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self.passed = self.max_violation <= slack;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Signed margin `lhs − rhs` of one sample, tagged with its seed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub margin: f64,
    pub seed: u64,
}

/// Folds per-sample margins into a report. Ties go to the lowest index.
pub(crate) fn summarize(
    theorem: &str,
    scope: &str,
    params: IlluminationParams,
    samples: usize,
    results: &[Sample],
    slack: f64,
) -> VerificationReport {
    let mut worst = results[0];
    for s in &results[1..] {
        if s.margin > worst.margin {
            worst = *s;
        }
    }
    let max_violation = worst.margin.max(0.0);
    VerificationReport {
        theorem: theorem.to_string(),
        samples,
        max_violation,
        worst_case_seed: worst.seed,
        params,
        slack,
        passed: max_violation <= slack,
        scope: scope.to_string(),
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::invalid("need at least one sample"));
    }
    Ok(())
}

/// Random state on `n_signal + n_memory` modes (signal first) with `target`
/// photons on the signal, pure unless `drop_last` traces out the last memory mode.
fn random_bipartite(
    n_signal: usize,
    n_memory: usize,
    target: f64,
    drop_last: bool,
    rng: &mut SampleRng,
) -> Result<GaussianState> {
    let n = n_signal + n_memory;
    let state = if target == 0.0 {
        GaussianState::vacuum(n_signal).tensor(&sampling::random_pure_state(n_memory, rng))
    } else {
        let signal: Vec<usize> = (0..n_signal).collect();
        sampling::random_pure_with_energy(n, &signal, target, rng)?
    };
    if drop_last && n_memory > 1 {
        let keep: Vec<usize> = (0..n - 1).collect();
        state.partial_trace(&keep)
    } else {
        Ok(state)
    }
}

fn collect(results: Vec<Result<Sample>>) -> Result<Vec<Sample>> {
    results.into_iter().collect()
}

/// Random probes with exactly `n·E` signal photons never beat `tmsv(E)^{⊗n}`.
///
/// Draws `samples` pure probes on `n` signal + `n` idler modes, then
/// `⌈samples/5⌉` probes on `n` signal + `3n` memory modes, half of them with one
/// memory mode discarded so that `ρ_AM` is mixed.
pub fn verify_theorem1(p: &IlluminationParams, samples: usize, seed: u64) -> Result<VerificationReport> {
    p.validate()?;
    check_samples(samples)?;
    let n = p.n_signal;
    let signal = p.signal_modes();
    let bound = tmsv_exponent(p)?.total;
    let target = p.energy * n as f64;
    let mixed = samples.div_ceil(5);

    let results = collect(map_indexed(samples + mixed, |i| {
        let s = derive_seed(seed, i as u64);
        let probe = if i < samples {
            random_pure_probe(n, p.energy, s)?
        } else {
            let j = i - samples;
            random_bipartite(n, 3 * n, target, j % 2 == 1, &mut sampling::rng(s))?
        };
        let value = entropy::exponent_with_memory(&probe, &signal, p.eta, p.n_b)?.total;
        Ok(Sample {
            margin: value - bound,
            seed: s,
        })
    }))?;
    Ok(summarize(
        "theorem1",
        "Gaussian probes only (pure signal+idler, and pure/mixed signal+3n memory); non-Gaussian memories are spot-checked by the Fock oracle",
        *p,
        samples + mixed,
        &results,
        DEFAULT_SLACK,
    ))
}

/// Memoryless Gaussian probes with exactly `n·E` photons never beat a coherent
/// state. The coherent and thermal probes are always included.
pub fn verify_theorem2(p: &IlluminationParams, samples: usize, seed: u64) -> Result<VerificationReport> {
    p.validate()?;
    check_samples(samples)?;
    let n = p.n_signal;
    let bound = coherent_exponent(p)?.total;
    let target = p.energy * n as f64;

    let mut results = collect(map_indexed(samples, |i| {
        let s = derive_seed(seed, i as u64);
        let probe = sampling::random_mixed_with_energy(n, target, &mut sampling::rng(s))?;
        let value = entropy::exponent_no_memory(&probe, p.eta, p.n_b)?.total;
        Ok(Sample {
            margin: value - bound,
            seed: s,
        })
    }))?;
    for (probe, tag) in [(coherent_probe(n, p.energy)?, u64::MAX), (make_thermal(n, p.energy)?, u64::MAX - 1)] {
        let value = entropy::exponent_no_memory(&probe, p.eta, p.n_b)?.total;
        results.push(Sample {
            margin: value - bound,
            seed: tag,
        });
    }
    Ok(summarize(
        "theorem2",
        "random squeezed displaced thermal states plus the coherent and thermal probes; worst_case_seed u64::MAX / u64::MAX-1 denote those two",
        *p,
        samples,
        &results,
        DEFAULT_SLACK,
    ))
}

/// `|√E, …, √E⟩`.
pub fn coherent_probe(n: usize, energy: f64) -> Result<GaussianState> {
    make_coherent(&vec![C64::new(energy.sqrt(), 0.0); n])
}

/// `S(B|A′)` of `tmsv(E)^{⊗n}` after the attenuator.
pub fn tmsv_conditional_entropy(p: &IlluminationParams) -> Result<f64> {
    p.validate()?;
    let probe = make_tmsv_power(p.n_signal, p.energy)?;
    received_conditional_entropy(&probe, p)
}

fn received_conditional_entropy(probe: &GaussianState, p: &IlluminationParams) -> Result<f64> {
    let signal = p.signal_modes();
    let channel = GaussianChannel::attenuator(p.n_signal, p.eta, p.n_b)?;
    let output = channel.apply_on_subsystem(probe, &signal)?;
    conditional_entropy(&output, &signal)
}

/// `S(B|M)` of any probe with at most `n·E` signal photons is at least that of
/// `tmsv(E)^{⊗n}`. Half the samples sit at the energy cap, half below it.
pub fn verify_theorem3(p: &IlluminationParams, samples: usize, seed: u64) -> Result<VerificationReport> {
    p.validate()?;
    check_samples(samples)?;
    let n = p.n_signal;
    let bound = tmsv_conditional_entropy(p)?;
    let cap = p.energy * n as f64;

    let results = collect(map_indexed(samples, |i| {
        let s = derive_seed(seed, i as u64);
        let mut rng = sampling::rng(s);
        let target = if i % 2 == 0 {
            cap
        } else {
            use rand::Rng;
            cap * (1.0 - rng.random::<f64>())
        };
        let n_memory = if (i / 2) % 2 == 0 { n } else { 3 * n };
        let drop_last = n_memory > n && (i / 4) % 2 == 1;
        let probe = random_bipartite(n, n_memory, target, drop_last, &mut rng)?;
        let value = received_conditional_entropy(&probe, p)?;
        Ok(Sample {
            margin: bound - value,
            seed: s,
        })
    }))?;
    Ok(summarize(
        "theorem3",
        "Gaussian bipartite probes with signal energy at or below the cap; memories have finite entropy by construction",
        *p,
        samples,
        &results,
        DEFAULT_SLACK,
    ))
}
