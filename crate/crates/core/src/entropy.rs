//! Von Neumann entropies of Gaussian states (in nats) and the two illumination
//! exponents.

use serde::Serialize;

use crate::channel::GaussianChannel;
use crate::error::{Error, Result};
use crate::gaussian::{check_mode_set, complement, GaussianState};

/// Symplectic eigenvalues this close to 1 count as pure modes.
pub const PURE_MODE_TOL: f64 = 1e-10;
/// Signal energy below which a probe is treated as the vacuum.
const VACUUM_SIGNAL_PHOTONS: f64 = 1e-14;

/// Entropy of a one-mode thermal state with `n` photons.
pub fn g(n: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(Error::invalid(format!("g(N) needs N >= 0, got {n}")));
    }
    Ok(g_unchecked(n))
}

// (N+1)ln(N+1) − N ln N rearranged to avoid cancellation at large N
fn g_unchecked(n: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else {
        n.ln_1p() + n * n.recip().ln_1p()
    }
}

pub fn entropy(state: &GaussianState) -> Result<f64> {
    let spectrum = state.symplectic_eigenvalues()?;
    Ok(spectrum
        .values()
        .iter()
        .filter(|&&nu| nu > 1.0 + PURE_MODE_TOL)
        .map(|&nu| g_unchecked((nu - 1.0) / 2.0))
        .sum())
}

/// `S(B|rest) = S(all) − S(rest)` where `B` is `subsystem_b`.
pub fn conditional_entropy(state: &GaussianState, subsystem_b: &[usize]) -> Result<f64> {
    let n = state.n_modes();
    check_mode_set(subsystem_b, n)?;
    if subsystem_b.len() == n {
        return Err(Error::invalid("conditioning system is empty; B must be a proper subset"));
    }
    let rest = complement(subsystem_b, n);
    Ok(entropy(state)? - entropy(&state.partial_trace(&rest)?)?)
}

/// Thermal state `ω` with `mean_photons` per mode; `−ln ω = a·H + b·𝟙` per mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalReference {
    pub n_modes: usize,
    pub mean_photons: f64,
}

impl ThermalReference {
    pub fn new(n_modes: usize, mean_photons: f64) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("reference needs at least one mode"));
        }
        if !(mean_photons >= 0.0) || !mean_photons.is_finite() {
            return Err(Error::invalid(format!("reference photons must be >= 0, got {mean_photons}")));
        }
        Ok(Self { n_modes, mean_photons })
    }

    /// `ln(1 + 1/N)`.
    pub fn a(&self) -> f64 {
        (1.0 / self.mean_photons).ln_1p()
    }

    /// `ln(1 + N)`.
    pub fn b(&self) -> f64 {
        self.mean_photons.ln_1p()
    }
}

/// `S(state ‖ ω)`. Returns `+∞` against the vacuum unless `state` is the vacuum.
pub fn relative_entropy_vs_thermal(state: &GaussianState, reference: &ThermalReference) -> Result<f64> {
    if state.n_modes() != reference.n_modes {
        return Err(Error::DimensionMismatch {
            expected: reference.n_modes,
            got: state.n_modes(),
        });
    }
    if reference.mean_photons == 0.0 {
        return Ok(if state.mean_photons() <= VACUUM_SIGNAL_PHOTONS {
            0.0
        } else {
            f64::INFINITY
        });
    }
    let n = reference.n_modes as f64;
    // g(N) = a·N + b, so this equals −S + a·⟨H⟩ + n·b with the large terms cancelled.
    let excess = state.mean_photons() - n * reference.mean_photons;
    let value = reference.a() * excess + (n * g_unchecked(reference.mean_photons) - entropy(state)?);
    Ok(value.max(0.0))
}

/// An exponent in nats, as a total and per signal mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponent {
    pub total: f64,
    pub per_mode: f64,
}

impl Exponent {
    pub fn new(total: f64, n_signal: usize) -> Self {
        Self {
            total,
            per_mode: total / n_signal as f64,
        }
    }

    pub const fn zero() -> Self {
        Self {
            total: 0.0,
            per_mode: 0.0,
        }
    }
}

pub(crate) fn check_channel_params(eta: f64, n_b: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid(format!("reflectivity must lie in (0, 1), got {eta}")));
    }
    if !(n_b > 0.0) || !n_b.is_finite() {
        return Err(Error::invalid(format!("background photons must be > 0, got {n_b}")));
    }
    Ok(())
}

/// Reference state `ω_B = Φ(|0⟩⟨0|)` for `n` signal modes.
pub fn background_reference(n_signal: usize, eta: f64, n_b: f64) -> Result<ThermalReference> {
    ThermalReference::new(n_signal, (1.0 - eta) * n_b)
}

/// `S(ρ_BM ‖ ω_B ⊗ ρ_M)` with `ρ_BM = (Φ ⊗ id)(probe)`, where `Φ` is the thermal
/// attenuator on `signal_modes` and every other mode is memory.
pub fn exponent_with_memory(probe: &GaussianState, signal_modes: &[usize], eta: f64, n_b: f64) -> Result<Exponent> {
    check_channel_params(eta, n_b)?;
    let n = probe.n_modes();
    check_mode_set(signal_modes, n)?;
    let n_signal = signal_modes.len();
    if probe.mean_photons_of(signal_modes) <= VACUUM_SIGNAL_PHOTONS {
        return Ok(Exponent::zero());
    }
    let channel = GaussianChannel::attenuator(n_signal, eta, n_b)?;
    let output = channel.apply_on_subsystem(probe, signal_modes)?;
    let memory = complement(signal_modes, n);
    let s_bm = entropy(&output)?;
    let s_m = if memory.is_empty() {
        0.0
    } else {
        entropy(&probe.partial_trace(&memory)?)?
    };
    let received = output.partial_trace(signal_modes)?;
    let reference = background_reference(n_signal, eta, n_b)?;
    let excess = received.mean_photons() - n_signal as f64 * reference.mean_photons;
    let total = reference.a() * excess + (n_signal as f64 * g_unchecked(reference.mean_photons) - (s_bm - s_m));
    Ok(Exponent::new(total.max(0.0), n_signal))
}

/// `S(Φ(probe) ‖ ω_B)`: every mode of `probe` is sent, nothing is kept.
pub fn exponent_no_memory(probe: &GaussianState, eta: f64, n_b: f64) -> Result<Exponent> {
    check_channel_params(eta, n_b)?;
    let n = probe.n_modes();
    if probe.mean_photons() <= VACUUM_SIGNAL_PHOTONS {
        return Ok(Exponent::zero());
    }
    let received = GaussianChannel::attenuator(n, eta, n_b)?.apply(probe)?;
    let total = relative_entropy_vs_thermal(&received, &background_reference(n, eta, n_b)?)?;
    Ok(Exponent::new(total, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_coherent, make_thermal, make_tmsv, random_pure_probe};
    use crate::linalg::C64;
    use std::f64::consts::LN_2;

    #[test]
    fn g_examples() {
        assert_eq!(g(0.0).unwrap(), 0.0);
        assert!((g(1.0).unwrap() - 2.0 * LN_2).abs() < 1e-15);
        assert!((g(1.0).unwrap() - 1.386294).abs() < 1e-6);
        assert!(g(-0.5).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!(entropy(&make_tmsv(0.8).unwrap()).unwrap().abs() < 1e-8);
        assert!(entropy(&make_coherent(&[C64::new(1.0, 2.0)]).unwrap()).unwrap().abs() < 1e-8);
        assert!((entropy(&make_thermal(1, 1.0).unwrap()).unwrap() - 2.0 * LN_2).abs() < 1e-12);
        let a = make_thermal(1, 0.3).unwrap();
        let b = make_thermal(2, 1.2).unwrap();
        let sum = entropy(&a).unwrap() + entropy(&b).unwrap();
        assert!((entropy(&a.tensor(&b)).unwrap() - sum).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let a = make_thermal(1, 0.3).unwrap();
        let b = make_thermal(1, 1.1).unwrap();
        let prod = a.tensor(&b);
        assert!((conditional_entropy(&prod, &[1]).unwrap() - entropy(&b).unwrap()).abs() < 1e-12);

        let e = 0.6;
        let s = make_tmsv(e).unwrap();
        assert!((conditional_entropy(&s, &[0]).unwrap() + g(e).unwrap()).abs() < 1e-10);

        assert!(conditional_entropy(&s, &[0, 1]).is_err());
        assert!(conditional_entropy(&s, &[]).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let r1 = ThermalReference::new(1, 1.0).unwrap();
        assert!(relative_entropy_vs_thermal(&make_thermal(1, 1.0).unwrap(), &r1).unwrap().abs() < 1e-14);
        let v = relative_entropy_vs_thermal(&GaussianState::vacuum(1), &r1).unwrap();
        assert!((v - LN_2).abs() < 1e-14);
        assert!((v - 0.693147).abs() < 1e-6);
        let t = relative_entropy_vs_thermal(&make_thermal(1, 2.0).unwrap(), &r1).unwrap();
        assert!((t - (5.0 * LN_2 - 3.0 * 3f64.ln())).abs() < 1e-14);
        assert!((t - 0.169899).abs() < 1e-6);

        let r0 = ThermalReference::new(1, 0.0).unwrap();
        assert_eq!(relative_entropy_vs_thermal(&GaussianState::vacuum(1), &r0).unwrap(), 0.0);
        assert_eq!(relative_entropy_vs_thermal(&make_thermal(1, 0.1).unwrap(), &r0).unwrap(), f64::INFINITY);
        assert!(relative_entropy_vs_thermal(&GaussianState::vacuum(2), &r1).is_err());
    }

    #[test]
    fn vacuum_signal_gives_zero_exponent() {
        let probe = GaussianState::vacuum(1).tensor(&make_thermal(1, 2.0).unwrap());
        assert_eq!(exponent_with_memory(&probe, &[0], 0.1, 1.0).unwrap(), Exponent::zero());
        assert_eq!(exponent_no_memory(&GaussianState::vacuum(2), 0.1, 1.0).unwrap(), Exponent::zero());
        let p = random_pure_probe(1, 0.0, 4).unwrap();
        assert_eq!(exponent_with_memory(&p, &[0], 0.3, 0.5).unwrap().total, 0.0);
    }

    #[test]
    fn product_probe_memory_decouples() {
        let (eta, nb) = (0.25, 0.8);
        let coh = make_coherent(&[C64::new(0.4, -0.3)]).unwrap();
        let probe = coh.tensor(&make_tmsv(0.7).unwrap());
        let with = exponent_with_memory(&probe, &[0], eta, nb).unwrap().total;
        let without = exponent_no_memory(&coh, eta, nb).unwrap().total;
        assert!((with - without).abs() < 1e-10);
    }

    #[test]
    fn coherent_closed_form() {
        let (eta, e, nb, n) = (0.2, 0.35, 1.3, 2usize);
        let amp = (e * n as f64).sqrt();
        let probe = make_coherent(&[C64::new(amp * 0.6, 0.0), C64::new(0.0, amp * 0.8)]).unwrap();
        let got = exponent_no_memory(&probe, eta, nb).unwrap();
        let expected = n as f64 * eta * e * (1.0 / ((1.0 - eta) * nb)).ln_1p();
        assert!((got.total - expected).abs() < 1e-12);
        assert!((got.per_mode - expected / 2.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_probe_closed_form_is_below_coherent() {
        let (eta, e, nb) = (0.2, 0.35, 1.3);
        let nw = (1.0 - eta) * nb;
        let r = ThermalReference::new(1, nw).unwrap();
        let m = eta * e + nw;
        let expected = -g(m).unwrap() + r.a() * m + r.b();
        let got = exponent_no_memory(&make_thermal(1, e).unwrap(), eta, nb).unwrap().total;
        assert!((got - expected).abs() < 1e-12);
        assert!(got < eta * e * r.a());
    }

    #[test]
    fn exponent_parameter_validation() {
        let p = make_tmsv(0.2).unwrap();
        assert!(exponent_with_memory(&p, &[0], 0.0, 1.0).is_err());
        assert!(exponent_with_memory(&p, &[0], 1.0, 1.0).is_err());
        assert!(exponent_with_memory(&p, &[0], 0.5, 0.0).is_err());
        assert!(exponent_with_memory(&p, &[3], 0.5, 1.0).is_err());
    }
}
