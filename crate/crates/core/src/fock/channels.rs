//! Thermal attenuator and its complement, realized by their Stinespring
//! dilation: a beam splitter between the signal and one half `E` of a TMSV
//! environment pair `(E, E′)` whose marginal is thermal at `N_B`.

use nalgebra::DMatrix;

use super::beam_splitter::BeamSplitter;
use super::states::tmsv_amplitudes;
use super::{FockOperator, DEFAULT_DEFICIT_TOL};
use crate::error::{Error, Result};
use crate::linalg::C64;

fn check_params(eta: f64, n_b: f64, d_env: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid(format!("transmissivity must lie in [0, 1], got {eta}")));
    }
    if !(n_b >= 0.0) || !n_b.is_finite() {
        return Err(Error::invalid(format!("environment photons must be >= 0, got {n_b}")));
    }
    if d_env < 1 {
        return Err(Error::invalid("environment cutoff must be positive"));
    }
    let deficit = (n_b / (n_b + 1.0)).powi(d_env as i32);
    if deficit > DEFAULT_DEFICIT_TOL {
        return Err(Error::Cutoff {
            cutoff: d_env,
            deficit,
            suggested: super::thermal_cutoff(n_b, DEFAULT_DEFICIT_TOL),
        });
    }
    Ok(())
}

/// Applies the attenuator to mode `signal` of `rho`. `E′` only purifies `E`,
/// so tracing it first leaves `E` thermal; the output signal mode grows to
/// `d_s + d_env − 1` levels so that no photon is lost to truncation.
pub fn apply_attenuator_fock(rho: &FockOperator, signal: usize, eta: f64, n_b: f64, d_env: usize) -> Result<FockOperator> {
    check_params(eta, n_b, d_env)?;
    let n_modes = rho.mode_dims().len();
    if signal >= n_modes {
        return Err(Error::invalid(format!("signal mode {signal} out of range")));
    }
    let order: Vec<usize> = std::iter::once(signal).chain((0..n_modes).filter(|&m| m != signal)).collect();
    let front = rho.permute(&order)?;
    let d_s = front.mode_dims()[0];
    let rest = front.dim() / d_s;
    let d_out = d_s + d_env - 1;
    let bs = BeamSplitter::new(eta, d_out - 1)?;
    let env = super::truncated_thermal(n_b, d_env);

    let src = front.data();
    let mut out = DMatrix::<C64>::zeros(d_out * rest, d_out * rest);
    let mut terms: Vec<(usize, usize, f64)> = Vec::with_capacity(d_s);
    for k in 0..d_env {
        let p_k = env.data()[(k, k)].re;
        for m in 0..d_s + k {
            terms.clear();
            terms.extend((0..d_s).filter(|&a| a + k >= m).map(|a| {
                let b = a + k - m;
                (a, b, bs.amplitude(a + k, b, a))
            }));
            for &(a, b, ca) in &terms {
                for &(a2, b2, ca2) in &terms {
                    let w = p_k * ca * ca2;
                    if w == 0.0 {
                        continue;
                    }
                    for r2 in 0..rest {
                        let (col_in, col_out) = (a2 * rest + r2, b2 * rest + r2);
                        for r in 0..rest {
                            out[(b * rest + r, col_out)] += src[(a * rest + r, col_in)] * w;
                        }
                    }
                }
            }
        }
    }
    let mut dims = front.mode_dims().to_vec();
    dims[0] = d_out;
    let mut inverse = vec![0; n_modes];
    for (i, &m) in order.iter().enumerate() {
        inverse[m] = i;
    }
    FockOperator::state(dims, out).permute(&inverse)
}

/// Complementary channel of the one-mode attenuator: keeps `(E, E′)` and traces
/// out the transmitted signal. Output dims are `(d_s + d_env − 1, d_env)`.
pub fn apply_complementary_fock(rho: &FockOperator, eta: f64, n_b: f64, d_env: usize) -> Result<FockOperator> {
    check_params(eta, n_b, d_env)?;
    if rho.mode_dims().len() != 1 {
        return Err(Error::invalid("complementary channel takes a single-mode input"));
    }
    let d_s = rho.dim();
    let d_out = d_s + d_env - 1;
    let bs = BeamSplitter::new(eta, d_out - 1)?;
    let c = tmsv_amplitudes(n_b, d_env);
    let src = rho.data();

    let mut out = DMatrix::<C64>::zeros(d_out * d_env, d_out * d_env);
    let mut terms: Vec<(usize, usize, f64)> = Vec::with_capacity(d_s * d_env);
    for b in 0..d_out {
        terms.clear();
        for a in 0..d_s {
            for (k, ck) in c.iter().enumerate() {
                if a + k >= b {
                    let e = a + k - b;
                    terms.push((a, e * d_env + k, ck * bs.amplitude(a + k, b, a)));
                }
            }
        }
        for &(a, i, ci) in &terms {
            for &(a2, j, cj) in &terms {
                let w = ci * cj;
                if w != 0.0 {
                    out[(i, j)] += src[(a, a2)] * w;
                }
            }
        }
    }
    Ok(FockOperator::state(vec![d_out, d_env], out))
}
