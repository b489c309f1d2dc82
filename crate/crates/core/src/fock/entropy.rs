//! Spectral von Neumann and relative entropies of truncated density matrices.

use super::FockOperator;
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh};

/// Eigenvalues below this are treated as zero.
pub const SPECTRAL_FLOOR: f64 = 1e-14;

/// Weight of `ρ` on the numerical null space of `σ` above which `S(ρ‖σ)` is
/// reported infinite. Smaller weights are truncation tails of states whose
/// untruncated support is full; dropping them costs at most `tol·|ln floor|`.
const SUPPORT_TOL: f64 = 1e-7;

fn xlogx(x: f64) -> f64 {
    if x <= SPECTRAL_FLOOR {
        0.0
    } else {
        x * x.ln()
    }
}

/// `−tr ρ ln ρ` in nats.
pub fn entropy_fock(rho: &FockOperator) -> f64 {
    -eigvalsh(rho.data()).into_iter().map(xlogx).sum::<f64>()
}

/// `tr ρ (ln ρ − ln σ)` in nats, `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy_fock(rho: &FockOperator, sigma: &FockOperator) -> Result<f64> {
    if rho.mode_dims() != sigma.mode_dims() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            got: rho.dim(),
        });
    }
    let (vals, vecs) = eigh(sigma.data());
    let weights: Vec<f64> = (vecs.adjoint() * rho.data() * &vecs).diagonal().iter().map(|z| z.re).collect();
    let (mut cross, mut outside) = (0.0, 0.0);
    for (&lambda, &weight) in vals.iter().zip(weights.iter()) {
        if lambda <= SPECTRAL_FLOOR {
            outside += weight;
        } else {
            cross += weight * lambda.ln();
        }
    }
    if outside > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    Ok((-entropy_fock(rho) - cross).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::g;
    use crate::fock::{fock_coherent, fock_number, fock_thermal, fock_tmsv, thermal_cutoff, truncated_thermal};
    use crate::linalg::C64;

    #[test]
    fn thermal_entropy_matches_closed_form() {
        for n in [0.1, 0.5, 2.0] {
            let rho = fock_thermal(n, thermal_cutoff(n, 1e-13)).unwrap();
            assert!((entropy_fock(&rho) - g(n).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_states_have_zero_entropy() {
        assert!(entropy_fock(&fock_coherent(C64::new(0.7, 0.1), 20).unwrap()).abs() < 1e-9);
        let tmsv = fock_tmsv(0.3, 20).unwrap();
        assert!(entropy_fock(&tmsv).abs() < 1e-9);
        let half = tmsv.partial_trace(&[0]).unwrap();
        assert!((entropy_fock(&half) - g(0.3).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn relative_entropy_between_thermal_states() {
        let (n, m) = (0.4, 0.9);
        let d = 60;
        let rho = truncated_thermal(n, d);
        let sigma = truncated_thermal(m, d);
        let expected = -g(n).unwrap() - (n * (m / (m + 1.0)).ln() - (m + 1.0).ln());
        assert!((relative_entropy_fock(&rho, &sigma).unwrap() - expected).abs() < 1e-9);
        assert!(relative_entropy_fock(&rho, &rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn support_mismatch_is_infinite() {
        let rho = fock_number(1, 3).unwrap();
        let sigma = fock_number(0, 3).unwrap();
        assert_eq!(relative_entropy_fock(&rho, &sigma).unwrap(), f64::INFINITY);
        assert!(relative_entropy_fock(&sigma, &fock_number(0, 4).unwrap()).is_err());
    }
}
