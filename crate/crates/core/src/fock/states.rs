use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{FockOperator, DEFAULT_DEFICIT_TOL};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::sampling::SampleRng;

const MIN_CUTOFF: usize = 2;

fn check_cutoff(d: usize) -> Result<()> {
    if d < MIN_CUTOFF {
        return Err(Error::invalid(format!("Fock cutoff must be >= {MIN_CUTOFF}, got {d}")));
    }
    Ok(())
}

fn check_photons(n: f64) -> Result<()> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::invalid(format!("mean photon number must be >= 0, got {n}")));
    }
    Ok(())
}

/// Smallest cutoff `D` with thermal tail `(N/(N+1))^D < tol`. Also the TMSV
/// cutoff for marginal energy `N`.
pub fn thermal_cutoff(n: f64, tol: f64) -> usize {
    if n <= 0.0 {
        return MIN_CUTOFF;
    }
    let ratio_ln = (n / (n + 1.0)).ln();
    let mut d = (tol.ln() / ratio_ln).ceil().max(MIN_CUTOFF as f64) as usize;
    while (d as f64 * ratio_ln).exp() >= tol {
        d += 1;
    }
    d
}

/// Smallest cutoff leaving less than `tol` of the Poisson weight of `|α⟩`.
pub fn coherent_cutoff(alpha: C64, tol: f64) -> usize {
    let weights = poisson_weights(alpha.norm_sqr(), usize::MAX);
    let mut mass = 0.0;
    for (d, w) in weights.enumerate() {
        mass += w;
        if 1.0 - mass < tol && d + 1 >= MIN_CUTOFF {
            return d + 1;
        }
    }
    unreachable!("Poisson weights sum to one")
}

fn poisson_weights(mean: f64, limit: usize) -> impl Iterator<Item = f64> {
    let mut w = (-mean).exp();
    (0..limit).map(move |k| {
        if k > 0 {
            w *= mean / k as f64;
        }
        w
    })
}

fn deficit_error(cutoff: usize, deficit: f64, suggested: usize) -> Error {
    Error::Cutoff {
        cutoff,
        deficit,
        suggested,
    }
}

pub fn fock_vacuum(d: usize) -> Result<FockOperator> {
    fock_number(0, d)
}

/// `|k⟩⟨k|`.
pub fn fock_number(k: usize, d: usize) -> Result<FockOperator> {
    check_cutoff(d)?;
    if k >= d {
        return Err(Error::invalid(format!("|{k}⟩ does not fit in cutoff {d}")));
    }
    let mut m = DMatrix::zeros(d, d);
    m[(k, k)] = C64::new(1.0, 0.0);
    Ok(FockOperator::state(vec![d], m))
}

/// Truncated `|α⟩⟨α|`, not renormalized.
pub fn fock_coherent(alpha: C64, d: usize) -> Result<FockOperator> {
    check_cutoff(d)?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::invalid("coherent amplitude must be finite"));
    }
    let norm = (-alpha.norm_sqr() / 2.0).exp();
    let mut psi = DVector::zeros(d);
    let mut term = C64::new(norm, 0.0);
    for k in 0..d {
        if k > 0 {
            term *= alpha / (k as f64).sqrt();
        }
        psi[k] = term;
    }
    let state = FockOperator::pure(vec![d], &psi);
    let deficit = state.trace_deficit();
    if deficit > DEFAULT_DEFICIT_TOL {
        return Err(deficit_error(d, deficit, coherent_cutoff(alpha, DEFAULT_DEFICIT_TOL)));
    }
    Ok(state)
}

/// Thermal populations `Nᵏ/(N+1)^{k+1}` for `k < d`, without a deficit check.
pub fn truncated_thermal(n: f64, d: usize) -> FockOperator {
    let mut m = DMatrix::zeros(d, d);
    let q = n / (n + 1.0);
    let mut p = 1.0 / (n + 1.0);
    for k in 0..d {
        m[(k, k)] = C64::new(p, 0.0);
        p *= q;
    }
    FockOperator::state(vec![d], m)
}

pub fn fock_thermal(n: f64, d: usize) -> Result<FockOperator> {
    check_cutoff(d)?;
    check_photons(n)?;
    let state = truncated_thermal(n, d);
    let deficit = state.trace_deficit();
    if deficit > DEFAULT_DEFICIT_TOL {
        return Err(deficit_error(d, deficit, thermal_cutoff(n, DEFAULT_DEFICIT_TOL)));
    }
    Ok(state)
}

/// Amplitudes `√(1−z²)·zᵏ`, `z = √(E/(E+1))`, for `k < d`.
pub(crate) fn tmsv_amplitudes(energy: f64, d: usize) -> Vec<f64> {
    let z = (energy / (energy + 1.0)).sqrt();
    let mut c = (1.0 - z * z).sqrt();
    (0..d)
        .map(|_| {
            let v = c;
            c *= z;
            v
        })
        .collect()
}

/// `Σ_{k<d} √(1−z²) zᵏ |k,k⟩` as a density matrix, without a deficit check.
pub fn truncated_tmsv(energy: f64, d: usize) -> FockOperator {
    let amps = tmsv_amplitudes(energy, d);
    let mut psi = DVector::zeros(d * d);
    for (k, c) in amps.iter().enumerate() {
        psi[k * d + k] = C64::new(*c, 0.0);
    }
    FockOperator::pure(vec![d, d], &psi)
}

pub fn fock_tmsv(energy: f64, d: usize) -> Result<FockOperator> {
    check_cutoff(d)?;
    check_photons(energy)?;
    let state = truncated_tmsv(energy, d);
    let deficit = state.trace_deficit();
    if deficit > DEFAULT_DEFICIT_TOL {
        return Err(deficit_error(d, deficit, thermal_cutoff(energy, DEFAULT_DEFICIT_TOL)));
    }
    Ok(state)
}

/// Multiplies the amplitude on each basis vector by `λ^{photons in weighted modes}`
/// and renormalizes, with `λ` chosen so the weighted modes carry `target` photons.
fn tilt_to_energy(psi: &DVector<C64>, photons: &[usize], target: f64) -> Result<DVector<C64>> {
    let tilted = |log_lambda: f64| -> DVector<C64> {
        let shift = photons.iter().map(|&k| log_lambda * k as f64).fold(f64::MIN, f64::max);
        let mut v = DVector::from_fn(psi.len(), |i, _| psi[i] * (log_lambda * photons[i] as f64 - shift).exp());
        let norm = v.norm();
        v /= C64::new(norm, 0.0);
        v
    };
    let energy = |v: &DVector<C64>| -> f64 { v.iter().zip(photons).map(|(a, &k)| a.norm_sqr() * k as f64).sum() };
    let (mut lo, mut hi) = (-40.0, 40.0);
    if energy(&tilted(lo)) > target || energy(&tilted(hi)) < target {
        return Err(Error::invalid(format!("photon target {target} unreachable in this cutoff")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy(&tilted(mid)) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(tilted(0.5 * (lo + hi)))
}

/// Random mixture of up to `max_rank` Haar-random pure states on `mode_dims`,
/// each tilted so that the modes in `energy_modes` carry `target` photons.
pub fn random_fock_state(
    mode_dims: &[usize],
    energy_modes: &[usize],
    max_rank: usize,
    target: f64,
    rng: &mut SampleRng,
) -> Result<FockOperator> {
    let dim: usize = mode_dims.iter().product();
    let mut digits = vec![0usize; mode_dims.len()];
    let photons: Vec<usize> = (0..dim)
        .map(|i| {
            super::decompose(i, mode_dims, &mut digits);
            energy_modes.iter().map(|&m| digits[m]).sum()
        })
        .collect();
    let rank = rng.random_range(1..=max_rank.max(1));
    let weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = DMatrix::zeros(dim, dim);
    for w in weights {
        let psi = DVector::from_fn(dim, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let psi = tilt_to_energy(&psi, &photons, target)?;
        rho += &psi * psi.adjoint() * C64::new(w / total, 0.0);
    }
    Ok(FockOperator::state(mode_dims.to_vec(), crate::linalg::hermitize(&rho)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;

    #[test]
    fn coherent_examples() {
        let v = fock_coherent(C64::new(0.0, 0.0), 4).unwrap();
        assert_eq!(v, fock_vacuum(4).unwrap());

        let s = fock_coherent(C64::new(1.0, 0.0), 30).unwrap();
        assert!((s.mean_photons_of(&[0]) - 1.0).abs() < 1e-10);
        assert!(super::super::entropy_fock(&s).abs() < 1e-9);

        match fock_coherent(C64::new(2.0, 0.0), 5) {
            Err(Error::Cutoff { suggested, .. }) => assert!(suggested > 5),
            other => panic!("expected cutoff error, got {other:?}"),
        }
        assert!(fock_coherent(C64::new(1.0, 0.0), 1).is_err());
    }

    #[test]
    fn thermal_and_tmsv_examples() {
        let t = fock_thermal(1.0, 60).unwrap();
        assert!((super::super::entropy_fock(&t) - 2.0 * std::f64::consts::LN_2).abs() < 1e-6);
        assert_eq!(fock_tmsv(0.0, 3).unwrap(), FockOperator::pure(vec![3, 3], &{
            let mut v = DVector::zeros(9);
            v[0] = C64::new(1.0, 0.0);
            v
        }));
        let e = 0.4;
        let d = thermal_cutoff(e, 1e-10);
        let marginal = fock_tmsv(e, d).unwrap().partial_trace(&[0]).unwrap();
        let thermal = truncated_thermal(e, d);
        let gap = (marginal.data() - thermal.data()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(gap < 1e-8);
        assert!(fock_thermal(1.0, 10).is_err());
        assert!(fock_thermal(-1.0, 10).is_err());
    }

    #[test]
    fn cutoff_rules() {
        let d = thermal_cutoff(0.5, 1e-8);
        assert!((0.5f64 / 1.5).powi(d as i32) < 1e-8);
        assert!((0.5f64 / 1.5).powi(d as i32 - 1) >= 1e-8);
        assert_eq!(thermal_cutoff(0.0, 1e-8), 2);
        let d = coherent_cutoff(C64::new(1.0, 1.0), 1e-8);
        assert!(fock_coherent(C64::new(1.0, 1.0), d).is_ok());
        assert!(fock_coherent(C64::new(1.0, 1.0), d - 1).is_err());
    }

    #[test]
    fn random_states_hit_energy() {
        let mut r = rng(5);
        for _ in 0..5 {
            let s = random_fock_state(&[4, 4], &[0], 3, 0.3, &mut r).unwrap();
            assert!((s.mean_photons_of(&[0]) - 0.3).abs() < 1e-10);
            assert!((s.trace() - 1.0).abs() < 1e-12);
            let (herm, min) = s.state_diagnostics();
            assert!(herm < 1e-12 && min > -1e-12);
        }
    }
}
