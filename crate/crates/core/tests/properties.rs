use proptest::prelude::*;
use qillum::sampling::{random_mixed_with_energy, random_pure_state, rng};
use qillum::*;

fn state(n: usize, seed: u64, mixed: bool) -> GaussianState {
    let mut r = rng(seed);
    if mixed {
        random_mixed_with_energy(n, 0.5 + (seed % 7) as f64 * 0.2, &mut r).unwrap()
    } else {
        random_pure_state(n, &mut r)
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_spectrum_is_union(a in 1usize..3, b in 1usize..3, s1: u64, s2: u64, mixed: bool) {
        let x = state(a, s1, mixed);
        let y = state(b, s2, !mixed);
        let joint = sorted(x.tensor(&y).symplectic_eigenvalues().unwrap().values().to_vec());
        let mut parts = x.symplectic_eigenvalues().unwrap().values().to_vec();
        parts.extend_from_slice(y.symplectic_eigenvalues().unwrap().values());
        for (p, q) in joint.iter().zip(sorted(parts)) {
            prop_assert!((p - q).abs() < 1e-7 * q.max(1.0), "{p} vs {q}");
        }
    }

    #[test]
    fn photons_add_under_tensor(s1: u64, s2: u64) {
        let (x, y) = (state(2, s1, true), state(1, s2, false));
        let lhs = x.tensor(&y).mean_photons();
        prop_assert!((lhs - x.mean_photons() - y.mean_photons()).abs() < 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn one_mode_eigenvalue_is_sqrt_det(seed: u64) {
        let x = state(1, seed, true);
        let nu = x.symplectic_eigenvalues().unwrap().values()[0];
        prop_assert!((nu - x.cov().determinant().sqrt()).abs() < 1e-9 * nu);
    }

    #[test]
    fn partial_traces_stay_physical(seed: u64, keep in 0usize..3) {
        let x = state(3, seed, seed % 2 == 0);
        let marginal = x.partial_trace(&[keep]).unwrap();
        prop_assert!(marginal.is_physical(1e-9));
    }

    #[test]
    fn attenuator_keeps_states_physical_and_mixes_energy(seed: u64, eta in 0.01f64..1.0, nb in 0.0f64..5.0) {
        let x = state(2, seed, true);
        let ch = GaussianChannel::attenuator(2, eta, nb).unwrap();
        let y = ch.apply(&x).unwrap();
        prop_assert!(y.is_physical(1e-9));
        let expected = eta * x.mean_photons() + 2.0 * (1.0 - eta) * nb;
        prop_assert!((y.mean_photons() - expected).abs() < 1e-9 * expected.max(1.0));
    }

    #[test]
    fn composition_matches_sequential_application(seed: u64, e1 in 0.05f64..1.0, e2 in 0.05f64..1.0, n1 in 0.0f64..3.0, n2 in 0.0f64..3.0) {
        let x = state(1, seed, true);
        let a = GaussianChannel::attenuator(1, e1, n1).unwrap();
        let b = GaussianChannel::attenuator(1, e2, n2).unwrap();
        let direct = GaussianChannel::compose(&b, &a).unwrap().apply(&x).unwrap();
        let stepwise = b.apply(&a.apply(&x).unwrap()).unwrap();
        prop_assert!((direct.cov() - stepwise.cov()).amax() < 1e-9);
        prop_assert!((direct.mean() - stepwise.mean()).amax() < 1e-9);
    }

    #[test]
    fn relative_entropy_to_thermal_is_nonnegative(seed: u64, nb in 0.01f64..5.0) {
        let x = state(2, seed, seed % 3 == 0);
        let v = relative_entropy_vs_thermal(&x, &ThermalReference::new(2, nb).unwrap()).unwrap();
        prop_assert!(v >= 0.0);
    }

    #[test]
    fn memory_never_hurts(seed: u64, eta in 0.01f64..0.99, nb in 0.01f64..5.0, e in 0.01f64..2.0) {
        let probe = random_pure_probe(1, e, seed).unwrap();
        let with = exponent_with_memory(&probe, &[0], eta, nb).unwrap().total;
        let without = exponent_no_memory(&probe.partial_trace(&[0]).unwrap(), eta, nb).unwrap().total;
        prop_assert!(with >= without - 1e-9, "{with} < {without}");
    }

    #[test]
    fn extra_loss_and_noise_never_help(
        seed: u64,
        eta in 0.02f64..0.98,
        eta2 in 0.02f64..0.98,
        nb in 0.05f64..3.0,
        n2 in 0.0f64..3.0,
        e in 0.05f64..1.0,
    ) {
        let probe = random_pure_probe(1, e, seed).unwrap();
        let eta_total = eta * eta2;
        let nb_total = (eta2 * (1.0 - eta) * nb + (1.0 - eta2) * n2) / (1.0 - eta_total);
        prop_assume!(nb_total > 1e-3);
        let before = exponent_with_memory(&probe, &[0], eta, nb).unwrap().total;
        let after = exponent_with_memory(&probe, &[0], eta_total, nb_total).unwrap().total;
        prop_assert!(after <= before + 1e-9, "{after} > {before}");
        let signal = probe.partial_trace(&[0]).unwrap();
        let before = exponent_no_memory(&signal, eta, nb).unwrap().total;
        let after = exponent_no_memory(&signal, eta_total, nb_total).unwrap().total;
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn coherent_probe_matches_closed_form(eta in 0.001f64..0.999, e in 0.0f64..5.0, nb in 0.001f64..1000.0, n in 1usize..4) {
        let p = IlluminationParams::new(eta, e, nb, n).unwrap();
        let probe = qillum::optimality::coherent_probe(n, e).unwrap();
        let direct = exponent_no_memory(&probe, eta, nb).unwrap().total;
        let closed = coherent_exponent(&p).unwrap().total;
        prop_assert!((direct - closed).abs() <= 1e-10 * closed.max(1e-3), "{direct} vs {closed}");
    }

    #[test]
    fn coherent_exponent_is_monotone(eta in 0.01f64..0.9, e in 0.01f64..2.0, nb in 0.01f64..50.0, bump in 1.01f64..1.1) {
        let v = |eta, e, nb| coherent_exponent(&IlluminationParams::new(eta, e, nb, 1).unwrap()).unwrap().total;
        let base = v(eta, e, nb);
        prop_assert!(v(eta * bump, e, nb) > base);
        prop_assert!(v(eta, e * bump, nb) > base);
        prop_assert!(v(eta, e, nb * bump) < base);
    }

    #[test]
    fn tmsv_never_loses_to_coherent(eta in 0.001f64..0.999, e in 0.001f64..3.0, nb in 0.001f64..1000.0) {
        let p = IlluminationParams::new(eta, e, nb, 1).unwrap();
        prop_assert!(tmsv_exponent(&p).unwrap().total >= coherent_exponent(&p).unwrap().total - 1e-12);
    }
}
