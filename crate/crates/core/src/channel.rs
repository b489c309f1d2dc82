//! Gaussian channels acting on first and second moments:
//! `cov ↦ X·cov·Xᵀ + Y`, `mean ↦ X·mean + d₀`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::{check_mode_set, GaussianState};
use crate::linalg;

/// Slack on the complete-positivity matrix inequality.
pub const CP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    n_in: usize,
    n_out: usize,
    x: DMatrix<f64>,
    y: DMatrix<f64>,
    d0: DVector<f64>,
}

impl GaussianChannel {
    /// Validates shapes, symmetry of `Y` and complete positivity.
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>, d0: DVector<f64>) -> Result<Self> {
        let (rows, cols) = x.shape();
        if rows % 2 != 0 || cols % 2 != 0 || rows == 0 || cols == 0 {
            return Err(Error::invalid(format!("X must be 2n_out×2n_in, got {rows}×{cols}")));
        }
        if y.shape() != (rows, rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: y.nrows(),
            });
        }
        if d0.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: d0.len(),
            });
        }
        if linalg::max_abs(&(&y - y.transpose())) > 1e-12 * linalg::max_abs(&y).max(1.0) {
            return Err(Error::invalid("Y must be symmetric"));
        }
        let channel = Self::from_parts(x, y, d0);
        let min = channel.cp_min_eigenvalue();
        if min < -CP_TOL {
            return Err(Error::NotCompletelyPositive { min_eigenvalue: min });
        }
        Ok(channel)
    }

    fn from_parts(x: DMatrix<f64>, y: DMatrix<f64>, d0: DVector<f64>) -> Self {
        Self {
            n_in: x.ncols() / 2,
            n_out: x.nrows() / 2,
            y: linalg::symmetrize(&y),
            x,
            d0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_parts(
            DMatrix::identity(2 * n, 2 * n),
            DMatrix::zeros(2 * n, 2 * n),
            DVector::zeros(2 * n),
        )
    }

    /// Thermal attenuator: `b = √η·a + √(1−η)·e` with `e` thermal at `n_b` photons.
    pub fn attenuator(n: usize, eta: f64, n_b: f64) -> Result<Self> {
        check_modes(n)?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::invalid(format!(
                "transmissivity must lie in (0, 1], got {eta}; use thermal_replacement for eta = 0"
            )));
        }
        check_noise(n_b)?;
        Ok(Self::from_parts(
            DMatrix::identity(2 * n, 2 * n) * eta.sqrt(),
            DMatrix::identity(2 * n, 2 * n) * ((1.0 - eta) * (2.0 * n_b + 1.0)),
            DVector::zeros(2 * n),
        ))
    }

    /// The `eta = 0` attenuator: every input is replaced by thermal(`n_b`).
    pub fn thermal_replacement(n: usize, n_b: f64) -> Result<Self> {
        check_modes(n)?;
        check_noise(n_b)?;
        Ok(Self::from_parts(
            DMatrix::zeros(2 * n, 2 * n),
            DMatrix::identity(2 * n, 2 * n) * (2.0 * n_b + 1.0),
            DVector::zeros(2 * n),
        ))
    }

    /// Complement of [`attenuator`](Self::attenuator): the environment outputs of the
    /// beam-splitter dilation with a TMSV environment pair `(E, E′)`.
    ///
    /// Outputs are interleaved per input mode as `(E₁, E′₁, E₂, E′₂, …)`, and the
    /// environment output is `√η·e − √(1−η)·a`.
    pub fn complementary_attenuator(n: usize, eta: f64, n_b: f64) -> Result<Self> {
        check_modes(n)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::invalid(format!("transmissivity must lie in [0, 1], got {eta}")));
        }
        check_noise(n_b)?;
        let c = 2.0 * n_b + 1.0;
        let s = 2.0 * (n_b * (n_b + 1.0)).sqrt();
        let leak = -(1.0 - eta).sqrt();
        let mut x = DMatrix::zeros(4 * n, 2 * n);
        let mut y = DMatrix::zeros(4 * n, 4 * n);
        for k in 0..n {
            let e = 4 * k;
            let ep = 4 * k + 2;
            for q in 0..2 {
                let sign = if q == 0 { 1.0 } else { -1.0 };
                x[(e + q, 2 * k + q)] = leak;
                y[(e + q, e + q)] = eta * c;
                y[(ep + q, ep + q)] = c;
                y[(e + q, ep + q)] = eta.sqrt() * s * sign;
                y[(ep + q, e + q)] = eta.sqrt() * s * sign;
            }
        }
        Ok(Self::from_parts(x, y, DVector::zeros(4 * n)))
    }

    /// Adds `kappa` photons per mode of isotropic Gaussian noise.
    pub fn additive_noise(n: usize, kappa: f64) -> Result<Self> {
        check_modes(n)?;
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::invalid(format!("added noise must be >= 0, got {kappa}")));
        }
        Ok(Self::from_parts(
            DMatrix::identity(2 * n, 2 * n),
            DMatrix::identity(2 * n, 2 * n) * (2.0 * kappa),
            DVector::zeros(2 * n),
        ))
    }

    /// Additive noise that lifts `state` to exactly `energy` photons per mode.
    pub fn energy_lift(state: &GaussianState, energy: f64) -> Result<Self> {
        let n = state.n_modes();
        let kappa = energy - state.mean_photons() / n as f64;
        if kappa < 0.0 {
            return Err(Error::invalid(format!(
                "state already has {} photons per mode, above {energy}",
                state.mean_photons() / n as f64
            )));
        }
        Self::additive_noise(n, kappa)
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn d0(&self) -> &DVector<f64> {
        &self.d0
    }

    /// Smallest eigenvalue of `Y + iΩ_out − i·X·Ω_in·Xᵀ`.
    pub fn cp_min_eigenvalue(&self) -> f64 {
        let im = linalg::omega(self.n_out) - &self.x * linalg::omega(self.n_in) * self.x.transpose();
        linalg::min_eigenvalue_hermitian(&self.y, &im)
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.cp_min_eigenvalue() >= -tol
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.n_modes() != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                got: state.n_modes(),
            });
        }
        let cov = &self.x * state.cov() * self.x.transpose() + &self.y;
        let mean = &self.x * state.mean() + &self.d0;
        Ok(GaussianState::from_parts(mean, cov))
    }

    /// `(Φ ⊗ id)(state)` with `Φ` acting on `targets` (in that order). Requires
    /// `n_in == n_out`; the modes keep their positions.
    pub fn apply_on_subsystem(&self, state: &GaussianState, targets: &[usize]) -> Result<GaussianState> {
        check_mode_set(targets, state.n_modes())?;
        if targets.len() != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                got: targets.len(),
            });
        }
        if self.n_out != self.n_in {
            return Err(Error::invalid(
                "apply_on_subsystem needs a channel with as many outputs as inputs",
            ));
        }
        let dim = 2 * state.n_modes();
        let idx = linalg::quadrature_indices(targets);
        let mut x = DMatrix::identity(dim, dim);
        let mut y = DMatrix::zeros(dim, dim);
        let mut d0 = DVector::zeros(dim);
        for &gi in &idx {
            x[(gi, gi)] = 0.0;
        }
        for (i, &gi) in idx.iter().enumerate() {
            d0[gi] = self.d0[i];
            for (j, &gj) in idx.iter().enumerate() {
                x[(gi, gj)] = self.x[(i, j)];
                y[(gi, gj)] = self.y[(i, j)];
            }
        }
        let cov = &x * state.cov() * x.transpose() + y;
        let mean = &x * state.mean() + d0;
        Ok(GaussianState::from_parts(mean, cov))
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &GaussianChannel, inner: &GaussianChannel) -> Result<GaussianChannel> {
        if inner.n_out != outer.n_in {
            return Err(Error::DimensionMismatch {
                expected: outer.n_in,
                got: inner.n_out,
            });
        }
        Ok(Self::from_parts(
            &outer.x * &inner.x,
            &outer.x * &inner.y * outer.x.transpose() + &outer.y,
            &outer.x * &inner.d0 + &outer.d0,
        ))
    }
}

fn check_modes(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("channel needs at least one mode"));
    }
    Ok(())
}

fn check_noise(n_b: f64) -> Result<()> {
    if !(n_b >= 0.0) || !n_b.is_finite() {
        return Err(Error::invalid(format!("environment photon number must be >= 0, got {n_b}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_coherent, make_thermal, make_tmsv, PHYSICALITY_TOL};
    use crate::linalg::C64;

    fn assert_mat_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) {
        let d = linalg::max_abs(&(a - b));
        assert!(d <= tol, "matrices differ by {d:.3e}\n{a}\n{b}");
    }

    #[test]
    fn attenuator_examples() {
        let id = GaussianChannel::attenuator(2, 1.0, 3.0).unwrap();
        assert_eq!(id.x(), &DMatrix::identity(4, 4));
        assert_eq!(id.y(), &DMatrix::zeros(4, 4));

        let ch = GaussianChannel::attenuator(1, 0.3, 2.0).unwrap();
        let out = ch.apply(&GaussianState::vacuum(1)).unwrap();
        assert_mat_close(out.cov(), make_thermal(1, 0.7 * 2.0).unwrap().cov(), 1e-14);

        let ch = GaussianChannel::attenuator(1, 0.5, 1.0).unwrap();
        let out = ch.apply(&make_thermal(1, 1.0).unwrap()).unwrap();
        assert_mat_close(out.cov(), &(DMatrix::identity(2, 2) * 3.0), 1e-14);

        assert!(GaussianChannel::attenuator(1, 0.0, 1.0).is_err());
        assert!(GaussianChannel::attenuator(1, 1.2, 1.0).is_err());
        assert!(GaussianChannel::attenuator(1, 0.5, -1.0).is_err());
    }

    #[test]
    fn thermal_replacement_ignores_input() {
        let ch = GaussianChannel::thermal_replacement(1, 0.8).unwrap();
        let out = ch.apply(&make_coherent(&[C64::new(2.0, 1.0)]).unwrap()).unwrap();
        assert_eq!(out, make_thermal(1, 0.8).unwrap());
        assert!(ch.is_completely_positive(CP_TOL));
    }

    #[test]
    fn attenuator_on_coherent_is_displaced_thermal() {
        let (eta, nb) = (0.3, 0.5);
        let alpha = C64::new(0.7, -0.4);
        let out = GaussianChannel::attenuator(1, eta, nb)
            .unwrap()
            .apply(&make_coherent(&[alpha]).unwrap())
            .unwrap();
        let r2 = 2f64.sqrt();
        assert!((out.mean()[0] - eta.sqrt() * r2 * alpha.re).abs() < 1e-15);
        assert!((out.mean()[1] - eta.sqrt() * r2 * alpha.im).abs() < 1e-15);
        assert_mat_close(out.cov(), &(DMatrix::identity(2, 2) * (1.0 + 2.0 * (1.0 - eta) * nb)), 1e-14);
    }

    #[test]
    fn attenuator_on_tmsv_signal() {
        let (eta, e, nb) = (0.2, 0.4, 1.5);
        let out = GaussianChannel::attenuator(1, eta, nb)
            .unwrap()
            .apply_on_subsystem(&make_tmsv(e).unwrap(), &[0])
            .unwrap();
        let s = 2.0 * (e * (e + 1.0)).sqrt();
        let a = eta * (2.0 * e + 1.0) + (1.0 - eta) * (2.0 * nb + 1.0);
        let c = eta.sqrt() * s;
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
            a, 0.0, c, 0.0,
            0.0, a, 0.0, -c,
            c, 0.0, 2.0 * e + 1.0, 0.0,
            0.0, -c, 0.0, 2.0 * e + 1.0,
        ]);
        assert_mat_close(out.cov(), &expected, 1e-14);
    }

    #[test]
    fn subsystem_action_on_product_probe() {
        let a = make_coherent(&[C64::new(0.5, 0.5)]).unwrap();
        let m = make_thermal(1, 0.9).unwrap();
        let ch = GaussianChannel::attenuator(1, 0.4, 0.6).unwrap();
        let out = ch.apply_on_subsystem(&a.tensor(&m), &[0]).unwrap();
        let expected = ch.apply(&a).unwrap().tensor(&m);
        assert_mat_close(out.cov(), expected.cov(), 1e-14);
        assert!((out.mean() - expected.mean()).amax() < 1e-15);

        let id = GaussianChannel::identity(1);
        assert_eq!(id.apply_on_subsystem(&a.tensor(&m), &[1]).unwrap(), a.tensor(&m));
    }

    #[test]
    fn subsystem_errors() {
        let s = make_tmsv(0.5).unwrap();
        let ch = GaussianChannel::attenuator(1, 0.5, 1.0).unwrap();
        assert!(ch.apply_on_subsystem(&s, &[2]).is_err());
        assert!(ch.apply_on_subsystem(&s, &[0, 1]).is_err());
        let ch2 = GaussianChannel::attenuator(2, 0.5, 1.0).unwrap();
        assert!(ch2.apply_on_subsystem(&s, &[1, 1]).is_err());
        assert!(ch2.apply(&GaussianState::vacuum(1)).is_err());
    }

    #[test]
    fn complementary_examples() {
        let ch = GaussianChannel::complementary_attenuator(1, 1.0, 0.7).unwrap();
        assert_eq!(ch.x(), &DMatrix::zeros(4, 2));
        let out = ch.apply(&make_thermal(1, 3.0).unwrap()).unwrap();
        assert_mat_close(out.cov(), make_tmsv(0.7).unwrap().cov(), 1e-14);
        assert!(ch.is_completely_positive(CP_TOL));

        let ch = GaussianChannel::complementary_attenuator(2, 0.35, 0.2).unwrap();
        assert_eq!((ch.n_in(), ch.n_out()), (2, 4));
        assert!(ch.is_completely_positive(CP_TOL));
    }

    #[test]
    fn additive_noise_examples() {
        assert_eq!(GaussianChannel::additive_noise(1, 0.0).unwrap(), GaussianChannel::identity(1));
        let out = GaussianChannel::additive_noise(1, 0.5)
            .unwrap()
            .apply(&GaussianState::vacuum(1))
            .unwrap();
        assert_eq!(out.cov(), &(DMatrix::identity(2, 2) * 2.0));
        assert!((out.mean_photons() - 0.5).abs() < 1e-15);
        assert!(GaussianChannel::additive_noise(1, -0.1).is_err());

        let rho = make_coherent(&[C64::new(0.2, 0.1), C64::new(0.0, 0.3)]).unwrap();
        let lifted = GaussianChannel::energy_lift(&rho, 0.4).unwrap().apply(&rho).unwrap();
        assert!((lifted.mean_photons() - 0.8).abs() < 1e-14);
        assert!(lifted.is_physical(PHYSICALITY_TOL));
    }

    #[test]
    fn compose_attenuators() {
        let (e1, e2, nb) = (0.6, 0.3, 1.7);
        let a = GaussianChannel::attenuator(1, e1, nb).unwrap();
        let b = GaussianChannel::attenuator(1, e2, nb).unwrap();
        let c = GaussianChannel::compose(&a, &b).unwrap();
        let direct = GaussianChannel::attenuator(1, e1 * e2, nb).unwrap();
        assert_mat_close(c.x(), direct.x(), 1e-15);
        assert_mat_close(c.y(), direct.y(), 1e-14);
        let id = GaussianChannel::identity(1);
        assert_eq!(GaussianChannel::compose(&id, &a).unwrap(), a);
        assert!(GaussianChannel::compose(&GaussianChannel::identity(2), &a).is_err());
    }

    #[test]
    fn new_validates_cp() {
        let bad = GaussianChannel::new(
            DMatrix::identity(2, 2) * 0.5,
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
        );
        assert!(matches!(bad, Err(Error::NotCompletelyPositive { .. })));
        let ok = GaussianChannel::new(
            DMatrix::identity(2, 2) * 0.5,
            DMatrix::identity(2, 2) * 0.75,
            DVector::zeros(2),
        );
        assert!(ok.is_ok());
    }
}
