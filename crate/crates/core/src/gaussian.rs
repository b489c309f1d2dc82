//! Gaussian states in the covariance-matrix picture.
//!
//! Conventions used everywhere in this crate: quadratures are ordered
//! `(x₁, p₁, …, xₙ, pₙ)`, the vacuum covariance matrix is the identity, and
//! `cov_ij = ⟨{Δr_i, Δr_j}⟩`. A coherent state `|α⟩` has mean `√2 (Re α, Im α)`.

use nalgebra::{Cholesky, DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::sampling;

/// Slack on `cov + iΩ ≥ 0`.
pub const PHYSICALITY_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

/// Williamson eigenvalues, sorted descending and clipped below at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl GaussianState {
    /// Validates shape, finiteness, symmetry and the uncertainty principle.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if mean.is_empty() || mean.len() % 2 != 0 {
            return Err(Error::invalid(format!(
                "mean vector must have positive even length, got {}",
                mean.len()
            )));
        }
        if cov.shape() != (mean.len(), mean.len()) {
            return Err(Error::DimensionMismatch {
                expected: mean.len(),
                got: cov.nrows(),
            });
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("state has non-finite entries"));
        }
        let asym = linalg::max_abs(&(&cov - cov.transpose()));
        if asym > SYMMETRY_TOL * linalg::max_abs(&cov).max(1.0) {
            return Err(Error::invalid(format!(
                "covariance matrix is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let state = Self::from_parts(mean, cov);
        let min = state.min_uncertainty_eigenvalue();
        if min < -PHYSICALITY_TOL {
            return Err(Error::NonPhysical { min_eigenvalue: min });
        }
        Ok(state)
    }

    /// Builds without validation; symmetrizes `cov`.
    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self {
            mean,
            cov: linalg::symmetrize(&cov),
        }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `self ⊗ other`; modes of `self` come first.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let mut mean = DVector::zeros(self.mean.len() + other.mean.len());
        mean.rows_mut(0, self.mean.len()).copy_from(&self.mean);
        mean.rows_mut(self.mean.len(), other.mean.len()).copy_from(&other.mean);
        GaussianState {
            mean,
            cov: linalg::block_diag(&self.cov, &other.cov),
        }
    }

    /// Marginal on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<GaussianState> {
        check_mode_set(keep, self.n_modes())?;
        let idx = linalg::quadrature_indices(keep);
        Ok(GaussianState {
            mean: linalg::select_entries(&self.mean, &idx),
            cov: linalg::select_block(&self.cov, &idx, &idx),
        })
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + iΩ`.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue_hermitian(&self.cov, &linalg::omega(self.n_modes()))
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_uncertainty_eigenvalue() >= -tol
    }

    pub fn symplectic_eigenvalues(&self) -> Result<SymplecticSpectrum> {
        let min = self.min_uncertainty_eigenvalue();
        if min < -PHYSICALITY_TOL {
            return Err(Error::NonPhysical { min_eigenvalue: min });
        }
        let n = self.n_modes();
        if n <= 2 {
            if let Some(values) = two_mode_spectrum(&self.cov) {
                let values = values.into_iter().map(|v| v.max(1.0)).collect();
                return Ok(SymplecticSpectrum { values });
            }
        }
        // iΩV is similar to the Hermitian Lᵀ(iΩ)L for V = LLᵀ, so the moduli of
        // its eigenvalues are the singular values of A = LᵀΩL, i.e. sqrt(eig(AᵀA)),
        // each appearing twice.
        let squared: Vec<f64> = match Cholesky::new(self.cov.clone()) {
            Some(chol) => {
                let l = chol.l();
                let a = l.transpose() * linalg::omega(n) * &l;
                let ata = linalg::symmetrize(&(a.transpose() * &a));
                let mut ev: Vec<f64> = SymmetricEigen::new(ata).eigenvalues.iter().copied().collect();
                ev.sort_by(|a, b| b.total_cmp(a));
                ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
            }
            None => {
                // Numerically singular cov: fall back to the raw non-Hermitian problem.
                let m = linalg::omega(n) * &self.cov;
                let mut ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.norm()).collect();
                ev.sort_by(|a, b| b.total_cmp(a));
                ev.chunks(2).map(|p| (0.5 * (p[0] + p[1])).powi(2)).collect()
            }
        };
        let values = squared.into_iter().map(|v| v.max(0.0).sqrt().max(1.0)).collect();
        Ok(SymplecticSpectrum { values })
    }

    /// Total mean photon number `(tr cov − 2n)/4 + |mean|²/2`.
    pub fn mean_photons(&self) -> f64 {
        (self.cov.trace() - 2.0 * self.n_modes() as f64) / 4.0 + self.mean.norm_squared() / 2.0
    }

    pub fn mean_photons_per_mode(&self) -> Vec<f64> {
        (0..self.n_modes())
            .map(|k| {
                let (x, p) = (2 * k, 2 * k + 1);
                (self.cov[(x, x)] + self.cov[(p, p)] - 2.0) / 4.0
                    + (self.mean[x].powi(2) + self.mean[p].powi(2)) / 2.0
            })
            .collect()
    }

    /// Mean photons summed over `modes` only.
    pub fn mean_photons_of(&self, modes: &[usize]) -> f64 {
        let per_mode = self.mean_photons_per_mode();
        modes.iter().map(|&k| per_mode[k]).sum()
    }
}

/// Checks that `modes` is a nonempty set of distinct indices below `n`.
fn det2(m: &Matrix2<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Symplectic eigenvalues (descending) of a one- or two-mode covariance matrix
/// from its invariants `Δ = det A + det B + 2 det C` and `det V`. Unlike a
/// general eigensolver this keeps full relative precision when one mode is much
/// brighter than the other. Returns `None` for nearly degenerate two-mode
/// spectra, where the square root of the discriminant loses half the digits.
fn two_mode_spectrum(cov: &DMatrix<f64>) -> Option<Vec<f64>> {
    let block = |r: usize, c: usize| Matrix2::new(cov[(r, c)], cov[(r, c + 1)], cov[(r + 1, c)], cov[(r + 1, c + 1)]);
    let a = block(0, 0);
    if cov.nrows() == 2 {
        return Some(vec![det2(&a).max(0.0).sqrt()]);
    }
    let (b, c) = (block(2, 2), block(0, 2));
    let delta = det2(&a) + det2(&b) + 2.0 * det2(&c);
    // Schur complement on the larger block
    let (big, small, off) = if det2(&a) >= det2(&b) { (a, b, c) } else { (b, a, c.transpose()) };
    let det = match big.try_inverse() {
        Some(inv) => det2(&big) * det2(&(small - off.transpose() * inv * off)),
        None => cov.determinant(),
    };
    let s = (delta * delta - 4.0 * det).max(0.0).sqrt();
    if !(s > 1e-3 * delta) {
        return None;
    }
    let hi = 0.5 * (delta + s);
    Some(vec![hi.sqrt(), (det / hi).max(0.0).sqrt()])
}

pub(crate) fn check_mode_set(modes: &[usize], n: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::invalid("mode set must be nonempty"));
    }
    let mut seen = vec![false; n];
    for &k in modes {
        if k >= n {
            return Err(Error::invalid(format!("mode index {k} out of range for {n} modes")));
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::invalid(format!("mode index {k} repeated")));
        }
    }
    Ok(())
}

/// Modes of `0..n` not in `modes`, ascending.
pub(crate) fn complement(modes: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|k| !modes.contains(k)).collect()
}

/// `n`-mode thermal state with `mean_photons` photons per mode.
pub fn make_thermal(n: usize, mean_photons: f64) -> Result<GaussianState> {
    if n == 0 {
        return Err(Error::invalid("thermal state needs at least one mode"));
    }
    if !(mean_photons >= 0.0) || !mean_photons.is_finite() {
        return Err(Error::invalid(format!("mean photon number must be >= 0, got {mean_photons}")));
    }
    Ok(GaussianState {
        mean: DVector::zeros(2 * n),
        cov: DMatrix::identity(2 * n, 2 * n) * (2.0 * mean_photons + 1.0),
    })
}

/// Product coherent state `|α₁⟩⊗…⊗|αₙ⟩`.
pub fn make_coherent(amplitudes: &[C64]) -> Result<GaussianState> {
    if amplitudes.is_empty() {
        return Err(Error::invalid("coherent state needs at least one amplitude"));
    }
    if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::invalid("coherent amplitudes must be finite"));
    }
    let n = amplitudes.len();
    let mean = DVector::from_iterator(
        2 * n,
        amplitudes
            .iter()
            .flat_map(|a| [std::f64::consts::SQRT_2 * a.re, std::f64::consts::SQRT_2 * a.im]),
    );
    Ok(GaussianState {
        mean,
        cov: DMatrix::identity(2 * n, 2 * n),
    })
}

/// Two-mode squeezed vacuum whose marginals carry `energy` photons each.
pub fn make_tmsv(energy: f64) -> Result<GaussianState> {
    if !(energy >= 0.0) || !energy.is_finite() {
        return Err(Error::invalid(format!("TMSV energy must be >= 0, got {energy}")));
    }
    let c = 2.0 * energy + 1.0;
    let s = 2.0 * (energy * (energy + 1.0)).sqrt();
    #[rustfmt::skip]
    let cov = DMatrix::from_row_slice(4, 4, &[
        c,   0.0, s,   0.0,
        0.0, c,   0.0, -s,
        s,   0.0, c,   0.0,
        0.0, -s,  0.0, c,
    ]);
    Ok(GaussianState {
        mean: DVector::zeros(4),
        cov,
    })
}

/// `tmsv(E)^{⊗n}` reordered so that the `n` signal modes come first and the
/// `n` idler modes second.
pub fn make_tmsv_power(n: usize, energy: f64) -> Result<GaussianState> {
    if n == 0 {
        return Err(Error::invalid("need at least one TMSV copy"));
    }
    let one = make_tmsv(energy)?;
    let mut state = one.clone();
    for _ in 1..n {
        state = state.tensor(&one);
    }
    let order: Vec<usize> = (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    state.partial_trace(&order)
}

/// Random pure Gaussian state on `2·n_signal` modes (signal modes first) whose
/// signal marginal carries exactly `energy` photons per mode.
pub fn random_pure_probe(n_signal: usize, energy: f64, seed: u64) -> Result<GaussianState> {
    if n_signal == 0 {
        return Err(Error::invalid("need at least one signal mode"));
    }
    if !(energy >= 0.0) || !energy.is_finite() {
        return Err(Error::invalid(format!("signal energy must be >= 0, got {energy}")));
    }
    let mut rng = sampling::rng(seed);
    if energy == 0.0 {
        let idler = sampling::random_pure_state(n_signal, &mut rng);
        return Ok(GaussianState::vacuum(n_signal).tensor(&idler));
    }
    let signal: Vec<usize> = (0..n_signal).collect();
    sampling::random_pure_with_energy(2 * n_signal, &signal, energy * n_signal as f64, &mut rng)
}
