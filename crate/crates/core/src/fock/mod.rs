//! Brute-force oracle on truncated Fock spaces.
//!
//! Everything here is computed from dense density matrices and spectral
//! decompositions, independently of the covariance-matrix formulas, so the two
//! can be checked against each other.

mod beam_splitter;
mod channels;
mod crosscheck;
mod entropy;
mod states;
mod verify;

pub use beam_splitter::{beam_splitter, BeamSplitter};
pub use channels::{apply_attenuator_fock, apply_complementary_fock};
pub use crosscheck::{gaussian_crosscheck, CrossCheck, Quantity};
pub use entropy::{entropy_fock, relative_entropy_fock, SPECTRAL_FLOOR};
pub use states::{
    coherent_cutoff, fock_coherent, fock_number, fock_thermal, fock_tmsv, fock_vacuum, random_fock_state,
    thermal_cutoff, truncated_thermal, truncated_tmsv,
};
pub use verify::{
    exponent_no_memory_fock, exponent_with_memory_fock, lemma1_deviation, verify_lemma1, verify_theorem1_fock, FockExponent,
    Lemma1Config, NonGaussianConfig,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Largest trace deficit accepted when a state is truncated.
pub const DEFAULT_DEFICIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub deficit_tol: f64,
    /// Largest Hilbert-space dimension the oracle will diagonalize.
    pub max_dim: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            deficit_tol: DEFAULT_DEFICIT_TOL,
            max_dim: 2048,
        }
    }
}

impl OracleConfig {
    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            return Err(Error::OracleTooLarge {
                required: dim,
                limit: self.max_dim,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    State,
    Unitary,
    Generic,
}

/// Dense operator on `⊗ᵢ C^{dims[i]}`, first mode most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    mode_dims: Vec<usize>,
    data: DMatrix<C64>,
    kind: OperatorKind,
}

impl FockOperator {
    pub fn new(mode_dims: Vec<usize>, data: DMatrix<C64>, kind: OperatorKind) -> Result<Self> {
        let dim: usize = mode_dims.iter().product();
        if mode_dims.is_empty() || mode_dims.contains(&0) {
            return Err(Error::invalid("mode dimensions must be positive"));
        }
        if data.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: data.nrows(),
            });
        }
        Ok(Self { mode_dims, data, kind })
    }

    pub(crate) fn state(mode_dims: Vec<usize>, data: DMatrix<C64>) -> Self {
        Self {
            mode_dims,
            data,
            kind: OperatorKind::State,
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(mode_dims: Vec<usize>, psi: &DVector<C64>) -> Self {
        Self::state(mode_dims, psi * psi.adjoint())
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn trace_deficit(&self) -> f64 {
        1.0 - self.trace()
    }

    pub fn tensor(&self, other: &FockOperator) -> FockOperator {
        let mut dims = self.mode_dims.clone();
        dims.extend_from_slice(&other.mode_dims);
        FockOperator::state(dims, self.data.kronecker(&other.data))
    }

    /// Marginal on `keep`, modes in the given order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<FockOperator> {
        crate::gaussian::check_mode_set(keep, self.mode_dims.len())?;
        let traced: Vec<usize> = (0..self.mode_dims.len()).filter(|k| !keep.contains(k)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&k| self.mode_dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| self.mode_dims[k]).collect();
        let d_keep: usize = keep_dims.iter().product();
        let d_traced: usize = traced_dims.iter().product();

        // groups[t] lists (full index, kept index) sharing traced index t
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d_traced];
        let mut digits = vec![0usize; self.mode_dims.len()];
        for full in 0..self.dim() {
            decompose(full, &self.mode_dims, &mut digits);
            let k = compose(keep.iter().map(|&m| digits[m]), &keep_dims);
            let t = compose(traced.iter().map(|&m| digits[m]), &traced_dims);
            groups[t].push((full, k));
        }
        let mut out = DMatrix::zeros(d_keep, d_keep);
        for group in &groups {
            for &(i, ki) in group {
                for &(j, kj) in group {
                    out[(ki, kj)] += self.data[(i, j)];
                }
            }
        }
        Ok(FockOperator::state(keep_dims, out))
    }

    /// Reorders modes so that new mode `i` is old mode `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Result<FockOperator> {
        if order.len() != self.mode_dims.len() {
            return Err(Error::invalid("permutation must list every mode"));
        }
        crate::gaussian::check_mode_set(order, self.mode_dims.len())?;
        let new_dims: Vec<usize> = order.iter().map(|&k| self.mode_dims[k]).collect();
        let mut map = vec![0usize; self.dim()];
        let mut digits = vec![0usize; self.mode_dims.len()];
        for (old, slot) in map.iter_mut().enumerate() {
            decompose(old, &self.mode_dims, &mut digits);
            *slot = compose(order.iter().map(|&m| digits[m]), &new_dims);
        }
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out[(map[i], map[j])] = self.data[(i, j)];
            }
        }
        Ok(FockOperator {
            mode_dims: new_dims,
            data: out,
            kind: self.kind,
        })
    }

    /// Zero-pads mode `mode` up to `dim` levels.
    pub fn embed(&self, mode: usize, dim: usize) -> Result<FockOperator> {
        if mode >= self.mode_dims.len() || dim < self.mode_dims[mode] {
            return Err(Error::invalid("can only enlarge an existing mode"));
        }
        let mut new_dims = self.mode_dims.clone();
        new_dims[mode] = dim;
        let total: usize = new_dims.iter().product();
        let mut map = vec![0usize; self.dim()];
        let mut digits = vec![0usize; self.mode_dims.len()];
        for (old, slot) in map.iter_mut().enumerate() {
            decompose(old, &self.mode_dims, &mut digits);
            *slot = compose(digits.iter().copied(), &new_dims);
        }
        let mut out = DMatrix::zeros(total, total);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out[(map[i], map[j])] = self.data[(i, j)];
            }
        }
        Ok(FockOperator {
            mode_dims: new_dims,
            data: out,
            kind: self.kind,
        })
    }

    /// `Tr(ρ·op)`.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.data[(i, j)] * op[(j, i)];
            }
        }
        acc
    }

    /// Truncated annihilation operator of `mode` on the full space.
    pub fn lowering(&self, mode: usize) -> DMatrix<C64> {
        let mut a = DMatrix::zeros(self.dim(), self.dim());
        let mut digits = vec![0usize; self.mode_dims.len()];
        for col in 0..self.dim() {
            decompose(col, &self.mode_dims, &mut digits);
            let k = digits[mode];
            if k > 0 {
                digits[mode] -= 1;
                let row = compose(digits.iter().copied(), &self.mode_dims);
                a[(row, col)] = C64::new((k as f64).sqrt(), 0.0);
            }
        }
        a
    }

    /// First and second quadrature moments in the covariance-matrix convention
    /// of [`GaussianState`](crate::gaussian::GaussianState). Exact for states
    /// supported inside the cutoff.
    pub fn gaussian_moments(&self) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.mode_dims.len();
        let lower: Vec<DMatrix<C64>> = (0..n).map(|m| self.lowering(m)).collect();
        let alpha: Vec<C64> = lower.iter().map(|a| self.expectation(a)).collect();
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut mean = DVector::zeros(2 * n);
        for i in 0..n {
            mean[2 * i] = sqrt2 * alpha[i].re;
            mean[2 * i + 1] = sqrt2 * alpha[i].im;
        }
        let mut second = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let m = self.expectation(&(&lower[i] * &lower[j]));
                let nn = self.expectation(&(lower[i].adjoint() * &lower[j]));
                let delta = if i == j { 1.0 } else { 0.0 };
                second[(2 * i, 2 * j)] = 2.0 * m.re + 2.0 * nn.re + delta;
                second[(2 * i + 1, 2 * j + 1)] = -2.0 * m.re + 2.0 * nn.re + delta;
                second[(2 * i, 2 * j + 1)] = 2.0 * m.im + 2.0 * nn.im;
            }
        }
        for i in 0..n {
            for j in 0..n {
                second[(2 * j + 1, 2 * i)] = second[(2 * i, 2 * j + 1)];
            }
        }
        let cov = second - 2.0 * &mean * mean.transpose();
        (mean, cov)
    }

    /// `⟨Σ a†a⟩` over `modes`.
    pub fn mean_photons_of(&self, modes: &[usize]) -> f64 {
        let mut digits = vec![0usize; self.mode_dims.len()];
        (0..self.dim())
            .map(|i| {
                decompose(i, &self.mode_dims, &mut digits);
                let n: usize = modes.iter().map(|&m| digits[m]).sum();
                n as f64 * self.data[(i, i)].re
            })
            .sum()
    }

    /// Hermiticity error and smallest eigenvalue, for state contracts.
    pub fn state_diagnostics(&self) -> (f64, f64) {
        let herm = (&self.data - self.data.adjoint()).iter().fold(0.0, |a: f64, z| a.max(z.norm()));
        let min = crate::linalg::eigvalsh(&self.data).first().copied().unwrap_or(0.0);
        (herm, min)
    }
}

pub(crate) fn decompose(mut index: usize, dims: &[usize], digits: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

pub(crate) fn compose(digits: impl Iterator<Item = usize>, dims: &[usize]) -> usize {
    digits.zip(dims).fold(0, |acc, (d, &n)| acc * n + d)
}
