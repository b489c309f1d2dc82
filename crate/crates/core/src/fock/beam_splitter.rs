use nalgebra::DMatrix;

use super::{FockOperator, OperatorKind};
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Beam splitter `exp(θ(a†e − a e†))`, `cos θ = √η`, stored as one real
/// orthogonal block per total photon number.
///
/// Block `n` acts on `|j, n−j⟩`, `j = 0..=n` photons in the first mode. Each block
/// is an invariant subspace, so blocks are exact with no truncation.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    eta: f64,
    blocks: Vec<DMatrix<f64>>,
}

/// Generator restricted to `|j, n−j⟩` with `j ∈ lo..=hi`.
fn generator(n: usize, lo: usize, hi: usize) -> DMatrix<f64> {
    let size = hi - lo + 1;
    let mut g = DMatrix::zeros(size, size);
    for j in lo..hi {
        let v = (((j + 1) * (n - j)) as f64).sqrt();
        g[(j + 1 - lo, j - lo)] = v;
        g[(j - lo, j + 1 - lo)] = -v;
    }
    g
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid(format!("transmissivity must lie in [0, 1], got {eta}")));
    }
    Ok(())
}

fn angle(eta: f64) -> f64 {
    eta.sqrt().acos()
}

impl BeamSplitter {
    /// Exact blocks for every total photon number up to `max_total`.
    pub fn new(eta: f64, max_total: usize) -> Result<Self> {
        check_eta(eta)?;
        let theta = angle(eta);
        let blocks = (0..=max_total).map(|n| (generator(n, 0, n) * theta).exp()).collect();
        Ok(Self { eta, blocks })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `⟨j_out, n−j_out| U |j_in, n−j_in⟩`.
    #[inline]
    pub fn amplitude(&self, n: usize, j_out: usize, j_in: usize) -> f64 {
        self.blocks[n][(j_out, j_in)]
    }
}

/// Dense two-mode beam splitter on cutoff `d` per mode. Blocks with total photon
/// number `≥ d` leave the truncated space and are exponentiated restricted to it.
pub fn beam_splitter(eta: f64, d: usize) -> Result<FockOperator> {
    check_eta(eta)?;
    if d < 1 {
        return Err(Error::invalid("cutoff must be positive"));
    }
    let theta = angle(eta);
    let dim = d * d;
    let mut u = DMatrix::zeros(dim, dim);
    for n in 0..=2 * (d - 1) {
        let lo = n.saturating_sub(d - 1);
        let hi = n.min(d - 1);
        let block = (generator(n, lo, hi) * theta).exp();
        for jo in lo..=hi {
            for ji in lo..=hi {
                let row = jo * d + (n - jo);
                let col = ji * d + (n - ji);
                u[(row, col)] = C64::new(block[(jo - lo, ji - lo)], 0.0);
            }
        }
    }
    FockOperator::new(vec![d, d], u, OperatorKind::Unitary)
}
