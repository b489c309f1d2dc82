//! Seeded random Gaussian states used by the verifiers.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::C64;

pub type SampleRng = ChaCha8Rng;

const MAX_SQUEEZING: f64 = 1.5;
const MAX_THERMAL: f64 = 1.0;
/// Largest squeezing parameter the energy fit may scale up to.
const SQUEEZING_CAP: f64 = 4.0;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-sample seed: SplitMix64 of `(seed, index)`, independent of scheduling.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn normal(rng: &mut SampleRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-random `n×n` unitary (QR of a complex Ginibre matrix, phases fixed).
pub fn haar_unitary(n: usize, rng: &mut SampleRng) -> DMatrix<C64> {
    let z = DMatrix::from_fn(n, n, |_, _| C64::new(normal(rng), normal(rng)) / 2f64.sqrt());
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Passive (orthogonal and symplectic) quadrature matrix of the mode unitary `u`.
pub fn passive_symplectic(u: &DMatrix<C64>) -> DMatrix<f64> {
    let n = u.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (u[(i, j)].re, u[(i, j)].im);
            s[(2 * i, 2 * j)] = x;
            s[(2 * i, 2 * j + 1)] = -y;
            s[(2 * i + 1, 2 * j)] = y;
            s[(2 * i + 1, 2 * j + 1)] = x;
        }
    }
    s
}

/// Random Gaussian state shape `O₁·Sq(t·r)·O₂` applied to a thermal state with
/// occupations `t·N`, displaced by `t·d`. `t` is fitted afterwards.
struct Shape {
    outer: DMatrix<f64>,
    inner: DMatrix<f64>,
    squeezing: Vec<f64>,
    thermal: Vec<f64>,
    displacement: DVector<f64>,
}

impl Shape {
    fn draw(n: usize, mixed: bool, displaced: bool, rng: &mut SampleRng) -> Self {
        let outer = passive_symplectic(&haar_unitary(n, rng));
        let inner = passive_symplectic(&haar_unitary(n, rng));
        let squeezing = (0..n).map(|_| rng.random_range(0.0..MAX_SQUEEZING)).collect();
        let thermal = (0..n)
            .map(|_| if mixed { rng.random_range(0.0..MAX_THERMAL) } else { 0.0 })
            .collect();
        let displacement = if displaced {
            DVector::from_fn(2 * n, |_, _| 0.5 * normal(rng))
        } else {
            DVector::zeros(2 * n)
        };
        Shape {
            outer,
            inner,
            squeezing,
            thermal,
            displacement,
        }
    }

    fn max_squeezing(&self) -> f64 {
        self.squeezing.iter().copied().fold(0.0, f64::max)
    }

    fn state(&self, t: f64) -> GaussianState {
        let n = self.squeezing.len();
        let mut sq = DMatrix::zeros(2 * n, 2 * n);
        let mut nu = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            let r = t * self.squeezing[k];
            sq[(2 * k, 2 * k)] = r.exp();
            sq[(2 * k + 1, 2 * k + 1)] = (-r).exp();
            let v = 1.0 + 2.0 * t * self.thermal[k];
            nu[(2 * k, 2 * k)] = v;
            nu[(2 * k + 1, 2 * k + 1)] = v;
        }
        let s = &self.outer * sq * &self.inner;
        let cov = &s * nu * s.transpose();
        GaussianState::from_parts(&self.displacement * t, cov)
    }
}

/// Finds `t` with `photons(t) = target` by bisection on a sign-change bracket.
/// Returns `None` if the bracket cannot be formed within the squeezing cap.
fn fit_scale(shape: &Shape, modes: &[usize], target: f64) -> Option<GaussianState> {
    let photons = |t: f64| shape.state(t).mean_photons_of(modes);
    let mut hi = 1.0;
    while photons(hi) < target {
        hi *= 2.0;
        if hi * shape.max_squeezing() > SQUEEZING_CAP || hi > 1e6 {
            return None;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if photons(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let (s_lo, s_hi) = (shape.state(lo), shape.state(hi));
    let (e_lo, e_hi) = (s_lo.mean_photons_of(modes), s_hi.mean_photons_of(modes));
    Some(if (e_lo - target).abs() <= (e_hi - target).abs() { s_lo } else { s_hi })
}

fn draw_with_energy(
    n_modes: usize,
    modes: &[usize],
    target: f64,
    mixed: bool,
    rng: &mut SampleRng,
) -> Result<GaussianState> {
    for _ in 0..64 {
        let displaced = rng.random_bool(0.5);
        let shape = Shape::draw(n_modes, mixed, displaced, rng);
        if let Some(state) = fit_scale(&shape, modes, target) {
            return Ok(state);
        }
    }
    Err(Error::invalid(format!(
        "could not reach {target} photons on modes {modes:?}"
    )))
}

/// Random pure state on `n_modes` with exactly `target` photons summed over `modes`.
pub fn random_pure_with_energy(
    n_modes: usize,
    modes: &[usize],
    target: f64,
    rng: &mut SampleRng,
) -> Result<GaussianState> {
    if target == 0.0 {
        return Err(Error::invalid("zero energy target; build the vacuum directly"));
    }
    draw_with_energy(n_modes, modes, target, false, rng)
}

/// Random (generally mixed) squeezed, displaced thermal state with exactly
/// `target` photons in total.
pub fn random_mixed_with_energy(n_modes: usize, target: f64, rng: &mut SampleRng) -> Result<GaussianState> {
    if target == 0.0 {
        return Ok(GaussianState::vacuum(n_modes));
    }
    let modes: Vec<usize> = (0..n_modes).collect();
    draw_with_energy(n_modes, &modes, target, true, rng)
}

/// Random pure state without an energy constraint.
pub fn random_pure_state(n_modes: usize, rng: &mut SampleRng) -> GaussianState {
    let displaced = rng.random_bool(0.5);
    Shape::draw(n_modes, false, displaced, rng).state(1.0)
}
