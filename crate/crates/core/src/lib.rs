//! Stein error exponents of quantum illumination with Gaussian probes.
//!
//! A target of reflectivity `η` sits in thermal light with `N_B` photons per
//! mode. The probe's signal modes go through a thermal attenuator, and the
//! exponent of the miss probability (false alarms held fixed) is the relative
//! entropy between the target-present and target-absent received states.
//!
//! The crate evaluates those exponents from covariance matrices
//! ([`gaussian`], [`channel`], [`entropy`]), runs randomized checks that the
//! two-mode squeezed vacuum is optimal with a quantum memory and a coherent
//! state without one ([`optimality`]), and recomputes everything on truncated
//! Fock spaces as an independent oracle ([`fock`]).
//!
//! Conventions: quadratures are ordered `(x₁, p₁, x₂, p₂, …)`, the vacuum
//! covariance is the identity and `|α⟩` has mean `√2·(Re α, Im α)`. Entropies
//! are in nats.
//!
//! ```
//! use qillum::{advantage_db, IlluminationParams};
//!
//! let p = IlluminationParams::new(0.01, 0.01, 625.0, 1).unwrap();
//! assert!(advantage_db(&p).unwrap().unwrap() > 6.0);
//! ```

#[cfg(feature = "lapack")]
extern crate openblas_src;

pub mod channel;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod optimality;
mod parallel;
pub mod sampling;
pub mod sweep;

pub use channel::GaussianChannel;
pub use entropy::{
    conditional_entropy, entropy, exponent_no_memory, exponent_with_memory, g, relative_entropy_vs_thermal,
    Exponent, ThermalReference,
};
pub use error::{Error, Result};
pub use fock::{FockOperator, OracleConfig};
pub use gaussian::{make_coherent, make_thermal, make_tmsv, make_tmsv_power, random_pure_probe, GaussianState};
pub use linalg::C64;
pub use optimality::{
    advantage_db, coherent_exponent, modes_required, tmsv_exponent, verify_theorem1, verify_theorem2,
    verify_theorem3, IlluminationParams, VerificationReport,
};
pub use sweep::{Scale, SweepAxis, SweepRow, SweepSpec, SweepValues};
