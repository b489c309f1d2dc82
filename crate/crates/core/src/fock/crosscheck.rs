//! Side-by-side evaluation of a quantity by covariance formulas and by the
//! Fock oracle.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    apply_attenuator_fock, coherent_cutoff, entropy_fock, exponent_no_memory_fock, exponent_with_memory_fock,
    fock_coherent, fock_thermal, fock_tmsv, thermal_cutoff, OracleConfig,
};
use crate::entropy::{self, check_channel_params};
use crate::error::{Error, Result};
use crate::gaussian::make_thermal;
use crate::linalg::C64;
use crate::optimality::{coherent_exponent, tmsv_conditional_entropy, tmsv_exponent, IlluminationParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `S(thermal(E))`.
    Entropy,
    /// `S(B|A′)` of the attenuated `tmsv(E)`.
    ConditionalEntropy,
    /// Exponent of `tmsv(E)` with the idler kept.
    ExponentWithMemory,
    /// Exponent of `|√E⟩` without memory.
    ExponentNoMemory,
}

impl Quantity {
    pub const ALL: [Quantity; 4] = [
        Quantity::Entropy,
        Quantity::ConditionalEntropy,
        Quantity::ExponentWithMemory,
        Quantity::ExponentNoMemory,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Entropy => "entropy",
            Quantity::ConditionalEntropy => "conditional_entropy",
            Quantity::ExponentWithMemory => "exponent_with_memory",
            Quantity::ExponentNoMemory => "exponent_no_memory",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown quantity {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub quantity: Quantity,
    pub gaussian: f64,
    pub oracle: f64,
    pub gap: f64,
    /// Per-mode cutoffs of the state the oracle diagonalized last.
    pub cutoffs: Vec<usize>,
    pub trace_deficit: f64,
}

/// Evaluates `quantity` at `p` (single signal mode) both ways. For
/// [`Quantity::Entropy`] only `p.energy` is used.
pub fn gaussian_crosscheck(quantity: Quantity, p: &IlluminationParams, config: &OracleConfig) -> Result<CrossCheck> {
    p.validate()?;
    let p = IlluminationParams { n_signal: 1, ..*p };
    let tol = config.deficit_tol;
    let (gaussian, oracle, cutoffs, trace_deficit) = match quantity {
        Quantity::Entropy => {
            let d = thermal_cutoff(p.energy, tol);
            config.check_dim(d)?;
            let rho = fock_thermal(p.energy, d)?;
            (
                entropy::entropy(&make_thermal(1, p.energy)?)?,
                entropy_fock(&rho),
                vec![d],
                rho.trace_deficit(),
            )
        }
        Quantity::ConditionalEntropy => {
            check_channel_params(p.eta, p.n_b)?;
            let d = thermal_cutoff(p.energy, tol);
            let d_env = thermal_cutoff(p.n_b, tol);
            config.check_dim(d * (d + d_env - 1))?;
            let out = apply_attenuator_fock(&fock_tmsv(p.energy, d)?, 0, p.eta, p.n_b, d_env)?;
            let oracle = entropy_fock(&out) - entropy_fock(&out.partial_trace(&[1])?);
            (
                tmsv_conditional_entropy(&p)?,
                oracle,
                out.mode_dims().to_vec(),
                out.trace_deficit(),
            )
        }
        Quantity::ExponentWithMemory => {
            let d = thermal_cutoff(p.energy, tol);
            config.check_dim(d * d)?;
            let e = exponent_with_memory_fock(&fock_tmsv(p.energy, d)?, 0, p.eta, p.n_b, config)?;
            (tmsv_exponent(&p)?.total, e.value, e.cutoffs, e.trace_deficit)
        }
        Quantity::ExponentNoMemory => {
            let alpha = C64::new(p.energy.sqrt(), 0.0);
            let d = coherent_cutoff(alpha, tol);
            config.check_dim(d)?;
            let e = exponent_no_memory_fock(&fock_coherent(alpha, d)?, p.eta, p.n_b, config)?;
            (coherent_exponent(&p)?.total, e.value, e.cutoffs, e.trace_deficit)
        }
    };
    Ok(CrossCheck {
        quantity,
        gaussian,
        oracle,
        gap: (gaussian - oracle).abs(),
        cutoffs,
        trace_deficit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eta: f64, e: f64, nb: f64) -> IlluminationParams {
        IlluminationParams::new(eta, e, nb, 1).unwrap()
    }

    #[test]
    fn thermal_entropy_gap() {
        let c = gaussian_crosscheck(Quantity::Entropy, &params(0.3, 1.0, 0.5), &OracleConfig::default()).unwrap();
        assert!(c.gap < 1e-6, "{c:?}");
    }

    #[test]
    fn all_quantities_agree_at_desk_scale() {
        let cfg = OracleConfig::default();
        for q in Quantity::ALL {
            let c = gaussian_crosscheck(q, &params(0.3, 0.2, 0.5), &cfg).unwrap();
            assert!(c.gap < 1e-4, "{c:?}");
        }
    }

    #[test]
    fn bright_background_is_infeasible() {
        let err = gaussian_crosscheck(Quantity::ExponentWithMemory, &params(0.3, 0.2, 50.0), &OracleConfig::default())
            .unwrap_err();
        assert!(err.is_cutoff_infeasible());
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.as_str().parse::<Quantity>().unwrap(), q);
        }
        assert!("nope".parse::<Quantity>().is_err());
    }
}
