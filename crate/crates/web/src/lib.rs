//! Browser bindings: closed-form exponents, sweeps and the Gaussian theorem
//! checks. Every function returns a JSON string.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qillum::optimality::{verify_theorem3, RegimeFlags, DEFAULT_MODE_MARGIN};
use qillum::{
    advantage_db, coherent_exponent, modes_required, tmsv_exponent, verify_theorem1, verify_theorem2,
    IlluminationParams, Result, Scale, SweepAxis, SweepRow, SweepSpec, SweepValues,
};

/// Largest sample count accepted from the page, to keep it responsive.
pub const MAX_SAMPLES: usize = 5000;
pub const MAX_SWEEP_POINTS: usize = 2000;

#[derive(Serialize)]
pub struct Summary {
    pub params: IlluminationParams,
    pub exponent_coherent: f64,
    pub exponent_tmsv: f64,
    pub advantage_db: Option<f64>,
    pub modes_required: Option<u64>,
    pub regime: RegimeFlags,
}

pub fn summary(eta: f64, energy: f64, noise: f64, modes: usize) -> Result<Summary> {
    let p = IlluminationParams::new(eta, energy, noise, modes)?;
    Ok(Summary {
        params: p,
        exponent_coherent: coherent_exponent(&p)?.per_mode,
        exponent_tmsv: tmsv_exponent(&p)?.per_mode,
        advantage_db: advantage_db(&p)?,
        modes_required: modes_required(&p, DEFAULT_MODE_MARGIN)?,
        regime: p.regime(),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn sweep_rows(
    axis: &str,
    start: f64,
    stop: f64,
    count: usize,
    log: bool,
    eta: f64,
    energy: f64,
    noise: f64,
) -> Result<Vec<SweepRow>> {
    if count > MAX_SWEEP_POINTS {
        return Err(qillum::Error::InvalidArgument(format!("at most {MAX_SWEEP_POINTS} points")));
    }
    let spec = SweepSpec {
        axis: axis.parse::<SweepAxis>()?,
        values: SweepValues::Range {
            start,
            stop,
            count,
            scale: if log { Scale::Log } else { Scale::Linear },
        },
        fixed: IlluminationParams {
            eta,
            energy,
            n_b: noise,
            n_signal: 1,
        },
    };
    spec.run(DEFAULT_MODE_MARGIN)
}

pub fn verify_report(theorem: &str, samples: usize, seed: u64, eta: f64, energy: f64, noise: f64) -> Result<String> {
    if samples > MAX_SAMPLES {
        return Err(qillum::Error::InvalidArgument(format!("at most {MAX_SAMPLES} samples in the browser")));
    }
    let p = IlluminationParams::new(eta, energy, noise, 1)?;
    let report = match theorem {
        "1" => verify_theorem1(&p, samples, seed)?,
        "2" => verify_theorem2(&p, samples, seed)?,
        "3" => verify_theorem3(&p, samples, seed)?,
        other => {
            return Err(qillum::Error::InvalidArgument(format!("unknown theorem {other:?}; use 1, 2 or 3")));
        }
    };
    Ok(report.to_json())
}

fn to_js<T: Serialize>(value: Result<T>) -> std::result::Result<String, JsValue> {
    value
        .map(|v| serde_json::to_string(&v).expect("serializable"))
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Per-mode coherent and TMSV exponents, advantage and modes-required estimate.
#[wasm_bindgen]
pub fn exponents(eta: f64, energy: f64, noise: f64, modes: usize) -> std::result::Result<String, JsValue> {
    to_js(summary(eta, energy, noise, modes))
}

/// Rows of a one-parameter sweep; `axis` is `eta`, `E` or `N_B`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    axis: &str,
    start: f64,
    stop: f64,
    count: usize,
    log: bool,
    eta: f64,
    energy: f64,
    noise: f64,
) -> std::result::Result<String, JsValue> {
    to_js(sweep_rows(axis, start, stop, count, log, eta, energy, noise))
}

/// Randomized check of theorem `"1"`, `"2"` or `"3"`.
#[wasm_bindgen]
pub fn verify(theorem: &str, samples: usize, seed: u32, eta: f64, energy: f64, noise: f64) -> std::result::Result<String, JsValue> {
    verify_report(theorem, samples, u64::from(seed), eta, energy, noise).map_err(|e| JsValue::from_str(&e.to_string()))
}
