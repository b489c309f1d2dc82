//! One-dimensional parameter sweeps over the closed-form exponents.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimality::{advantage_db, coherent_exponent, modes_required, tmsv_exponent, IlluminationParams};
use crate::parallel::map_indexed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "E")]
    Energy,
    #[serde(rename = "N_B")]
    Noise,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Eta => "eta",
            SweepAxis::Energy => "E",
            SweepAxis::Noise => "N_B",
        }
    }

    fn set(self, p: &IlluminationParams, value: f64) -> IlluminationParams {
        let mut q = *p;
        match self {
            SweepAxis::Eta => q.eta = value,
            SweepAxis::Energy => q.energy = value,
            SweepAxis::Noise => q.n_b = value,
        }
        q
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eta" => Ok(SweepAxis::Eta),
            "E" | "energy" => Ok(SweepAxis::Energy),
            "N_B" | "noise" => Ok(SweepAxis::Noise),
            _ => Err(Error::invalid(format!("unknown sweep axis {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepValues {
    List(Vec<f64>),
    Range {
        start: f64,
        stop: f64,
        count: usize,
        scale: Scale,
    },
}

impl SweepValues {
    pub fn expand(&self) -> Result<Vec<f64>> {
        match self {
            SweepValues::List(v) => Ok(v.clone()),
            &SweepValues::Range {
                start,
                stop,
                count,
                scale,
            } => {
                if count == 0 {
                    return Err(Error::invalid("sweep needs at least one point"));
                }
                if !start.is_finite() || !stop.is_finite() {
                    return Err(Error::invalid("sweep bounds must be finite"));
                }
                if count == 1 {
                    return Ok(vec![start]);
                }
                let step = |i: usize| i as f64 / (count - 1) as f64;
                match scale {
                    Scale::Linear => Ok((0..count).map(|i| start + (stop - start) * step(i)).collect()),
                    Scale::Log => {
                        if !(start > 0.0 && stop > 0.0) {
                            return Err(Error::invalid("log sweep needs positive bounds"));
                        }
                        let (a, b) = (start.ln(), stop.ln());
                        Ok((0..count)
                            .map(|i| match i {
                                0 => start,
                                _ if i == count - 1 => stop,
                                _ => (a + (b - a) * step(i)).exp(),
                            })
                            .collect())
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: SweepValues,
    /// The swept field of `fixed` is ignored.
    pub fixed: IlluminationParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eta: f64,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "N_B")]
    pub n_b: f64,
    pub exponent_coherent: f64,
    pub exponent_tmsv: f64,
    pub advantage_db: Option<f64>,
    pub modes_required: Option<u64>,
}

impl SweepSpec {
    /// Expanded axis values after checking they are nonempty, strictly monotone
    /// and valid parameters.
    pub fn points(&self) -> Result<Vec<f64>> {
        let values = self.values.expand()?;
        if values.is_empty() {
            return Err(Error::invalid("sweep has no values"));
        }
        if values.len() > 1 {
            let up = values[1] > values[0];
            if values.windows(2).any(|w| if up { w[1] <= w[0] } else { w[1] >= w[0] }) {
                return Err(Error::invalid("sweep values must be strictly monotone"));
            }
        }
        for &v in &values {
            self.axis.set(&self.fixed, v).validate()?;
        }
        Ok(values)
    }

    /// One row per axis value, in input order. Exponents are per mode.
    pub fn run(&self, margin: f64) -> Result<Vec<SweepRow>> {
        let values = self.points()?;
        map_indexed(values.len(), |i| {
            let p = self.axis.set(&self.fixed, values[i]);
            Ok(SweepRow {
                eta: p.eta,
                energy: p.energy,
                n_b: p.n_b,
                exponent_coherent: coherent_exponent(&p)?.per_mode,
                exponent_tmsv: tmsv_exponent(&p)?.per_mode,
                advantage_db: advantage_db(&p)?,
                modes_required: modes_required(&p, margin)?,
            })
        })
        .into_iter()
        .collect()
    }
}
