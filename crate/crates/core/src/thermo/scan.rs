use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{potentials, Method, ThermoConfig, ThermoPoint};
use crate::error::{Error, Result};
use crate::spectrum::Component;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ScanOutcome {
    Evaluated(ThermoPoint),
    /// δ ≥ 1: the φ₂ factor has no real bound spectrum; nothing is evaluated.
    Divergent { component: Component, pole_order: u32 },
    Failed { category: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub delta: f64,
    pub outcome: ScanOutcome,
}

impl ScanRow {
    pub fn point(&self) -> Option<&ThermoPoint> {
        match &self.outcome {
            ScanOutcome::Evaluated(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self.outcome, ScanOutcome::Divergent { .. })
    }
}

/// Evaluates the potentials at each δ of `deltas` (in parallel), returning
/// rows ordered by δ. Points with δ ≥ 1 are marked divergent.
pub fn scan_delta(gamma: f64, deltas: &[f64], method: Method) -> Result<Vec<ScanRow>> {
    ThermoConfig::new(gamma, 0.0)?;
    if let Some(bad) = deltas.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
        return Err(Error::domain(format!("delta grid entries must be finite and >= 0, got {bad}")));
    }
    let mut grid = deltas.to_vec();
    grid.sort_by(f64::total_cmp);
    Ok(grid
        .into_par_iter()
        .map(|delta| {
            let outcome = if delta >= 1.0 {
                ScanOutcome::Divergent {
                    component: Component::Two,
                    pole_order: 2,
                }
            } else {
                match potentials(&ThermoConfig { gamma, delta }, method) {
                    Ok(p) => ScanOutcome::Evaluated(p),
                    Err(Error::Divergent { pole_order, .. }) => ScanOutcome::Divergent {
                        component: Component::Two,
                        pole_order,
                    },
                    Err(e) => ScanOutcome::Failed {
                        category: e.category().to_string(),
                        message: e.to_string(),
                    },
                }
            };
            ScanRow { delta, outcome }
        })
        .collect())
}
