//! Canonical ensemble of the vector sector at ħω/mc² = 1/2.
//!
//! Temperatures enter through γ = mc²/(k_B T). The two oscillating
//! components contribute independent factors, Z = Z₁·Z₂, with levels
//!
//! ```text
//! y₁(n)² = 2(1+δ)n + 2 + δ      weight 2n
//! y₂(k)² = 2(1−δ)k + δ          weight 2(k+1)
//! ```

mod euler_maclaurin;
mod models;
mod scan;

pub use euler_maclaurin::{bernoulli, euler_maclaurin, euler_maclaurin_with, EulerMaclaurin, EulerMaclaurinOptions};
pub use models::{
    asymptotic_potentials, partition_registry, potentials, AsymptoticModel, ClosedFormModel,
    ComponentThermo, ExactSumModel, Method, PartitionModel, ThermoPoint,
};
pub use scan::{scan_delta, ScanOutcome, ScanRow};

use serde::{Deserialize, Serialize};

use crate::error::{checked_sqrt, Error, Result};

/// Hard cap on the number of terms of one exact partition sum.
pub const SERIES_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoConfig {
    /// γ = mc²/(k_B T).
    pub gamma: f64,
    /// δ = ω̃/ω ≥ 0.
    pub delta: f64,
}

impl ThermoConfig {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        let cfg = Self { gamma, delta };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::domain(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::domain(format!(
                "delta must be finite and non-negative, got {}",
                self.delta
            )));
        }
        Ok(())
    }

    fn require_bound(&self) -> Result<()> {
        self.validate()?;
        if self.delta >= 1.0 {
            return Err(Error::Divergent {
                delta: self.delta,
                pole_order: 2,
            });
        }
        Ok(())
    }
}

/// The two partition-sum ladders as (a, b, c₁, c₀): level √(a·k + b), weight c₁k + c₀.
fn ladder(component: usize, delta: f64) -> (f64, f64, f64, f64) {
    if component == 0 {
        (2.0 * (1.0 + delta), 2.0 + delta, 2.0, 0.0)
    } else {
        (2.0 * (1.0 - delta), delta, 2.0, 2.0)
    }
}

/// y₁(n) = √(2(1+δ)n + 2 + δ), in units of mc².
pub fn level_value_1(n: u64, delta: f64) -> Result<f64> {
    let (a, b, _, _) = ladder(0, delta);
    checked_sqrt(a * n as f64 + b, "level y1")
}

/// y₂(k) = √(2(1−δ)k + δ), with k = n₂ + |l₂|.
pub fn level_value_2(k: u64, delta: f64) -> Result<f64> {
    let (a, b, _, _) = ladder(1, delta);
    checked_sqrt(a * k as f64 + b, "level y2")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: u64,
    /// Upper bound on the neglected tail.
    pub tail_bound: f64,
    /// Index of the largest summand.
    pub peak: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSums {
    pub z1: SeriesSum,
    pub z2: SeriesSum,
    pub z: f64,
}

/// ∫_U^∞ u^k e^{−γu} du = e^{−γU} Σ_{j≤k} k!/j! · U^j / γ^{k−j+1}.
fn upper_gamma_integral(k: u32, gamma: f64, u: f64) -> f64 {
    let mut sum = 0.0;
    let mut coeff = 1.0; // k!/j!
    for j in (0..=k).rev() {
        sum += coeff * u.powi(j as i32) / gamma.powi((k - j + 1) as i32);
        coeff *= f64::from(j.max(1));
    }
    (-gamma * u).exp() * sum
}

/// ∫_X^∞ (c₁x + c₀) e^{−γ√(ax+b)} dx. Dominates the tail of the sum past X
/// once the summand is decreasing.
fn tail_integral(gamma: f64, a: f64, b: f64, c1: f64, c0: f64, x: f64) -> f64 {
    let u = (a * x + b).sqrt();
    let cubic = c1 / a;
    let linear = c0 - c1 * b / a;
    2.0 / a * (cubic * upper_gamma_integral(3, gamma, u) + linear * upper_gamma_integral(1, gamma, u))
}

fn ladder_sum(gamma: f64, (a, b, c1, c0): (f64, f64, f64, f64)) -> Result<SeriesSum> {
    // Neumaier compensated summation.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut prev = f64::NEG_INFINITY;
    let mut past_peak = false;
    let mut peak = 0;
    let mut k: u64 = 0;
    while k < SERIES_CAP {
        let x = k as f64;
        let y = (a * x + b).sqrt();
        let term = (c1 * x + c0) * (-gamma * y).exp();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if !past_peak {
            if term < prev {
                past_peak = true;
            } else {
                peak = k;
            }
        }
        prev = term;
        k += 1;
        let partial = sum + comp;
        if past_peak && term <= 1e-14 * partial {
            let tail_bound = tail_integral(gamma, a, b, c1, c0, x);
            if tail_bound <= 1e-13 * partial {
                return Ok(SeriesSum {
                    value: partial,
                    terms: k,
                    tail_bound,
                    peak,
                });
            }
        }
    }
    Err(Error::SeriesCap {
        cap: SERIES_CAP,
        partial: sum + comp,
    })
}

/// Z₁ = 2Σ n e^{−γy₁(n)}, Z₂ = 2Σ (k+1) e^{−γy₂(k)}, summed term by term
/// until a rigorous bound on the remaining tail is below 1e-13 of the total.
pub fn exact_partition_sum(cfg: &ThermoConfig) -> Result<PartitionSums> {
    cfg.require_bound()?;
    let z1 = ladder_sum(cfg.gamma, ladder(0, cfg.delta))?;
    let z2 = ladder_sum(cfg.gamma, ladder(1, cfg.delta))?;
    Ok(PartitionSums {
        z1,
        z2,
        z: z1.value * z2.value,
    })
}

/// ∫₀^∞ x e^{−γ√(ax+b)} dx = 4e^{−γ√b}(bγ² + 3√bγ + 3)/(a²γ⁴).
pub fn integral_x(a: f64, b: f64, gamma: f64) -> f64 {
    let sb = b.sqrt();
    4.0 * (-gamma * sb).exp() * (b * gamma * gamma + 3.0 * sb * gamma + 3.0) / (a * a * gamma.powi(4))
}

/// ∫₀^∞ (x+1) e^{−γ√(ax+b)} dx
/// = 2e^{−γ√b}(√bγ(aγ² + 6) + aγ² + 2bγ² + 6)/(a²γ⁴).
pub fn integral_x_plus_1(a: f64, b: f64, gamma: f64) -> f64 {
    let sb = b.sqrt();
    let g2 = gamma * gamma;
    2.0 * (-gamma * sb).exp() * (sb * gamma * (a * g2 + 6.0) + a * g2 + 2.0 * b * g2 + 6.0)
        / (a * a * gamma.powi(4))
}

/// ln of the two high-temperature factors exactly as commonly quoted:
///
/// ```text
/// Z₁ ≈ 2e^{−γ√(2+δ)}((2+δ)γ² + 3√(2+δ)γ + 3)/((1+δ)²γ⁴)
/// Z₂ ≈ e^{−γ√δ}(√δγ((1−δ)γ² + 6) + (1−δ)γ² + 2δγ² + 6)/((1−δ)²γ⁴)
/// ```
///
/// The second factor's (1−δ)γ² differs from the 2(1−δ)γ² that the integral
/// itself produces; see [`closed_form_z_from_integrals`].
pub fn closed_form_ln_z_components(cfg: &ThermoConfig) -> Result<[f64; 2]> {
    cfg.require_bound()?;
    let (g, d) = (cfg.gamma, cfg.delta);
    let g2 = g * g;
    let s1 = (2.0 + d).sqrt();
    let sd = d.sqrt();
    let ln_g4 = 4.0 * g.ln();
    let ln1 = 2f64.ln() - g * s1 + ((2.0 + d) * g2 + 3.0 * s1 * g + 3.0).ln()
        - 2.0 * (1.0 + d).ln()
        - ln_g4;
    let ln2 = -g * sd + (sd * g * ((1.0 - d) * g2 + 6.0) + (1.0 - d) * g2 + 2.0 * d * g2 + 6.0).ln()
        - 2.0 * (1.0 - d).ln()
        - ln_g4;
    Ok([ln1, ln2])
}

pub fn closed_form_z(cfg: &ThermoConfig) -> Result<f64> {
    let [a, b] = closed_form_ln_z_components(cfg)?;
    Ok((a + b).exp())
}

/// Z with each factor taken as 2·(integral) of its summand, without the
/// printed simplification of the second factor.
pub fn closed_form_z_from_integrals(cfg: &ThermoConfig) -> Result<f64> {
    cfg.require_bound()?;
    let (a1, b1, _, _) = ladder(0, cfg.delta);
    let (a2, b2, _, _) = ladder(1, cfg.delta);
    Ok(2.0 * integral_x(a1, b1, cfg.gamma) * 2.0 * integral_x_plus_1(a2, b2, cfg.gamma))
}

/// Leading high-temperature factors: Z₁ ≈ 6/((1+δ)²γ⁴), Z₂ ≈ 6/((1−δ)²γ⁴).
pub fn asymptotic_ln_z_components(cfg: &ThermoConfig) -> Result<[f64; 2]> {
    cfg.require_bound()?;
    let ln_g4 = 4.0 * cfg.gamma.ln();
    Ok([
        6f64.ln() - 2.0 * (1.0 + cfg.delta).ln() - ln_g4,
        6f64.ln() - 2.0 * (1.0 - cfg.delta).ln() - ln_g4,
    ])
}
