//! Radial eigenfunctions and probability densities.
//!
//! With ξ = r/a (a the Compton wavelength) and αᵢ = ħωᵢ/mc², the
//! eigenfunction of component i is
//!
//! ```text
//! ψ(ξ, θ) = N · (αξ²)^{|l|/2} e^{ilθ} e^{−αξ²/2} L_n^{|l|}(αξ²)
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::registry::Registry;
use crate::spectrum::{split_frequencies, Component, OscillatorConfig};

/// Associated Laguerre polynomial L_n^{(k)}(x) by upward recurrence in n.
pub fn laguerre(n: u32, k: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for m in 2..=n {
        let m = f64::from(m);
        let next = ((2.0 * m - 1.0 + k - x) * cur - (m - 1.0 + k) * prev) / m;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    /// αᵢ = mωᵢa²/ħ.
    pub alpha: f64,
    pub n: u32,
    pub l: i32,
    pub component: Component,
    /// Normalization constant; 1 for the bare eigenfunction.
    pub norm: f64,
}

impl RadialState {
    pub fn new(alpha: f64, n: u32, l: i32, component: Component) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!(
                "frequency parameter alpha must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            alpha,
            n,
            l,
            component,
            norm: 1.0,
        })
    }

    /// State of component `component` with α taken from the split frequency
    /// ħωᵢ/mc² (lengths in Compton wavelengths).
    pub fn from_config(cfg: &OscillatorConfig, n: u32, l: i32, component: Component) -> Result<Self> {
        let alpha = split_frequencies(cfg).get(component);
        Self::new(alpha, n, l, component)
    }

    fn abs_l(&self) -> u32 {
        self.l.unsigned_abs()
    }

    /// Unnormalized radial density in u = αξ²: u^{|l|} e^{−u} [L_n^{|l|}(u)]².
    fn density_in_u(&self, u: f64) -> f64 {
        let lag = laguerre(self.n, f64::from(self.abs_l()), u);
        u.powi(self.abs_l() as i32) * (-u).exp() * lag * lag
    }
}

pub fn eigenfunction(state: &RadialState, xi: f64, theta: f64) -> Complex64 {
    let u = state.alpha * xi * xi;
    let abs_l = state.abs_l();
    let radial = state.norm
        * u.powf(0.5 * f64::from(abs_l))
        * (-0.5 * u).exp()
        * laguerre(state.n, f64::from(abs_l), u);
    Complex64::from_polar(radial, f64::from(state.l) * theta)
}

/// A radial probability density ρ(ξ) for a state.
pub trait RadialDensity: Send + Sync {
    fn name(&self) -> &'static str;

    fn eval(&self, state: &RadialState, xi: f64) -> f64;
}

/// |ψ|² = N²(αξ²)^{|l|} e^{−αξ²} [L_n^{|l|}(αξ²)]².
pub struct SquaredModulus;

impl RadialDensity for SquaredModulus {
    fn name(&self) -> &'static str {
        "squared"
    }

    fn eval(&self, state: &RadialState, xi: f64) -> f64 {
        state.norm * state.norm * state.density_in_u(state.alpha * xi * xi)
    }
}

/// N²(αξ²)^{|l|} e^{−αξ²} L_n^{2|l|}(αξ²), the compact form used for the
/// published density plots. Not a square, so it can go negative for n ≥ 1.
pub struct CompactForm;

impl RadialDensity for CompactForm {
    fn name(&self) -> &'static str {
        "compact"
    }

    fn eval(&self, state: &RadialState, xi: f64) -> f64 {
        let u = state.alpha * xi * xi;
        let abs_l = state.abs_l();
        state.norm
            * state.norm
            * u.powi(abs_l as i32)
            * (-u).exp()
            * laguerre(state.n, f64::from(2 * abs_l), u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum PdfMode {
    #[default]
    SquaredModulus,
    CompactForm,
}

impl PdfMode {
    pub fn density(self) -> &'static dyn RadialDensity {
        match self {
            PdfMode::SquaredModulus => &SquaredModulus,
            PdfMode::CompactForm => &CompactForm,
        }
    }

    pub fn name(self) -> &'static str {
        self.density().name()
    }
}

impl fmt::Display for PdfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PdfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared" => Ok(PdfMode::SquaredModulus),
            "compact" => Ok(PdfMode::CompactForm),
            _ => Err(Error::UnknownStrategy {
                kind: "density mode",
                name: s.to_string(),
                available: "compact, squared".to_string(),
            }),
        }
    }
}

pub fn density_registry() -> Registry<dyn RadialDensity> {
    let mut reg: Registry<dyn RadialDensity> = Registry::new("density mode");
    reg.register("squared", Arc::new(SquaredModulus));
    reg.register("compact", Arc::new(CompactForm));
    reg
}

pub fn pdf(state: &RadialState, xi: f64, mode: PdfMode) -> f64 {
    mode.density().eval(state, xi)
}

/// Samples ρ on `samples` equally spaced points of [0, xi_max], endpoints included.
pub fn sample_pdf(
    state: &RadialState,
    density: &dyn RadialDensity,
    xi_max: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples < 2 || !(xi_max > 0.0) {
        return Err(Error::domain("need samples >= 2 and xi_max > 0"));
    }
    let step = xi_max / (samples - 1) as f64;
    Ok((0..samples)
        .map(|j| {
            let xi = step * j as f64;
            (xi, density.eval(state, xi))
        })
        .collect())
}

fn quad_options() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-13,
        max_intervals: 2000,
    }
}

/// Upper radial cutoff: starts at √((|l| + 4n + 40)/α) and grows until the
/// neglected tail is below 1e-14 of the integral.
fn cutoff_and_integral(state: &RadialState) -> Result<(f64, f64)> {
    let bare = RadialState { norm: 1.0, ..*state };
    let mut u_max = f64::from(state.abs_l()) + 4.0 * f64::from(state.n) + 40.0;
    for _ in 0..50 {
        let xi_max = (u_max / state.alpha).sqrt();
        let q = integrate(
            |xi| 2.0 * PI * xi * SquaredModulus.eval(&bare, xi),
            0.0,
            xi_max,
            &quad_options(),
        )?;
        // Crude majorant: beyond u = 2(|l| + 2n) the density in u decays faster than e^{-u/2}.
        let tail = PI / state.alpha * bare.density_in_u(u_max) * 2.0 * (u_max + 1.0);
        if tail <= 1e-14 * q.value {
            return Ok((xi_max, q.value));
        }
        u_max += 10.0;
    }
    Err(Error::Quadrature {
        achieved: f64::NAN,
        requested: 1e-14,
    })
}

/// ∫|ψ|² dA over the plane for the state as given (including its `norm`).
pub fn norm_integral(state: &RadialState) -> Result<f64> {
    let (_, bare) = cutoff_and_integral(state)?;
    Ok(state.norm * state.norm * bare)
}

/// Returns the state with `norm` set so that ∫|ψ|² dA = 1.
pub fn normalize(state: &RadialState) -> Result<RadialState> {
    let (_, bare) = cutoff_and_integral(state)?;
    Ok(RadialState {
        norm: bare.sqrt().recip(),
        ..*state
    })
}

/// Radius of the density maximum for n = 0: ξ² = |l|/α.
pub fn ground_peak_radius(state: &RadialState) -> f64 {
    (f64::from(state.abs_l()) / state.alpha).sqrt()
}
