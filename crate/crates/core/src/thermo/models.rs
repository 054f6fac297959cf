use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    asymptotic_ln_z_components, closed_form_ln_z_components, exact_partition_sum, ThermoConfig,
};
use crate::error::{Error, Result};
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "exact")]
    ExactSum,
    #[serde(rename = "closed")]
    ClosedForm,
    #[serde(rename = "asymptotic")]
    Asymptotic,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::ClosedForm, Method::ExactSum, Method::Asymptotic];

    pub fn name(self) -> &'static str {
        match self {
            Method::ExactSum => "exact",
            Method::ClosedForm => "closed",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "partition method",
                name: s.to_string(),
                available: "asymptotic, closed, exact".to_string(),
            })
    }
}

/// Contribution of one oscillating component. Energies in mc², S and C in k_B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentThermo {
    #[serde(rename = "lnZ")]
    pub ln_z: f64,
    #[serde(rename = "U_over_mc2")]
    pub u: f64,
    #[serde(rename = "F_over_mc2")]
    pub f: f64,
    #[serde(rename = "S_over_kB")]
    pub s: f64,
    #[serde(rename = "C_over_kB")]
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoPoint {
    pub gamma: f64,
    pub delta: f64,
    pub method: Method,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "lnZ")]
    pub ln_z: f64,
    #[serde(rename = "U_over_mc2")]
    pub u_over_mc2: f64,
    #[serde(rename = "U_over_kT")]
    pub u_over_kt: f64,
    #[serde(rename = "F_over_mc2")]
    pub f_over_mc2: f64,
    #[serde(rename = "F_over_kT")]
    pub f_over_kt: f64,
    #[serde(rename = "S_over_kB")]
    pub s_over_kb: f64,
    #[serde(rename = "C_over_kB")]
    pub c_over_kb: f64,
    /// φ₁ and φ₂ contributions; totals are their sums.
    pub components: [ComponentThermo; 2],
    /// Set when successive Richardson differences grow instead of shrink.
    pub derivative_noise: bool,
}

impl ThermoPoint {
    fn from_components(cfg: &ThermoConfig, method: Method, components: [ComponentThermo; 2], derivative_noise: bool) -> Self {
        let [a, b] = components;
        let ln_z = a.ln_z + b.ln_z;
        let u = a.u + b.u;
        let f = a.f + b.f;
        Self {
            gamma: cfg.gamma,
            delta: cfg.delta,
            method,
            z: ln_z.exp(),
            ln_z,
            u_over_mc2: u,
            u_over_kt: u * cfg.gamma,
            f_over_mc2: f,
            f_over_kt: f * cfg.gamma,
            s_over_kb: a.s + b.s,
            c_over_kb: a.c + b.c,
            components,
            derivative_noise,
        }
    }

    /// |S·T − (U − F)| / |U − F|.
    pub fn identity_residual(&self) -> f64 {
        let st = self.s_over_kb / self.gamma;
        let diff = self.u_over_mc2 - self.f_over_mc2;
        (st - diff).abs() / diff.abs()
    }
}

/// One way of obtaining ln Z₁, ln Z₂ and the potentials derived from them.
pub trait PartitionModel: Send + Sync {
    fn method(&self) -> Method;

    fn ln_z_components(&self, cfg: &ThermoConfig) -> Result<[f64; 2]>;

    fn point(&self, cfg: &ThermoConfig) -> Result<ThermoPoint> {
        finite_difference_point(self, cfg)
    }
}

pub struct ClosedFormModel;

impl PartitionModel for ClosedFormModel {
    fn method(&self) -> Method {
        Method::ClosedForm
    }

    fn ln_z_components(&self, cfg: &ThermoConfig) -> Result<[f64; 2]> {
        closed_form_ln_z_components(cfg)
    }
}

pub struct ExactSumModel;

impl PartitionModel for ExactSumModel {
    fn method(&self) -> Method {
        Method::ExactSum
    }

    fn ln_z_components(&self, cfg: &ThermoConfig) -> Result<[f64; 2]> {
        let s = exact_partition_sum(cfg)?;
        Ok([s.z1.value.ln(), s.z2.value.ln()])
    }
}

/// Leading high-temperature behaviour, with potentials in closed form.
pub struct AsymptoticModel;

impl PartitionModel for AsymptoticModel {
    fn method(&self) -> Method {
        Method::Asymptotic
    }

    fn ln_z_components(&self, cfg: &ThermoConfig) -> Result<[f64; 2]> {
        asymptotic_ln_z_components(cfg)
    }

    fn point(&self, cfg: &ThermoConfig) -> Result<ThermoPoint> {
        asymptotic_potentials(cfg)
    }
}

pub fn partition_registry() -> Registry<dyn PartitionModel> {
    let mut reg: Registry<dyn PartitionModel> = Registry::new("partition method");
    let all: [Arc<dyn PartitionModel>; 3] = [
        Arc::new(ClosedFormModel),
        Arc::new(ExactSumModel),
        Arc::new(AsymptoticModel),
    ];
    for m in all {
        reg.register(m.method().name(), m);
    }
    reg
}

pub fn potentials(cfg: &ThermoConfig, method: Method) -> Result<ThermoPoint> {
    partition_registry().get(method.name())?.point(cfg)
}

/// U = 4k_BT per component; F and S with the logarithm
/// ln(k_BT/(mc²(1±δ)^{1/2})), whose sum is 8 ln(k_BT/(mc²(1−δ²)^{1/4})).
pub fn asymptotic_potentials(cfg: &ThermoConfig) -> Result<ThermoPoint> {
    let ln_z = asymptotic_ln_z_components(cfg)?;
    let kt = 1.0 / cfg.gamma;
    let comp = |ln_z: f64, shift: f64| {
        let log = (kt / shift.sqrt()).ln();
        ComponentThermo {
            ln_z,
            u: 4.0 * kt,
            f: -4.0 * kt * log,
            s: 4.0 * (log + 1.0),
            c: 4.0,
        }
    };
    Ok(ThermoPoint::from_components(
        cfg,
        Method::Asymptotic,
        [comp(ln_z[0], 1.0 + cfg.delta), comp(ln_z[1], 1.0 - cfg.delta)],
        false,
    ))
}

/// Relative step of the central differences.
const REL_STEP: f64 = 1e-4;

fn finite_difference_point<M: PartitionModel + ?Sized>(model: &M, cfg: &ThermoConfig) -> Result<ThermoPoint> {
    let g = cfg.gamma;
    let h = g * REL_STEP;
    let at = |x: f64| model.ln_z_components(&ThermoConfig { gamma: x, ..*cfg });
    let center = at(g)?;
    // Offsets h, h/2, h/4 on both sides.
    let mut plus = [[0.0; 2]; 3];
    let mut minus = [[0.0; 2]; 3];
    for (j, step) in [h, 0.5 * h, 0.25 * h].into_iter().enumerate() {
        plus[j] = at(g + step)?;
        minus[j] = at(g - step)?;
    }

    let first = |v: &dyn Fn([f64; 2]) -> f64, j: usize, step: f64| (v(plus[j]) - v(minus[j])) / (2.0 * step);
    let second = |v: &dyn Fn([f64; 2]) -> f64, j: usize, step: f64| {
        (v(plus[j]) - 2.0 * v(center) + v(minus[j])) / (step * step)
    };
    let richardson = |coarse: f64, fine: f64| (4.0 * fine - coarse) / 3.0;

    let mut components = [ComponentThermo {
        ln_z: 0.0,
        u: 0.0,
        f: 0.0,
        s: 0.0,
        c: 0.0,
    }; 2];
    for (i, out) in components.iter_mut().enumerate() {
        let ln_zi = move |c: [f64; 2]| c[i];
        let d_ln_z = richardson(first(&ln_zi, 0, h), first(&ln_zi, 1, 0.5 * h));
        let d2_ln_z = richardson(second(&ln_zi, 0, h), second(&ln_zi, 1, 0.5 * h));
        // F(γ) = −ln Zᵢ/γ needs the abscissa, so differentiate it separately.
        let f_at = |c: [f64; 2], x: f64| -c[i] / x;
        let df = |j: usize, step: f64| (f_at(plus[j], g + step) - f_at(minus[j], g - step)) / (2.0 * step);
        let d_f = richardson(df(0, h), df(1, 0.5 * h));
        *out = ComponentThermo {
            ln_z: center[i],
            u: -d_ln_z,
            f: -center[i] / g,
            s: g * g * d_f,
            c: g * g * d2_ln_z,
        };
    }

    let total = |c: [f64; 2]| c[0] + c[1];
    let d = [first(&total, 0, h), first(&total, 1, 0.5 * h), first(&total, 2, 0.25 * h)];
    let coarse_gap = (d[0] - d[1]).abs();
    let fine_gap = (d[1] - d[2]).abs();
    let noisy = fine_gap > coarse_gap && fine_gap > 1e-8 * d[2].abs();

    Ok(ThermoPoint::from_components(cfg, model.method(), components, noisy))
}
