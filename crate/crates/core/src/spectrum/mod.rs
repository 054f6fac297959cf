//! Split-frequency spectra of the scalar and vector sectors.
//!
//! Energies are measured in units of the rest energy mc² (scaled by
//! [`OscillatorConfig::mass_energy`] on output) and frequencies enter as
//! ħωᵢ/mc². The magnetic field is set through the signed ratio δ = ω̃/ω.

mod degeneracy;
mod models;
mod special;

pub use degeneracy::{degeneracy_slope, fit_degeneracy_slope, EnergyGrid, FittedSlope, Slope};
pub use models::{
    energy_grid, formula_name, formula_registry, LevelFormula, ScalarB, ScalarLevels,
    VectorLevels,
};
pub use special::{classify_special_case, CaseSummary, ComponentMode, ModeBehavior, SpecialCase};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{checked_sqrt, Error, Result};

/// Physical parameters of the oscillator in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorConfig {
    /// Rest energy mc² used to scale reported energies.
    pub mass_energy: f64,
    /// ħω / mc².
    pub hbar_omega: f64,
    /// δ = ω̃/ω; its sign is the sign of qB.
    pub delta: f64,
}

impl OscillatorConfig {
    pub fn new(hbar_omega: f64, delta: f64) -> Result<Self> {
        let cfg = Self {
            mass_energy: 1.0,
            hbar_omega,
            delta,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_mass_energy(mut self, mass_energy: f64) -> Result<Self> {
        self.mass_energy = mass_energy;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar_omega > 0.0 && self.hbar_omega.is_finite()) {
            return Err(Error::domain(format!(
                "oscillator frequency must be positive and finite, got hbar_omega = {}",
                self.hbar_omega
            )));
        }
        if !(self.mass_energy > 0.0 && self.mass_energy.is_finite()) {
            return Err(Error::domain(format!(
                "rest energy must be positive and finite, got {}",
                self.mass_energy
            )));
        }
        if !self.delta.is_finite() {
            return Err(Error::domain("delta must be finite"));
        }
        Ok(())
    }

    /// ħω̃ / mc².
    pub fn hbar_omega_tilde(&self) -> f64 {
        self.delta * self.hbar_omega
    }

    pub fn field_sign(&self) -> FieldSign {
        FieldSign::of(self.delta)
    }

    /// Same configuration with the field reversed.
    pub fn reversed_field(&self) -> Self {
        Self {
            delta: -self.delta,
            ..*self
        }
    }
}

/// Orientation of the magnetic field; zero field counts as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSign {
    Positive,
    Negative,
}

impl FieldSign {
    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            FieldSign::Negative
        } else {
            FieldSign::Positive
        }
    }

    pub fn value(self) -> f64 {
        match self {
            FieldSign::Positive => 1.0,
            FieldSign::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            FieldSign::Positive => FieldSign::Negative,
            FieldSign::Negative => FieldSign::Positive,
        }
    }
}

/// The three field components: the scalar-like b (index 0) and the vector
/// components φ₁, φ₂ carrying spin labels +1 and −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    Zero,
    One,
    Two,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::Zero, Component::One, Component::Two];

    pub fn index(self) -> u8 {
        match self {
            Component::Zero => 0,
            Component::One => 1,
            Component::Two => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            0 => Ok(Component::Zero),
            1 => Ok(Component::One),
            2 => Ok(Component::Two),
            _ => Err(Error::domain(format!("component index must be 0, 1 or 2, got {i}"))),
        }
    }

    /// s₀ = 0, s₁ = +1, s₂ = −1.
    pub fn label_spin(self) -> i8 {
        match self {
            Component::Zero => 0,
            Component::One => 1,
            Component::Two => -1,
        }
    }

    /// Spin projection entering the level formulas. Reversing the field swaps
    /// the roles of φ₁ and φ₂ together with their frequencies, so the label
    /// is multiplied by the field sign.
    pub fn spin(self, field: FieldSign) -> i8 {
        match field {
            FieldSign::Positive => self.label_spin(),
            FieldSign::Negative => -self.label_spin(),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

/// How the orbital term of the scalar spectrum is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum LzConvention {
    /// |l|·ω̃, as the closed-form spectrum is printed.
    #[default]
    AbsL,
    /// l·ω̃, following the signed −2mω̃L_z operator.
    Signed,
}

/// Which frequency a value is expressed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrequencyUnit {
    /// ħωᵢ / mc².
    RestEnergy,
    /// ωᵢ / ω.
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitFrequencies {
    pub unit: FrequencyUnit,
    pub omega0: f64,
    pub omega1: f64,
    pub omega2: f64,
}

impl SplitFrequencies {
    pub fn get(&self, c: Component) -> f64 {
        match c {
            Component::Zero => self.omega0,
            Component::One => self.omega1,
            Component::Two => self.omega2,
        }
    }

    /// Converts to units of ω.
    pub fn relative(&self, cfg: &OscillatorConfig) -> Self {
        match self.unit {
            FrequencyUnit::Omega => *self,
            FrequencyUnit::RestEnergy => Self {
                unit: FrequencyUnit::Omega,
                omega0: self.omega0 / cfg.hbar_omega,
                omega1: self.omega1 / cfg.hbar_omega,
                omega2: self.omega2 / cfg.hbar_omega,
            },
        }
    }
}

/// ω₀ = √(ω² + ω̃²), ω₁ = ω + ω̃, ω₂ = ω − ω̃, as ħωᵢ/mc².
pub fn split_frequencies(cfg: &OscillatorConfig) -> SplitFrequencies {
    let w = cfg.hbar_omega;
    let wt = cfg.hbar_omega_tilde();
    SplitFrequencies {
        unit: FrequencyUnit::RestEnergy,
        omega0: w.hypot(wt),
        omega1: w + wt,
        omega2: w - wt,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: i32,
    pub component: Component,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    /// Energy in units of `mass_energy`-scaled rest energy.
    pub value: f64,
    pub branch: Branch,
    pub qn: QuantumNumbers,
    pub frequency_used: Component,
}

fn level(
    cfg: &OscillatorConfig,
    radicand: f64,
    context: &'static str,
    branch: Branch,
    qn: QuantumNumbers,
) -> Result<EnergyLevel> {
    let root = checked_sqrt(radicand, context)?;
    Ok(EnergyLevel {
        value: branch.sign() * cfg.mass_energy * root,
        branch,
        qn,
        frequency_used: qn.component,
    })
}

fn scalar_radicand(w: f64, wt: f64, w0: f64, n: u32, l: i32, lz: LzConvention) -> f64 {
    let abs_l = f64::from(l.unsigned_abs());
    let orbital = match lz {
        LzConvention::AbsL => abs_l * wt,
        LzConvention::Signed => f64::from(l) * wt,
    };
    1.0 - 2.0 * (orbital + w) + w0 * (4.0 * f64::from(n) + 2.0 * (abs_l + 1.0))
}

/// Scalar-sector energy E = ±mc²√(1 − 2(|l|ħω̃ + ħω)/mc² + (ħω₀/mc²)(4n + 2(|l| + 1))).
pub fn scalar_energy(cfg: &OscillatorConfig, n: u32, l: i32, branch: Branch) -> Result<EnergyLevel> {
    scalar_energy_with(cfg, n, l, branch, LzConvention::AbsL)
}

pub fn scalar_energy_with(
    cfg: &OscillatorConfig,
    n: u32,
    l: i32,
    branch: Branch,
    lz: LzConvention,
) -> Result<EnergyLevel> {
    let f = split_frequencies(cfg);
    let r = scalar_radicand(cfg.hbar_omega, cfg.hbar_omega_tilde(), f.omega0, n, l, lz);
    let qn = QuantumNumbers {
        n,
        l,
        component: Component::Zero,
    };
    level(cfg, r, "scalar spectrum", branch, qn)
}

/// Energy of the vector sector's b component: the scalar spectrum with ω → −ω
/// (ω̃ and ω₀ held fixed).
pub fn scalar_b_component_energy(
    cfg: &OscillatorConfig,
    n: u32,
    l: i32,
    branch: Branch,
) -> Result<EnergyLevel> {
    scalar_b_component_energy_with(cfg, n, l, branch, LzConvention::AbsL)
}

pub fn scalar_b_component_energy_with(
    cfg: &OscillatorConfig,
    n: u32,
    l: i32,
    branch: Branch,
    lz: LzConvention,
) -> Result<EnergyLevel> {
    let f = split_frequencies(cfg);
    let r = scalar_radicand(-cfg.hbar_omega, cfg.hbar_omega_tilde(), f.omega0, n, l, lz);
    let qn = QuantumNumbers {
        n,
        l,
        component: Component::Zero,
    };
    level(cfg, r, "vector-sector b-component spectrum", branch, qn)
}

/// Vector-component energy E = ±mc²√(1 + (ħωᵢ/mc²)(4n + 2|l|(1 − sᵢ) + 2sᵢ)), i ∈ {1, 2}.
pub fn vector_energy(
    cfg: &OscillatorConfig,
    n: u32,
    l: i32,
    component: Component,
    branch: Branch,
) -> Result<EnergyLevel> {
    if component == Component::Zero {
        return Err(Error::domain(
            "vector_energy takes component 1 or 2; use scalar_b_component_energy for b",
        ));
    }
    let w_i = split_frequencies(cfg).get(component);
    let s = f64::from(component.spin(cfg.field_sign()));
    let abs_l = f64::from(l.unsigned_abs());
    let r = 1.0 + w_i * (4.0 * f64::from(n) + 2.0 * abs_l * (1.0 - s) + 2.0 * s);
    let qn = QuantumNumbers { n, l, component };
    level(cfg, r, "vector spectrum", branch, qn)
}

/// Unified split spectrum: component 0 follows the scalar formula, 1 and 2
/// the vector formula.
pub fn split_energy(
    cfg: &OscillatorConfig,
    n: u32,
    l: i32,
    component: Component,
    branch: Branch,
) -> Result<EnergyLevel> {
    match component {
        Component::Zero => scalar_energy(cfg, n, l, branch),
        _ => vector_energy(cfg, n, l, component, branch),
    }
}

/// Positive-branch ε = E/mc² under the fixed convention ω = 2|ω̃|,
/// ħω/mc² = 1, so α₁ = 1 + ½sign(ω̃), α₀ = √5/2, α₂ = 1 − ½sign(ω̃).
pub fn dimensionless_energy(n: u32, l: i32, component: Component, field: FieldSign) -> Result<f64> {
    let cfg = OscillatorConfig::new(1.0, 0.5 * field.value())?;
    Ok(split_energy(&cfg, n, l, component, Branch::Positive)?.value)
}

/// Non-relativistic energy ε = (E² − m²c⁴)/(2mc²).
pub fn nonrelativistic_energy(level: &EnergyLevel, cfg: &OscillatorConfig) -> f64 {
    let m = cfg.mass_energy;
    (level.value * level.value - m * m) / (2.0 * m)
}
