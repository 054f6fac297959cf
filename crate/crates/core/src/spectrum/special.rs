use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{split_frequencies, Component, OscillatorConfig};
use crate::error::{Error, Result};

const CRITICAL_TOL: f64 = 1e-12;

/// Constraints on the vector components d₁, d₂ or on the field strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecialCase {
    /// d₁ = 0
    D1Zero,
    /// d₂ = 0
    D2Zero,
    /// d₁ = i·d₂
    D1EqID2,
    /// d₁ = −i·d₂
    D1EqMinusID2,
    /// ω̃ = ω
    OmegaTildeEqOmega,
    /// ω̃ = −ω
    OmegaTildeEqMinusOmega,
}

impl SpecialCase {
    pub const ALL: [SpecialCase; 6] = [
        SpecialCase::D1Zero,
        SpecialCase::D2Zero,
        SpecialCase::D1EqID2,
        SpecialCase::D1EqMinusID2,
        SpecialCase::OmegaTildeEqOmega,
        SpecialCase::OmegaTildeEqMinusOmega,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialCase::D1Zero => "d1-zero",
            SpecialCase::D2Zero => "d2-zero",
            SpecialCase::D1EqID2 => "d1-eq-i-d2",
            SpecialCase::D1EqMinusID2 => "d1-eq-minus-i-d2",
            SpecialCase::OmegaTildeEqOmega => "omega-tilde-eq-omega",
            SpecialCase::OmegaTildeEqMinusOmega => "omega-tilde-eq-minus-omega",
        }
    }
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpecialCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpecialCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "special case",
                name: s.to_string(),
                available: SpecialCase::ALL.map(SpecialCase::name).join(", "),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModeBehavior {
    /// Oscillates at ħω_eff/mc² with the given spin projection.
    Oscillating { hbar_omega: f64, spin: i8 },
    /// Oscillation cancelled; continuous free-particle spectrum.
    Free,
    /// Component forced to zero by the constraint.
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentMode {
    pub component: Component,
    pub behavior: ModeBehavior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case: SpecialCase,
    /// Relation the constraint imposes between φ₁ and φ₂.
    pub relation: &'static str,
    pub modes: Vec<ComponentMode>,
    pub oscillation_cancelled: bool,
}

impl CaseSummary {
    /// Frequency of the first oscillating component, as ħω/mc².
    pub fn effective_frequency(&self) -> Option<f64> {
        self.modes.iter().find_map(|m| match m.behavior {
            ModeBehavior::Oscillating { hbar_omega, .. } => Some(hbar_omega),
            _ => None,
        })
    }

    pub fn mode(&self, c: Component) -> Option<&ComponentMode> {
        self.modes.iter().find(|m| m.component == c)
    }

    pub fn surviving(&self) -> Vec<Component> {
        self.modes
            .iter()
            .filter(|m| m.behavior != ModeBehavior::Vanishing)
            .map(|m| m.component)
            .collect()
    }
}

fn oscillating_or_free(hbar_omega: f64, spin: i8) -> ModeBehavior {
    if hbar_omega == 0.0 {
        ModeBehavior::Free
    } else {
        ModeBehavior::Oscillating { hbar_omega, spin }
    }
}

/// Describes what each vector component does under `case`.
pub fn classify_special_case(cfg: &OscillatorConfig, case: SpecialCase) -> Result<CaseSummary> {
    cfg.validate()?;
    let f = split_frequencies(cfg);
    let mode = |component, behavior| ComponentMode { component, behavior };
    let summary = |relation, modes: Vec<ComponentMode>| {
        let oscillation_cancelled = modes.iter().any(|m| m.behavior == ModeBehavior::Free);
        CaseSummary {
            case,
            relation,
            modes,
            oscillation_cancelled,
        }
    };
    let scalar_like = ModeBehavior::Oscillating {
        hbar_omega: f.omega0,
        spin: 0,
    };
    Ok(match case {
        SpecialCase::D1Zero => summary(
            "phi1 = -phi2",
            vec![mode(Component::One, scalar_like), mode(Component::Two, scalar_like)],
        ),
        SpecialCase::D2Zero => summary(
            "phi1 = phi2",
            vec![mode(Component::One, scalar_like), mode(Component::Two, scalar_like)],
        ),
        SpecialCase::D1EqID2 => summary(
            "phi1 = 0",
            vec![
                mode(Component::One, ModeBehavior::Vanishing),
                mode(Component::Two, oscillating_or_free(f.omega2, -1)),
            ],
        ),
        SpecialCase::D1EqMinusID2 => summary(
            "phi2 = 0",
            vec![
                mode(Component::One, oscillating_or_free(f.omega1, 1)),
                mode(Component::Two, ModeBehavior::Vanishing),
            ],
        ),
        SpecialCase::OmegaTildeEqOmega => {
            require_delta(cfg, 1.0, case)?;
            summary(
                "independent",
                vec![
                    mode(
                        Component::One,
                        ModeBehavior::Oscillating {
                            hbar_omega: 2.0 * cfg.hbar_omega,
                            spin: 1,
                        },
                    ),
                    mode(Component::Two, ModeBehavior::Free),
                ],
            )
        }
        SpecialCase::OmegaTildeEqMinusOmega => {
            require_delta(cfg, -1.0, case)?;
            summary(
                "independent",
                vec![
                    mode(
                        Component::Two,
                        ModeBehavior::Oscillating {
                            hbar_omega: 2.0 * cfg.hbar_omega,
                            spin: -1,
                        },
                    ),
                    mode(Component::One, ModeBehavior::Free),
                ],
            )
        }
    })
}

fn require_delta(cfg: &OscillatorConfig, want: f64, case: SpecialCase) -> Result<()> {
    if (cfg.delta - want).abs() > CRITICAL_TOL {
        return Err(Error::InvalidCase {
            case: case.name(),
            reason: format!("requires delta = {want}, got {}", cfg.delta),
        });
    }
    Ok(())
}
