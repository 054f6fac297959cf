use std::sync::Arc;

use rayon::prelude::*;

use super::{
    scalar_b_component_energy_with, scalar_energy_with, vector_energy, Branch, Component,
    EnergyGrid, EnergyLevel, LzConvention, OscillatorConfig,
};
use crate::algebra::Sector;
use crate::error::{Error, Result};
use crate::registry::Registry;

/// A closed-form energy spectrum for one field component.
pub trait LevelFormula: Send + Sync {
    fn name(&self) -> &'static str;

    fn component(&self) -> Component;

    fn energy(
        &self,
        cfg: &OscillatorConfig,
        n: u32,
        l: i32,
        branch: Branch,
        lz: LzConvention,
    ) -> Result<EnergyLevel>;
}

/// Scalar sector (4×4 representation).
pub struct ScalarLevels;

impl LevelFormula for ScalarLevels {
    fn name(&self) -> &'static str {
        "scalar"
    }

    fn component(&self) -> Component {
        Component::Zero
    }

    fn energy(
        &self,
        cfg: &OscillatorConfig,
        n: u32,
        l: i32,
        branch: Branch,
        lz: LzConvention,
    ) -> Result<EnergyLevel> {
        scalar_energy_with(cfg, n, l, branch, lz)
    }
}

/// The b component of the vector sector.
pub struct ScalarB;

impl LevelFormula for ScalarB {
    fn name(&self) -> &'static str {
        "vector-b"
    }

    fn component(&self) -> Component {
        Component::Zero
    }

    fn energy(
        &self,
        cfg: &OscillatorConfig,
        n: u32,
        l: i32,
        branch: Branch,
        lz: LzConvention,
    ) -> Result<EnergyLevel> {
        scalar_b_component_energy_with(cfg, n, l, branch, lz)
    }
}

/// φ₁ or φ₂ of the vector sector. The L_z convention does not enter here.
pub struct VectorLevels(pub Component);

impl LevelFormula for VectorLevels {
    fn name(&self) -> &'static str {
        match self.0 {
            Component::One => "vector-1",
            Component::Two => "vector-2",
            Component::Zero => "vector-b",
        }
    }

    fn component(&self) -> Component {
        self.0
    }

    fn energy(
        &self,
        cfg: &OscillatorConfig,
        n: u32,
        l: i32,
        branch: Branch,
        _lz: LzConvention,
    ) -> Result<EnergyLevel> {
        vector_energy(cfg, n, l, self.0, branch)
    }
}

pub fn formula_registry() -> Registry<dyn LevelFormula> {
    let mut reg: Registry<dyn LevelFormula> = Registry::new("level formula");
    let all: [Arc<dyn LevelFormula>; 4] = [
        Arc::new(ScalarLevels),
        Arc::new(ScalarB),
        Arc::new(VectorLevels(Component::One)),
        Arc::new(VectorLevels(Component::Two)),
    ];
    for f in all {
        reg.register(f.name(), f);
    }
    reg
}

/// Registry key for a (sector, component) pair.
pub fn formula_name(sector: Sector, component: Component) -> Result<&'static str> {
    match (sector, component) {
        (Sector::Scalar, Component::Zero) => Ok("scalar"),
        (Sector::Scalar, c) => Err(Error::domain(format!(
            "the scalar sector only has component 0, got {c}"
        ))),
        (Sector::Vector, Component::Zero) => Ok("vector-b"),
        (Sector::Vector, Component::One) => Ok("vector-1"),
        (Sector::Vector, Component::Two) => Ok("vector-2"),
    }
}

/// Evaluates `formula` on 0 ≤ n ≤ n_max, l_min ≤ l ≤ l_max (n-major order).
/// Points are computed in parallel; the result does not depend on scheduling.
pub fn energy_grid(
    formula: &dyn LevelFormula,
    cfg: &OscillatorConfig,
    n_max: u32,
    l_range: (i32, i32),
    branch: Branch,
    lz: LzConvention,
) -> Result<EnergyGrid> {
    let (l_min, l_max) = l_range;
    if l_min > l_max {
        return Err(Error::domain(format!("empty l range {l_min}..={l_max}")));
    }
    let rows: Vec<Vec<f64>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            (l_min..=l_max)
                .map(|l| formula.energy(cfg, n, l, branch, lz).map(|e| e.value))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(EnergyGrid::from_rows(l_min, rows))
}
