use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{split_frequencies, OscillatorConfig};
use crate::error::{Error, Result};

/// Slope dl/dn of a constant-energy line. Vertical lines are a distinct
/// variant and serialize as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    Infinite,
}

impl Slope {
    pub fn finite(self) -> Option<f64> {
        match self {
            Slope::Finite(s) => Some(s),
            Slope::Infinite => None,
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Slope::Finite(v) => s.serialize_f64(*v),
            Slope::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Slope::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Slope::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("invalid slope '{s}'"))),
        }
    }
}

/// Analytic slope of the degeneracy lines in the (n, l ≥ 0) plane for a
/// given spin projection: −2/(1 − ω̃/ω₀) for s = 0, −2/(1 − s) otherwise.
///
/// The projection s = +1 is carried by frequency ω + |ω̃| and s = −1 by
/// ω − |ω̃|; a vanishing carrier frequency is a domain error.
pub fn degeneracy_slope(spin: i8, cfg: &OscillatorConfig) -> Result<Slope> {
    let f = split_frequencies(cfg);
    let wt = cfg.hbar_omega_tilde();
    match spin {
        0 => Ok(Slope::Finite(-2.0 / (1.0 - wt / f.omega0))),
        1 | -1 => {
            let carrier = cfg.hbar_omega + f64::from(spin) * wt.abs();
            if carrier == 0.0 {
                return Err(Error::domain(format!(
                    "frequency carrying spin projection {spin} vanishes (|delta| = 1)"
                )));
            }
            if spin == 1 {
                Ok(Slope::Infinite)
            } else {
                Ok(Slope::Finite(-1.0))
            }
        }
        _ => Err(Error::domain(format!("spin projection must be 0 or ±1, got {spin}"))),
    }
}

/// Energies on a rectangular (n, l) grid, n-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGrid {
    l_min: i32,
    n_count: usize,
    l_count: usize,
    values: Vec<f64>,
}

impl EnergyGrid {
    pub fn from_rows(l_min: i32, rows: Vec<Vec<f64>>) -> Self {
        let n_count = rows.len();
        let l_count = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == l_count), "ragged energy grid");
        Self {
            l_min,
            n_count,
            l_count,
            values: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n_max(&self) -> u32 {
        self.n_count as u32 - 1
    }

    pub fn l_min(&self) -> i32 {
        self.l_min
    }

    pub fn l_max(&self) -> i32 {
        self.l_min + self.l_count as i32 - 1
    }

    pub fn get(&self, n: u32, l: i32) -> f64 {
        let j = (l - self.l_min) as usize;
        self.values[n as usize * self.l_count + j]
    }

    /// `(n, l, value)` triples in n-major order.
    pub fn points(&self) -> impl Iterator<Item = (u32, i32, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &v)| {
            let n = (k / self.l_count) as u32;
            let l = self.l_min + (k % self.l_count) as i32;
            (n, l, v)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedSlope {
    pub slope: Slope,
    /// Contour points used in the least-squares fit (0 for vertical contours).
    pub points: usize,
    /// Energy level of the traced contour.
    pub level: f64,
}

/// Traces one constant-energy contour through a grid with l ≥ 0 and fits its
/// slope dl/dn by least squares.
///
/// The level is the energy at (n = 0, l ≈ 0.6·l_max). Crossings along l are
/// located by linear interpolation in ε², which is affine in (n, |l|) for all
/// the closed-form spectra. A grid whose rows do not vary with l has vertical
/// contours and yields [`Slope::Infinite`].
pub fn fit_degeneracy_slope(grid: &EnergyGrid) -> Result<FittedSlope> {
    if grid.l_min() < 0 {
        return Err(Error::domain("slope fitting expects a grid with l >= 0"));
    }
    let l_lo = grid.l_min();
    let l_hi = grid.l_max();
    if l_hi - l_lo < 2 {
        return Err(Error::domain("slope fitting needs at least three l columns"));
    }

    let flat_in_l = (0..=grid.n_max()).all(|n| {
        let base = grid.get(n, l_lo);
        (l_lo..=l_hi).all(|l| (grid.get(n, l) - base).abs() <= 1e-12 * base.abs().max(1.0))
    });
    if flat_in_l {
        return Ok(FittedSlope {
            slope: Slope::Infinite,
            points: 0,
            level: grid.get(0, l_lo),
        });
    }

    let l_ref = (l_lo + ((l_hi - l_lo) as f64 * 0.6).round() as i32).max(l_lo + 1);
    let level = grid.get(0, l_ref);
    let target = level * level;

    let mut pts = Vec::new();
    for n in 0..=grid.n_max() {
        for l in l_lo..l_hi {
            let a = grid.get(n, l).powi(2) - target;
            let b = grid.get(n, l + 1).powi(2) - target;
            if a == b {
                continue;
            }
            if a == 0.0 || a * b < 0.0 {
                pts.push((f64::from(n), f64::from(l) + a / (a - b)));
                break;
            }
        }
    }
    if pts.len() < 2 {
        return Err(Error::domain(format!(
            "contour at level {level} crosses only {} grid rows",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(FittedSlope {
        slope: Slope::Finite(sxy / sxx),
        points: pts.len(),
        level,
    })
}
