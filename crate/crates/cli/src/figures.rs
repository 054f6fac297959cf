use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use dkpo_core::eigenfunctions::{density_registry, normalize, RadialState};
use dkpo_core::spectrum::{
    degeneracy_slope, energy_grid, fit_degeneracy_slope, formula_name, formula_registry, Branch,
    Component, LzConvention, OscillatorConfig, Slope,
};
use dkpo_core::thermo::{potentials, scan_delta, Method, ThermoConfig};
use dkpo_core::Error;

use crate::commands::{linspace, report_failures, ScanCsvRow};
use crate::output::{csv_bytes, round_sig};
use crate::{CliError, Ctx, FigArgs, Figure};

const CONVENTION_TOL: f64 = 1e-12;

fn require(name: &str, what: &str, got: f64, want: f64) -> Result<(), CliError> {
    if (got - want).abs() > CONVENTION_TOL {
        return Err(Error::Domain(format!(
            "figure {name} uses the convention {what} = {want}, got {got}"
        ))
        .into());
    }
    Ok(())
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes)?;
    println!("{}", path.display());
    Ok(path)
}

pub fn fig(ctx: &Ctx, args: &FigArgs) -> Result<(), CliError> {
    fs::create_dir_all(&args.out_dir)?;
    match args.figure {
        Figure::F2 => fig2(ctx, args),
        Figure::F3 => fig3(ctx, args),
        Figure::F4 => fig4(ctx, args),
    }
}

/// ω = 2|ω̃| and ħω/mc² = 1, so δ = ±1/2.
fn split_convention(name: &str, args: &FigArgs) -> Result<OscillatorConfig, CliError> {
    let hbar_omega = args.hbar_omega.unwrap_or(1.0);
    let delta = args.delta.unwrap_or(0.5);
    require(name, "hbar_omega/mc^2", hbar_omega, 1.0)?;
    require(name, "|delta| (omega = 2|omega_tilde|)", delta.abs(), 0.5)?;
    Ok(OscillatorConfig::new(hbar_omega, delta)?)
}

#[derive(Serialize)]
struct DensityRow {
    xi: f64,
    rho0: f64,
    rho1: f64,
    rho2: f64,
}

fn fig2(ctx: &Ctx, args: &FigArgs) -> Result<(), CliError> {
    let cfg = split_convention("F2", args)?;
    let density = density_registry().get(&args.mode)?;
    if args.samples < 2 || !(args.xi_max > 0.0) {
        return Err(Error::Domain("need samples >= 2 and xi_max > 0".into()).into());
    }
    let step = args.xi_max / (args.samples - 1) as f64;
    for n in 0..=2 {
        let state = |c| RadialState::from_config(&cfg, n, 1, c).and_then(|s| normalize(&s));
        let (s0, s1, s2) = (
            state(Component::Zero)?,
            state(Component::One)?,
            state(Component::Two)?,
        );
        let r = |x| round_sig(x, ctx.digits);
        let rows: Vec<DensityRow> = (0..args.samples)
            .map(|j| {
                let xi = step * j as f64;
                DensityRow {
                    xi: r(xi),
                    rho0: r(density.eval(&s0, xi)),
                    rho1: r(density.eval(&s1, xi)),
                    rho2: r(density.eval(&s2, xi)),
                }
            })
            .collect();
        write(&args.out_dir, &format!("fig2_n{n}.csv"), &csv_bytes(&rows)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GridRow {
    n: u32,
    l: i32,
    epsilon: f64,
}

#[derive(Serialize)]
struct SlopeRow {
    i: u8,
    spin: i8,
    analytic_slope: Slope,
    fitted_slope: Slope,
    contour_points: usize,
    level: f64,
}

fn rounded_slope(s: Slope, digits: u8) -> Slope {
    match s {
        Slope::Finite(v) => Slope::Finite(round_sig(v, digits)),
        Slope::Infinite => Slope::Infinite,
    }
}

fn fig3(ctx: &Ctx, args: &FigArgs) -> Result<(), CliError> {
    let cfg = split_convention("F3", args)?;
    if args.l_max < 2 {
        return Err(Error::Domain("figure F3 needs l_max >= 2".into()).into());
    }
    let reg = formula_registry();
    let field = cfg.field_sign();
    let mut slopes = Vec::new();
    for c in Component::ALL {
        let sector = if c == Component::Zero {
            dkpo_core::algebra::Sector::Scalar
        } else {
            dkpo_core::algebra::Sector::Vector
        };
        let formula = reg.get(formula_name(sector, c)?)?;
        let grid = energy_grid(
            &*formula,
            &cfg,
            args.n_max,
            (0, args.l_max),
            Branch::Positive,
            LzConvention::AbsL,
        )?;
        let rows: Vec<GridRow> = grid
            .points()
            .map(|(n, l, e)| GridRow {
                n,
                l,
                epsilon: round_sig(e, ctx.digits),
            })
            .collect();
        write(&args.out_dir, &format!("fig3_i{}.csv", c.index()), &csv_bytes(&rows)?)?;

        let spin = c.spin(field);
        let fit = fit_degeneracy_slope(&grid)?;
        slopes.push(SlopeRow {
            i: c.index(),
            spin,
            analytic_slope: rounded_slope(degeneracy_slope(spin, &cfg)?, ctx.digits),
            fitted_slope: rounded_slope(fit.slope, ctx.digits),
            contour_points: fit.points,
            level: round_sig(fit.level, ctx.digits),
        });
    }
    write(&args.out_dir, "fig3_slopes.csv", &csv_bytes(&slopes)?)?;
    Ok(())
}

#[derive(Serialize)]
struct TemperatureRow {
    delta: f64,
    #[serde(rename = "kT_over_mc2")]
    kt_over_mc2: f64,
    #[serde(rename = "U_over_mc2")]
    u_over_mc2: f64,
    #[serde(rename = "S_over_kB")]
    s_over_kb: f64,
    #[serde(rename = "C_over_kB")]
    c_over_kb: f64,
}

fn fig4(ctx: &Ctx, args: &FigArgs) -> Result<(), CliError> {
    require("F4", "hbar_omega/mc^2", args.hbar_omega.unwrap_or(0.5), 0.5)?;

    let grid = linspace(0.0, args.delta_max, args.steps)?;
    let rows = scan_delta(args.gamma, &grid, Method::ClosedForm)?;
    report_failures(&rows);
    let table: Vec<ScanCsvRow> = rows
        .iter()
        .map(|r| ScanCsvRow::new(r, Method::ClosedForm.name(), ctx.digits))
        .collect();
    write(&args.out_dir, "fig4_delta.csv", &csv_bytes(&table)?)?;

    // kT/mc² on a log grid from 1 to 100.
    let temps: Vec<f64> = (0..=100).map(|j| 10f64.powf(j as f64 / 50.0)).collect();
    let mut curves = Vec::new();
    for &d in &args.delta_list {
        let r = |x| round_sig(x, ctx.digits);
        let pts = temps
            .par_iter()
            .map(|&kt| {
                let p = potentials(&ThermoConfig::new(1.0 / kt, d)?, Method::ClosedForm)?;
                Ok(TemperatureRow {
                    delta: r(d),
                    kt_over_mc2: r(kt),
                    u_over_mc2: r(p.u_over_mc2),
                    s_over_kb: r(p.s_over_kb),
                    c_over_kb: r(p.c_over_kb),
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        curves.extend(pts);
    }
    write(&args.out_dir, "fig4_temperature.csv", &csv_bytes(&curves)?)?;
    Ok(())
}
