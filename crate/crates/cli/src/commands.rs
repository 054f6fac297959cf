use rayon::prelude::*;
use serde::Serialize;

use dkpo_core::algebra::{
    build_eta0, build_representation, check_algebra, perturbation_sweep, Sector,
};
use dkpo_core::eigenfunctions::{density_registry, normalize, sample_pdf, RadialState};
use dkpo_core::spectrum::{
    energy_grid, formula_name, formula_registry, Branch, Component, LzConvention, OscillatorConfig,
};
use dkpo_core::thermo::{
    closed_form_z, exact_partition_sum, partition_registry, scan_delta, ScanOutcome, ScanRow,
    ThermoConfig, ThermoPoint,
};
use dkpo_core::Error;

use crate::output::{csv_bytes, emit, json_bytes, round_sig};
use crate::{
    AlgebraArgs, CliError, CompareArgs, Ctx, Format, PdfArgs, ScanArgs, SectorArg, Sign,
    SpectrumArgs, ThermoArgs,
};

fn write_table<T: Serialize>(ctx: &Ctx, rows: &[T], out: Option<&std::path::Path>) -> Result<(), CliError> {
    let bytes = match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_bytes(rows)?,
        Format::Json => json_bytes(&rows, ctx.digits)?,
    };
    emit(out, &bytes)
}

#[derive(Serialize)]
struct AlgebraRow {
    sector: &'static str,
    dim: usize,
    triples_checked: usize,
    triples_passed: usize,
    perturbations: usize,
    perturbations_detected: usize,
    eta0_involution: bool,
    status: &'static str,
}

pub fn algebra_check(ctx: &Ctx, args: &AlgebraArgs) -> Result<(), CliError> {
    let sectors: &[Sector] = match args.sector {
        SectorArg::Scalar => &[Sector::Scalar],
        SectorArg::Vector => &[Sector::Vector],
        SectorArg::Both => &[Sector::Scalar, Sector::Vector],
    };
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &sector in sectors {
        let rep = build_representation(sector);
        let report = check_algebra(&rep)?;
        let sweep = perturbation_sweep(&rep)?;
        let eta = build_eta0(&rep);
        let ok = report.passed() && sweep.passed() && eta.is_involution();
        if !ok {
            failed.push(sector.name());
        }
        rows.push(AlgebraRow {
            sector: sector.name(),
            dim: rep.dim(),
            triples_checked: report.triples_checked,
            triples_passed: report.triples_passed(),
            perturbations: sweep.total,
            perturbations_detected: sweep.detected(),
            eta0_involution: eta.is_involution(),
            status: if ok { "pass" } else { "fail" },
        });
    }
    write_table(ctx, &rows, args.out.as_deref())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Structural(format!("algebra check failed for {}", failed.join(", "))).into())
    }
}

fn branch(s: Sign) -> Branch {
    match s {
        Sign::Plus => Branch::Positive,
        Sign::Minus => Branch::Negative,
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    n: u32,
    l: i32,
    i: u8,
    epsilon: f64,
}

pub fn spectrum(ctx: &Ctx, args: &SpectrumArgs) -> Result<(), CliError> {
    let sector = match args.sector {
        SectorArg::Scalar => Sector::Scalar,
        SectorArg::Vector => Sector::Vector,
        SectorArg::Both => {
            return Err(CliError::Usage("spectrum takes --sector scalar or vector".into()))
        }
    };
    let component = Component::from_index(args.component)?;
    let cfg = OscillatorConfig::new(args.hbar_omega, args.delta * args.sign_field.value())?;
    let formula = formula_registry().get(formula_name(sector, component)?)?;
    let lz = if args.lz_signed {
        LzConvention::Signed
    } else {
        LzConvention::AbsL
    };
    let grid = energy_grid(
        &*formula,
        &cfg,
        args.n_max,
        (args.l_min, args.l_max),
        branch(args.branch),
        lz,
    )?;
    let rows: Vec<SpectrumRow> = grid
        .points()
        .map(|(n, l, e)| SpectrumRow {
            n,
            l,
            i: args.component,
            epsilon: round_sig(e, ctx.digits),
        })
        .collect();
    write_table(ctx, &rows, args.out.as_deref())
}

#[derive(Serialize)]
struct PdfRow {
    xi: f64,
    rho: f64,
}

pub fn pdf(ctx: &Ctx, args: &PdfArgs) -> Result<(), CliError> {
    let density = density_registry().get(&args.mode)?;
    let cfg = OscillatorConfig::new(args.hbar_omega, args.delta * args.sign_field.value())?;
    let component = Component::from_index(args.component)?;
    let mut state = RadialState::from_config(&cfg, args.n, args.l, component)?;
    if !args.unnormalized {
        state = normalize(&state)?;
    }
    let rows: Vec<PdfRow> = sample_pdf(&state, &*density, args.xi_max, args.samples)?
        .into_iter()
        .map(|(xi, rho)| PdfRow {
            xi: round_sig(xi, ctx.digits),
            rho: round_sig(rho, ctx.digits),
        })
        .collect();
    write_table(ctx, &rows, args.out.as_deref())
}

#[derive(Serialize)]
struct ThermoRow {
    gamma: f64,
    delta: f64,
    method: String,
    #[serde(rename = "Z")]
    z: f64,
    #[serde(rename = "lnZ")]
    ln_z: f64,
    #[serde(rename = "U_over_mc2")]
    u_over_mc2: f64,
    #[serde(rename = "U_over_kT")]
    u_over_kt: f64,
    #[serde(rename = "F_over_mc2")]
    f_over_mc2: f64,
    #[serde(rename = "F_over_kT")]
    f_over_kt: f64,
    #[serde(rename = "S_over_kB")]
    s_over_kb: f64,
    #[serde(rename = "C_over_kB")]
    c_over_kb: f64,
    derivative_noise: bool,
}

impl ThermoRow {
    fn new(p: &ThermoPoint, digits: u8) -> Self {
        let r = |x| round_sig(x, digits);
        Self {
            gamma: r(p.gamma),
            delta: r(p.delta),
            method: p.method.name().to_string(),
            z: r(p.z),
            ln_z: r(p.ln_z),
            u_over_mc2: r(p.u_over_mc2),
            u_over_kt: r(p.u_over_kt),
            f_over_mc2: r(p.f_over_mc2),
            f_over_kt: r(p.f_over_kt),
            s_over_kb: r(p.s_over_kb),
            c_over_kb: r(p.c_over_kb),
            derivative_noise: p.derivative_noise,
        }
    }
}

pub fn thermo(ctx: &Ctx, args: &ThermoArgs) -> Result<(), CliError> {
    let model = partition_registry().get(&args.method)?;
    let point = model.point(&ThermoConfig::new(args.gamma, args.delta)?)?;
    let bytes = match ctx.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&point, ctx.digits)?,
        Format::Csv => csv_bytes(&[ThermoRow::new(&point, ctx.digits)])?,
    };
    emit(args.out.as_deref(), &bytes)
}

#[derive(Serialize)]
pub struct ScanCsvRow {
    delta: f64,
    #[serde(rename = "Z")]
    z: Option<f64>,
    #[serde(rename = "U_over_kT")]
    u_over_kt: Option<f64>,
    #[serde(rename = "S_over_kB")]
    s_over_kb: Option<f64>,
    #[serde(rename = "C_over_kB")]
    c_over_kb: Option<f64>,
    method: &'static str,
    divergent: bool,
}

impl ScanCsvRow {
    pub fn new(row: &ScanRow, method: &'static str, digits: u8) -> Self {
        let r = |x| Some(round_sig(x, digits));
        let p = row.point();
        Self {
            delta: round_sig(row.delta, digits),
            z: p.and_then(|p| r(p.z)),
            u_over_kt: p.and_then(|p| r(p.u_over_kt)),
            s_over_kb: p.and_then(|p| r(p.s_over_kb)),
            c_over_kb: p.and_then(|p| r(p.c_over_kb)),
            method,
            divergent: row.is_divergent(),
        }
    }
}

/// `steps` equally spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !(hi >= lo) {
        return Err(CliError::Usage(format!(
            "need steps >= 1 and an increasing range, got {lo}..{hi} in {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|j| if j + 1 == steps { hi } else { lo + h * j as f64 }).collect())
}

pub fn report_failures(rows: &[ScanRow]) {
    for row in rows {
        if let ScanOutcome::Failed { category, message } = &row.outcome {
            eprintln!("warning[{category}]: delta = {}: {message}", row.delta);
        }
    }
}

pub fn thermo_scan(ctx: &Ctx, args: &ScanArgs) -> Result<(), CliError> {
    let method = partition_registry().get(&args.method)?.method();
    let grid = linspace(args.delta_min, args.delta_max, args.steps)?;
    let rows = scan_delta(args.gamma, &grid, method)?;
    report_failures(&rows);
    match ctx.format.unwrap_or(Format::Csv) {
        Format::Json => emit(args.out.as_deref(), &json_bytes(&rows, ctx.digits)?),
        Format::Csv => {
            let table: Vec<ScanCsvRow> = rows
                .iter()
                .map(|r| ScanCsvRow::new(r, method.name(), ctx.digits))
                .collect();
            emit(args.out.as_deref(), &csv_bytes(&table)?)
        }
    }
}

#[derive(Serialize)]
struct CompareRow {
    gamma: f64,
    delta: f64,
    #[serde(rename = "Z_exact")]
    z_exact: f64,
    #[serde(rename = "Z_closed")]
    z_closed: f64,
    rel_error: f64,
    tolerance: f64,
    within_tolerance: bool,
    terms_1: u64,
    terms_2: u64,
}

pub fn z_compare(ctx: &Ctx, args: &CompareArgs) -> Result<(), CliError> {
    let points: Vec<(f64, f64)> = args
        .gamma_list
        .iter()
        .flat_map(|&g| args.delta_list.iter().map(move |&d| (g, d)))
        .collect();
    let r = |x| round_sig(x, ctx.digits);
    let rows = points
        .par_iter()
        .map(|&(g, d)| -> Result<CompareRow, CliError> {
            let cfg = ThermoConfig::new(g, d)?;
            let exact = exact_partition_sum(&cfg)?;
            let closed = closed_form_z(&cfg)?;
            let err = (closed - exact.z).abs() / exact.z;
            Ok(CompareRow {
                gamma: r(g),
                delta: r(d),
                z_exact: r(exact.z),
                z_closed: r(closed),
                rel_error: r(err),
                tolerance: r(args.tolerance),
                within_tolerance: err <= args.tolerance,
                terms_1: exact.z1.terms,
                terms_2: exact.z2.terms,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_table(ctx, &rows, args.out.as_deref())
}
