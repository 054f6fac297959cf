mod commands;
mod figures;
mod output;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "dkpo-lab",
    version,
    about = "Spectra, densities and thermodynamics of the DKP oscillator in a magnetic field"
)]
struct Cli {
    /// Significant digits of written numbers.
    #[arg(
        long,
        global = true,
        env = "DKPO_PRECISION",
        default_value_t = 12,
        value_parser = clap::value_parser!(u8).range(1..=17)
    )]
    precision: u8,

    /// Output format. Defaults to csv, except json for `thermo`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    #[value(name = "+", alias = "plus")]
    Plus,
    #[value(name = "-", alias = "minus")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorArg {
    Scalar,
    Vector,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the trilinear β algebra of the built-in representations.
    AlgebraCheck(AlgebraArgs),
    /// Energy grid ε(n, l) of one spectrum component.
    Spectrum(SpectrumArgs),
    /// Radial probability density ρ(ξ) of one eigenstate.
    Pdf(PdfArgs),
    /// Thermodynamic potentials at one (γ, δ).
    Thermo(ThermoArgs),
    /// Potentials along a δ grid at fixed γ.
    ThermoScan(ScanArgs),
    /// Exact partition sums against the closed form.
    ZCompare(CompareArgs),
    /// Data files behind the standard figures.
    Fig(FigArgs),
}

#[derive(Args)]
pub struct AlgebraArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub sector: SectorArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub sector: SectorArg,
    /// Component index i (0, 1 or 2).
    #[arg(long = "i", default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub component: u8,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub l_min: i32,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    pub l_max: i32,
    /// Field ratio δ = ω̃/ω.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    /// ħω/mc².
    #[arg(long, default_value_t = 1.0)]
    pub hbar_omega: f64,
    /// Multiplies δ; `-` reverses the field.
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    pub sign_field: Sign,
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    pub branch: Sign,
    /// Use l·ω̃ instead of |l|·ω̃ in the scalar-type spectra.
    #[arg(long)]
    pub lz_signed: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PdfArgs {
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub l: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hbar_omega: f64,
    #[arg(long, value_enum, default_value = "+", allow_hyphen_values = true)]
    pub sign_field: Sign,
    #[arg(long = "i", default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
    pub component: u8,
    /// Density mode: squared or compact.
    #[arg(long, default_value = "squared")]
    pub mode: String,
    #[arg(long, default_value_t = 6.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Skip normalization (norm = 1).
    #[arg(long)]
    pub unnormalized: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ThermoArgs {
    /// γ = mc²/(k_B T).
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// closed, exact or asymptotic.
    #[arg(long, default_value = "closed")]
    pub method: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_min: f64,
    #[arg(long)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long, default_value = "closed")]
    pub method: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.03,0.05")]
    pub gamma_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.6")]
    pub delta_list: Vec<f64>,
    /// Relative error accepted between the two routes.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "F2", alias = "f2")]
    F2,
    #[value(name = "F3", alias = "f3")]
    F3,
    #[value(name = "F4", alias = "f4")]
    F4,
}

#[derive(Args)]
pub struct FigArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// δ for F2/F3 (must be ±0.5).
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// ħω/mc² (F2/F3: 1, F4: 0.5).
    #[arg(long)]
    pub hbar_omega: Option<f64>,
    #[arg(long, default_value = "squared")]
    pub mode: String,
    #[arg(long, default_value_t = 6.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 301)]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    pub n_max: u32,
    #[arg(long, default_value_t = 100)]
    pub l_max: i32,
    /// γ of the δ panel of F4.
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.5)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 151)]
    pub steps: usize,
    /// δ values of the temperature panel of F4.
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,0.9")]
    pub delta_list: Vec<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Core(dkpo_core::Error),
    Io(io::Error),
    Usage(String),
}

impl CliError {
    fn category(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.category(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    fn exit_code(&self) -> u8 {
        if self.category() == "usage" {
            2
        } else {
            1
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<dkpo_core::Error> for CliError {
    fn from(e: dkpo_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub struct Ctx {
    pub digits: u8,
    pub format: Option<Format>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx {
        digits: cli.precision,
        format: cli.format,
    };
    match cli.command {
        Command::AlgebraCheck(a) => commands::algebra_check(&ctx, &a),
        Command::Spectrum(a) => commands::spectrum(&ctx, &a),
        Command::Pdf(a) => commands::pdf(&ctx, &a),
        Command::Thermo(a) => commands::thermo(&ctx, &a),
        Command::ThermoScan(a) => commands::thermo_scan(&ctx, &a),
        Command::ZCompare(a) => commands::z_compare(&ctx, &a),
        Command::Fig(a) => figures::fig(&ctx, &a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.render().to_string();
            let text = text.strip_prefix("error: ").unwrap_or(&text);
            eprint!("error[usage]: {text}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code())
        }
    }
}
