use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bogo_gas::bogoliubov::DEFAULT_DELTA_BOG;
use bogo_gas::bound::DEFAULT_ELL_EXPONENT;
use bogo_gas::condensate::DEFAULT_REGIME_EPS;
use bogo_gas::scattering::PotentialSpec;

#[derive(Debug, Parser)]
#[command(
    name = "bogo-gas",
    version,
    about = "Free-energy upper bounds for the dilute Bose gas on the unit torus"
)]
pub struct Cli {
    /// key=value file; flags given on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero-energy scattering length of a potential
    Scatter(ScatterArgs),
    /// Ideal-gas chemical potential, condensate and free energies
    Ideal(IdealArgs),
    /// Bogoliubov spectrum data and the correction term
    Bogoliubov(BogoliubovArgs),
    /// One-mode condensate theory at the ideal-gas N₀
    Condensate(CondensateArgs),
    /// Upper bound on the free energy
    Bound(BoundArgs),
    /// Bound over a grid in N, κ and 𝔞
    Sweep(SweepArgs),
    /// Run invariant suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "potential", multiple = false)]
pub struct PotentialArgs {
    /// Hard core of this radius
    #[arg(long, value_name = "R")]
    pub hard_core: Option<f64>,

    /// Square barrier, e.g. R=0.01,V0=100
    #[arg(long, value_name = "R=..,V0=..", value_parser = parse_barrier)]
    pub square_barrier: Option<PotentialSpec>,

    /// Two-column `r V` table, piecewise linear, starting at r = 0
    #[arg(long, value_name = "PATH")]
    pub potential_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,

    /// Particle number; adds the GP-scaled length and the energy of f_ℓ
    #[arg(long)]
    pub n: Option<f64>,

    /// ℓ = N^{ell-exponent}
    #[arg(long, default_value_t = DEFAULT_ELL_EXPONENT)]
    pub ell_exponent: f64,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long)]
    pub n: f64,

    /// β/β_c(N)
    #[arg(long, required_unless_present = "beta", conflicts_with = "beta")]
    pub kappa: Option<f64>,

    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct IdealArgs {
    #[command(flatten)]
    pub state: StateArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LengthArgs {
    /// Scattering length 𝔞 (unscaled)
    #[arg(long, conflicts_with = "potential")]
    pub a: Option<f64>,

    #[command(flatten)]
    pub potential: PotentialArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BogoliubovArgs {
    #[command(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    pub length: LengthArgs,

    #[arg(long, default_value_t = DEFAULT_DELTA_BOG)]
    pub delta_bog: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CondensateArgs {
    #[command(flatten)]
    pub state: StateArgs,

    #[command(flatten)]
    pub length: LengthArgs,

    /// Override the ideal-gas condensate size
    #[arg(long)]
    pub n0: Option<f64>,

    #[arg(long, default_value_t = DEFAULT_REGIME_EPS)]
    pub regime_eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// Minimum over both condensate branches
    Theorem,
    /// Large-N₀ expansion, κ > 1
    Condensed,
    /// Ideal condensate, κ < 1
    Noncondensed,
}

#[derive(Debug, Clone, Args)]
pub struct BoundKnobs {
    #[arg(long, value_enum, default_value_t = Form::Theorem)]
    pub form: Form,

    #[arg(long, default_value_t = DEFAULT_DELTA_BOG)]
    pub delta_bog: f64,

    #[arg(long, default_value_t = DEFAULT_ELL_EXPONENT)]
    pub ell_exponent: f64,

    #[arg(long, default_value_t = DEFAULT_REGIME_EPS)]
    pub regime_eps: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: f64,

    #[arg(long)]
    pub kappa: f64,

    #[command(flatten)]
    pub length: LengthArgs,

    #[command(flatten)]
    pub knobs: BoundKnobs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma list and/or start:stop:step ranges
    #[arg(long, value_parser = parse_grid)]
    pub n: Grid,

    #[arg(long, value_parser = parse_grid)]
    pub kappa: Grid,

    /// Scattering lengths; alternatively a single potential
    #[arg(long, value_parser = parse_grid, conflicts_with = "potential")]
    pub a: Option<Grid>,

    #[command(flatten)]
    pub potential: PotentialArgs,

    #[command(flatten)]
    pub knobs: BoundKnobs,

    /// Worker threads, 0 for one per logical CPU
    #[arg(long, env = "BOGO_GAS_JOBS", default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// lattice, scattering, ideal, bogoliubov, condensate, bound or all
    #[arg(long, default_value = "all")]
    pub suite: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let mut out = Vec::new();
    for item in s.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(parse_f64(x)?),
            [a, b, h] => {
                let (a, b, h) = (parse_f64(a)?, parse_f64(b)?, parse_f64(h)?);
                if h <= 0.0 || h.is_nan() || b < a {
                    return Err(format!("range {item:?} needs start ≤ stop and step > 0"));
                }
                let steps = ((b - a) / h + 1e-9).floor() as usize;
                if steps > 100_000 {
                    return Err(format!("range {item:?} has more than 1e5 points"));
                }
                // Round away the accumulated a + ih noise so 0.8:1.2:0.05 gives 0.85, not 0.8500000000000001.
                out.extend((0..=steps).map(|i| {
                    let x = a + i as f64 * h;
                    format!("{x:.12e}").parse::<f64>().unwrap_or(x)
                }));
            }
            _ => return Err(format!("expected a number or start:stop:step, got {item:?}")),
        }
    }
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(Grid(out))
}

pub fn parse_barrier(s: &str) -> Result<PotentialSpec, String> {
    let (mut radius, mut height) = (None, None);
    for kv in s.split(',') {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {kv:?}"))?;
        match k.trim() {
            "R" | "r" => radius = Some(parse_f64(v)?),
            "V0" | "v0" => height = Some(parse_f64(v)?),
            other => return Err(format!("unknown barrier key {other:?}, expected R or V0")),
        }
    }
    match (radius, height) {
        (Some(radius), Some(height)) => Ok(PotentialSpec::SquareBarrier { radius, height }),
        _ => Err("square barrier needs both R and V0".into()),
    }
}

/// Splice `key=value` lines from the config file into argv right after the
/// subcommand, skipping keys already given as flags.
pub fn merge_config(argv: &[String], text: &str) -> Result<Vec<String>, String> {
    let sub = argv
        .iter()
        .skip(1)
        .position(|a| {
            !a.starts_with('-')
                && [
                    "scatter",
                    "ideal",
                    "bogoliubov",
                    "condensate",
                    "bound",
                    "sweep",
                    "verify",
                ]
                .contains(&a.as_str())
        })
        .map(|i| i + 1)
        .ok_or("no subcommand given")?;
    let present = |key: &str| {
        let flag = format!("--{key}");
        argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };
    let mut extra = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got {line:?}", lineno + 1))?;
        let key = k.trim().replace('_', "-");
        if key == "config" {
            return Err(format!(
                "config line {}: nested config files are not supported",
                lineno + 1
            ));
        }
        if !present(&key) {
            extra.push(format!("--{key}={}", v.trim()));
        }
    }
    let mut out = argv[..=sub].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[sub + 1..]);
    Ok(out)
}
