//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage and validation errors, 3 for
//! numerical failures.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::dispersion::{bic_energies, discrete_states_with, polish_seeds, SolverOptions};
use crate::error::{Error, Result};
use crate::model::ChainModel;
use crate::output::{self, RootsReport};
use crate::selfenergy::{self_energy, self_energy_deriv, Sheet, SheetedEnergy};
use crate::spectrum::{decompose, uniform_grid, DEFAULT_OMEGA_MAX, DEFAULT_POINTS};
use crate::sweep::{
    find_ep_with, scan_for_ep_seeds, trace, EpResult, EpSeed, SweepParameter,
    DEFAULT_SEED_THRESHOLD, EP_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fanochain",
    version,
    about = "Resonances, exceptional points and Fano spectra of an impurity coupled to a tight-binding chain"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discrete eigenvalues with their normalization constants.
    Roots {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 1e-12)]
        root_tol: f64,
        /// JSON output of a previous `roots` run; its eigenvalues are
        /// re-polished instead of solving from scratch.
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// Impurity levels that produce a bound state in the continuum.
    Bic {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Absorption spectrum and its resonance decomposition.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long, default_value_t = -DEFAULT_OMEGA_MAX, allow_negative_numbers = true)]
        omega_min: f64,
        #[arg(long, default_value_t = DEFAULT_OMEGA_MAX, allow_negative_numbers = true)]
        omega_max: f64,
    },
    /// Resonance trajectories under a parameter sweep.
    Trajectory {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Swept parameter: `ed` or `g`.
        #[arg(long, default_value = "ed")]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },
    /// Exceptional points inside a (g, E_d) window.
    Ep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        g_range: Option<Vec<f64>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        ed_range: Option<Vec<f64>>,
        /// Scan grid points along g and E_d.
        #[arg(long, num_args = 2, value_names = ["NG", "NED"], default_values_t = [31, 41])]
        grid: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED_THRESHOLD)]
        threshold: f64,
        /// Explicit Newton seed, skipping the scan.
        #[arg(long, num_args = 4, value_names = ["G", "ED", "RE_Z", "IM_Z"], allow_negative_numbers = true)]
        seed: Option<Vec<f64>>,
        #[arg(long, default_value_t = EP_TOL)]
        ep_tol: f64,
    },
    /// Self-energy and its derivative at one complex energy.
    Selfenergy {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long = "re", allow_negative_numbers = true)]
        re_z: f64,
        #[arg(long = "im", default_value_t = 0.0, allow_negative_numbers = true)]
        im_z: f64,
        #[arg(long, default_value = "I")]
        sheet: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChainKind {
    Semi,
    Infinite,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// JSON model descriptor; inline flags override its fields.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub chain: Option<ChainKind>,
    #[arg(long)]
    pub nd: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ed: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Transition weight `mu^2 T_dc^2`.
    #[arg(long, allow_negative_numbers = true)]
    pub weight: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub ec: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

impl ModelArgs {
    /// Builds the model. `needs` lists the parameters this subcommand
    /// cannot do without; absent ones default to zero.
    fn resolve(&self, needs_g: bool, needs_ed: bool) -> Result<ChainModel> {
        let base = match &self.model {
            Some(path) => Some(ChainModel::from_json(&std::fs::read_to_string(path)?)?),
            None => None,
        };
        let kind = self.chain.or(base.map(|m| match m.variant {
            crate::model::ChainVariant::SemiInfinite { .. } => ChainKind::Semi,
            crate::model::ChainVariant::Infinite => ChainKind::Infinite,
        }));
        let g = self.g.or(base.map(|m| m.g));
        let ed = self.ed.or(base.map(|m| m.e_d));
        if needs_g && g.is_none() {
            return Err(Error::InvalidArgument("--g is required".into()));
        }
        if needs_ed && ed.is_none() {
            return Err(Error::InvalidArgument("--ed is required".into()));
        }
        let (g, ed) = (g.unwrap_or(0.0), ed.unwrap_or(0.0));
        let mut model = match kind.unwrap_or(ChainKind::Semi) {
            ChainKind::Semi => {
                let nd = self.nd.or(base.and_then(|m| m.n_d())).ok_or_else(|| {
                    Error::InvalidArgument("--nd is required for a semi-infinite chain".into())
                })?;
                ChainModel::semi_infinite(nd, ed, g)
            }
            ChainKind::Infinite => ChainModel::infinite(ed, g),
        };
        if let Some(b) = base {
            model = model
                .with_v(b.v)
                .with_transition_weight(b.transition_weight)
                .with_e_c(b.e_c);
        }
        if let Some(v) = self.v {
            model = model.with_v(v);
        }
        if let Some(w) = self.weight {
            model = model.with_transition_weight(w);
        }
        if let Some(ec) = self.ec {
            model = model.with_e_c(ec);
        }
        model.validate()
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

fn with_output(
    args: &OutputArgs,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match &args.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn lines_path(output: &Path) -> PathBuf {
    output.with_file_name("lines.csv")
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match command {
        Command::Roots {
            model,
            output,
            root_tol,
            seeds,
        } => {
            let model = model.resolve(true, true)?;
            if !(*root_tol > 0.0) {
                return Err(Error::InvalidArgument("--root-tol must be > 0".into()));
            }
            let opts = SolverOptions {
                root_tol: *root_tol,
                ..SolverOptions::default()
            };
            let states = match seeds {
                Some(path) => {
                    let previous = RootsReport::from_json(&std::fs::read_to_string(path)?)?;
                    polish_seeds(&model, &previous.seeds(), &opts)?
                }
                None => discrete_states_with(&model, &opts)?.states,
            };
            let report = RootsReport::new(model, states);
            with_output(output, stdout, |out| match output.format {
                Format::Csv => output::write_roots_csv(out, &report),
                Format::Json => output::write_json(out, &report),
            })
        }
        Command::Bic { model, output } => {
            let model = model.resolve(false, false)?;
            let energies = bic_energies(&model)?;
            with_output(output, stdout, |out| match output.format {
                Format::Csv => output::write_bic_csv(out, &energies),
                Format::Json => output::write_json(out, &energies),
            })
        }
        Command::Spectrum {
            model,
            output,
            points,
            omega_min,
            omega_max,
        } => {
            let model = model.resolve(true, true)?;
            if *points == 0 || !(omega_max > omega_min) {
                return Err(Error::InvalidArgument(
                    "spectrum grid needs --points >= 1 and --omega-max > --omega-min".into(),
                ));
            }
            let grid = decompose(&model, &uniform_grid(*omega_min, *omega_max, *points))?;
            if grid.near_exceptional_point {
                let _ = writeln!(
                    stderr,
                    "warning: resonances near an exceptional point; components may be large and cancel"
                );
            }
            with_output(output, stdout, |out| match output.format {
                Format::Csv => output::write_spectrum_csv(out, &grid),
                Format::Json => output::write_json(out, &grid),
            })?;
            if output.format == Format::Csv {
                if let Some(path) = &output.output {
                    let mut f = BufWriter::new(File::create(lines_path(path))?);
                    output::write_lines_csv(&mut f, &grid.bound_lines)?;
                    f.flush()?;
                }
            }
            Ok(())
        }
        Command::Trajectory {
            model,
            output,
            param,
            from,
            to,
            steps,
        } => {
            let parameter: SweepParameter = param.parse()?;
            let model = model.resolve(
                parameter == SweepParameter::EdLevel,
                parameter == SweepParameter::Coupling,
            )?;
            if *steps < 2 || !(to > from) {
                return Err(Error::InvalidArgument(
                    "trajectory needs --steps >= 2 and --to > --from".into(),
                ));
            }
            let values = uniform_grid(*from, *to, *steps);
            let t = trace(&model, parameter, &values)?;
            with_output(output, stdout, |out| match output.format {
                Format::Csv => output::write_trajectory_csv(out, &t),
                Format::Json => output::write_json(out, &t),
            })
        }
        Command::Ep {
            model,
            output,
            g_range,
            ed_range,
            grid,
            threshold,
            seed,
            ep_tol,
        } => {
            let template = model.resolve(false, false)?;
            let seeds = match seed {
                Some(s) => vec![EpSeed {
                    g: s[0],
                    e_d: s[1],
                    z: Complex64::new(s[2], s[3]),
                    distance: f64::NAN,
                }],
                None => {
                    let (Some(gr), Some(er)) = (g_range, ed_range) else {
                        return Err(Error::InvalidArgument(
                            "ep needs --g-range and --ed-range, or --seed".into(),
                        ));
                    };
                    scan_for_ep_seeds(
                        &template,
                        (gr[0], gr[1]),
                        (er[0], er[1]),
                        (grid[0], grid[1]),
                        *threshold,
                    )?
                }
            };
            let mut found: Vec<EpResult> = Vec::new();
            let mut last_err = None;
            for s in &seeds {
                match find_ep_with(&template, s, *ep_tol) {
                    Ok(ep) => {
                        let in_window = match (g_range, ed_range) {
                            (Some(gr), Some(er)) => {
                                (gr[0]..=gr[1]).contains(&ep.g) && (er[0]..=er[1]).contains(&ep.e_d)
                            }
                            _ => true,
                        };
                        let duplicate = found
                            .iter()
                            .any(|f| (f.g - ep.g).abs() < 1e-7 && (f.e_d - ep.e_d).abs() < 1e-7);
                        if in_window && !duplicate {
                            found.push(ep);
                        }
                    }
                    Err(e) if e.is_validation() => return Err(e),
                    Err(e) => last_err = Some(e),
                }
            }
            if found.is_empty() {
                if let Some(e) = last_err {
                    if seed.is_some() {
                        return Err(e);
                    }
                }
            }
            found.sort_by(|a, b| a.e_d.total_cmp(&b.e_d).then(a.g.total_cmp(&b.g)));
            with_output(output, stdout, |out| match output.format {
                Format::Csv => output::write_ep_csv(out, &found),
                Format::Json => output::write_json(out, &found),
            })
        }
        Command::Selfenergy {
            model,
            output,
            re_z,
            im_z,
            sheet,
        } => {
            let model = model.resolve(false, false)?;
            let sheet: Sheet = sheet.parse()?;
            let z = SheetedEnergy::new(Complex64::new(*re_z, *im_z), sheet);
            let sigma = self_energy(&model, z)?;
            let dsigma = self_energy_deriv(&model, z, 1)?;
            with_output(output, stdout, |out| match output.format {
                Format::Csv => {
                    writeln!(out, "re_z,im_z,sheet,re_sigma,im_sigma,re_dsigma,im_dsigma")?;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        output::fmt_float(*re_z),
                        output::fmt_float(*im_z),
                        sheet.as_str(),
                        output::fmt_float(sigma.re),
                        output::fmt_float(sigma.im),
                        output::fmt_float(dsigma.re),
                        output::fmt_float(dsigma.im),
                    )?;
                    Ok(())
                }
                Format::Json => output::write_json(
                    out,
                    &serde_json::json!({
                        "z": z,
                        "sigma": sigma,
                        "dsigma": dsigma,
                    }),
                ),
            })
        }
    }
}
