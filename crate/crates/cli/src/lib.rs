//! Command-line front end: argument definitions, subcommands and output.

pub mod output;
pub mod plot;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussdyn::dynamics::steady_state;
use gaussdyn::measures::full_report;
use gaussdyn::sweep::{
    detect_sudden_death, evolve_trajectory, figure_preset, sweep_parameter, EvolveOptions,
    Integrator, TimeGrid, Trajectory, DEFAULT_THRESHOLD,
};
use gaussdyn::{Error, LogBase, MeasureOptions, SystemParams};

use output::FloatFormat;

/// Exit status for rejected parameters, unavailable steady states and I/O failures.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status for malformed invocations.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gaussdyn", version, about = "Two coupled damped oscillators in Gaussian states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a parameter set and report every violated constraint.
    Validate(ParamArgs),
    /// Evolve the two-mode squeezed vacuum and write a CSV of measures.
    Evolve(EvolveArgs),
    /// Print the asymptotic covariance matrix and its measures.
    Steady(SteadyArgs),
    /// Regenerate one figure panel as CSV files plus an SVG chart.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Bare frequency.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    /// Frequency asymmetry, |epsilon| < 1.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub epsilon: f64,
    /// Position-position coupling.
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub nu: f64,
    /// Dissipation rate.
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Bath temperature.
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    pub temp: f64,
    /// Initial two-mode squeezing.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r: f64,
}

impl ParamArgs {
    pub fn params(&self) -> SystemParams {
        SystemParams::new(self.omega, self.epsilon, self.nu, self.lambda, self.temp, self.r)
    }
}

fn param_flags(p: &SystemParams) -> String {
    format!(
        "--omega {} --epsilon {} --nu {} --lambda {} --temp {} --r {}",
        p.omega, p.epsilon, p.nu, p.lambda_, p.temperature, p.r
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorArg {
    Closed,
    Rk4,
    Auto,
}

impl From<IntegratorArg> for Integrator {
    fn from(a: IntegratorArg) -> Self {
        match a {
            IntegratorArg::Closed => Integrator::Closed,
            IntegratorArg::Rk4 => Integrator::Rk4,
            IntegratorArg::Auto => Integrator::Auto,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Logarithm base for entropic measures: `e` or `2`.
    #[arg(long, default_value = "e")]
    pub log_base: LogBase,
    /// Measure discord on the second mode instead of the first.
    #[arg(long)]
    pub swap_modes: bool,
    /// Write floats as exact hexadecimal (`0x1.8p+1`) instead of 12 digits.
    #[arg(long)]
    pub hex_floats: bool,
}

impl MeasureArgs {
    fn options(&self) -> MeasureOptions {
        MeasureOptions { log_base: self.log_base, swap_modes: self.swap_modes }
    }

    fn format(&self) -> FloatFormat {
        if self.hex_floats {
            FloatFormat::Hex
        } else {
            FloatFormat::Decimal
        }
    }

    fn flags(&self) -> String {
        let mut s = format!("--log-base {}", self.log_base);
        if self.swap_modes {
            s.push_str(" --swap-modes");
        }
        if self.hex_floats {
            s.push_str(" --hex-floats");
        }
        s
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 501)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = IntegratorArg::Closed)]
    pub integrator: IntegratorArg,
    /// Largest RK4 step.
    #[arg(long, default_value_t = gaussdyn::dynamics::DEFAULT_DT, allow_negative_numbers = true)]
    pub dt: f64,
    /// Log-negativity level treated as separable for sudden-death detection.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub measures: MeasureArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub measures: MeasureArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Panel identifier, e.g. `fig1a`.
    pub id: String,
    /// Directory for the CSV files and the SVG chart.
    #[arg(long)]
    pub out: PathBuf,
    /// Override the preset end time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Override the preset number of grid points.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub measures: MeasureArgs,
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Self { code: EXIT_DOMAIN, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownFigure(_) | Error::UnknownParameter(_) => EXIT_USAGE,
            _ => EXIT_DOMAIN,
        };
        let mut message = e.to_string();
        if matches!(e, Error::SteadyStateUnavailable(_)) {
            message.push_str("\nhint: rerun with `--integrator rk4`");
        }
        Self { code, message }
    }
}

type CmdResult = std::result::Result<(), Failure>;

pub fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Validate(a) => validate(&a),
        Command::Evolve(a) => evolve(&a),
        Command::Steady(a) => steady(&a),
        Command::Figure(a) => figure(&a),
    }
}

/// Prints warnings and rejects invalid parameters with every violation listed.
fn checked(params: &SystemParams) -> CmdResult {
    let report = params.validate();
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.is_ok() {
        return Ok(());
    }
    let mut msg = format!("invalid parameters ({params}):");
    for v in &report.violations {
        let _ = write!(msg, "\n  {v}");
    }
    Err(Failure::domain(msg))
}

fn validate(args: &ParamArgs) -> CmdResult {
    let params = args.params();
    checked(&params)?;
    println!("ok: {params}");
    Ok(())
}

fn write_text(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::domain(format!("cannot write output: {e}")))
        }
    }
}

fn evolve_command_line(
    params: &SystemParams,
    grid: &TimeGrid,
    integrator: IntegratorArg,
    dt: f64,
    threshold: f64,
    measures: &MeasureArgs,
) -> String {
    format!(
        "gaussdyn evolve {} --t-start {} --t-end {} --points {} --integrator {} --dt {} --threshold {} {}",
        param_flags(params),
        grid.t_start(),
        grid.t_end(),
        grid.n_points(),
        Integrator::from(integrator),
        dt,
        threshold,
        measures.flags()
    )
}

fn trajectory_comments(command: String, traj: &Trajectory, grid: &TimeGrid, threshold: f64) -> Vec<String> {
    let deaths = detect_sudden_death(traj, threshold);
    vec![
        command,
        format!("integrator_used={} threshold={threshold}", traj.integrator),
        output::sudden_death_comment(&deaths, grid.spacing()),
    ]
}

fn evolve(args: &EvolveArgs) -> CmdResult {
    let params = args.params.params();
    checked(&params)?;
    let grid = TimeGrid::new(args.t_start, args.t_end, args.points)?;
    let opts = EvolveOptions {
        integrator: args.integrator.into(),
        dt: args.dt,
        measures: args.measures.options(),
    };
    let traj = evolve_trajectory(&params, &grid, &opts)?;
    let command =
        evolve_command_line(&params, &grid, args.integrator, args.dt, args.threshold, &args.measures);
    let comments = trajectory_comments(command, &traj, &grid, args.threshold);
    let text = output::trajectory_csv(&comments, &traj, args.measures.format());
    write_text(args.out.as_deref(), &text)
}

fn steady(args: &SteadyArgs) -> CmdResult {
    let params = args.params.params();
    checked(&params)?;
    let sigma = steady_state(&params)?;
    let report = full_report(&sigma, &args.measures.options())?;
    let comments = vec![format!(
        "gaussdyn steady {} {}",
        param_flags(&params),
        args.measures.flags()
    )];
    let text = output::steady_text(&comments, &sigma, &report, args.measures.format());
    write_text(args.out.as_deref(), &text)
}

fn figure(args: &FigureArgs) -> CmdResult {
    let preset = figure_preset(&args.id)?;
    let grid = TimeGrid::new(
        preset.grid.t_start(),
        args.t_end.unwrap_or(preset.grid.t_end()),
        args.points.unwrap_or(preset.grid.n_points()),
    )?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::domain(format!("cannot create {}: {e}", args.out.display())))?;

    let opts = EvolveOptions { measures: args.measures.options(), ..EvolveOptions::default() };
    let results = sweep_parameter(&preset.base, preset.param, &preset.values, &grid, &opts);
    let fmt = args.measures.format();
    let mut series = Vec::new();
    let mut failures = Vec::new();
    for (&value, result) in preset.values.iter().zip(results) {
        let label = format!("{}={}", preset.param, value);
        let traj = match result {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let command = evolve_command_line(
            &traj.params,
            &grid,
            IntegratorArg::Auto,
            opts.dt,
            args.threshold,
            &args.measures,
        );
        let mut comments = trajectory_comments(command, &traj, &grid, args.threshold);
        comments.insert(1, format!("figure {} {label} observable={}", preset.id, preset.observable));
        let path = args.out.join(format!("{}_{label}.csv", preset.id));
        write_text(Some(&path), &output::trajectory_csv(&comments, &traj, fmt))?;
        series.push(plot::Series {
            label,
            xs: traj.times(),
            ys: traj.series(preset.observable),
        });
    }

    let title = format!("{}: {} vs t, varying {}", preset.id, preset.observable, preset.param);
    let svg = plot::render_svg(&plot::Chart {
        title: &title,
        x_label: "t",
        y_label: preset.observable.column(),
        series: &series,
    });
    write_text(Some(&args.out.join(format!("{}.svg", preset.id))), &svg)?;

    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::domain(failures.join("\n")))
    }
}
