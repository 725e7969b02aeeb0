//! Trajectories over time grids, parameter sweeps and sudden-death detection.

mod presets;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{CovarianceFlow, Propagator, DEFAULT_DT};
use crate::error::{Error, Result};
use crate::measures::{full_report, CorrelationReport, MeasureOptions};
use crate::model::{initial_squeezed_vacuum, CovMatrix, SystemParams};

pub use presets::{figure_preset, FigurePreset, Observable, FIGURE_IDS};

/// Default threshold separating zero from positive logarithmic negativity.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

/// Uniform time grid including both end points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_start >= 0.0) {
            return Err(Error::InvalidGrid(format!("t_start must be >= 0, got {t_start}")));
        }
        if !(t_end.is_finite() && t_end > t_start) {
            return Err(Error::InvalidGrid(format!(
                "t_end must exceed t_start ({t_end} <= {t_start})"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        Ok(Self { t_start, t_end, n_points })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.t_end
        } else {
            self.t_start + i as f64 * self.spacing()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.time(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integrator {
    /// Closed form when a steady state exists, RK4 otherwise.
    #[default]
    Auto,
    /// Closed form only; fails without a steady state.
    Closed,
    Rk4,
}

impl Integrator {
    pub fn as_str(self) -> &'static str {
        match self {
            Integrator::Auto => "auto",
            Integrator::Closed => "closed",
            Integrator::Rk4 => "rk4",
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub integrator: Integrator,
    /// Largest RK4 step.
    pub dt: f64,
    pub measures: MeasureOptions,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { integrator: Integrator::Auto, dt: DEFAULT_DT, measures: MeasureOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub sigma: CovMatrix,
    pub report: CorrelationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: SystemParams,
    /// `Closed` or `Rk4`: the path actually taken.
    pub integrator: Integrator,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn series(&self, observable: Observable) -> Vec<f64> {
        self.points.iter().map(|p| observable.of(&p.report)).collect()
    }

    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }
}

/// Evolves the two-mode squeezed vacuum with squeezing `params.r` over `grid`.
pub fn evolve_trajectory(
    params: &SystemParams,
    grid: &TimeGrid,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let params = params.validated()?;
    let sigma0 = initial_squeezed_vacuum(params.r);

    let closed = match opts.integrator {
        Integrator::Rk4 => None,
        Integrator::Closed => Some(Propagator::new(&params)?),
        Integrator::Auto => match Propagator::new(&params) {
            Ok(p) => Some(p),
            Err(Error::SteadyStateUnavailable(_)) => None,
            Err(e) => return Err(e),
        },
    };

    let mut points = Vec::with_capacity(grid.n_points());
    let integrator = match closed {
        Some(prop) => {
            for t in grid.times() {
                let sigma = prop.propagate(&sigma0, t)?;
                points.push(TrajectoryPoint { t, sigma, report: full_report(&sigma, &opts.measures)? });
            }
            Integrator::Closed
        }
        None => {
            let flow = CovarianceFlow::new(&params);
            let mut sigma = flow.integrate(&sigma0, grid.t_start(), opts.dt)?;
            let mut prev_t = grid.t_start();
            for t in grid.times() {
                sigma = flow.integrate(&sigma, t - prev_t, opts.dt)?;
                prev_t = t;
                points.push(TrajectoryPoint { t, sigma, report: full_report(&sigma, &opts.measures)? });
            }
            Integrator::Rk4
        }
    };
    Ok(Trajectory { params, integrator, points })
}

/// A parameter that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Omega,
    Epsilon,
    Nu,
    Lambda,
    Temperature,
    R,
}

impl SweepParam {
    /// Name used on the command line and in output file names.
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Omega => "omega",
            SweepParam::Epsilon => "epsilon",
            SweepParam::Nu => "nu",
            SweepParam::Lambda => "lambda",
            SweepParam::Temperature => "temp",
            SweepParam::R => "r",
        }
    }

    pub fn get(self, p: &SystemParams) -> f64 {
        match self {
            SweepParam::Omega => p.omega,
            SweepParam::Epsilon => p.epsilon,
            SweepParam::Nu => p.nu,
            SweepParam::Lambda => p.lambda_,
            SweepParam::Temperature => p.temperature,
            SweepParam::R => p.r,
        }
    }

    pub fn with(self, base: &SystemParams, value: f64) -> SystemParams {
        let mut p = *base;
        match self {
            SweepParam::Omega => p.omega = value,
            SweepParam::Epsilon => p.epsilon = value,
            SweepParam::Nu => p.nu = value,
            SweepParam::Lambda => p.lambda_ = value,
            SweepParam::Temperature => p.temperature = value,
            SweepParam::R => p.r = value,
        }
        p
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(SweepParam::Omega),
            "epsilon" => Ok(SweepParam::Epsilon),
            "nu" => Ok(SweepParam::Nu),
            "lambda" | "lambda_" => Ok(SweepParam::Lambda),
            "temp" | "temperature" | "T" => Ok(SweepParam::Temperature),
            "r" => Ok(SweepParam::R),
            other => Err(Error::UnknownParameter(other.to_string())),
        }
    }
}

/// One trajectory per value, in input order. Failures stay per value.
pub fn sweep_parameter(
    base: &SystemParams,
    which: SweepParam,
    values: &[f64],
    grid: &TimeGrid,
    opts: &EvolveOptions,
) -> Vec<Result<Trajectory>> {
    values
        .par_iter()
        .map(|&v| evolve_trajectory(&which.with(base, v), grid, opts))
        .collect()
}

/// A threshold crossing bracketed by two consecutive grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Index of the grid point before the crossing.
    pub index: usize,
    pub t_before: f64,
    pub t_after: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuddenDeathReport {
    /// Positive → zero transitions.
    pub deaths: Vec<Crossing>,
    /// Zero → positive transitions.
    pub revivals: Vec<Crossing>,
    /// Logarithmic negativity at the last grid point exceeds the threshold.
    pub asymptotically_entangled: bool,
}

impl SuddenDeathReport {
    /// True when the last death is not followed by a revival.
    pub fn permanent_death(&self) -> bool {
        match (self.deaths.last(), self.revivals.last()) {
            (Some(d), Some(r)) => d.index > r.index,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

pub fn detect_sudden_death(traj: &Trajectory, threshold: f64) -> SuddenDeathReport {
    detect_crossings(&traj.times(), &traj.series(Observable::LogNegativity), threshold)
}

/// Scans `values` for crossings of `threshold` (strictly above ↔ at or below).
pub fn detect_crossings(times: &[f64], values: &[f64], threshold: f64) -> SuddenDeathReport {
    let mut report = SuddenDeathReport::default();
    for (i, w) in values.windows(2).enumerate() {
        let crossing = Crossing { index: i, t_before: times[i], t_after: times[i + 1] };
        match (w[0] > threshold, w[1] > threshold) {
            (true, false) => report.deaths.push(crossing),
            (false, true) => report.revivals.push(crossing),
            _ => {}
        }
    }
    report.asymptotically_entangled = values.last().is_some_and(|&v| v > threshold);
    report
}
