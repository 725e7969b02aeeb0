//! Symplectic invariants and correlation measures of two-mode Gaussian states.
//!
//! Everything here is a function of the four local symplectic invariants
//! `I1 = det A`, `I2 = det B`, `I3 = det C` and `I4 = det σ` of the block form
//!
//! ```text
//! σ = | A   C |
//!     | Cᵀ  B |
//! ```
//!
//! so the covariance matrix does not need to be brought to standard form first.

// Negated comparisons below deliberately send NaN down the rejection path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::CovMatrix;

/// Radicands `Δ² − 4I4` with magnitude below this are treated as zero.
pub const RADICAND_TOL: f64 = 1e-10;

/// Squared symplectic eigenvalues below `-NEGATIVE_EIGEN_TOL` are an error.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-8;

/// Slack on the uncertainty relation `ν₋ >= 1`.
pub const PHYSICAL_TOL: f64 = 1e-8;

/// Arguments of the entropy function this far below 1 are clamped to 1.
pub const ENTROPY_DOMAIN_TOL: f64 = 1e-9;

/// Slightly negative discord values down to this are clamped to 0.
pub const DISCORD_CLAMP_TOL: f64 = 1e-9;

/// `|I2 − 1|` below this makes the first ζ branch singular.
pub const DEGENERATE_I2_TOL: f64 = 1e-8;

/// Relative slack on the ζ branch condition; ties go to the first branch.
const BRANCH_TIE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    /// Converts a value measured in nats to this base.
    pub fn from_nats(self, value: f64) -> f64 {
        match self {
            LogBase::E => value,
            LogBase::Two => value / std::f64::consts::LN_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::E => "e",
            LogBase::Two => "2",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            other => Err(format!("unknown log base `{other}` (expected `e` or `2`)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MeasureOptions {
    pub log_base: LogBase,
    /// Measure on mode 1 instead of mode 2 in the discord (swaps `I1` and `I2`).
    pub swap_modes: bool,
}

/// Symplectic invariants and eigenvalues of a two-mode covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticData {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    /// `Δ = I1 + I2 + 2 I3`.
    pub delta: f64,
    /// `Δ̃ = I1 + I2 − 2 I3`, the partial-transpose counterpart of `Δ`.
    pub delta_tilde: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Smaller symplectic eigenvalue of the partially transposed state.
    pub nu_tilde_minus: f64,
}

impl SymplecticData {
    pub fn from_invariants(i1: f64, i2: f64, i3: f64, i4: f64) -> Result<Self> {
        let delta = i1 + i2 + 2.0 * i3;
        let delta_tilde = i1 + i2 - 2.0 * i3;
        let (nu_minus_sq, nu_plus_sq) = eigen_pair(delta, i4)?;
        let (nu_tilde_minus_sq, _) = eigen_pair(delta_tilde, i4)?;
        for (name, v) in [
            ("nu_minus^2", nu_minus_sq),
            ("nu_plus^2", nu_plus_sq),
            ("nu_tilde_minus^2", nu_tilde_minus_sq),
        ] {
            if !(v >= -NEGATIVE_EIGEN_TOL) {
                return Err(Error::NonPhysicalInput(format!("{name} = {v}")));
            }
        }
        Ok(Self {
            i1,
            i2,
            i3,
            i4,
            delta,
            delta_tilde,
            nu_minus: nu_minus_sq.max(0.0).sqrt(),
            nu_plus: nu_plus_sq.max(0.0).sqrt(),
            nu_tilde_minus: nu_tilde_minus_sq.max(0.0).sqrt(),
        })
    }

    /// Same state with the two modes exchanged.
    pub fn swap_modes(&self) -> Self {
        Self { i1: self.i2, i2: self.i1, ..*self }
    }

    pub fn is_physical(&self) -> bool {
        check_physical(self)
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }
}

/// Roots `(x₋, x₊)` of `x² − s x + p = 0`, paired so that `x₋ x₊ = p` holds
/// to rounding even when the roots nearly coincide.
fn eigen_pair(sum: f64, product: f64) -> Result<(f64, f64)> {
    let mut radicand = sum * sum - 4.0 * product;
    if radicand.abs() < RADICAND_TOL {
        radicand = 0.0;
    }
    if !(radicand >= 0.0) {
        return Err(Error::NonPhysicalInput(format!(
            "complex symplectic spectrum (radicand {radicand})"
        )));
    }
    let root = radicand.sqrt();
    let plus = (sum + root) / 2.0;
    let minus = if plus > 0.0 { product / plus } else { (sum - root) / 2.0 };
    Ok((minus, plus))
}

pub fn invariants(sigma: &CovMatrix) -> Result<SymplecticData> {
    let m = sigma.matrix();
    let det2 = |r: usize, c: usize| m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)];
    SymplecticData::from_invariants(det2(0, 0), det2(2, 2), det2(0, 2), sigma.det())
}

/// Uncertainty relation `ν₋ >= 1` (with [`PHYSICAL_TOL`] slack).
pub fn check_physical(data: &SymplecticData) -> bool {
    data.nu_minus >= 1.0 - PHYSICAL_TOL
}

/// `μ = 1/(ν₊ν₋)`.
pub fn purity(data: &SymplecticData) -> f64 {
    let mu = 1.0 / (data.nu_plus * data.nu_minus);
    debug_assert!(
        data.i4 <= 0.0 || (mu * data.i4.sqrt() - 1.0).abs() <= 1e-9,
        "purity {mu} inconsistent with det {}",
        data.i4
    );
    mu
}

/// `E_n = max{0, −log ν̃₋}`.
pub fn log_negativity(data: &SymplecticData, base: LogBase) -> f64 {
    let nats = -data.nu_tilde_minus.ln();
    base.from_nats(nats.max(0.0))
}

/// `f(x) = (x+1)/2 ln((x+1)/2) − (x−1)/2 ln((x−1)/2)` in nats.
pub fn f_entropy(x: f64) -> Result<f64> {
    if !(x >= 1.0 - ENTROPY_DOMAIN_TOL) {
        return Err(Error::DomainError(x));
    }
    if x <= 1.0 {
        return Ok(0.0);
    }
    let a = (x + 1.0) / 2.0;
    let b = (x - 1.0) / 2.0;
    let tail = if b > 0.0 { b * b.ln() } else { 0.0 };
    Ok(a * a.ln() - tail)
}

/// Which case of the piecewise ζ expression was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaBranch {
    First,
    Second,
    /// The condition selected the first case but `I2 ≈ 1` makes it singular.
    SecondForced,
}

impl ZetaBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            ZetaBranch::First => "first",
            ZetaBranch::Second => "second",
            ZetaBranch::SecondForced => "second-forced",
        }
    }
}

impl fmt::Display for ZetaBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `true` when the first ζ case applies:
/// `(I4 − I1 I2)² <= (I2 + 1) I3² (I1 + I4)`.
fn first_branch_condition(d: &SymplecticData) -> bool {
    let lhs = (d.i4 - d.i1 * d.i2).powi(2);
    let rhs = (d.i2 + 1.0) * d.i3 * d.i3 * (d.i1 + d.i4);
    let floor = (16.0 * f64::EPSILON * (d.i4.abs() + (d.i1 * d.i2).abs())).powi(2);
    lhs <= rhs + BRANCH_TIE_REL_TOL * (lhs.abs() + rhs.abs()) + floor
}

/// `[2I3² + g + 2|I3|√(I3² + g)] / (I2 − 1)²` with `g = (I2 − 1)(I4 − I1)`,
/// evaluated as the perfect square `[(|I3| + √(I3² + g)) / (I2 − 1)]²`.
fn zeta_first(d: &SymplecticData) -> f64 {
    let g = (d.i2 - 1.0) * (d.i4 - d.i1);
    let inner = (d.i3 * d.i3 + g).max(0.0);
    ((d.i3.abs() + inner.sqrt()) / (d.i2 - 1.0)).powi(2)
}

fn zeta_second(d: &SymplecticData) -> f64 {
    let p = d.i1 * d.i2;
    let i3_sq = d.i3 * d.i3;
    let radicand = (i3_sq * i3_sq + (d.i4 - p).powi(2) - 2.0 * i3_sq * (p + d.i4)).max(0.0);
    (p - i3_sq + d.i4 - radicand.sqrt()) / (2.0 * d.i2)
}

/// Gaussian discord `f(√I2) − f(ν₋) − f(ν₊) + f(√ζ)` with mode 2 measured.
pub fn gaussian_discord(data: &SymplecticData, base: LogBase) -> Result<(f64, ZetaBranch)> {
    if !check_physical(data) {
        return Err(Error::NonPhysicalInput(format!(
            "nu_minus = {} violates the uncertainty relation",
            data.nu_minus
        )));
    }
    let (zeta, branch) = if first_branch_condition(data) {
        if (data.i2 - 1.0).abs() < DEGENERATE_I2_TOL {
            (zeta_second(data), ZetaBranch::SecondForced)
        } else {
            (zeta_first(data), ZetaBranch::First)
        }
    } else {
        (zeta_second(data), ZetaBranch::Second)
    };
    if !zeta.is_finite() {
        return Err(Error::DegenerateState(format!(
            "zeta = {zeta} (I1 = {}, I2 = {}, I3 = {}, I4 = {})",
            data.i1, data.i2, data.i3, data.i4
        )));
    }

    // Physical states may sit a hair below 1 from rounding.
    let at_least_one = |x: f64| if x >= 1.0 - PHYSICAL_TOL { x.max(1.0) } else { x };
    let nats = f_entropy(at_least_one(data.i2.max(0.0).sqrt()))?
        - f_entropy(at_least_one(data.nu_minus))?
        - f_entropy(at_least_one(data.nu_plus))?
        + f_entropy(at_least_one(zeta.max(0.0).sqrt()))?;
    let nats = if (-DISCORD_CLAMP_TOL..0.0).contains(&nats) { 0.0 } else { nats };
    Ok((base.from_nats(nats), branch))
}

/// All measures at one point in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub purity: f64,
    pub log_negativity: f64,
    /// `NaN` when the state violates the uncertainty relation.
    pub discord: f64,
    pub physical: bool,
    /// `None` when the discord was not evaluated.
    pub zeta_branch: Option<ZetaBranch>,
    pub symplectic: SymplecticData,
}

impl CorrelationReport {
    pub fn from_data(data: SymplecticData, opts: &MeasureOptions) -> Result<Self> {
        let physical = check_physical(&data);
        let (discord, zeta_branch) = if physical {
            let discord_data = if opts.swap_modes { data.swap_modes() } else { data };
            let (d, b) = gaussian_discord(&discord_data, opts.log_base)?;
            (d, Some(b))
        } else {
            (f64::NAN, None)
        };
        Ok(Self {
            purity: 1.0 / (data.nu_plus * data.nu_minus),
            log_negativity: log_negativity(&data, opts.log_base),
            discord,
            physical,
            zeta_branch,
            symplectic: data,
        })
    }
}

pub fn full_report(sigma: &CovMatrix, opts: &MeasureOptions) -> Result<CorrelationReport> {
    CorrelationReport::from_data(invariants(sigma)?, opts)
}
