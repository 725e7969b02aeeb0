//! CSV serialization of trajectories and steady states.

use std::fmt::Write as _;

use gaussdyn::sweep::{SuddenDeathReport, Trajectory, TrajectoryPoint};
use gaussdyn::{CorrelationReport, CovMatrix};

pub const COLUMNS: [&str; 11] = [
    "t",
    "purity",
    "log_negativity",
    "discord",
    "nu_minus",
    "nu_plus",
    "I1",
    "I2",
    "I3",
    "I4",
    "physical",
];

const MEASURE_COLUMNS: [&str; 10] = [
    "purity",
    "log_negativity",
    "discord",
    "nu_minus",
    "nu_plus",
    "I1",
    "I2",
    "I3",
    "I4",
    "physical",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FloatFormat {
    /// 12 significant decimal digits.
    #[default]
    Decimal,
    /// C99 `%a` style hexadecimal, exact.
    Hex,
}

impl FloatFormat {
    pub fn format(self, v: f64) -> String {
        match self {
            FloatFormat::Decimal => format_sig12(v),
            FloatFormat::Hex => format_hex(v),
        }
    }
}

/// Formats `v` with 12 significant digits, fixed notation for moderate
/// magnitudes and scientific otherwise.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return non_finite(v);
    }
    if v == 0.0 {
        return "0.00000000000".to_string();
    }
    // The exponent after rounding to 12 digits, so 0.9999999999999 counts as 1.
    let sci = format!("{v:.11e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..12).contains(&exp) {
        format!("{:.*}", (11 - exp).max(0) as usize, v)
    } else {
        sci
    }
}

fn non_finite(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Exact hexadecimal float, e.g. `0x1.8000000000000p+1` for 3.
pub fn format_hex(v: f64) -> String {
    if !v.is_finite() {
        return non_finite(v);
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = bits & ((1u64 << 52) - 1);
    match (exp_bits, mantissa) {
        (0, 0) => format!("{sign}0x0p+0"),
        (0, m) => format!("{sign}0x0.{m:013x}p-1022"),
        (e, m) => format!("{sign}0x1.{m:013x}p{:+}", e - 1023),
    }
}

/// Parses the output of [`format_hex`] (and plain decimals).
pub fn parse_float(s: &str) -> Option<f64> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let Some(hex) = body.strip_prefix("0x") else {
        return s.parse().ok();
    };
    let (mant, exp) = hex.split_once('p')?;
    let exp: i32 = exp.parse().ok()?;
    let (lead, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let lead = u64::from_str_radix(lead, 16).ok()?;
    let frac_bits = if frac.is_empty() { 0 } else { u64::from_str_radix(frac, 16).ok()? };
    let frac_value = frac_bits as f64 / 16f64.powi(frac.len() as i32);
    let value = (lead as f64 + frac_value) * 2f64.powi(exp);
    Some(if neg { -value } else { value })
}

fn record_fields(report: &CorrelationReport, fmt: FloatFormat) -> Vec<String> {
    let s = &report.symplectic;
    let mut fields: Vec<String> = [
        report.purity,
        report.log_negativity,
        report.discord,
        s.nu_minus,
        s.nu_plus,
        s.i1,
        s.i2,
        s.i3,
        s.i4,
    ]
    .iter()
    .map(|&v| fmt.format(v))
    .collect();
    fields.push(report.physical.to_string());
    fields
}

pub fn trajectory_row(point: &TrajectoryPoint, fmt: FloatFormat) -> String {
    let mut fields = vec![fmt.format(point.t)];
    fields.extend(record_fields(&point.report, fmt));
    fields.join(",")
}

/// Full CSV text: `#` comment lines, header row, one row per grid point.
pub fn trajectory_csv(
    comments: &[String],
    traj: &Trajectory,
    fmt: FloatFormat,
) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{}", COLUMNS.join(","));
    for p in &traj.points {
        let _ = writeln!(out, "{}", trajectory_row(p, fmt));
    }
    out
}

/// Summary comment for entanglement sudden death events.
pub fn sudden_death_comment(report: &SuddenDeathReport, grid_spacing: f64) -> String {
    let brackets = |cs: &[gaussdyn::sweep::Crossing]| {
        cs.iter()
            .map(|c| format!("[{},{}]", c.t_before, c.t_after))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!(
        "sudden_death deaths={{{}}} revivals={{{}}} asymptotically_entangled={} \
         (times bracketed to one grid interval of width {})",
        brackets(&report.deaths),
        brackets(&report.revivals),
        report.asymptotically_entangled,
        grid_spacing
    )
}

pub fn steady_text(
    comments: &[String],
    sigma: &CovMatrix,
    report: &CorrelationReport,
    fmt: FloatFormat,
) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "# steady-state covariance matrix, ordering x1,p1,x2,p2");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| fmt.format(sigma.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    let _ = writeln!(out, "# measures");
    let _ = writeln!(out, "{}", MEASURE_COLUMNS.join(","));
    let _ = writeln!(out, "{}", record_fields(report, fmt).join(","));
    out
}
