//! Parameter presets for the figure panels.
//!
//! Each panel fixes five parameters and sweeps the sixth. The fixed values are
//! the published ones; the swept value lists are our own defaults.

use std::fmt;

use crate::error::{Error, Result};
use crate::measures::CorrelationReport;
use crate::model::SystemParams;

use super::{SweepParam, TimeGrid};

pub const FIGURE_IDS: [&str; 15] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b",
    "fig3c", "fig3d", "fig4a", "fig4b", "fig4c",
];

const TEMPERATURES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
const LAMBDAS: [f64; 4] = [0.3, 0.6, 0.9, 1.2];
const SQUEEZINGS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
// 0.75 rather than 0.9: the ε panels fix ν = 0.6, which needs ω1ω2 >= 0.6.
const ASYMMETRIES: [f64; 4] = [0.0, 0.3, 0.6, 0.75];
const COUPLINGS: [f64; 3] = [0.0, 0.3, 0.6];
const COUPLING_BOUND_FRACTION: f64 = 0.9;

pub const PRESET_T_END: f64 = 10.0;
pub const PRESET_POINTS: usize = 501;

/// The quantity plotted in a panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Discord,
    LogNegativity,
    Purity,
}

impl Observable {
    pub fn of(self, report: &CorrelationReport) -> f64 {
        match self {
            Observable::Discord => report.discord,
            Observable::LogNegativity => report.log_negativity,
            Observable::Purity => report.purity,
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Observable::Discord => "discord",
            Observable::LogNegativity => "log_negativity",
            Observable::Purity => "purity",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    /// Fixed parameters; the swept field holds the first swept value.
    pub base: SystemParams,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub observable: Observable,
    pub grid: TimeGrid,
}

impl FigurePreset {
    pub fn params_for(&self, value: f64) -> SystemParams {
        self.param.with(&self.base, value)
    }
}

fn params(omega: f64, epsilon: f64, nu: f64, lambda_: f64, temperature: f64, r: f64) -> SystemParams {
    SystemParams { omega, epsilon, nu, lambda_, temperature, r }
}

pub fn figure_preset(id: &str) -> Result<FigurePreset> {
    use Observable::*;
    use SweepParam::*;

    let (id, observable) = match FIGURE_IDS.iter().find(|&&known| known == id) {
        Some(&known) => match &known[..4] {
            "fig1" => (known, Discord),
            "fig2" => (known, LogNegativity),
            "fig3" => (known, Purity),
            _ => match known {
                "fig4a" => (known, LogNegativity),
                "fig4b" => (known, Discord),
                _ => (known, Purity),
            },
        },
        None => return Err(Error::UnknownFigure(id.to_string())),
    };

    // (fixed parameters, swept parameter, default values)
    let (base, param, values): (SystemParams, SweepParam, Vec<f64>) = match id {
        "fig1a" => (params(1.0, 0.0, 0.8, 0.6, f64::NAN, 1.0), Temperature, TEMPERATURES.to_vec()),
        "fig1b" => (params(1.0, 0.0, 0.8, f64::NAN, 0.2, 1.0), Lambda, LAMBDAS.to_vec()),
        "fig1c" => (params(1.0, 0.0, 0.8, 0.6, 0.2, f64::NAN), R, SQUEEZINGS.to_vec()),
        "fig1d" => (params(1.0, f64::NAN, 0.6, 0.6, 0.2, 1.0), Epsilon, ASYMMETRIES.to_vec()),
        "fig2a" => (params(1.0, 0.0, 0.8, 0.6, f64::NAN, 2.0), Temperature, TEMPERATURES.to_vec()),
        "fig2b" => (params(1.0, 0.0, 0.8, f64::NAN, 0.2, 2.0), Lambda, LAMBDAS.to_vec()),
        "fig2c" => (params(1.0, 0.0, 0.8, 0.6, 0.2, f64::NAN), R, SQUEEZINGS.to_vec()),
        "fig2d" => (params(1.0, f64::NAN, 0.6, 0.6, 0.2, 2.0), Epsilon, ASYMMETRIES.to_vec()),
        "fig3a" => (params(1.0, 0.0, 0.8, 0.6, f64::NAN, 2.0), Temperature, TEMPERATURES.to_vec()),
        "fig3b" => (params(1.0, 0.0, 0.8, f64::NAN, 0.5, 2.0), Lambda, LAMBDAS.to_vec()),
        "fig3c" => (params(1.0, 0.0, 0.8, 0.6, 0.5, f64::NAN), R, SQUEEZINGS.to_vec()),
        "fig3d" => (params(1.0, f64::NAN, 0.6, 0.6, 0.5, 2.0), Epsilon, ASYMMETRIES.to_vec()),
        _ => {
            let base = params(1.0, 0.5, f64::NAN, 0.6, 0.2, 2.0);
            let mut values = COUPLINGS.to_vec();
            values.push(COUPLING_BOUND_FRACTION * base.coupling_bound());
            (base, Nu, values)
        }
    };
    let base = param.with(&base, values[0]);
    let grid = TimeGrid::new(0.0, PRESET_T_END, PRESET_POINTS)?;
    Ok(FigurePreset { id, base, param, values, observable, grid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for id in FIGURE_IDS {
            let preset = figure_preset(id).unwrap();
            assert_eq!(preset.id, id);
            for &v in &preset.values {
                let p = preset.params_for(v);
                assert!(p.validate().is_ok(), "{id} {}={v}: {:?}", preset.param, p.validate());
            }
        }
    }

    #[test]
    fn caption_values() {
        let p = figure_preset("fig1a").unwrap();
        assert_eq!(p.param, SweepParam::Temperature);
        assert_eq!(p.observable, Observable::Discord);
        let b = p.base;
        assert_eq!((b.epsilon, b.r, b.lambda_, b.nu, b.omega), (0.0, 1.0, 0.6, 0.8, 1.0));
        assert_eq!(p.values, vec![0.1, 0.5, 1.0, 2.0]);

        let p = figure_preset("fig3b").unwrap();
        assert_eq!(p.param, SweepParam::Lambda);
        let b = p.base;
        assert_eq!((b.temperature, b.r, b.epsilon, b.nu, b.omega), (0.5, 2.0, 0.0, 0.8, 1.0));

        let p = figure_preset("fig4c").unwrap();
        assert_eq!((p.param, p.observable), (SweepParam::Nu, Observable::Purity));
        let b = p.base;
        assert_eq!((b.epsilon, b.r, b.lambda_, b.temperature, b.omega), (0.5, 2.0, 0.6, 0.2, 1.0));
        assert!((p.values[3] - 0.9 * 0.75f64.sqrt()).abs() < 1e-12);

        assert_eq!(figure_preset("fig2b").unwrap().observable, Observable::LogNegativity);
        assert_eq!(figure_preset("fig4b").unwrap().observable, Observable::Discord);
    }

    #[test]
    fn preset_grid() {
        let g = figure_preset("fig2c").unwrap().grid;
        assert_eq!((g.t_start(), g.t_end(), g.n_points()), (0.0, 10.0, 501));
    }

    #[test]
    fn unknown_figure() {
        assert_eq!(figure_preset("fig9"), Err(Error::UnknownFigure("fig9".into())));
        assert!(figure_preset("fig4d").is_err());
    }
}
