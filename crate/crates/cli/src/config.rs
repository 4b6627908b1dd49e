//! Experiment configuration files (TOML). Every key is optional; unknown
//! keys are rejected at every level so a misspelt constant cannot be
//! silently ignored.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mrcwpt_core::{
    presets, AngleMode, LoadBounds, OutageQuery, QuadratureConfig, SimConfig, SystemParams,
    TypicalMode,
};
use serde::{Deserialize, Serialize};

use crate::units::{calibrate_omega_db, db_to_watts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Fig2,
    Fig3,
    Fig4,
    Custom,
}

impl ExperimentId {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Fig2 => "fig2",
            ExperimentId::Fig3 => "fig3",
            ExperimentId::Fig4 => "fig4",
            ExperimentId::Custom => "custom",
        }
    }
}

/// Overrides of the reference cell. `omega` has no default; it must be given
/// here, on the command line, or obtained by calibration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemOverrides {
    pub omega: Option<f64>,
    pub calibrate_omega: Option<bool>,
    pub tx_resistance: Option<f64>,
    pub rx_resistance: Option<f64>,
    pub coil_constant: Option<f64>,
    pub cell_radius: Option<f64>,
    pub density: Option<f64>,
    pub power_threshold: Option<f64>,
    pub load_lower: Option<f64>,
    pub load_upper: Option<f64>,
}

impl SystemOverrides {
    /// Reference parameters with the overrides applied, at the given `ω`.
    pub fn apply(&self, omega: f64) -> Result<SystemParams> {
        let base = presets::reference_params(omega);
        let params = SystemParams {
            omega,
            tx_resistance: self.tx_resistance.unwrap_or(base.tx_resistance),
            rx_resistance: self.rx_resistance.unwrap_or(base.rx_resistance),
            coil_constant: self.coil_constant.unwrap_or(base.coil_constant),
            cell_radius: self.cell_radius.unwrap_or(base.cell_radius),
            density: self.density.unwrap_or(base.density),
            power_threshold: self.power_threshold.unwrap_or(base.power_threshold),
            load_bounds: LoadBounds {
                lower: self.load_lower.unwrap_or(base.load_bounds.lower),
                upper: self.load_upper.unwrap_or(base.load_bounds.upper),
            },
            ..base
        };
        params.validate().context("invalid system parameters")?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PowerUnit {
    #[default]
    Dbw,
    Watts,
}

/// Transmit-power sweep. Exactly one of `step` and `points` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: Option<f64>,
    pub points: Option<usize>,
    #[serde(default)]
    pub unit: PowerUnit,
}

impl SweepSpec {
    pub fn stepped(start: f64, stop: f64, step: f64) -> Self {
        SweepSpec {
            start,
            stop,
            step: Some(step),
            points: None,
            unit: PowerUnit::Dbw,
        }
    }

    pub fn single(value: f64, unit: PowerUnit) -> Self {
        SweepSpec {
            start: value,
            stop: value,
            step: None,
            points: Some(1),
            unit,
        }
    }

    /// Sweep values in the sweep's own unit.
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.stop < self.start {
            bail!(
                "sweep range [{}, {}] is empty or not finite",
                self.start,
                self.stop
            );
        }
        let values: Vec<f64> = match (self.step, self.points) {
            (Some(step), None) => {
                if !(step > 0.0) {
                    bail!("sweep step must be positive, got {step}");
                }
                // the slack absorbs rounding in (stop − start)/step
                let n = ((self.stop - self.start) / step + 1e-9).floor() as usize + 1;
                (0..n).map(|k| self.start + k as f64 * step).collect()
            }
            (None, Some(0)) => bail!("sweep needs at least one point"),
            (None, Some(1)) => vec![self.start],
            (None, Some(n)) => {
                let h = (self.stop - self.start) / (n - 1) as f64;
                (0..n).map(|k| self.start + k as f64 * h).collect()
            }
            _ => bail!("sweep needs exactly one of `step` and `points`"),
        };
        if self.unit == PowerUnit::Watts && values.iter().any(|&w| w < 0.0) {
            bail!("transmit power in watts must be non-negative");
        }
        Ok(values)
    }

    pub fn to_watts(&self, value: f64) -> f64 {
        match self.unit {
            PowerUnit::Dbw => db_to_watts(value),
            PowerUnit::Watts => value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSettings {
    /// Zero disables the Monte Carlo columns.
    pub trials: usize,
    pub seed: u64,
    pub angle_mode: AngleMode,
    pub typical_mode: TypicalMode,
}

impl Default for SimulationSettings {
    fn default() -> Self {
        SimulationSettings {
            trials: 100_000,
            seed: 1,
            angle_mode: AngleMode::ExactRandom,
            typical_mode: TypicalMode::Fixed,
        }
    }
}

impl SimulationSettings {
    pub fn sim_config(&self) -> Option<SimConfig> {
        (self.trials > 0).then_some(SimConfig {
            trials: self.trials,
            seed: self.seed,
            angle_mode: self.angle_mode,
            typical_mode: self.typical_mode,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongCase {
    pub alignment: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig2Settings {
    pub cases: Vec<StrongCase>,
    /// Common load of all receivers, Ω.
    pub load: f64,
}

impl Default for Fig2Settings {
    fn default() -> Self {
        let case = |alignment, distance| StrongCase {
            alignment,
            distance,
        };
        Fig2Settings {
            cases: vec![
                case(1.0, 1.5),
                case(2.0, 1.5),
                case(1.0, 3.0),
                case(2.0, 3.0),
            ],
            load: presets::OUTAGE_LOAD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LooseCase {
    pub alignment: f64,
    /// Ω; the receiver resistance when absent.
    pub load: Option<f64>,
    /// Replaces the system transmitter resistance for this case, Ω.
    pub tx_resistance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig3Settings {
    pub cases: Vec<LooseCase>,
}

impl Default for Fig3Settings {
    fn default() -> Self {
        let case = |alignment, load, tx_resistance| LooseCase {
            alignment,
            load,
            tx_resistance,
        };
        Fig3Settings {
            cases: vec![
                case(0.25, None, None),
                case(0.25, None, Some(2.5)),
                case(0.5, None, None),
                case(0.5, Some(1.0), None),
                case(0.5, Some(2.0), None),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Fig4Settings {
    /// Signed, H.
    pub mutual_inductances: Vec<f64>,
    pub power_db: f64,
}

impl Default for Fig4Settings {
    fn default() -> Self {
        Fig4Settings {
            mutual_inductances: presets::GAME_MUTUAL_INDUCTANCES.to_vec(),
            power_db: presets::GAME_POWER_DBW,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentId>,
    pub system: SystemOverrides,
    pub sweep: Option<SweepSpec>,
    pub simulation: SimulationSettings,
    pub quadrature: QuadratureConfig,
    pub fig2: Fig2Settings,
    pub fig3: Fig3Settings,
    pub fig4: Fig4Settings,
    /// Where results go; excluded from the config hash.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).context("malformed configuration")?;
        cfg.quadrature
            .validate()
            .context("invalid [quadrature] settings")?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// The configured sweep, or the default one of the experiment.
    pub fn sweep_for(&self, id: ExperimentId) -> SweepSpec {
        self.sweep.clone().unwrap_or_else(|| match id {
            ExperimentId::Fig3 => SweepSpec::stepped(0.0, 45.0, 5.0),
            _ => SweepSpec::stepped(-5.0, 40.0, 5.0),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaSource {
    Given,
    Calibrated,
}

/// How the command line asks for `ω`, if at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaRequest {
    Unspecified,
    Given(f64),
    Calibrate,
}

/// Resolves `ω`: command line first, then the config file. Calibration uses
/// the zero-outage anchor with the configured resistances and geometry.
pub fn resolve_omega(cfg: &ExperimentConfig, request: OmegaRequest) -> Result<(f64, OmegaSource)> {
    let calibrate = || -> Result<(f64, OmegaSource)> {
        let params = cfg.system.apply(1.0)?;
        let q = OutageQuery::loose(
            params.power_threshold,
            presets::MIN_POWER_ANCHOR_ALIGNMENT,
            params.rx_resistance,
        )?;
        let omega = calibrate_omega_db(presets::MIN_POWER_ANCHOR_DBW, &params, &q)?;
        Ok((omega, OmegaSource::Calibrated))
    };
    match request {
        OmegaRequest::Given(w) => Ok((w, OmegaSource::Given)),
        OmegaRequest::Calibrate => calibrate(),
        OmegaRequest::Unspecified => match (cfg.system.omega, cfg.system.calibrate_omega) {
            (Some(_), Some(true)) => {
                bail!("config sets both system.omega and system.calibrate_omega")
            }
            (Some(w), _) => Ok((w, OmegaSource::Given)),
            (None, Some(true)) => calibrate(),
            (None, _) => bail!(
                "omega has no default: pass --omega <rad/s> or --calibrate-omega, \
                 or set system.omega / system.calibrate_omega in the config"
            ),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_all_defaults() {
        let cfg = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.fig2.cases.len(), 4);
        assert_eq!(cfg.fig3.cases.len(), 5);
    }

    #[test]
    fn unknown_keys_are_rejected_at_every_level() {
        for text in [
            "experimnt = \"fig2\"",
            "[system]\ntx_resistence = 1.0",
            "[sweep]\nstart = 0\nstop = 1\npoints = 2\nstpe = 1",
            "[simulation]\ntrails = 10",
            "[quadrature]\nabs_tol = 1e-4\nabstol = 1",
            "[fig2]\nload = 2\nlaod = 3",
        ] {
            assert!(ExperimentConfig::from_toml(text).is_err(), "{text}");
        }
    }

    #[test]
    fn overrides_reach_system_params() {
        let cfg = ExperimentConfig::from_toml(
            "[system]\ntx_resistance = 2.5\ndensity = 0.3\nload_upper = 10.0",
        )
        .unwrap();
        let p = cfg.system.apply(1e7).unwrap();
        assert_eq!(p.tx_resistance, 2.5);
        assert_eq!(p.density, 0.3);
        assert_eq!(p.load_bounds.upper, 10.0);
        assert_eq!(p.rx_resistance, presets::RX_RESISTANCE);
        let bad = ExperimentConfig::from_toml("[system]\ncell_radius = -1.0").unwrap();
        assert!(bad.system.apply(1e7).is_err());
    }

    #[test]
    fn sweep_values() {
        assert_eq!(
            SweepSpec::stepped(0.0, 45.0, 5.0).values().unwrap().len(),
            10
        );
        assert_eq!(SweepSpec::stepped(0.0, 0.3, 0.1).values().unwrap().len(), 4);
        let pts = SweepSpec {
            start: 1.0,
            stop: 2.0,
            step: None,
            points: Some(3),
            unit: PowerUnit::Watts,
        };
        assert_eq!(pts.values().unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(pts.to_watts(1.5), 1.5);
        assert!(SweepSpec::stepped(1.0, 0.0, 1.0).values().is_err());
        assert!(SweepSpec::stepped(0.0, 1.0, 0.0).values().is_err());
        let both = SweepSpec {
            points: Some(2),
            ..SweepSpec::stepped(0.0, 1.0, 0.5)
        };
        assert!(both.values().is_err());
    }

    #[test]
    fn omega_is_never_defaulted() {
        let cfg = ExperimentConfig::default();
        assert!(resolve_omega(&cfg, OmegaRequest::Unspecified).is_err());
        let (w, src) = resolve_omega(&cfg, OmegaRequest::Given(3.0)).unwrap();
        assert_eq!((w, src), (3.0, OmegaSource::Given));
        let (w, src) = resolve_omega(&cfg, OmegaRequest::Calibrate).unwrap();
        assert_eq!(src, OmegaSource::Calibrated);
        assert!((w - 1.42e7).abs() < 0.01e7);
        let both =
            ExperimentConfig::from_toml("[system]\nomega = 1.0\ncalibrate_omega = true").unwrap();
        assert!(resolve_omega(&both, OmegaRequest::Unspecified).is_err());
    }
}
