//! Sweeps behind the three figures of the numerical study, plus the single
//! point queries of the `outage`, `simulate` and `equilibrium` commands.
//!
//! Sweep points run concurrently; rows come back in sweep order (power
//! major, case minor), so output does not depend on scheduling.

use anyhow::{Context, Result};
use mrcwpt_core::{
    harvested_powers, outage_loose, outage_strong, simulate_outage_loose, simulate_outage_strong,
    solve_equilibrium, GameSpec, NetworkInstance, OutageQuery, OutageResult, QuadratureConfig,
    SimConfig, SimEstimate, SystemParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentId, LooseCase, StrongCase, SweepSpec};
use crate::units::db_to_watts;

/// One sweep point of an outage experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub case: String,
    /// Transmit power in the sweep's unit.
    pub sweep_value: f64,
    pub power_watts: f64,
    pub analytic: Option<f64>,
    pub analytic_error: Option<f64>,
    pub mc_mean: Option<f64>,
    pub mc_standard_error: Option<f64>,
    pub mc_trials: Option<usize>,
    /// `ok`, `infeasible`, `clamped`, or the error that replaced a value.
    pub diagnostics: String,
}

/// Harvested power of one receiver under one load policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub receiver: usize,
    pub policy: String,
    pub mutual_inductance: f64,
    pub load: f64,
    pub power_watts: f64,
}

/// Everything a run needs once `ω` is settled.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub config: ExperimentConfig,
    pub params: SystemParams,
    pub sweep: SweepSpec,
}

impl RunContext {
    pub fn new(config: ExperimentConfig, id: ExperimentId, omega: f64) -> Result<Self> {
        let params = config.system.apply(omega)?;
        let sweep = config.sweep_for(id);
        sweep.values()?;
        Ok(RunContext {
            config,
            params,
            sweep,
        })
    }

    fn sim(&self) -> Option<SimConfig> {
        self.config.simulation.sim_config()
    }
}

pub fn strong_case_label(c: &StrongCase) -> String {
    format!("I0={},d0={}", c.alignment, c.distance)
}

pub fn loose_case_label(c: &LooseCase) -> String {
    let load = c.load.map_or("r".to_string(), |x| x.to_string());
    match c.tx_resistance {
        Some(r) => format!("I0={},x={},R={}", c.alignment, load, r),
        None => format!("I0={},x={}", c.alignment, load),
    }
}

fn analytic_fields(result: Result<OutageResult>) -> (Option<f64>, Option<f64>, String) {
    match result {
        Ok(r) => {
            let diag = if !r.feasible {
                "infeasible"
            } else if r.diagnostics.clamped_beyond_error {
                "clamped"
            } else {
                "ok"
            };
            (Some(r.probability), Some(r.error), diag.to_string())
        }
        Err(e) => (None, None, format!("error: {e:#}")),
    }
}

fn mc_fields(
    estimate: Option<Result<SimEstimate>>,
    diag: &mut String,
) -> (Option<f64>, Option<f64>, Option<usize>) {
    match estimate {
        Some(Ok(e)) => (Some(e.mean), Some(e.standard_error), Some(e.trials)),
        Some(Err(e)) => {
            diag.push_str(&format!("; simulation error: {e:#}"));
            (None, None, None)
        }
        None => (None, None, None),
    }
}

/// Rows for every `(power, case)` pair, evaluated in parallel, returned in
/// power-major order.
fn sweep_rows<C, F>(ctx: &RunContext, cases: &[C], point: F) -> Result<Vec<ResultRow>>
where
    C: Sync,
    F: Fn(&C, f64, f64) -> ResultRow + Sync,
{
    let values = ctx.sweep.values()?;
    let grid: Vec<(f64, &C)> = values
        .iter()
        .flat_map(|&v| cases.iter().map(move |c| (v, c)))
        .collect();
    Ok(grid
        .par_iter()
        .map(|&(v, c)| point(c, v, ctx.sweep.to_watts(v)))
        .collect())
}

/// Strongly coupled outage against the Monte Carlo estimate.
pub fn run_fig2(ctx: &RunContext) -> Result<Vec<ResultRow>> {
    let load = ctx.config.fig2.load;
    let quad = ctx.config.quadrature;
    let sim = ctx.sim();
    sweep_rows(ctx, &ctx.config.fig2.cases, |case, v, watts| {
        let params = ctx.params.with_power(watts);
        let query = OutageQuery::strong(
            ctx.params.power_threshold,
            case.alignment,
            case.distance,
            load,
        );
        strong_row(
            strong_case_label(case),
            v,
            &params,
            query.map_err(Into::into),
            &quad,
            sim.as_ref(),
        )
    })
}

fn strong_row(
    case: String,
    sweep_value: f64,
    params: &SystemParams,
    query: Result<OutageQuery>,
    quad: &QuadratureConfig,
    sim: Option<&SimConfig>,
) -> ResultRow {
    let analytic = query
        .as_ref()
        .map_err(|e| anyhow::anyhow!("{e:#}"))
        .and_then(|q| Ok(outage_strong(params, q, quad)?));
    let (analytic, analytic_error, mut diagnostics) = analytic_fields(analytic);
    let estimate = sim.map(|s| {
        query
            .as_ref()
            .map_err(|e| anyhow::anyhow!("{e:#}"))
            .and_then(|q| Ok(simulate_outage_strong(params, q, s)?))
    });
    let (mc_mean, mc_standard_error, mc_trials) = mc_fields(estimate, &mut diagnostics);
    ResultRow {
        case,
        sweep_value,
        power_watts: params.transmit_power,
        analytic,
        analytic_error,
        mc_mean,
        mc_standard_error,
        mc_trials,
        diagnostics,
    }
}

/// Loosely coupled closed form against the Monte Carlo estimate.
pub fn run_fig3(ctx: &RunContext) -> Result<Vec<ResultRow>> {
    let sim = ctx.sim();
    sweep_rows(ctx, &ctx.config.fig3.cases, |case, v, watts| {
        let mut params = ctx.params.with_power(watts);
        if let Some(r) = case.tx_resistance {
            params = params.with_tx_resistance(r);
        }
        let load = case.load.unwrap_or(params.rx_resistance);
        let query = OutageQuery::loose(params.power_threshold, case.alignment, load);
        loose_row(
            loose_case_label(case),
            v,
            &params,
            query.map_err(Into::into),
            sim.as_ref(),
        )
    })
}

fn loose_row(
    case: String,
    sweep_value: f64,
    params: &SystemParams,
    query: Result<OutageQuery>,
    sim: Option<&SimConfig>,
) -> ResultRow {
    let (analytic, mut diagnostics) = match query.as_ref().map(|q| outage_loose(params, q)) {
        Ok(Ok(p)) => (Some(p), "ok".to_string()),
        Ok(Err(e)) => (None, format!("error: {e}")),
        Err(e) => (None, format!("error: {e:#}")),
    };
    let estimate = sim.map(|s| {
        query
            .as_ref()
            .map_err(|e| anyhow::anyhow!("{e:#}"))
            .and_then(|q| Ok(simulate_outage_loose(params, q, s)?))
    });
    let (mc_mean, mc_standard_error, mc_trials) = mc_fields(estimate, &mut diagnostics);
    ResultRow {
        case,
        sweep_value,
        power_watts: params.transmit_power,
        analytic,
        analytic_error: analytic.map(|_| 0.0),
        mc_mean,
        mc_standard_error,
        mc_trials,
        diagnostics,
    }
}

/// Per-receiver power under the equilibrium loads, `x = r` and `x = x_u`.
pub fn run_fig4(ctx: &RunContext) -> Result<Vec<PowerRow>> {
    let settings = &ctx.config.fig4;
    let params = ctx.params.with_power(db_to_watts(settings.power_db));
    let spec = GameSpec::new(settings.mutual_inductances.clone(), params)?;
    let eq = solve_equilibrium(&spec, None).context("load game did not reach an equilibrium")?;
    let k = spec.players();
    let policies = [
        ("equilibrium", eq.loads.clone()),
        ("rx-resistance", vec![params.rx_resistance; k]),
        ("upper-bound", vec![params.load_bounds.upper; k]),
    ];
    let mut rows = Vec::with_capacity(3 * k);
    for (name, loads) in policies {
        let net = NetworkInstance::from_parts(&settings.mutual_inductances, &loads)?;
        for (i, p) in harvested_powers(&params, &net).into_iter().enumerate() {
            rows.push(PowerRow {
                receiver: i + 1,
                policy: name.to_string(),
                mutual_inductance: settings.mutual_inductances[i],
                load: loads[i],
                power_watts: p,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Strong,
    Loose,
}

/// Single query shared by `outage` and `simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointQuery {
    pub regime: Regime,
    pub alignment: f64,
    /// Ignored in the loose regime.
    pub distance: f64,
    pub load: f64,
    pub power_watts: f64,
}

impl PointQuery {
    fn label(&self) -> String {
        match self.regime {
            Regime::Strong => format!(
                "strong,I0={},d0={},x={}",
                self.alignment, self.distance, self.load
            ),
            Regime::Loose => format!("loose,I0={},x={}", self.alignment, self.load),
        }
    }

    fn query(&self, threshold: f64) -> Result<OutageQuery> {
        Ok(match self.regime {
            Regime::Strong => {
                OutageQuery::strong(threshold, self.alignment, self.distance, self.load)?
            }
            Regime::Loose => OutageQuery::loose(threshold, self.alignment, self.load)?,
        })
    }
}

pub fn run_outage(ctx: &RunContext, point: &PointQuery, sweep_value: f64) -> Result<ResultRow> {
    let params = ctx.params.with_power(point.power_watts);
    let query = point.query(params.power_threshold);
    let row = match point.regime {
        Regime::Strong => strong_row(
            point.label(),
            sweep_value,
            &params,
            query,
            &ctx.config.quadrature,
            None,
        ),
        Regime::Loose => loose_row(point.label(), sweep_value, &params, query, None),
    };
    if row.analytic.is_none() {
        anyhow::bail!("{}", row.diagnostics);
    }
    Ok(row)
}

pub fn run_simulation(ctx: &RunContext, point: &PointQuery, sweep_value: f64) -> Result<ResultRow> {
    let params = ctx.params.with_power(point.power_watts);
    let q = point.query(params.power_threshold)?;
    let sim = SimConfig {
        trials: ctx.config.simulation.trials.max(1),
        ..ctx
            .sim()
            .unwrap_or(SimConfig::new(1, ctx.config.simulation.seed))
    };
    let estimate = match point.regime {
        Regime::Strong => simulate_outage_strong(&params, &q, &sim)?,
        Regime::Loose => simulate_outage_loose(&params, &q, &sim)?,
    };
    Ok(ResultRow {
        case: point.label(),
        sweep_value,
        power_watts: point.power_watts,
        analytic: None,
        analytic_error: None,
        mc_mean: Some(estimate.mean),
        mc_standard_error: Some(estimate.standard_error),
        mc_trials: Some(estimate.trials),
        diagnostics: "ok".to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRow {
    pub receiver: usize,
    pub mutual_inductance: f64,
    pub load: f64,
    pub power_watts: f64,
    pub residual: f64,
    pub sweeps: usize,
}

pub fn run_equilibrium(
    ctx: &RunContext,
    mutual_inductances: &[f64],
    power_watts: f64,
) -> Result<Vec<EquilibriumRow>> {
    let spec = GameSpec::new(
        mutual_inductances.to_vec(),
        ctx.params.with_power(power_watts),
    )?;
    let eq = solve_equilibrium(&spec, None)?;
    Ok((0..spec.players())
        .map(|i| EquilibriumRow {
            receiver: i + 1,
            mutual_inductance: mutual_inductances[i],
            load: eq.loads[i],
            power_watts: eq.utilities[i],
            residual: eq.residuals[i],
            sweeps: eq.sweeps,
        })
        .collect())
}
