use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mrcwpt_cli::config::{resolve_omega, PowerUnit, SweepSpec};
use mrcwpt_cli::experiments::{run_equilibrium, run_outage, run_simulation, PointQuery, Regime};
use mrcwpt_cli::output::config_hash;
use mrcwpt_cli::units::{calibrate_omega_db, db_to_watts, watts_to_db};
use mrcwpt_cli::{
    run_fig2, run_fig3, run_fig4, write_table, ExperimentConfig, ExperimentId, Format, Metadata,
    OmegaRequest, OmegaSource, RunContext,
};
use mrcwpt_core::{min_power_zero_outage, presets, OutageQuery};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "mrcwpt",
    version,
    about = "Outage and load-game experiments for multi-receiver wireless power transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strongly coupled outage vs transmit power, analytic and simulated.
    Fig2(Common),
    /// Loosely coupled outage vs transmit power, closed form and simulated.
    Fig3(Common),
    /// Per-receiver power under equilibrium, x = r and x = x_u loads.
    Fig4(Common),
    /// Analytic outage of one typical receiver.
    Outage(PointArgs),
    /// Simulated outage of one typical receiver.
    Simulate(PointArgs),
    /// Nash equilibrium loads of a receiver set.
    Equilibrium(EquilibriumArgs),
    /// Angular frequency that puts the zero-outage power at an anchor.
    CalibrateOmega(CalibrateArgs),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    omega: OmegaArgs,
    #[command(flatten)]
    power: PowerArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct OmegaArgs {
    /// Resonant angular frequency, rad/s.
    #[arg(long)]
    omega: Option<f64>,
    /// Derive ω from the loosely coupled zero-outage anchor.
    #[arg(long)]
    calibrate_omega: bool,
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct PowerArgs {
    /// Transmit power, dBW.
    #[arg(long, allow_hyphen_values = true)]
    power_db: Option<f64>,
    /// Transmit power, W.
    #[arg(long)]
    power_watts: Option<f64>,
}

impl PowerArgs {
    fn sweep(&self) -> Option<SweepSpec> {
        match (self.power_db, self.power_watts) {
            (Some(db), _) => Some(SweepSpec::single(db, PowerUnit::Dbw)),
            (_, Some(w)) => Some(SweepSpec::single(w, PowerUnit::Watts)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Strong,
    Loose,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = RegimeArg::Strong)]
    regime: RegimeArg,
    /// Alignment factor I0 of the typical receiver.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    alignment: f64,
    /// Distance d0 of the typical receiver, m (strong regime only).
    #[arg(long, default_value_t = 1.5)]
    distance: f64,
    /// Common load, Ω; the receiver resistance when omitted.
    #[arg(long)]
    load: Option<f64>,
}

#[derive(Args)]
struct EquilibriumArgs {
    #[command(flatten)]
    common: Common,
    /// Signed mutual inductances, H, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mutual_inductances: Option<Vec<f64>>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    common: Common,
    /// Zero-outage power to hit, dBW.
    #[arg(long, default_value_t = presets::MIN_POWER_ANCHOR_DBW, allow_hyphen_values = true)]
    anchor_db: f64,
    #[arg(long, default_value_t = presets::MIN_POWER_ANCHOR_ALIGNMENT)]
    alignment: f64,
    /// Load, Ω; the receiver resistance when omitted.
    #[arg(long)]
    load: Option<f64>,
}

#[derive(Serialize)]
struct CalibrationRow {
    anchor_dbw: f64,
    omega: f64,
    round_trip_dbw: f64,
}

/// Config file plus command-line overrides.
fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.simulation.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.simulation.trials = trials;
    }
    if let Some(path) = &common.out {
        cfg.output = Some(path.clone());
    }
    Ok(cfg)
}

fn omega_request(common: &Common) -> OmegaRequest {
    match (common.omega.omega, common.omega.calibrate_omega) {
        (Some(w), _) => OmegaRequest::Given(w),
        (None, true) => OmegaRequest::Calibrate,
        (None, false) => OmegaRequest::Unspecified,
    }
}

struct Prepared {
    ctx: RunContext,
    meta: Metadata,
    format: Format,
}

fn prepare(common: &Common, id: ExperimentId, extra: impl Serialize) -> Result<Prepared> {
    let mut cfg = load_config(common)?;
    if let Some(sweep) = common.power.sweep() {
        cfg.sweep = Some(sweep);
    }
    cfg.experiment.get_or_insert(id);
    let (omega, source) = resolve_omega(&cfg, omega_request(common))?;
    let ctx = RunContext::new(cfg, id, omega)?;
    let meta = Metadata {
        tool: "mrcwpt".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: id.name().to_string(),
        config_sha256: config_hash(&(&ctx.config, omega, &extra))?,
        seed: ctx.config.simulation.seed,
        omega,
        omega_source: match source {
            OmegaSource::Given => "given",
            OmegaSource::Calibrated => "calibrated",
        }
        .to_string(),
    };
    Ok(Prepared {
        ctx,
        meta,
        format: common.format,
    })
}

fn emit<R: Serialize>(p: &Prepared, rows: &[R]) -> Result<()> {
    match &p.ctx.config.output {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_table(BufWriter::new(file), p.format, &p.meta, rows)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_table(&mut lock, p.format, &p.meta, rows)?;
            lock.flush()?;
            Ok(())
        }
    }
}

fn single_power(p: &Prepared) -> Result<(f64, f64)> {
    let values = p.ctx.sweep.values()?;
    if values.len() != 1 {
        bail!("this command needs one transmit power: pass --power-db or --power-watts");
    }
    Ok((values[0], p.ctx.sweep.to_watts(values[0])))
}

fn point(args: &PointArgs, id: ExperimentId, simulate: bool) -> Result<()> {
    if args.common.power.sweep().is_none() {
        bail!("pass the transmit power with --power-db or --power-watts");
    }
    let extra = (
        args.alignment,
        args.distance,
        args.load,
        matches!(args.regime, RegimeArg::Strong),
    );
    let p = prepare(&args.common, id, extra)?;
    let (value, watts) = single_power(&p)?;
    let q = PointQuery {
        regime: match args.regime {
            RegimeArg::Strong => Regime::Strong,
            RegimeArg::Loose => Regime::Loose,
        },
        alignment: args.alignment,
        distance: args.distance,
        load: args.load.unwrap_or(p.ctx.params.rx_resistance),
        power_watts: watts,
    };
    let row = if simulate {
        run_simulation(&p.ctx, &q, value)?
    } else {
        run_outage(&p.ctx, &q, value)?
    };
    emit(&p, &[row])
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fig2(c) => {
            let p = prepare(&c, ExperimentId::Fig2, ())?;
            emit(&p, &run_fig2(&p.ctx)?)
        }
        Command::Fig3(c) => {
            let p = prepare(&c, ExperimentId::Fig3, ())?;
            emit(&p, &run_fig3(&p.ctx)?)
        }
        Command::Fig4(mut c) => {
            let power_db = match (c.power.power_db, c.power.power_watts) {
                (Some(db), _) => Some(db),
                (_, Some(w)) => Some(watts_to_db(w)),
                _ => None,
            };
            c.power = PowerArgs {
                power_db: None,
                power_watts: None,
            };
            let mut p = prepare(&c, ExperimentId::Fig4, power_db)?;
            if let Some(db) = power_db {
                p.ctx.config.fig4.power_db = db;
            }
            emit(&p, &run_fig4(&p.ctx)?)
        }
        Command::Outage(a) => point(&a, ExperimentId::Custom, false),
        Command::Simulate(a) => point(&a, ExperimentId::Custom, true),
        Command::Equilibrium(a) => {
            let mutual = a
                .mutual_inductances
                .clone()
                .unwrap_or_else(|| presets::GAME_MUTUAL_INDUCTANCES.to_vec());
            let p = prepare(&a.common, ExperimentId::Custom, &mutual)?;
            let watts = match a.common.power.sweep() {
                Some(_) => single_power(&p)?.1,
                None => db_to_watts(presets::GAME_POWER_DBW),
            };
            emit(&p, &run_equilibrium(&p.ctx, &mutual, watts)?)
        }
        Command::CalibrateOmega(a) => {
            let cfg = load_config(&a.common)?;
            let params = cfg.system.apply(1.0)?;
            let load = a.load.unwrap_or(params.rx_resistance);
            let q = OutageQuery::loose(params.power_threshold, a.alignment, load)?;
            let omega = calibrate_omega_db(a.anchor_db, &params, &q)?;
            let back = min_power_zero_outage(&params.with_omega(omega), &q)?;
            let row = CalibrationRow {
                anchor_dbw: a.anchor_db,
                omega,
                round_trip_dbw: watts_to_db(back),
            };
            let meta = Metadata {
                tool: "mrcwpt".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                experiment: "calibrate-omega".to_string(),
                config_sha256: config_hash(&(&cfg, a.anchor_db, a.alignment, load))?,
                seed: cfg.simulation.seed,
                omega,
                omega_source: "calibrated".to_string(),
            };
            let p = Prepared {
                ctx: RunContext::new(cfg, ExperimentId::Custom, omega)?,
                meta,
                format: a.common.format,
            };
            emit(&p, &[row])
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
