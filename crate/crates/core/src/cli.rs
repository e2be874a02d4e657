//! Command-line front end: config ingestion, experiment orchestration, and
//! file output for the four commands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{profile_from_config, NashBlock, RunConfig, VaryParam, WelfareBlock};
use crate::dynamics::{default_starts, find_fixed_points};
use crate::error::{Error, Result};
use crate::inventory::Inventory;
use crate::nash::{find_nash_path, NashConfig};
use crate::params::ModelParams;
use crate::report;
use crate::report::{SweepRow, WelfareRow};
use crate::steadystate::{classify_profiles, record_for, SteadyStateRecord};
use crate::strategy::StrategyProfile;
use crate::valuation::steady_value;
use crate::welfare::{group_welfare, WelfareReport};

#[derive(Debug, Parser)]
#[command(
    name = "money-search",
    about = "Steady-state and dynamic equilibria of a three-type search economy with commodity and fiat money"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate constant-profile steady states and classify Nash equilibria
    Steady(CommonArgs),
    /// Compute a dynamic equilibrium path by best-response iteration
    Nash(CommonArgs),
    /// Map Nash steady states over a parameter grid
    Sweep(CommonArgs),
    /// Welfare aggregates along a one-dimensional parameter grid
    Welfare(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON run configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides the config's `out`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 = all cores (overrides the config)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Integration step (overrides the config)
    #[arg(long)]
    pub dt: Option<f64>,
    /// Outer-loop switching-time tolerance (overrides the config)
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Exit codes: 0 ok, 2 config error, 3 solver failure.
pub fn run(cli: Cli) -> i32 {
    let (args, which) = match &cli.command {
        Command::Steady(a) => (a, 0),
        Command::Nash(a) => (a, 1),
        Command::Sweep(a) => (a, 2),
        Command::Welfare(a) => (a, 3),
    };
    let cfg = match load_config(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if cfg.threads != 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let result = match which {
        0 => cmd_steady(&cfg, &out_dir),
        1 => cmd_nash(&cfg, &out_dir),
        2 => cmd_sweep(&cfg, &out_dir),
        _ => cmd_welfare(&cfg, &out_dir),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => 2,
                _ => 3,
            }
        }
    }
}

fn load_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if let Some(threads) = args.threads {
        cfg.threads = threads;
    }
    if let Some(dt) = args.dt {
        if !(dt > 0.0) {
            return Err(Error::Config(format!("dt = {dt} must be positive")));
        }
        cfg.dt = dt;
    }
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            return Err(Error::Config(format!("tol = {tol} must be positive")));
        }
        cfg.tol = tol;
    }
    // fail early on invalid economy parameters
    cfg.model_params()?;
    Ok(cfg)
}

fn config_profiles(matrices: &Option<Vec<[[u8; 3]; 3]>>) -> Result<Vec<StrategyProfile>> {
    match matrices {
        None => Ok(StrategyProfile::all()),
        Some(list) if list.is_empty() => Err(Error::Config("profile list is empty".into())),
        Some(list) => list.iter().map(|m| profile_from_config(*m)).collect(),
    }
}

pub fn cmd_steady(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let params = cfg.model_params()?;
    let block = cfg.steady.clone().unwrap_or_default();
    let profiles = config_profiles(&block.profiles)?;
    let enumeration = classify_profiles(&params, &profiles);
    let path = report::write_file(out_dir, "steady.csv", &report::steady_csv(&enumeration.records))?;
    let nash = enumeration.nash_records().count();
    println!(
        "steady: {} profiles, {} fixed points, {} Nash, {} failures -> {}",
        profiles.len(),
        enumeration.records.len(),
        nash,
        enumeration.failures.len(),
        path.display()
    );
    for (profile, reason) in &enumeration.failures {
        eprintln!("  no fixed point for {profile}: {reason}");
    }
    Ok(())
}

/// Resolves a profile's Nash steady state for use as an iteration target.
fn resolve_target(profile: &StrategyProfile, params: &ModelParams) -> Result<SteadyStateRecord> {
    let report = find_fixed_points(profile, params, &default_starts(params))?;
    let mut first: Option<SteadyStateRecord> = None;
    for p in &report.points {
        let rec = record_for(profile, p, params)?;
        if rec.is_nash {
            return Ok(rec);
        }
        first.get_or_insert(rec);
    }
    match first {
        Some(rec) => Err(Error::NoConvergence(format!(
            "profile {profile} has a steady state but it is not Nash (margin {:.3e})",
            rec.margin
        ))),
        None => Err(Error::NoConvergence(format!(
            "no fixed point found for profile {profile}"
        ))),
    }
}

fn initial_inventory(block: &NashBlock, params: &ModelParams) -> Result<Inventory> {
    match (&block.p0, &block.pre_shock) {
        (Some(p5), None) => Ok(Inventory::new(*p5)),
        (None, Some(pre)) => {
            let pre_params = params.with_money(
                pre.money_stock.unwrap_or(params.money_stock),
                pre.seignorage_rate.unwrap_or(params.seignorage_rate),
            )?;
            let profile = profile_from_config(pre.profile)?;
            let report = find_fixed_points(&profile, &pre_params, &default_starts(&pre_params))?;
            report.points.first().copied().ok_or_else(|| {
                Error::NoConvergence(format!("no pre-shock fixed point for profile {profile}"))
            })
        }
        _ => Err(Error::Config(
            "nash block needs exactly one of `p0` or `pre_shock`".into(),
        )),
    }
}

pub fn cmd_nash(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let params = cfg.model_params()?;
    let block = cfg
        .nash
        .as_ref()
        .ok_or_else(|| Error::Config("config has no `nash` block".into()))?;
    let target_profile = profile_from_config(block.target_profile)?;
    let target = resolve_target(&target_profile, &params)?;
    let p0 = initial_inventory(block, &params)?;
    let mut nash_cfg = NashConfig {
        dt: cfg.dt,
        tol: cfg.tol,
        ..NashConfig::default()
    };
    if let Some(max_iter) = block.max_iter {
        nash_cfg.max_iter = max_iter;
    }
    let result = find_nash_path(p0, &target, None, &nash_cfg, &params)?;
    let stride = block.sample_stride.unwrap_or(1);
    let csv_path = report::write_file(
        out_dir,
        "nash_trajectory.csv",
        &report::nash_trajectory_csv(&result, &params, stride),
    )?;
    let summary = report::nash_summary(&result);
    let json = serde_json::to_string_pretty(&summary)?;
    let json_path = report::write_file(out_dir, "nash_switches.json", &json)?;
    println!(
        "nash: converged in {} iterations (gap {:.3e}), {} switches -> {}, {}",
        result.iterations,
        result.final_gap,
        summary.switches.len(),
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let params = cfg.model_params()?;
    let block = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("config has no `sweep` block".into()))?;
    let profiles = config_profiles(&block.profiles)?;

    // grid cells in deterministic output order
    let mut cells: Vec<(f64, f64, [f64; 3])> = Vec::new();
    if let Some(thetas) = &block.theta_values {
        if thetas.is_empty() {
            return Err(Error::Config("theta grid is empty".into()));
        }
        if block.money_values.is_some() || block.seignorage_values.is_some() {
            return Err(Error::Config(
                "sweep mixes a theta grid with money/seignorage grids".into(),
            ));
        }
        for theta in thetas {
            cells.push((params.money_stock, params.seignorage_rate, *theta));
        }
    } else {
        let m_values = match &block.money_values {
            Some(g) => g.values()?,
            None => vec![params.money_stock],
        };
        let d_values = match &block.seignorage_values {
            Some(g) => g.values()?,
            None => vec![params.seignorage_rate],
        };
        if block.money_values.is_none() && block.seignorage_values.is_none() {
            return Err(Error::Config("sweep block defines no grid".into()));
        }
        for &m in &m_values {
            for &d in &d_values {
                cells.push((m, d, params.theta));
            }
        }
    }

    let rows: Vec<SweepRow> = cells
        .iter()
        .map(|&(m, d, theta)| {
            let cell_params = params.with_theta(theta).and_then(|p| p.with_money(m, d));
            match cell_params {
                Ok(p) => {
                    let enumeration = classify_profiles(&p, &profiles);
                    let mut error = None;
                    if !enumeration.failures.is_empty() {
                        error = Some(format!("{} profiles without fixed point", enumeration.failures.len()));
                    }
                    SweepRow {
                        money_stock: m,
                        seignorage_rate: d,
                        theta,
                        nash_profiles: enumeration.nash_records().map(|r| r.profile).collect(),
                        error,
                    }
                }
                Err(e) => SweepRow {
                    money_stock: m,
                    seignorage_rate: d,
                    theta,
                    nash_profiles: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let path = report::write_file(out_dir, "sweep.csv", &report::sweep_csv(&rows))?;
    println!("sweep: {} cells -> {}", rows.len(), path.display());
    Ok(())
}

/// Welfare at the steady state of `profile` under `params`.
pub fn steady_welfare(profile: &StrategyProfile, params: &ModelParams) -> Result<WelfareReport> {
    let report = find_fixed_points(profile, params, &default_starts(params))?;
    let p_star = report
        .points
        .first()
        .ok_or_else(|| Error::NoConvergence(format!("no fixed point for profile {profile}")))?;
    let v_star = steady_value(p_star, profile, params)?;
    Ok(group_welfare(p_star, &v_star, params))
}

pub fn cmd_welfare(cfg: &RunConfig, out_dir: &Path) -> Result<()> {
    let params = cfg.model_params()?;
    let block: &WelfareBlock = cfg
        .welfare
        .as_ref()
        .ok_or_else(|| Error::Config("config has no `welfare` block".into()))?;
    let profile = profile_from_config(block.profile)?;
    let values = block.values.values()?;
    let vary_name = match block.vary {
        VaryParam::MoneyStock => "money_stock",
        VaryParam::SeignorageRate => "seignorage_rate",
    };
    let rows: Vec<WelfareRow> = values
        .iter()
        .map(|&v| {
            let cell_params = match block.vary {
                VaryParam::MoneyStock => params.with_money(v, params.seignorage_rate),
                VaryParam::SeignorageRate => params.with_money(params.money_stock, v),
            };
            let outcome = cell_params.and_then(|p| steady_welfare(&profile, &p));
            match outcome {
                Ok(report) => WelfareRow {
                    vary_value: v,
                    report,
                    error: None,
                },
                Err(e) => WelfareRow {
                    vary_value: v,
                    report: WelfareReport {
                        w_i: [f64::NAN; 3],
                        w: f64::NAN,
                        q: f64::NAN,
                        w_g: f64::NAN,
                    },
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let path = report::write_file(out_dir, "welfare.csv", &report::welfare_csv(vary_name, &rows))?;
    println!("welfare: {} grid points -> {}", rows.len(), path.display());
    Ok(())
}

/// Used by `sweep` and `welfare` helpers in examples: one cell of a region
/// map restricted to a profile family.
pub fn sweep_cell(
    params: &ModelParams,
    profiles: &[StrategyProfile],
) -> Vec<SteadyStateRecord> {
    classify_profiles(params, profiles)
        .nash_records()
        .cloned()
        .collect()
}
