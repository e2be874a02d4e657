//! The outer best-response fixed-point iteration producing dynamic Nash
//! equilibria, plus Nash verification of steady states and the independent
//! no-deviation certificate for computed paths.

use rayon::prelude::*;

use crate::bestresponse::{
    extract_switches, path_distance, sigma_update, PiecewiseStrategyPath, DEFAULT_SWITCH_CAP,
};
use crate::dynamics::{integrate_forward, Trajectory};
use crate::error::{Error, Result};
use crate::inventory::Inventory;
use crate::params::ModelParams;
use crate::steadystate::{SteadyStateRecord, KNIFE_EDGE_TOL};
use crate::strategy::{BitKind, StrategyProfile};
use crate::valuation::{
    integrate_value_backward, steady_value, BackwardOpts, SigmaMode, ValuePath, ValueTable,
};

/// Nash classification of a steady state.
#[derive(Debug, Clone, Copy)]
pub struct NashVerdict {
    pub is_nash: bool,
    /// Some decision bit is within KNIFE_EDGE_TOL of indifference.
    pub knife_edge: bool,
    /// Smallest |V_j - V_k| across the profile's decision bits.
    pub margin: f64,
    pub values: ValueTable,
}

/// Checks every stored decision bit of the profile against the sign of its
/// steady-state value difference.
pub fn verify_nash_steady(
    s_star: &StrategyProfile,
    p_star: &Inventory,
    params: &ModelParams,
) -> Result<NashVerdict> {
    let values = steady_value(p_star, s_star, params)?;
    let mut is_nash = true;
    let mut knife_edge = false;
    let mut margin = f64::INFINITY;
    for i in 0..3 {
        for kind in BitKind::ALL {
            let delta = values.delta(i, kind);
            margin = margin.min(delta.abs());
            if delta.abs() < KNIFE_EDGE_TOL {
                knife_edge = true;
                continue;
            }
            let best = delta < 0.0;
            if s_star.0[i].bit(kind) != best {
                is_nash = false;
            }
        }
    }
    Ok(NashVerdict {
        is_nash,
        knife_edge: is_nash && knife_edge,
        margin,
        values,
    })
}

/// Tunables of the outer iteration.
#[derive(Debug, Clone, Copy)]
pub struct NashConfig {
    /// Forward/backward integration step.
    pub dt: f64,
    /// Stop when consecutive strategy paths are this close in switching time.
    pub tol: f64,
    /// "Close enough to the steady state" radius for the horizon search.
    pub boundary_eps: f64,
    /// Initial horizon; grown by 1.5x until the trajectory lands within
    /// boundary_eps of the target, up to horizon_max.
    pub horizon_init: f64,
    pub horizon_max: f64,
    pub max_iter: usize,
    pub switch_cap: usize,
    pub divergence_bound: f64,
}

impl Default for NashConfig {
    fn default() -> Self {
        NashConfig {
            dt: 0.01,
            tol: 1e-4,
            boundary_eps: 1e-8,
            horizon_init: 50.0,
            horizon_max: 5000.0,
            max_iter: 50,
            switch_cap: DEFAULT_SWITCH_CAP,
            divergence_bound: 1e6,
        }
    }
}

/// A converged dynamic equilibrium: the trajectory, the self-consistent
/// strategy path, and the value path whose best responses reproduce it.
#[derive(Debug, Clone)]
pub struct NashResult {
    pub converged: bool,
    pub iterations: usize,
    /// Switching-time distance between the last two strategy paths.
    pub final_gap: f64,
    pub trajectory: Trajectory,
    pub strategy_path: PiecewiseStrategyPath,
    pub value_path: ValuePath,
    pub target: SteadyStateRecord,
}

fn forward_to_target(
    p0: Inventory,
    path: &PiecewiseStrategyPath,
    target: &Inventory,
    cfg: &NashConfig,
    params: &ModelParams,
) -> Result<Trajectory> {
    let mut horizon = cfg.horizon_init;
    loop {
        let traj = integrate_forward(p0, path, horizon, cfg.dt, params)?;
        let gap = traj.final_state().distance(target);
        if gap <= cfg.boundary_eps {
            return Ok(traj);
        }
        horizon *= 1.5;
        if horizon > cfg.horizon_max {
            return Err(Error::NoConvergence(format!(
                "trajectory still {gap:.3e} from the target steady state at the horizon cap"
            )));
        }
    }
}

/// One outer fixed-point iteration toward a verified Nash steady state.
/// Starts from the constant target profile unless a guess path is supplied.
pub fn find_nash_path(
    p0: Inventory,
    target: &SteadyStateRecord,
    s0: Option<PiecewiseStrategyPath>,
    cfg: &NashConfig,
    params: &ModelParams,
) -> Result<NashResult> {
    let opts = BackwardOpts {
        divergence_bound: cfg.divergence_bound,
    };
    let mut current = s0.unwrap_or_else(|| PiecewiseStrategyPath::constant(target.profile));
    let mut final_gap = f64::INFINITY;
    for iteration in 1..=cfg.max_iter {
        let traj = forward_to_target(p0, &current, &target.p_star, cfg, params)?;
        let vp = integrate_value_backward(
            &traj,
            &current,
            target.v_star,
            params,
            SigmaMode::BestResponse,
            &opts,
        )?;
        let response = extract_switches(&vp, cfg.switch_cap)?;
        final_gap = path_distance(&response, &current);
        if final_gap <= cfg.tol {
            return Ok(NashResult {
                converged: true,
                iterations: iteration,
                final_gap,
                trajectory: traj,
                strategy_path: response,
                value_path: vp,
                target: target.clone(),
            });
        }
        current = response;
    }
    Err(Error::NoConvergence(format!(
        "best-response iteration still {final_gap:.3e} apart after {} rounds",
        cfg.max_iter
    )))
}

/// Independent no-deviation check on a converged result: re-integrates the
/// values backward with the agent side forced to the returned strategy path,
/// re-derives the best response from those values, and compares it to the
/// path within `tol` switching time.
pub fn certify(result: &NashResult, tol: f64, params: &ModelParams) -> Result<bool> {
    let vp = integrate_value_backward(
        &result.trajectory,
        &result.strategy_path,
        result.target.v_star,
        params,
        SigmaMode::Forced,
        &BackwardOpts::default(),
    )?;
    let response = extract_switches(&best_response_profiles(vp), DEFAULT_SWITCH_CAP)?;
    Ok(path_distance(&response, &result.strategy_path) <= tol)
}

/// Replaces a value path's recorded profiles by sign-rule best responses,
/// resolved backward in time so ties inherit the later-time bit.
fn best_response_profiles(mut vp: ValuePath) -> ValuePath {
    let n = vp.tables.len();
    let mut sigma = sigma_update(None, &vp.tables[n - 1]);
    vp.profiles[n - 1] = sigma;
    for k in (0..n - 1).rev() {
        sigma = sigma_update(Some(&sigma), &vp.tables[k]);
        vp.profiles[k] = sigma;
    }
    vp
}

/// Runs the outer iteration toward every seed in parallel and returns the
/// converged results (one per distinct target at most).
pub fn probe_multiplicity(
    p0: Inventory,
    params: &ModelParams,
    seeds: &[SteadyStateRecord],
    cfg: &NashConfig,
) -> Vec<NashResult> {
    seeds
        .par_iter()
        .filter_map(|seed| find_nash_path(p0, seed, None, cfg, params).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steadystate::{analytic_m0_steady, record_for};

    fn barter_record(s3: [u8; 3], params: &ModelParams) -> SteadyStateRecord {
        let profile = StrategyProfile::full_money(s3).unwrap();
        let p = analytic_m0_steady(s3, params.theta).unwrap();
        record_for(&profile, &p, params).unwrap()
    }

    #[test]
    fn fundamental_not_nash_under_increasing_costs() {
        let params = ModelParams::model_a();
        let rec = barter_record([0, 1, 0], &params);
        assert!(!rec.is_nash);
    }

    #[test]
    fn speculative_is_nash_under_increasing_costs() {
        let params = ModelParams::model_a();
        let rec = barter_record([1, 1, 0], &params);
        assert!(rec.is_nash, "margin {}", rec.margin);
        assert!(!rec.knife_edge);
    }

    #[test]
    fn reverse_fundamental_is_nash_under_decreasing_costs() {
        let params = ModelParams::model_b();
        let rec = barter_record([1, 0, 1], &params);
        assert!(rec.is_nash, "margin {}", rec.margin);
    }

    #[test]
    fn steady_start_converges_immediately() {
        let params = ModelParams::model_a();
        let rec = barter_record([1, 1, 0], &params);
        let cfg = NashConfig {
            horizon_init: 20.0,
            ..NashConfig::default()
        };
        let res = find_nash_path(rec.p_star, &rec, None, &cfg, &params).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 1);
        assert!(res.strategy_path.breakpoints.is_empty());
        assert!(certify(&res, cfg.tol, &params).unwrap());
    }

    #[test]
    fn near_steady_start_has_no_switches() {
        let params = ModelParams::model_a();
        let rec = barter_record([1, 1, 0], &params);
        let mut p0 = rec.p_star;
        p0.p5[0] += 5e-4;
        p0.p5[1] -= 5e-4;
        let cfg = NashConfig::default();
        let res = find_nash_path(p0, &rec, None, &cfg, &params).unwrap();
        assert!(res.converged);
        assert!(res.strategy_path.breakpoints.is_empty());
    }
}
