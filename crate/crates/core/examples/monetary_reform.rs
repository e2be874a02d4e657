//! A seignorage reform: the economy sits on the partial-acceptance monetary
//! steady state at delta_m = 0.1 (type 2 refuses money for good 1, type 1
//! plays fundamental). At t = 0 the rate drops to 0.02. Type 2 starts selling
//! good 1 for money, type 1 turns speculative, and aggregate production
//! overshoots before settling above its pre-shock level.

use money_search::dynamics::{default_starts, find_fixed_points, production_rate};
use money_search::nash::{certify, find_nash_path, NashConfig};
use money_search::report::nash_summary;
use money_search::steadystate::record_for;
use money_search::{ModelParams, StrategyProfile};

fn main() -> money_search::Result<()> {
    let money = 0.3;
    let pre_params = ModelParams::model_a().with_money(money, 0.1)?;
    let pre_profile = StrategyProfile::from_display_matrix([[1, 1, 1], [1, 0, 1], [0, 1, 0]])?;
    let pre_fps = find_fixed_points(&pre_profile, &pre_params, &default_starts(&pre_params))?;
    let pre = record_for(&pre_profile, &pre_fps.points[0], &pre_params)?;
    assert!(pre.is_nash, "pre-shock steady state must be Nash");
    let pre_production = production_rate(&pre.p_star, &pre_profile, &pre_params);

    let params = ModelParams::model_a().with_money(money, 0.02)?;
    let target_profile = StrategyProfile::full_money([1, 1, 0])?;
    let fps = find_fixed_points(&target_profile, &params, &default_starts(&params))?;
    let target = record_for(&target_profile, &fps.points[0], &params)?;
    assert!(target.is_nash, "post-shock steady state must be Nash");

    let cfg = NashConfig::default();
    let result = find_nash_path(pre.p_star, &target, None, &cfg, &params)?;
    let ok = certify(&result, cfg.tol, &params)?;
    println!(
        "reform 0.1 -> 0.02: converged in {} iterations, certificate {}",
        result.iterations,
        if ok { "pass" } else { "FAIL" }
    );
    println!("profile at t=0+: {}", result.strategy_path.initial);
    for s in nash_summary(&result).switches {
        println!(
            "  t = {:8.3}  type {} {} -> {}",
            s.time, s.type_index, s.bit, s.to
        );
    }

    // production series
    let mut peak = f64::MIN;
    let mut t_peak = 0.0;
    for (k, t) in result.trajectory.times.iter().enumerate() {
        let s = result.strategy_path.profile_at(*t);
        let rate = production_rate(&result.trajectory.states[k], &s, &params);
        if rate > peak {
            peak = rate;
            t_peak = *t;
        }
    }
    let t_end = result.trajectory.horizon();
    let final_rate = production_rate(
        &result.trajectory.final_state(),
        &result.strategy_path.profile_at(t_end),
        &params,
    );
    println!("production: pre-shock {pre_production:.5}, peak {peak:.5} at t = {t_peak:.2}, settles at {final_rate:.5}");
    assert!(peak > final_rate && final_rate > pre_production);
    Ok(())
}
