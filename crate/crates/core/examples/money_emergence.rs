//! Dynamic emergence of fiat money: starting from an economy where only
//! type-2 agents hold money (the rest hold their production good), the
//! best-response iteration converges to the full-monetary speculative steady
//! state, and the mid-transition switches show when each acceptance decision
//! turns on. A higher seignorage rate delays the switches.

use money_search::dynamics::production_rate;
use money_search::nash::{certify, find_nash_path, NashConfig};
use money_search::report::nash_summary;
use money_search::steadystate::record_for;
use money_search::{Inventory, ModelParams, StrategyProfile};

use money_search::dynamics::{default_starts, find_fixed_points};

fn solve(seignorage: f64) -> money_search::Result<()> {
    let money = 0.3;
    let params = ModelParams::model_a().with_money(money, seignorage)?;
    let profile = StrategyProfile::full_money([1, 1, 0])?;

    let fps = find_fixed_points(&profile, &params, &default_starts(&params))?;
    let target = record_for(&profile, &fps.points[0], &params)?;
    assert!(target.is_nash, "target steady state must be Nash");

    // everyone starts with the production good, except a quarter of the
    // money stock parked with each... only type 2 agents hold money here
    let p0 = Inventory::new([params.theta[0], 0.0, 0.0, 0.0, money / 4.0]);
    let cfg = NashConfig::default();
    let result = find_nash_path(p0, &target, None, &cfg, &params)?;
    let ok = certify(&result, cfg.tol, &params)?;

    println!(
        "delta_m = {seignorage}: converged in {} iterations, gap {:.2e}, certificate {}",
        result.iterations,
        result.final_gap,
        if ok { "pass" } else { "FAIL" }
    );
    for s in nash_summary(&result).switches {
        println!(
            "  t = {:8.3}  type {} {} -> {}",
            s.time, s.type_index, s.bit, s.to
        );
    }
    let t_end = result.trajectory.horizon();
    let prod_end = production_rate(
        &result.trajectory.final_state(),
        &result.strategy_path.profile_at(t_end),
        &params,
    );
    println!("  final production rate {prod_end:.5}");
    Ok(())
}

fn main() -> money_search::Result<()> {
    for seignorage in [0.06, 0.07] {
        solve(seignorage)?;
    }
    Ok(())
}
