//! Sweep of every admissible constant strategy profile: which ones support a
//! steady state that is also a Nash equilibrium, at two seignorage rates.
//! Also evaluates the closed-form existence conditions for the no-money
//! barter equilibria under both storage-cost orderings.

use money_search::steadystate::{enumerate_steady_states, existence_conditions, CostOrder};
use money_search::ModelParams;

fn main() -> money_search::Result<()> {
    for dm in [0.02, 0.10] {
        let params = ModelParams::model_a().with_money(0.3, dm)?;
        let enumeration = enumerate_steady_states(&params);
        println!(
            "M = 0.3, delta_m = {dm}: {} fixed points classified, {} failures",
            enumeration.records.len(),
            enumeration.failures.len()
        );
        for r in enumeration.nash_records() {
            println!(
                "  Nash {}  p* = {:?}  margin {:.3e}",
                r.profile,
                r.p_star.p5.map(|x| (x * 1e4).round() / 1e4),
                r.margin
            );
        }
    }

    println!("barter existence conditions (no money):");
    let a = ModelParams::model_a();
    for c in existence_conditions(CostOrder::Increasing, &a)? {
        println!(
            "  model A {:12} s3 = {:?}: lhs {:+.4} rhs {:+.4} -> {}",
            c.name,
            c.s3,
            c.lhs,
            c.rhs,
            if c.passes { "exists" } else { "fails" }
        );
    }
    let b = ModelParams::model_b();
    for c in existence_conditions(CostOrder::Decreasing, &b)? {
        println!(
            "  model B {:32} s3 = {:?}: lhs {:+.4} rhs {:+.4} -> {}",
            c.name,
            c.s3,
            c.lhs,
            c.rhs,
            if c.passes { "exists" } else { "fails" }
        );
    }
    Ok(())
}
