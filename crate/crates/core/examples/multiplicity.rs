//! Multiple dynamic equilibria: with an uneven population split the same
//! initial distribution of inventories can be steered, by beliefs alone,
//! toward different steady states. Every converged path is certified as a
//! Nash equilibrium, so the multiplicity is genuine.

use money_search::nash::{certify, probe_multiplicity, NashConfig};
use money_search::steadystate::enumerate_steady_states;
use money_search::{Inventory, ModelParams};

fn main() -> money_search::Result<()> {
    let params = ModelParams::model_a()
        .with_theta([0.24, 0.16, 0.60])?
        .with_money(0.2, 0.05)?;
    let p0 = Inventory::new([0.11, 0.06, 0.38, 0.02, 0.06]);

    let enumeration = enumerate_steady_states(&params);
    let seeds: Vec<_> = enumeration.nash_records().cloned().collect();
    println!("{} Nash steady states:", seeds.len());
    for r in &seeds {
        println!(
            "  {}  p* = {:?}",
            r.profile,
            r.p_star.p5.map(|x| (x * 1e4).round() / 1e4)
        );
    }

    // the barter-bound path needs more best-response rounds than the default
    let cfg = NashConfig {
        max_iter: 200,
        ..NashConfig::default()
    };
    let results = probe_multiplicity(p0, &params, &seeds, &cfg);
    println!(
        "{} equilibrium paths from p(0) = {:?}:",
        results.len(),
        p0.p5
    );
    for r in &results {
        let ok = certify(r, cfg.tol, &params)?;
        println!(
            "  -> {} in {} iterations, {} switches, certificate {}",
            r.target.profile,
            r.iterations,
            r.strategy_path.breakpoints.len(),
            if ok { "pass" } else { "FAIL" }
        );
    }
    assert!(results.len() > 1, "expected multiple equilibrium paths");
    Ok(())
}
