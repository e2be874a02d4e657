//! Aggregate welfare of the full-monetary speculative steady state, first as
//! a function of the money stock without seignorage, then as a function of
//! the seignorage rate at a fixed money stock. Both curves are hump-shaped.

use money_search::cli::steady_welfare;
use money_search::{ModelParams, StrategyProfile};

fn main() -> money_search::Result<()> {
    let profile = StrategyProfile::full_money([1, 1, 0])?;

    let mut best = (0.0, f64::MIN);
    println!("welfare vs money stock (no seignorage):");
    for k in 1..=40 {
        let m = k as f64 * 0.01;
        let params = ModelParams::model_a().with_money(m, 0.0)?;
        match steady_welfare(&profile, &params) {
            Ok(rep) => {
                if rep.w > best.1 {
                    best = (m, rep.w);
                }
                if k % 4 == 0 {
                    println!("  M = {m:.2}  W = {:+.5}", rep.w);
                }
            }
            Err(e) => println!("  M = {m:.2}  ({e})"),
        }
    }
    println!("  argmax M = {:.2}, W = {:+.5}", best.0, best.1);

    let mut best = (0.0, f64::MIN);
    println!("welfare vs seignorage rate (M = 0.3):");
    for k in 0..=12 {
        let dm = k as f64 * 0.01;
        let params = ModelParams::model_a().with_money(0.3, dm)?;
        match steady_welfare(&profile, &params) {
            Ok(rep) => {
                if rep.w > best.1 {
                    best = (dm, rep.w);
                }
                println!(
                    "  dm = {dm:.2}  W = {:+.5}  W_i = {:+.4} {:+.4} {:+.4}",
                    rep.w, rep.w_i[0], rep.w_i[1], rep.w_i[2]
                );
            }
            Err(e) => println!("  dm = {dm:.2}  ({e})"),
        }
    }
    println!("  argmax dm = {:.2}, W = {:+.5}", best.0, best.1);
    Ok(())
}
