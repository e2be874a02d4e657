//! Region structure of the monetary equilibria on a seignorage grid at a
//! fixed money stock. Over an intermediate band of rates two monetary Nash
//! steady states coexist: one with full acceptance of money and one where
//! type 2 refuses to sell its low-cost commodity for money.

use money_search::steadystate::enumerate_steady_states;
use money_search::{ModelParams, StrategyProfile};

fn main() -> money_search::Result<()> {
    let full = StrategyProfile::full_money([1, 1, 0])?;
    let partial = StrategyProfile::from_display_matrix([[1, 1, 1], [1, 0, 1], [0, 1, 0]])?;
    println!("M = 0.3, full {} vs partial {} acceptance:", full, partial);
    let mut band = (f64::MAX, f64::MIN);
    for k in 0..=12 {
        let dm = k as f64 * 0.01;
        let params = ModelParams::model_a().with_money(0.3, dm)?;
        let enumeration = enumerate_steady_states(&params);
        let has_full = enumeration.nash_records().any(|r| r.profile == full);
        let has_partial = enumeration.nash_records().any(|r| r.profile == partial);
        if has_full && has_partial {
            band.0 = band.0.min(dm);
            band.1 = band.1.max(dm);
        }
        println!(
            "  dm = {dm:.2}: full {}  partial {}",
            if has_full { "yes" } else { "no " },
            if has_partial { "yes" } else { "no " }
        );
    }
    println!("coexistence band: [{:.2}, {:.2}]", band.0, band.1);
    Ok(())
}
