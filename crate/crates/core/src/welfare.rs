//! Welfare aggregates: per-type holding-weighted values, society welfare,
//! the discounted value of seignorage, and the government objective.

use serde::Serialize;

use crate::inventory::Inventory;
use crate::params::ModelParams;
use crate::strategy::holdings_of;
use crate::valuation::ValueTable;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WelfareReport {
    /// Per-type average value, weighted by holding shares.
    pub w_i: [f64; 3],
    /// Society welfare: population-weighted average of w_i.
    pub w: f64,
    /// Discounted value of seignorage consumption.
    pub q: f64,
    /// Government objective (1 - lambda) Q + lambda W.
    pub w_g: f64,
}

/// Welfare at one state: W_i = (1/theta_i) sum_j p_{i,j} V_{i,j}.
pub fn group_welfare(p: &Inventory, v: &ValueTable, params: &ModelParams) -> WelfareReport {
    let grid = p.expand_unchecked(params);
    let mut w_i = [0.0; 3];
    for i in 0..3 {
        let mut acc = 0.0;
        for (slot, obj) in holdings_of(i).into_iter().enumerate() {
            acc += grid.share(i, obj) * v.get(i, slot);
        }
        w_i[i] = acc / params.theta[i];
    }
    let w: f64 = (0..3).map(|i| params.theta[i] * w_i[i]).sum();
    let q = seignorage_value(params);
    WelfareReport {
        w_i,
        w,
        q,
        w_g: government_welfare(q, w, params.altruism),
    }
}

/// Discounted seignorage consumption under a constant confiscation rate:
/// Q = M delta_m / rho_g.
pub fn seignorage_value(params: &ModelParams) -> f64 {
    params.money_stock * params.seignorage_rate / params.rho_g
}

pub fn government_welfare(q: f64, w: f64, lambda: f64) -> f64 {
    (1.0 - lambda) * q + lambda * w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values_average_to_themselves() {
        let params = ModelParams::model_a().with_money(0.3, 0.1).unwrap();
        let p = Inventory::new([0.11, 0.09, 0.21, 0.12, 0.08]);
        let v = ValueTable { v: [[7.5; 3]; 3] };
        let rep = group_welfare(&p, &v, &params);
        for wi in rep.w_i {
            assert!((wi - 7.5).abs() < 1e-12);
        }
        assert!((rep.w - 7.5).abs() < 1e-12);
    }

    #[test]
    fn seignorage_arithmetic() {
        let base = ModelParams::model_a();
        assert_eq!(seignorage_value(&base), 0.0);
        let p = base.with_money(0.3, 0.1).unwrap();
        assert!((seignorage_value(&p) - 1.0).abs() < 1e-15); // 0.3*0.1/0.03
    }

    #[test]
    fn government_objective_endpoints() {
        assert_eq!(government_welfare(2.0, 4.0, 1.0), 4.0);
        assert_eq!(government_welfare(2.0, 4.0, 0.0), 2.0);
        assert_eq!(government_welfare(2.0, 4.0, 0.5), 3.0);
    }

    #[test]
    fn invariant_to_type_permutation() {
        // relabel types cyclically together with their shares, inventories,
        // and value rows: W is unchanged
        let params = ModelParams::model_a()
            .with_theta([0.5, 0.3, 0.2])
            .unwrap();
        let p = Inventory::new([0.2, 0.1, 0.05, 0.0, 0.0]);
        let v = ValueTable {
            v: [[1.0, 2.0, 0.0], [3.0, -1.0, 0.0], [0.5, 0.25, 0.0]],
        };
        let w0 = group_welfare(&p, &v, &params).w;

        // cycle 1 -> 2 -> 3 -> 1; the 5-vector slots are each type's
        // production good and the first two money slots, so rebuild from the
        // permuted grid
        let grid = p.expand_unchecked(&params);
        let perm = |i: usize| (i + 2) % 3; // new index -> old index
        let params2 = params.with_theta([params.theta[perm(0)], params.theta[perm(1)], params.theta[perm(2)]]).unwrap();
        // new type i holds goods shifted the same way: its prod/other/money
        // slot shares equal the old type's slot shares
        let mut p2_grid = [[0.0; 4]; 3];
        for i in 0..3 {
            let old = perm(i);
            for (slot, obj) in holdings_of(old).into_iter().enumerate() {
                let new_obj = holdings_of(i)[slot];
                p2_grid[i][new_obj.column()] = grid.share(old, obj);
            }
        }
        let p2 = Inventory::new([p2_grid[0][1], p2_grid[1][2], p2_grid[2][0], p2_grid[0][3], p2_grid[1][3]]);
        let v2 = ValueTable {
            v: [v.v[perm(0)], v.v[perm(1)], v.v[perm(2)]],
        };
        let w1 = group_welfare(&p2, &v2, &params2).w;
        assert!((w0 - w1).abs() < 1e-12, "{w0} vs {w1}");
    }
}
