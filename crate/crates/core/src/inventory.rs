//! Inventory distributions: the 5 independent holding shares and their
//! expansion to the full 3x4 grid.
//!
//! The independent coordinates are
//! `p5 = (p_{1,2}, p_{2,3}, p_{3,1}, p_{1,m}, p_{2,m})`
//! (1-based type/good labels). The remaining entries follow from the
//! per-type totals `sum_j p_{i,j} = theta_i` and the money total
//! `sum_i p_{i,m} = M`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::strategy::{holdings_of, Obj};

pub const FEAS_TOL: f64 = 1e-10;

/// The 5-vector of independent inventory shares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inventory {
    pub p5: [f64; 5],
}

/// Full holding shares: `g[i][col]` is the share of type-`i` agents holding
/// the object with that column (goods 0..2, money 3). `g[i][i] = 0` always.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoldingGrid {
    pub g: [[f64; 4]; 3],
}

impl Inventory {
    pub fn new(p5: [f64; 5]) -> Self {
        Inventory { p5 }
    }

    /// Share of type-`i` agents holding `obj`, via the (unchecked) expansion.
    pub fn share(&self, i: usize, obj: Obj, params: &ModelParams) -> f64 {
        self.expand_unchecked(params).share(i, obj)
    }

    /// Expansion without feasibility checks; derived entries may fall
    /// outside [0, theta_i]. Used by solvers that evaluate the vector field
    /// slightly outside the feasible polytope.
    pub fn expand_unchecked(&self, params: &ModelParams) -> HoldingGrid {
        let [p12, p23, p31, p1m, p2m] = self.p5;
        let th = params.theta;
        let m = params.money_stock;
        let p3m = m - p1m - p2m;
        // row i: goods columns then money; g[i][i] = 0
        let mut g = [[0.0; 4]; 3];
        g[0][1] = p12;
        g[0][3] = p1m;
        g[0][2] = th[0] - p12 - p1m;
        g[1][2] = p23;
        g[1][3] = p2m;
        g[1][0] = th[1] - p23 - p2m;
        g[2][0] = p31;
        g[2][3] = p3m;
        g[2][1] = th[2] - p31 - p3m;
        HoldingGrid { g }
    }

    /// Expansion with feasibility validation: every entry in
    /// [-FEAS_TOL, theta_i + FEAS_TOL].
    pub fn expand(&self, params: &ModelParams) -> Result<HoldingGrid> {
        let grid = self.expand_unchecked(params);
        for i in 0..3 {
            for obj in holdings_of(i) {
                let x = grid.share(i, obj);
                if !x.is_finite() || x < -FEAS_TOL || x > params.theta[i] + FEAS_TOL {
                    return Err(Error::Domain(format!(
                        "infeasible inventory: p[type {}, {}] = {x} outside [0, {}]",
                        i + 1,
                        obj,
                        params.theta[i]
                    )));
                }
            }
        }
        Ok(grid)
    }

    pub fn is_feasible(&self, params: &ModelParams) -> bool {
        self.expand(params).is_ok()
    }

    /// Euclidean distance in the 5 independent coordinates.
    pub fn distance(&self, other: &Inventory) -> f64 {
        self.p5
            .iter()
            .zip(other.p5)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl HoldingGrid {
    pub fn share(&self, i: usize, obj: Obj) -> f64 {
        self.g[i][obj.column()]
    }

    /// Back to the 5 independent coordinates.
    pub fn restrict(&self) -> Inventory {
        Inventory::new([
            self.g[0][1],
            self.g[1][2],
            self.g[2][0],
            self.g[0][3],
            self.g[1][3],
        ])
    }
}
