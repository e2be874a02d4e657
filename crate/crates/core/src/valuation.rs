//! Value functions: flow utilities, the per-type 3x3 generator matrix,
//! steady-state values, and backward-in-time integration of the value ODE
//! with contemporaneous best-response recomputation.
//!
//! Per type `i` the three holding slots are ordered (production good `i+1`,
//! other good `i+2`, money), matching [`crate::strategy::holdings_of`].

use serde::{Deserialize, Serialize};

use crate::bestresponse::{sigma_update, PiecewiseStrategyPath};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::inventory::{HoldingGrid, Inventory};
use crate::linalg;
use crate::params::ModelParams;
use crate::strategy::{holdings_of, BitKind, Obj, StrategyProfile, TypeStrategy};

pub const MONEY_SLOT: usize = 2;

/// Values V_{i,j}: row = type, column = holding slot (prod, other, money).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueTable {
    pub v: [[f64; 3]; 3],
}

impl ValueTable {
    pub fn zero() -> Self {
        ValueTable { v: [[0.0; 3]; 3] }
    }

    pub fn get(&self, i: usize, slot: usize) -> f64 {
        self.v[i][slot]
    }

    /// Value difference V_give - V_get for the decision bit `kind` of type `i`.
    pub fn delta(&self, i: usize, kind: BitKind) -> f64 {
        let (a, b) = kind.slots();
        self.v[i][a] - self.v[i][b]
    }

    pub fn max_abs(&self) -> f64 {
        self.v
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &ValueTable) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.v[i][j] - other.v[i][j]).abs());
            }
        }
        m
    }
}

/// Flow utilities v_{i,j} for every type and holding slot: expected
/// consumption utility from meetings with holders of good `i`, net of the
/// storage cost (for money, the expected production disutility from
/// confiscation, delta_m * D_i).
pub fn flow_utilities(grid: &HoldingGrid, s: &StrategyProfile, params: &ModelParams) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for (slot, obj) in holdings_of(i).into_iter().enumerate() {
            let mut cons = 0.0;
            for i2 in 0..3 {
                let pk = grid.share(i2, Obj::Good(i));
                if pk == 0.0 {
                    continue;
                }
                if s.willing(i2, Obj::Good(i), obj) {
                    cons += pk;
                }
            }
            let cost = match obj {
                Obj::Good(g) => params.c[g],
                Obj::Money => params.seignorage_rate * params.d[i],
            };
            out[i][slot] = params.alpha * params.u[i] * cons - cost;
        }
    }
    out
}

/// The generator of type `i`'s holding process: off-diagonal entry (j, k) is
/// the rate of moving from slot j to slot k given the agent's own strategy
/// `own` and everyone else's profile `s`; rows sum to zero.
pub fn generator(
    i: usize,
    grid: &HoldingGrid,
    own: &TypeStrategy,
    s: &StrategyProfile,
    params: &ModelParams,
) -> [[f64; 3]; 3] {
    let objs = holdings_of(i);
    let mut a = [[0.0; 3]; 3];
    // bilateral trades among the three holding slots
    for j in 0..3 {
        for k in 0..3 {
            if j == k || !own.willing(i, objs[j], objs[k]) {
                continue;
            }
            let mut rate = 0.0;
            for i2 in 0..3 {
                let pk = grid.share(i2, objs[k]);
                if pk == 0.0 {
                    continue;
                }
                if s.willing(i2, objs[k], objs[j]) {
                    rate += pk;
                }
            }
            a[j][k] += params.alpha * rate;
        }
    }
    // consumption: acquiring good i, consuming, and producing moves the
    // agent to the production slot (a wash when already there)
    for j in 1..3 {
        let mut rate = 0.0;
        for i2 in 0..3 {
            let pk = grid.share(i2, Obj::Good(i));
            if pk == 0.0 {
                continue;
            }
            if s.willing(i2, Obj::Good(i), objs[j]) {
                rate += pk;
            }
        }
        a[j][0] += params.alpha * rate;
    }
    // government: purchases move goods to money, confiscation moves money
    // back to the production slot
    a[0][MONEY_SLOT] += params.purchase_rate;
    a[1][MONEY_SLOT] += params.purchase_rate;
    a[MONEY_SLOT][0] += params.seignorage_rate;
    // rows sum to zero
    for j in 0..3 {
        a[j][j] = -(0..3).filter(|&k| k != j).map(|k| a[j][k]).sum::<f64>();
    }
    a
}

/// Steady-state values: per type, the solution of (rho I - A) V = v with the
/// agent's own strategy taken from the profile itself.
pub fn steady_value(p_star: &Inventory, s_star: &StrategyProfile, params: &ModelParams) -> Result<ValueTable> {
    let grid = p_star.expand(params)?;
    let flows = flow_utilities(&grid, s_star, params);
    let mut table = ValueTable::zero();
    for i in 0..3 {
        let a = generator(i, &grid, &s_star.0[i], s_star, params);
        let mut lhs = [[0.0; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                lhs[j][k] = if j == k { params.rho } else { 0.0 } - a[j][k];
            }
        }
        table.v[i] = linalg::solve(lhs, flows[i])?;
    }
    Ok(table)
}

/// Time derivative of type `i`'s value vector: rho V - A V - v.
pub fn value_rhs(
    i: usize,
    v_i: &[f64; 3],
    grid: &HoldingGrid,
    own: &TypeStrategy,
    s: &StrategyProfile,
    params: &ModelParams,
) -> [f64; 3] {
    let a = generator(i, grid, own, s, params);
    let flows = flow_utilities(grid, s, params);
    let mut out = [0.0; 3];
    for j in 0..3 {
        let mut av = 0.0;
        for k in 0..3 {
            av += a[j][k] * v_i[k];
        }
        out[j] = params.rho * v_i[j] - av - flows[i][j];
    }
    out
}

/// How the agent's own strategy is chosen during backward integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaMode {
    /// Recompute the sign-rule best response from the current values at the
    /// start (latest time) of every step.
    BestResponse,
    /// Follow the supplied strategy path bitwise (used for verification and
    /// contraction checks).
    Forced,
}

/// Options for backward value integration.
#[derive(Debug, Clone, Copy)]
pub struct BackwardOpts {
    /// Error out when any |V| exceeds this bound.
    pub divergence_bound: f64,
}

impl Default for BackwardOpts {
    fn default() -> Self {
        BackwardOpts {
            divergence_bound: 1e6,
        }
    }
}

/// A backward solution of the value ODE, stored in increasing time order,
/// together with the agent-side strategy profile used at each sample.
#[derive(Debug, Clone)]
pub struct ValuePath {
    pub times: Vec<f64>,
    pub tables: Vec<ValueTable>,
    pub profiles: Vec<StrategyProfile>,
}

impl ValuePath {
    pub fn initial_table(&self) -> ValueTable {
        self.tables[0]
    }

    pub fn boundary_table(&self) -> ValueTable {
        *self.tables.last().expect("value path is nonempty")
    }
}

/// RK4 backward integration of the value ODE over the trajectory's own time
/// grid, from the terminal boundary table down to t = 0. Partners play
/// `s_path`; the agent side follows `mode`.
pub fn integrate_value_backward(
    traj: &Trajectory,
    s_path: &PiecewiseStrategyPath,
    v_boundary: ValueTable,
    params: &ModelParams,
    mode: SigmaMode,
    opts: &BackwardOpts,
) -> Result<ValuePath> {
    let n = traj.times.len();
    let mut times = Vec::with_capacity(n);
    let mut tables = Vec::with_capacity(n);
    let mut profiles = Vec::with_capacity(n);

    let mut v = v_boundary;
    let mut sigma = match mode {
        SigmaMode::BestResponse => sigma_update(None, &v),
        SigmaMode::Forced => s_path.profile_at(traj.horizon()),
    };
    times.push(traj.horizon());
    tables.push(v);
    profiles.push(sigma);

    for step in (0..n - 1).rev() {
        let t1 = traj.times[step + 1];
        let t0 = traj.times[step];
        let h = t0 - t1; // negative
        if h == 0.0 {
            // duplicate grid point: copy the sample to stay aligned with the
            // trajectory grid
            times.push(t0);
            tables.push(v);
            profiles.push(sigma);
            continue;
        }
        let tm = 0.5 * (t0 + t1);
        let s = s_path.profile_at(tm);
        if mode == SigmaMode::Forced {
            sigma = s;
        }
        let g1 = traj.states[step + 1].expand_unchecked(params);
        let gm = traj.state_at(tm).expand_unchecked(params);
        let g0 = traj.states[step].expand_unchecked(params);

        let mut next = ValueTable::zero();
        for i in 0..3 {
            let own = sigma.0[i];
            let f = |grid: &HoldingGrid, vi: &[f64; 3]| value_rhs(i, vi, grid, &own, &s, params);
            let vi = v.v[i];
            let k1 = f(&g1, &vi);
            let k2 = f(&gm, &axpy(&vi, &k1, 0.5 * h));
            let k3 = f(&gm, &axpy(&vi, &k2, 0.5 * h));
            let k4 = f(&g0, &axpy(&vi, &k3, h));
            for j in 0..3 {
                next.v[i][j] = vi[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        v = next;
        let mag = v.max_abs();
        if !mag.is_finite() || mag > opts.divergence_bound {
            return Err(Error::Divergence { t: t0, magnitude: mag });
        }
        if mode == SigmaMode::BestResponse {
            sigma = sigma_update(Some(&sigma), &v);
        }
        times.push(t0);
        tables.push(v);
        profiles.push(sigma);
    }

    times.reverse();
    tables.reverse();
    profiles.reverse();
    Ok(ValuePath {
        times,
        tables,
        profiles,
    })
}

fn axpy(v: &[f64; 3], k: &[f64; 3], c: f64) -> [f64; 3] {
    [v[0] + c * k[0], v[1] + c * k[1], v[2] + c * k[2]]
}
