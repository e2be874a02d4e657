//! Inventory dynamics: the coupled ODE system over the 5 independent holding
//! shares, its forward integration under a piecewise-constant strategy path,
//! and numeric fixed points for constant profiles.

use crate::bestresponse::PiecewiseStrategyPath;
use crate::error::{Error, Result};
use crate::inventory::{HoldingGrid, Inventory};
use crate::linalg;
use crate::params::ModelParams;
use crate::strategy::{holdings_of, production_good, Obj, StrategyProfile};

/// Full 3x4 time derivative of the holding grid. Exposed for conservation
/// checks; the integrator uses the restricted 5-vector.
pub fn inventory_rhs_grid(grid: &HoldingGrid, s: &StrategyProfile, params: &ModelParams) -> [[f64; 4]; 3] {
    let mut d = [[0.0; 4]; 3];
    let alpha = params.alpha;
    // bilateral meetings: for each (agent i holding j, partner i2 holding k),
    // trade occurs iff both sides accept; the agent ends up holding k, or the
    // production good when k is the agent's consumption good (instantaneous
    // consumption and production)
    for i in 0..3 {
        for j in holdings_of(i) {
            let pj = grid.share(i, j);
            if pj == 0.0 {
                continue;
            }
            for i2 in 0..3 {
                for k in holdings_of(i2) {
                    if j == k {
                        continue;
                    }
                    let pk = grid.share(i2, k);
                    if pk == 0.0 {
                        continue;
                    }
                    if !s.willing(i, j, k) || !s.willing(i2, k, j) {
                        continue;
                    }
                    let after = if k == Obj::Good(i) {
                        Obj::Good(production_good(i))
                    } else {
                        k
                    };
                    if after == j {
                        continue;
                    }
                    let rate = alpha * pj * pk;
                    d[i][j.column()] -= rate;
                    d[i][after.column()] += rate;
                }
            }
        }
    }
    // government: confiscation returns money holders to production; purchases
    // swap goods for money unconditionally
    let dm = params.seignorage_rate;
    let dg = params.purchase_rate;
    for i in 0..3 {
        let pm = grid.share(i, Obj::Money);
        d[i][Obj::Money.column()] -= dm * pm;
        d[i][production_good(i)] += dm * pm;
        for j in [Obj::Good(production_good(i)), Obj::Good((i + 2) % 3)] {
            let pj = grid.share(i, j);
            d[i][j.column()] -= dg * pj;
            d[i][Obj::Money.column()] += dg * pj;
        }
    }
    d
}

/// Time derivative of the 5 independent inventory components. Total on any
/// input (feasible or not); solvers rely on the smooth extension.
pub fn inventory_rhs(p: &Inventory, s: &StrategyProfile, params: &ModelParams) -> [f64; 5] {
    let d = inventory_rhs_grid(&p.expand_unchecked(params), s, params);
    [d[0][1], d[1][2], d[2][0], d[0][3], d[1][3]]
}

/// Aggregate production flow: consumption-and-produce trades plus
/// confiscation-induced production.
pub fn production_rate(p: &Inventory, s: &StrategyProfile, params: &ModelParams) -> f64 {
    let grid = p.expand_unchecked(params);
    let mut flow = 0.0;
    for i in 0..3 {
        for j in holdings_of(i) {
            let pj = grid.share(i, j);
            if pj == 0.0 {
                continue;
            }
            for i2 in 0..3 {
                let pk = grid.share(i2, Obj::Good(i));
                if pk == 0.0 || Obj::Good(i) == j {
                    continue;
                }
                if s.willing(i2, Obj::Good(i), j) {
                    // the agent always accepts its consumption good
                    flow += params.alpha * pj * pk;
                }
            }
        }
        flow += params.seignorage_rate * grid.share(i, Obj::Money);
    }
    flow
}

/// A sampled forward solution of the inventory ODE.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Inventory>,
    pub path: PiecewiseStrategyPath,
}

impl Trajectory {
    pub fn final_state(&self) -> Inventory {
        *self.states.last().expect("trajectory is nonempty")
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("trajectory is nonempty")
    }

    /// Cubic (4-point Lagrange) interpolation of the state at time `t`,
    /// restricted to samples on the same side of any strategy switch.
    pub fn state_at(&self, t: f64) -> Inventory {
        let n = self.times.len();
        if n == 1 {
            return self.states[0];
        }
        let t = t.clamp(self.times[0], self.times[n - 1]);
        // hi = first index with times[hi] >= t
        let hi = self.times.partition_point(|&x| x < t).min(n - 1);
        if self.times[hi] == t {
            return self.states[hi];
        }
        let lo_seg = hi - 1;
        // keep the stencil inside the smooth segment between switches
        let seg_start = self.segment_start(lo_seg);
        let seg_end = self.segment_end(hi);
        let first = lo_seg
            .saturating_sub(1)
            .max(seg_start)
            .min(seg_end.saturating_sub(3).max(seg_start));
        let last = (first + 3).min(seg_end);
        let first = last.saturating_sub(3).max(seg_start);
        let idx: Vec<usize> = (first..=last).collect();
        let mut out = [0.0; 5];
        for &a in &idx {
            let mut w = 1.0;
            for &b in &idx {
                if a != b {
                    w *= (t - self.times[b]) / (self.times[a] - self.times[b]);
                }
            }
            for c in 0..5 {
                out[c] += w * self.states[a].p5[c];
            }
        }
        Inventory::new(out)
    }

    fn segment_start(&self, idx: usize) -> usize {
        let t = self.times[idx];
        match self
            .path
            .breakpoints
            .iter()
            .rev()
            .find(|(bt, _)| *bt <= t)
        {
            Some((bt, _)) => self.times.partition_point(|&x| x < *bt),
            None => 0,
        }
    }

    fn segment_end(&self, idx: usize) -> usize {
        let t = self.times[idx];
        match self.path.breakpoints.iter().find(|(bt, _)| *bt > t) {
            Some((bt, _)) => self.times.partition_point(|&x| x <= *bt).saturating_sub(1),
            None => self.times.len() - 1,
        }
    }
}

/// Fixed-step RK4 forward integration on [0, T], with steps split exactly at
/// the path's switching times. Every accepted step is checked against the
/// feasibility tolerance.
pub fn integrate_forward(
    p0: Inventory,
    path: &PiecewiseStrategyPath,
    horizon: f64,
    dt: f64,
    params: &ModelParams,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt = {dt} must be positive")));
    }
    if !(horizon >= 0.0) {
        return Err(Error::Domain(format!("horizon = {horizon} must be nonnegative")));
    }
    p0.expand(params)?;

    let mut times = Vec::with_capacity((horizon / dt) as usize + 2);
    let mut states = Vec::with_capacity(times.capacity());
    times.push(0.0);
    states.push(p0);

    let mut switch_times: Vec<f64> = path
        .breakpoints
        .iter()
        .map(|(t, _)| *t)
        .filter(|&t| t > 0.0 && t < horizon)
        .collect();
    switch_times.push(horizon);
    switch_times.dedup();

    let mut t = 0.0;
    let mut p = p0;
    for stop in switch_times {
        while t < stop - 1e-13 {
            let h = dt.min(stop - t);
            let s = path.profile_at(t + 0.5 * h);
            p = rk4_step(&p, &s, h, params);
            t += h;
            if let Err(e) = p.expand(params) {
                return Err(Error::FeasibilityDrift {
                    t,
                    detail: e.to_string(),
                });
            }
            times.push(t);
            states.push(p);
        }
        t = stop;
        if let Some(last) = times.last_mut() {
            *last = t;
        }
    }

    Ok(Trajectory {
        times,
        states,
        path: path.clone(),
    })
}

fn rk4_step(p: &Inventory, s: &StrategyProfile, h: f64, params: &ModelParams) -> Inventory {
    let add = |p: &Inventory, k: &[f64; 5], c: f64| {
        let mut q = p.p5;
        for i in 0..5 {
            q[i] += c * k[i];
        }
        Inventory::new(q)
    };
    let k1 = inventory_rhs(p, s, params);
    let k2 = inventory_rhs(&add(p, &k1, 0.5 * h), s, params);
    let k3 = inventory_rhs(&add(p, &k2, 0.5 * h), s, params);
    let k4 = inventory_rhs(&add(p, &k3, h), s, params);
    let mut q = p.p5;
    for i in 0..5 {
        q[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Inventory::new(q)
}

/// Outcome of the multi-start fixed-point search for one constant profile.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    /// Distinct solutions with residual at or below 1e-12 (infinity norm).
    pub points: Vec<Inventory>,
    /// Starts whose Newton iteration did not converge.
    pub failed_starts: usize,
    /// True when every converged start reached the same point.
    pub all_starts_agree: bool,
}

pub const FP_RESIDUAL_TOL: f64 = 1e-12;
const FP_DEDUP_TOL: f64 = 1e-8;

/// Default Newton starts: the polytope centroid plus four corner mixes of
/// production-good and other-good holdings, each with money split evenly.
pub fn default_starts(params: &ModelParams) -> Vec<Inventory> {
    let th = params.theta;
    let m3 = params.money_stock / 3.0;
    let goods = [th[0] - m3, th[1] - m3, th[2] - m3];
    let corner = |bits: [f64; 3]| {
        Inventory::new([goods[0] * bits[0], goods[1] * bits[1], goods[2] * bits[2], m3, m3])
    };
    vec![
        corner([0.5, 0.5, 0.5]),
        corner([1.0, 1.0, 1.0]),
        corner([0.0, 0.0, 0.0]),
        corner([1.0, 0.0, 1.0]),
        corner([0.0, 1.0, 0.0]),
    ]
}

/// Damped Newton search for zeros of the inventory vector field from each
/// start; converged points are deduplicated.
pub fn find_fixed_points(
    s: &StrategyProfile,
    params: &ModelParams,
    starts: &[Inventory],
) -> Result<FixedPointReport> {
    if starts.is_empty() {
        return Err(Error::Domain("fixed-point search needs at least one start".into()));
    }
    let mut points: Vec<Inventory> = Vec::new();
    let mut failed = 0usize;
    let mut converged_targets: Vec<Inventory> = Vec::new();
    for &start in starts {
        let found = newton(start, s, params).or_else(|| {
            // rescue: relax toward the attractor first, then polish
            let path = PiecewiseStrategyPath::constant(*s);
            integrate_forward(start, &path, 500.0, 0.05, params)
                .ok()
                .and_then(|traj| newton(traj.final_state(), s, params))
        });
        match found {
            Some(p) => {
                converged_targets.push(p);
                if !points.iter().any(|q| q.distance(&p) <= FP_DEDUP_TOL) {
                    points.push(p);
                }
            }
            None => failed += 1,
        }
    }
    let all_starts_agree = failed == 0
        && converged_targets
            .windows(2)
            .all(|w| w[0].distance(&w[1]) <= FP_DEDUP_TOL);
    Ok(FixedPointReport {
        points,
        failed_starts: failed,
        all_starts_agree,
    })
}

fn residual_norm(r: &[f64; 5]) -> f64 {
    r.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn newton(start: Inventory, s: &StrategyProfile, params: &ModelParams) -> Option<Inventory> {
    let mut p = start;
    let mut r = inventory_rhs(&p, s, params);
    let mut rn = residual_norm(&r);
    for _ in 0..100 {
        if rn <= FP_RESIDUAL_TOL {
            return p.is_feasible(params).then_some(p);
        }
        let jac = jacobian(&p, s, params);
        let mut neg_r = r;
        for x in &mut neg_r {
            *x = -*x;
        }
        let step = linalg::solve(jac, neg_r).ok()?;
        // backtracking line search on the residual norm
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let mut q = p.p5;
            for i in 0..5 {
                q[i] += lambda * step[i];
            }
            let pq = Inventory::new(q);
            let rq = inventory_rhs(&pq, s, params);
            let rqn = residual_norm(&rq);
            if rqn < rn * (1.0 - 1e-4 * lambda) || rqn <= FP_RESIDUAL_TOL {
                p = pq;
                r = rq;
                rn = rqn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    (rn <= FP_RESIDUAL_TOL && p.is_feasible(params)).then_some(p)
}

fn jacobian(p: &Inventory, s: &StrategyProfile, params: &ModelParams) -> [[f64; 5]; 5] {
    let h = 1e-7;
    let mut jac = [[0.0; 5]; 5];
    for col in 0..5 {
        let mut hi = p.p5;
        let mut lo = p.p5;
        hi[col] += h;
        lo[col] -= h;
        let fh = inventory_rhs(&Inventory::new(hi), s, params);
        let fl = inventory_rhs(&Inventory::new(lo), s, params);
        for row in 0..5 {
            jac[row][col] = (fh[row] - fl[row]) / (2.0 * h);
        }
    }
    jac
}
