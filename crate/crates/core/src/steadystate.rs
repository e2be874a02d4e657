//! Steady-state enumeration over all admissible constant profiles, analytic
//! no-money fixed points, and the closed-form existence conditions for the
//! barter equilibria at equal population shares.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{default_starts, find_fixed_points, inventory_rhs};
use crate::error::{Error, Result};
use crate::inventory::Inventory;
use crate::nash::verify_nash_steady;
use crate::params::ModelParams;
use crate::strategy::StrategyProfile;
use crate::valuation::ValueTable;

/// Threshold below which a Nash margin counts as a knife-edge tie.
pub const KNIFE_EDGE_TOL: f64 = 1e-10;

/// One fixed point of the inventory dynamics under a constant profile,
/// together with its values and Nash classification.
#[derive(Debug, Clone, Serialize)]
pub struct SteadyStateRecord {
    pub profile_matrix: [[u8; 3]; 3],
    #[serde(skip)]
    pub profile: StrategyProfile,
    pub p_star: Inventory,
    pub v_star: ValueTable,
    pub is_nash: bool,
    /// True when some decision bit sits within KNIFE_EDGE_TOL of
    /// indifference; such points are excluded from region maps.
    pub knife_edge: bool,
    /// Smallest |V_j - V_k| over the profile's decision bits.
    pub margin: f64,
    /// Infinity norm of the inventory vector field at p_star.
    pub residual: f64,
    /// True when every Newton start converged to this same point.
    pub multi_start_agreement: bool,
}

/// Result of sweeping all 216 profiles.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub records: Vec<SteadyStateRecord>,
    /// Profiles (with reasons) for which no fixed point was certified.
    pub failures: Vec<(StrategyProfile, String)>,
}

impl Enumeration {
    pub fn nash_records(&self) -> impl Iterator<Item = &SteadyStateRecord> {
        self.records.iter().filter(|r| r.is_nash && !r.knife_edge)
    }
}

/// Classifies the fixed points of every admissible profile. Per-profile
/// solver failures are recorded, not fatal.
pub fn enumerate_steady_states(params: &ModelParams) -> Enumeration {
    classify_profiles(params, &StrategyProfile::all())
}

/// Classifies the fixed points of a chosen profile family (region maps often
/// restrict attention to a handful of candidate profiles).
pub fn classify_profiles(params: &ModelParams, profiles: &[StrategyProfile]) -> Enumeration {
    let results: Vec<(Vec<SteadyStateRecord>, Option<(StrategyProfile, String)>)> = profiles
        .par_iter()
        .map(|profile| match profile_records(profile, params) {
            Ok(records) if !records.is_empty() => (records, None),
            Ok(_) => (
                Vec::new(),
                Some((*profile, "no fixed point found from any start".to_string())),
            ),
            Err(e) => (Vec::new(), Some((*profile, e.to_string()))),
        })
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (mut recs, fail) in results {
        records.append(&mut recs);
        if let Some(f) = fail {
            failures.push(f);
        }
    }
    Enumeration { records, failures }
}

fn profile_records(profile: &StrategyProfile, params: &ModelParams) -> Result<Vec<SteadyStateRecord>> {
    let report = find_fixed_points(profile, params, &default_starts(params))?;
    report
        .points
        .iter()
        .map(|p_star| {
            let mut rec = record_for(profile, p_star, params)?;
            rec.multi_start_agreement = report.all_starts_agree;
            Ok(rec)
        })
        .collect()
}

/// Builds the classification record for one known fixed point.
pub fn record_for(
    profile: &StrategyProfile,
    p_star: &Inventory,
    params: &ModelParams,
) -> Result<SteadyStateRecord> {
    let verdict = verify_nash_steady(profile, p_star, params)?;
    let rhs = inventory_rhs(p_star, profile, params);
    let residual = rhs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(SteadyStateRecord {
        profile_matrix: profile.display_matrix(),
        profile: *profile,
        p_star: *p_star,
        v_star: verdict.values,
        is_nash: verdict.is_nash,
        knife_edge: verdict.knife_edge,
        margin: verdict.margin,
        residual,
        multi_start_agreement: true,
    })
}

/// Closed-form no-money fixed points by the third-row (commodity trading)
/// bits; the money acceptance bits are irrelevant when the money stock is
/// zero. Profiles without a proven closed form return Unsupported.
pub fn analytic_m0_steady(s3: [u8; 3], theta: [f64; 3]) -> Result<Inventory> {
    let [t1, t2, t3] = theta;
    let barter = |p12: f64, p23: f64, p31: f64| Inventory::new([p12, p23, p31, 0.0, 0.0]);
    let root = |a: f64, b: f64| 0.5 * (-(a) + (a * a + 4.0 * b).sqrt());
    match s3 {
        [0, 1, 0] => Ok(barter(t1, t1 * t2 / (t1 + t3), t3)),
        [1, 1, 0] => {
            let q = root(t1 + t3, t1 * t2);
            Ok(barter(t1 * t3 / (t3 + q), q, t3))
        }
        [1, 0, 1] => {
            // the last slot follows from the stationarity of p_{1,2}:
            // (theta1 - p12) p31 = p12 theta2
            let r = root(t3 + t2, t3 * t1);
            Ok(barter(r, t2, r * t2 / (t1 - r)))
        }
        [0, 1, 1] => {
            let w = root(t2 + t1, t2 * t3);
            Ok(barter(t1, t1 * t2 / (w + t1), w))
        }
        [0, 0, 0] => Ok(barter(t1, t2, t3)),
        _ => Err(Error::Unsupported(format!(
            "no closed-form no-money fixed point for commodity bits {s3:?}"
        ))),
    }
}

/// Storage-cost ordering selecting which barter equilibria to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostOrder {
    /// c1 < c2 < c3: fundamental (0,1,0) and speculative (1,1,0) candidates.
    Increasing,
    /// c1 > c2 > c3: (1,0,1) always an equilibrium; (0,1,1) conditional.
    Decreasing,
}

/// One closed-form existence inequality, with sides evaluated at the
/// relevant no-money steady state.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub s3: [u8; 3],
    pub lhs: f64,
    pub rhs: f64,
    /// True when lhs relates to rhs in the direction required for the
    /// equilibrium to exist.
    pub passes: bool,
}

/// Evaluates the closed-form existence conditions for the no-money barter
/// equilibria. Only defined at equal population shares and zero money stock,
/// where the printed thresholds apply.
pub fn existence_conditions(order: CostOrder, params: &ModelParams) -> Result<Vec<ConditionCheck>> {
    if params.money_stock != 0.0 {
        return Err(Error::Domain(
            "existence conditions are closed forms for the no-money economy".into(),
        ));
    }
    if params.theta.iter().any(|&t| (t - 1.0 / 3.0).abs() > 1e-12) {
        return Err(Error::Domain(
            "existence-condition thresholds are derived at equal population shares".into(),
        ));
    }
    let sqrt2 = 2.0f64.sqrt();
    let [c1, c2, c3] = params.c;
    let [u1, u2, _] = params.u;
    let a = params.alpha;
    let checks = match order {
        CostOrder::Increasing => vec![
            ConditionCheck {
                name: "fundamental",
                s3: [0, 1, 0],
                lhs: (c3 - c2) / (u1 * a),
                rhs: 1.0 / 6.0,
                passes: (c3 - c2) / (u1 * a) > 1.0 / 6.0,
            },
            ConditionCheck {
                name: "speculative",
                s3: [1, 1, 0],
                lhs: (c3 - c2) / (u1 * a),
                rhs: sqrt2 * (sqrt2 - 1.0) / 3.0,
                passes: (c3 - c2) / (u1 * a) < sqrt2 * (sqrt2 - 1.0) / 3.0,
            },
        ],
        CostOrder::Decreasing => vec![
            ConditionCheck {
                name: "reverse-speculative-storage",
                s3: [0, 1, 1],
                lhs: (c3 - c1) / (u2 * a),
                rhs: sqrt2 * (1.0 - sqrt2) / 3.0,
                passes: (c3 - c1) / (u2 * a) > sqrt2 * (1.0 - sqrt2) / 3.0,
            },
            ConditionCheck {
                name: "reverse-speculative-liquidity",
                s3: [0, 1, 1],
                lhs: (c2 - c3) / (u1 * a),
                rhs: sqrt2 / 6.0,
                passes: (c2 - c3) / (u1 * a) < sqrt2 / 6.0,
            },
        ],
    };
    Ok(checks)
}
