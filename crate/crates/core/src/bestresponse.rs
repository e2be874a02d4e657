//! Sign-rule best responses, piecewise-constant strategy paths, switching
//! extraction with bisection refinement, and the switching-time distance used
//! by the outer equilibrium loop.

use crate::error::{Error, Result};
use crate::strategy::{BitKind, StrategyProfile, TypeStrategy};
use crate::valuation::{ValuePath, ValueTable};

/// |Delta| below this is treated as a tie to avoid chattering on roundoff.
pub const DEADBAND: f64 = 1e-12;

/// Bisection precision for refined switching times.
pub const SWITCH_TIME_TOL: f64 = 1e-9;

/// Default cap on extracted switches before declaring oscillation.
pub const DEFAULT_SWITCH_CAP: usize = 64;

/// A piecewise-constant strategy profile path: `initial` before the first
/// breakpoint, then the profile attached to the latest breakpoint at or
/// before `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseStrategyPath {
    pub initial: StrategyProfile,
    pub breakpoints: Vec<(f64, StrategyProfile)>,
}

/// One strategy bit changing value at a point in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEvent {
    pub time: f64,
    pub type_index: usize,
    pub bit: BitKind,
    pub to: bool,
}

impl PiecewiseStrategyPath {
    pub fn constant(profile: StrategyProfile) -> Self {
        PiecewiseStrategyPath {
            initial: profile,
            breakpoints: Vec::new(),
        }
    }

    pub fn new(initial: StrategyProfile, breakpoints: Vec<(f64, StrategyProfile)>) -> Result<Self> {
        let mut prev_t = f64::NEG_INFINITY;
        let mut prev_p = initial;
        for (t, p) in &breakpoints {
            if !(*t > prev_t) {
                return Err(Error::Domain(format!(
                    "strategy path breakpoints must be strictly increasing (at t = {t})"
                )));
            }
            if *p == prev_p {
                return Err(Error::Domain(format!(
                    "strategy path breakpoint at t = {t} does not change the profile"
                )));
            }
            prev_t = *t;
            prev_p = *p;
        }
        Ok(PiecewiseStrategyPath { initial, breakpoints })
    }

    pub fn profile_at(&self, t: f64) -> StrategyProfile {
        match self.breakpoints.iter().rev().find(|(bt, _)| *bt <= t) {
            Some((_, p)) => *p,
            None => self.initial,
        }
    }

    pub fn tail_profile(&self) -> StrategyProfile {
        self.breakpoints.last().map(|(_, p)| *p).unwrap_or(self.initial)
    }

    /// Per-bit switch events implied by the breakpoint list, in time order
    /// (bits changing at the same breakpoint are listed in type/bit order).
    pub fn switch_events(&self) -> Vec<SwitchEvent> {
        let mut events = Vec::new();
        let mut prev = self.initial;
        for (t, p) in &self.breakpoints {
            for i in 0..3 {
                for kind in BitKind::ALL {
                    let to = p.0[i].bit(kind);
                    if prev.0[i].bit(kind) != to {
                        events.push(SwitchEvent {
                            time: *t,
                            type_index: i,
                            bit: kind,
                            to,
                        });
                    }
                }
            }
            prev = *p;
        }
        events
    }
}

/// Sign-rule best response to a value table: trade j for k iff
/// V_j - V_k < 0; ties resolve to 0. The output always lies in the
/// admissible set because it derives from a total preorder on three values.
pub fn sigma_from_values(v: &ValueTable) -> StrategyProfile {
    sigma_update(None, v)
}

/// Sign-rule best response with a dead band: |Delta| < DEADBAND keeps the
/// previous bit when available (the backward pass knows the future side of
/// the tie). Falls back to strict comparisons if the dead-band bits are
/// intransitive.
pub fn sigma_update(prev: Option<&StrategyProfile>, v: &ValueTable) -> StrategyProfile {
    let mut triples = [TypeStrategy::ALL[5]; 3];
    for i in 0..3 {
        let strict = |kind: BitKind| v.delta(i, kind) < 0.0;
        let banded = |kind: BitKind| {
            let d = v.delta(i, kind);
            if d.abs() < DEADBAND {
                match prev {
                    Some(p) => p.0[i].bit(kind),
                    None => false,
                }
            } else {
                d < 0.0
            }
        };
        let t = TypeStrategy::from_bools(
            banded(BitKind::ProdForMoney),
            banded(BitKind::OtherForMoney),
            banded(BitKind::ProdForOther),
        );
        triples[i] = if t.is_transitive() {
            t
        } else {
            // strict signs from a total preorder are always transitive
            TypeStrategy::from_bools(
                strict(BitKind::ProdForMoney),
                strict(BitKind::OtherForMoney),
                strict(BitKind::ProdForOther),
            )
        };
    }
    StrategyProfile::new(triples)
}

/// Converts a backward value path into a piecewise-constant strategy path:
/// scans the per-sample best responses for bit changes and refines each
/// switching time by bisection on the interpolated value difference.
pub fn extract_switches(vp: &ValuePath, cap: usize) -> Result<PiecewiseStrategyPath> {
    let n = vp.times.len();
    let mut events: Vec<SwitchEvent> = Vec::new();
    for k in 0..n.saturating_sub(1) {
        for i in 0..3 {
            for kind in BitKind::ALL {
                let b0 = vp.profiles[k].0[i].bit(kind);
                let b1 = vp.profiles[k + 1].0[i].bit(kind);
                if b0 == b1 {
                    continue;
                }
                let time = refine_switch(vp, k, i, kind);
                events.push(SwitchEvent {
                    time,
                    type_index: i,
                    bit: kind,
                    to: b1,
                });
            }
        }
    }
    if events.len() > cap {
        return Err(Error::TooManySwitches {
            count: events.len(),
            cap,
        });
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time));

    let mut breakpoints = Vec::new();
    let mut current = vp.profiles[0];
    let mut idx = 0;
    while idx < events.len() {
        let t = events[idx].time;
        let mut next = current;
        while idx < events.len() && events[idx].time == t {
            let e = events[idx];
            next.0[e.type_index] = next.0[e.type_index].with_bit(e.bit, e.to);
            idx += 1;
        }
        if next != current {
            breakpoints.push((t, next));
            current = next;
        }
    }
    // guard against duplicate-time collapse producing equal profiles
    breakpoints.dedup_by(|b, a| {
        if a.1 == b.1 {
            true
        } else {
            false
        }
    });
    Ok(PiecewiseStrategyPath {
        initial: vp.profiles[0],
        breakpoints,
    })
}

/// Bisection on the (linearly interpolated) value difference between two
/// adjacent samples where the best-response bit flips.
fn refine_switch(vp: &ValuePath, k: usize, i: usize, kind: BitKind) -> f64 {
    let (mut t0, mut t1) = (vp.times[k], vp.times[k + 1]);
    let d0 = vp.tables[k].delta(i, kind);
    let d1 = vp.tables[k + 1].delta(i, kind);
    if d0.signum() == d1.signum() || d0 == 0.0 || d1 == 0.0 {
        // dead-band resolution without a strict sign change: place the
        // switch at the later sample
        return t1;
    }
    let delta_at = |t: f64| delta_interp(vp, t, i, kind);
    let mut f0 = d0;
    while t1 - t0 > SWITCH_TIME_TOL {
        let tm = 0.5 * (t0 + t1);
        let fm = delta_at(tm);
        if fm == 0.0 {
            return tm;
        }
        if (fm < 0.0) == (f0 < 0.0) {
            t0 = tm;
            f0 = fm;
        } else {
            t1 = tm;
        }
    }
    0.5 * (t0 + t1)
}

/// Cubic (4-point Lagrange) interpolation of one value difference.
fn delta_interp(vp: &ValuePath, t: f64, i: usize, kind: BitKind) -> f64 {
    let n = vp.times.len();
    let hi = vp.times.partition_point(|&x| x < t).min(n - 1);
    let lo = hi.saturating_sub(1);
    let first = lo.saturating_sub(1);
    let last = (first + 3).min(n - 1);
    let first = last.saturating_sub(3);
    let mut out = 0.0;
    for a in first..=last {
        let mut w = 1.0;
        for b in first..=last {
            if a != b {
                w *= (t - vp.times[b]) / (vp.times[a] - vp.times[b]);
            }
        }
        out += w * vp.tables[a].delta(i, kind);
    }
    out
}

/// Distance between two strategy paths: +inf when the initial profiles,
/// switch counts, or switched bits differ; otherwise the largest gap between
/// matched switching times.
pub fn path_distance(a: &PiecewiseStrategyPath, b: &PiecewiseStrategyPath) -> f64 {
    if a.initial != b.initial {
        return f64::INFINITY;
    }
    let ea = a.switch_events();
    let eb = b.switch_events();
    if ea.len() != eb.len() {
        return f64::INFINITY;
    }
    let mut d = 0.0f64;
    for (x, y) in ea.iter().zip(&eb) {
        if x.type_index != y.type_index || x.bit != y.bit || x.to != y.to {
            return f64::INFINITY;
        }
        d = d.max((x.time - y.time).abs());
    }
    d
}
