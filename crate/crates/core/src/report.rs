//! Result serialization: deterministic CSV and JSON writers with full-
//! precision float formatting, plus the parsers used by round-trip tests.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bestresponse::SwitchEvent;
use crate::dynamics::production_rate;
use crate::error::{Error, Result};
use crate::inventory::Inventory;
use crate::nash::NashResult;
use crate::params::ModelParams;
use crate::steadystate::SteadyStateRecord;
use crate::strategy::{BitKind, StrategyProfile, TypeStrategy};
use crate::valuation::ValueTable;
use crate::welfare::{group_welfare, WelfareReport};

/// 17 significant digits: round-trips every finite f64 exactly.
pub fn fmt_f(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Compact profile code, one triple per type: "111|101|010".
pub fn profile_code(p: &StrategyProfile) -> String {
    p.to_string()
}

pub fn parse_profile_code(code: &str) -> Result<StrategyProfile> {
    let mut triples = [TypeStrategy::ALL[5]; 3];
    let parts: Vec<&str> = code.split('|').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("malformed profile code {code:?}")));
    }
    for (i, part) in parts.iter().enumerate() {
        let bits: Vec<u8> = part
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d <= 1)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Config(format!("malformed profile code {code:?}")))
            })
            .collect::<Result<_>>()?;
        if bits.len() != 3 {
            return Err(Error::Config(format!("malformed profile code {code:?}")));
        }
        triples[i] = TypeStrategy::new([bits[0], bits[1], bits[2]])?;
    }
    Ok(StrategyProfile::new(triples))
}

const P5_HEADERS: [&str; 5] = ["p_1_2", "p_2_3", "p_3_1", "p_1_m", "p_2_m"];

fn value_headers() -> Vec<String> {
    let mut h = Vec::new();
    for i in 1..=3 {
        for slot in ["prod", "other", "money"] {
            h.push(format!("v_{i}_{slot}"));
        }
    }
    h
}

fn push_values(fields: &mut Vec<String>, v: &ValueTable) {
    for row in &v.v {
        for x in row {
            fields.push(fmt_f(*x));
        }
    }
}

/// One CSV row per steady-state record, in the given order.
pub fn steady_csv(records: &[SteadyStateRecord]) -> String {
    let mut out = String::new();
    out.push_str("profile,");
    out.push_str(&P5_HEADERS.join(","));
    out.push(',');
    out.push_str(&value_headers().join(","));
    out.push_str(",is_nash,knife_edge,margin,residual,multi_start_agreement\n");
    for r in records {
        let mut fields = vec![profile_code(&r.profile)];
        fields.extend(r.p_star.p5.iter().map(|x| fmt_f(*x)));
        push_values(&mut fields, &r.v_star);
        fields.push(r.is_nash.to_string());
        fields.push(r.knife_edge.to_string());
        fields.push(fmt_f(r.margin));
        fields.push(fmt_f(r.residual));
        fields.push(r.multi_start_agreement.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Parsed form of one steady CSV row (used by round-trip tests).
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyRow {
    pub profile: StrategyProfile,
    pub p_star: Inventory,
    pub v_star: ValueTable,
    pub is_nash: bool,
    pub knife_edge: bool,
    pub margin: f64,
    pub residual: f64,
    pub multi_start_agreement: bool,
}

pub fn parse_steady_csv(text: &str) -> Result<Vec<SteadyRow>> {
    let bad = |line: &str| Error::Config(format!("malformed steady CSV row: {line}"));
    let mut rows = Vec::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 20 {
            return Err(bad(line));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line));
        let flag = |s: &str| s.parse::<bool>().map_err(|_| bad(line));
        let mut p5 = [0.0; 5];
        for (k, x) in p5.iter_mut().enumerate() {
            *x = num(f[1 + k])?;
        }
        let mut v = ValueTable::zero();
        for i in 0..3 {
            for j in 0..3 {
                v.v[i][j] = num(f[6 + 3 * i + j])?;
            }
        }
        rows.push(SteadyRow {
            profile: parse_profile_code(f[0])?,
            p_star: Inventory::new(p5),
            v_star: v,
            is_nash: flag(f[15])?,
            knife_edge: flag(f[16])?,
            margin: num(f[17])?,
            residual: num(f[18])?,
            multi_start_agreement: flag(f[19])?,
        });
    }
    Ok(rows)
}

/// One sweep grid cell with the Nash profiles found there.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub money_stock: f64,
    pub seignorage_rate: f64,
    pub theta: [f64; 3],
    pub nash_profiles: Vec<StrategyProfile>,
    pub error: Option<String>,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("money_stock,seignorage_rate,theta_1,theta_2,theta_3,nash_count,nash_profiles,error\n");
    for r in rows {
        let profiles = r
            .nash_profiles
            .iter()
            .map(profile_code)
            .collect::<Vec<_>>()
            .join(";");
        let error = r.error.as_deref().unwrap_or("").replace(',', ";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f(r.money_stock),
            fmt_f(r.seignorage_rate),
            fmt_f(r.theta[0]),
            fmt_f(r.theta[1]),
            fmt_f(r.theta[2]),
            r.nash_profiles.len(),
            profiles,
            error
        ));
    }
    out
}

/// One welfare-curve grid point.
#[derive(Debug, Clone)]
pub struct WelfareRow {
    pub vary_value: f64,
    pub report: WelfareReport,
    pub error: Option<String>,
}

pub fn welfare_csv(vary_name: &str, rows: &[WelfareRow]) -> String {
    let mut out = format!("{vary_name},w_1,w_2,w_3,w,q,w_g,error\n");
    for r in rows {
        let error = r.error.as_deref().unwrap_or("").replace(',', ";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f(r.vary_value),
            fmt_f(r.report.w_i[0]),
            fmt_f(r.report.w_i[1]),
            fmt_f(r.report.w_i[2]),
            fmt_f(r.report.w),
            fmt_f(r.report.q),
            fmt_f(r.report.w_g),
            error
        ));
    }
    out
}

/// Sampled dynamic-equilibrium path: inventories, values, welfare, and the
/// aggregate production rate at every kept sample.
pub fn nash_trajectory_csv(result: &NashResult, params: &ModelParams, stride: usize) -> String {
    let stride = stride.max(1);
    let mut out = String::from("t,");
    out.push_str(&P5_HEADERS.join(","));
    out.push(',');
    out.push_str(&value_headers().join(","));
    out.push_str(",w,production_rate\n");
    let n = result.trajectory.times.len();
    for k in (0..n).step_by(stride).chain(if (n - 1) % stride != 0 {
        Some(n - 1)
    } else {
        None
    }) {
        let t = result.trajectory.times[k];
        let p = result.trajectory.states[k];
        let v = result.value_path.tables[k];
        let s = result.strategy_path.profile_at(t);
        let w = group_welfare(&p, &v, params);
        let mut fields = vec![fmt_f(t)];
        fields.extend(p.p5.iter().map(|x| fmt_f(*x)));
        push_values(&mut fields, &v);
        fields.push(fmt_f(w.w));
        fields.push(fmt_f(production_rate(&p, &s, params)));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SwitchJson {
    pub time: f64,
    /// 1-based type index.
    pub type_index: usize,
    pub bit: &'static str,
    pub to: u8,
}

#[derive(Debug, Clone, Serialize)]
pub struct NashSummaryJson {
    pub converged: bool,
    pub iterations: usize,
    pub final_gap: f64,
    pub horizon: f64,
    pub initial_profile: String,
    pub target_profile: String,
    pub switches: Vec<SwitchJson>,
}

pub fn bit_name(kind: BitKind) -> &'static str {
    match kind {
        BitKind::ProdForMoney => "prod_for_money",
        BitKind::OtherForMoney => "other_for_money",
        BitKind::ProdForOther => "prod_for_other",
    }
}

pub fn switch_json(e: &SwitchEvent) -> SwitchJson {
    SwitchJson {
        time: e.time,
        type_index: e.type_index + 1,
        bit: bit_name(e.bit),
        to: e.to as u8,
    }
}

pub fn nash_summary(result: &NashResult) -> NashSummaryJson {
    NashSummaryJson {
        converged: result.converged,
        iterations: result.iterations,
        final_gap: result.final_gap,
        horizon: result.trajectory.horizon(),
        initial_profile: profile_code(&result.strategy_path.initial),
        target_profile: profile_code(&result.target.profile),
        switches: result.strategy_path.switch_events().iter().map(switch_json).collect(),
    }
}

/// Writes `contents` into `dir/name`, creating the directory if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}
