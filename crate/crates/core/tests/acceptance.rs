//! End-to-end acceptance checks. Each test prints one [PASS]/[FAIL] line per
//! sub-check and asserts that all of them hold.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use money_search::bestresponse::PiecewiseStrategyPath;
use money_search::dynamics::{
    default_starts, find_fixed_points, integrate_forward, production_rate,
};
use money_search::nash::{certify, find_nash_path, probe_multiplicity, NashConfig, NashResult};
use money_search::steadystate::{
    analytic_m0_steady, classify_profiles, enumerate_steady_states, existence_conditions,
    record_for, CostOrder,
};
use money_search::strategy::BitKind;
use money_search::valuation::{
    generator, integrate_value_backward, steady_value, BackwardOpts, SigmaMode, ValueTable,
};
use money_search::{Inventory, ModelParams, StrategyProfile};

fn check(n: u32, ok: bool, msg: &str) -> bool {
    println!("[{}] criterion {n}: {msg}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn nearest_newton(profile: &StrategyProfile, params: &ModelParams, target: &Inventory) -> f64 {
    let report = find_fixed_points(profile, params, &default_starts(params)).unwrap();
    report
        .points
        .iter()
        .map(|p| p.distance(target))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn criterion_01_analytic_steady_states() {
    let third = 1.0 / 3.0;
    let s2 = 2.0f64.sqrt();
    // a small seignorage rate keeps the money block of the Jacobian
    // nonsingular at zero money stock without moving the barter point
    let a = ModelParams::model_a().with_money(0.0, 0.05).unwrap();
    let b = ModelParams::model_b().with_money(0.0, 0.05).unwrap();
    let cases = [
        (&a, [0u8, 1, 0], [third, third / 2.0, third]),
        (&a, [1, 1, 0], [third * s2 / 2.0, third * (s2 - 1.0), third]),
        (&b, [1, 0, 1], [third * (s2 - 1.0), third, third * s2 / 2.0]),
        (&b, [0, 1, 1], [third, third * s2 / 2.0, third * (s2 - 1.0)]),
    ];
    let start = Instant::now();
    let mut all = true;
    for (params, s3, expect) in cases {
        let target = Inventory::new([expect[0], expect[1], expect[2], 0.0, 0.0]);
        let profile = StrategyProfile::full_money(s3).unwrap();
        let gap = nearest_newton(&profile, params, &target);
        all &= check(
            1,
            gap <= 1e-10,
            &format!("commodity bits {s3:?}: Newton vs closed form gap {gap:.2e}"),
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    all &= check(1, elapsed < 1.0, &format!("runtime {elapsed:.3} s < 1 s"));
    assert!(all);
}

#[test]
fn criterion_02_existence_conditions() {
    let params = ModelParams::model_a();
    let checks = existence_conditions(CostOrder::Increasing, &params).unwrap();
    let fundamental = checks.iter().find(|c| c.name == "fundamental").unwrap();
    let speculative = checks.iter().find(|c| c.name == "speculative").unwrap();
    let mut all = check(
        2,
        !fundamental.passes && (fundamental.lhs - 0.1).abs() < 1e-15 && fundamental.rhs == 1.0 / 6.0,
        &format!(
            "fundamental inequality fails as printed ({:.4} < {:.4})",
            fundamental.lhs, fundamental.rhs
        ),
    );
    let cs_rhs = 2.0f64.sqrt() * (2.0f64.sqrt() - 1.0) / 3.0;
    all &= check(
        2,
        speculative.passes && (speculative.rhs - cs_rhs).abs() < 1e-15,
        &format!(
            "speculative inequality passes as printed ({:.4} < {:.4})",
            speculative.lhs, speculative.rhs
        ),
    );
    // the steady-state classifier must agree with the closed forms
    for (s3, expect_nash) in [([0u8, 1, 0], fundamental.passes), ([1, 1, 0], speculative.passes)] {
        let profile = StrategyProfile::full_money(s3).unwrap();
        let p = analytic_m0_steady(s3, params.theta).unwrap();
        let rec = record_for(&profile, &p, &params).unwrap();
        all &= check(
            2,
            rec.is_nash == expect_nash,
            &format!("classifier verdict for {s3:?} matches the inequality ({})", rec.is_nash),
        );
    }
    assert!(all);
}

#[test]
fn criterion_03_closed_forms_at_random_shares() {
    let mut rng = ChaCha8Rng::seed_from_u64(31_415);
    let base = ModelParams::model_a().with_money(0.0, 0.05).unwrap();
    let mut worst: f64 = 0.0;
    let mut draws = 0;
    while draws < 10 {
        let w: [f64; 3] = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        let tot: f64 = w.iter().sum();
        let theta = [w[0] / tot, w[1] / tot, w[2] / tot];
        if theta.iter().any(|&t| t < 0.05) {
            continue;
        }
        draws += 1;
        let params = base.with_theta(theta).unwrap();
        for s3 in [[0u8, 1, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]] {
            let target = analytic_m0_steady(s3, theta).unwrap();
            let profile = StrategyProfile::full_money(s3).unwrap();
            let gap = nearest_newton(&profile, &params, &target);
            worst = worst.max(gap);
        }
    }
    let ok = check(
        3,
        worst <= 1e-10,
        &format!("10 random population splits, 4 closed forms each: max gap {worst:.2e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_04_conservation() {
    let mut worst: f64 = 0.0;
    let params = ModelParams::model_a().with_money(0.3, 0.08).unwrap();
    let starts = [
        Inventory::new([params.theta[0], 0.0, 0.0, 0.0, 0.075]),
        Inventory::new([0.1, 0.1, 0.1, 0.1, 0.1]),
        Inventory::new([0.05, 0.2, 0.2, 0.15, 0.05]),
    ];
    let profiles = [
        StrategyProfile::full_money([1, 1, 0]).unwrap(),
        StrategyProfile::from_display_matrix([[1, 1, 1], [1, 0, 1], [0, 1, 0]]).unwrap(),
    ];
    for s in &profiles {
        let path = PiecewiseStrategyPath::constant(*s);
        for p0 in starts {
            let traj = integrate_forward(p0, &path, 100.0, 0.01, &params).unwrap();
            for st in &traj.states {
                let g = st.expand(&params).unwrap();
                for i in 0..3 {
                    let row: f64 = g.g[i].iter().sum();
                    worst = worst.max((row - params.theta[i]).abs());
                }
                let money: f64 = (0..3).map(|i| g.g[i][3]).sum();
                worst = worst.max((money - params.money_stock).abs());
            }
        }
    }
    let ok = check(
        4,
        worst <= 1e-8,
        &format!("T = 100, dt = 0.01: max drift of type sums and money {worst:.2e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_05_generator_and_contraction() {
    // generator rows on 10^4 random inputs
    let mut rng = ChaCha8Rng::seed_from_u64(161_803);
    let base = ModelParams::model_a();
    let all_profiles = StrategyProfile::all();
    let mut worst_row: f64 = 0.0;
    for _ in 0..10_000 {
        let mut g = [[0.0; 4]; 3];
        for i in 0..3 {
            let w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let tot: f64 = w.iter().sum();
            let holds = [(i + 1) % 3, (i + 2) % 3, 3];
            for (slot, &obj) in holds.iter().enumerate() {
                g[i][obj] = base.theta[i] * w[slot] / tot;
            }
        }
        let m: f64 = (0..3).map(|i| g[i][3]).sum();
        let params = base.with_money(m, rng.gen::<f64>() * 0.15).unwrap();
        let p = Inventory::new([g[0][1], g[1][2], g[2][0], g[0][3], g[1][3]]);
        let s = all_profiles[rng.gen_range(0..all_profiles.len())];
        let own = all_profiles[rng.gen_range(0..all_profiles.len())];
        let grid = p.expand(&params).unwrap();
        for i in 0..3 {
            let a = generator(i, &grid, &own.0[i], &s, &params);
            for row in a {
                worst_row = worst_row.max(row.iter().sum::<f64>().abs());
            }
        }
    }
    let mut all = check(
        5,
        worst_row <= 1e-14,
        &format!("generator row sums on 10^4 random inputs: max {worst_row:.2e}"),
    );

    // backward integration contracts boundary perturbations at rate rho
    let params = ModelParams::model_a().with_money(0.3, 0.07).unwrap();
    let s = StrategyProfile::full_money([1, 1, 0]).unwrap();
    let path = PiecewiseStrategyPath::constant(s);
    let p0 = Inventory::new([params.theta[0], 0.0, 0.0, 0.0, 0.075]);
    let traj = integrate_forward(p0, &path, 30.0, 0.01, &params).unwrap();
    let horizon = traj.horizon();
    let mut worst_excess: f64 = f64::NEG_INFINITY;
    for _ in 0..100 {
        let mut w1 = ValueTable::zero();
        let mut w2 = ValueTable::zero();
        for i in 0..3 {
            for j in 0..3 {
                w1.v[i][j] = rng.gen::<f64>() * 20.0 - 10.0;
                w2.v[i][j] = rng.gen::<f64>() * 20.0 - 10.0;
            }
        }
        let d0 = w1.max_abs_diff(&w2);
        let run = |w: ValueTable| {
            integrate_value_backward(&traj, &path, w, &params, SigmaMode::Forced, &BackwardOpts::default())
                .unwrap()
        };
        let a = run(w1);
        let b = run(w2);
        for (k, t) in a.times.iter().enumerate() {
            let gap = a.tables[k].max_abs_diff(&b.tables[k]);
            let bound = (-params.rho * (horizon - t)).exp() * d0;
            worst_excess = worst_excess.max(gap / bound - 1.0);
        }
    }
    all &= check(
        5,
        worst_excess <= 1e-9,
        &format!("contraction bound on 100 boundary pairs: worst relative excess {worst_excess:.2e}"),
    );
    assert!(all);
}

struct Emergence {
    result: NashResult,
    /// Effective money-acceptance time per bit: 0 when the equilibrium path
    /// starts with the bit on, else the 0 -> 1 switching time.
    prod_money_t1: f64,
    other_money_t2: f64,
    switch_to_one: Vec<(usize, BitKind, f64)>,
}

fn solve_emergence(seignorage: f64) -> Emergence {
    let money = 0.3;
    let params = ModelParams::model_a().with_money(money, seignorage).unwrap();
    let profile = StrategyProfile::full_money([1, 1, 0]).unwrap();
    let fps = find_fixed_points(&profile, &params, &default_starts(&params)).unwrap();
    let target = record_for(&profile, &fps.points[0], &params).unwrap();
    assert!(target.is_nash);
    let p0 = Inventory::new([params.theta[0], 0.0, 0.0, 0.0, money / 4.0]);
    let cfg = NashConfig::default();
    let result = find_nash_path(p0, &target, None, &cfg, &params).unwrap();
    assert!(certify(&result, cfg.tol, &params).unwrap());

    let initial = result.strategy_path.initial;
    let switch_to_one: Vec<(usize, BitKind, f64)> = result
        .strategy_path
        .switch_events()
        .into_iter()
        .filter(|e| e.to)
        .map(|e| (e.type_index, e.bit, e.time))
        .collect();
    let effective = |i: usize, bit: BitKind| {
        if initial.0[i].bit(bit) {
            0.0
        } else {
            switch_to_one
                .iter()
                .find(|(ti, b, _)| *ti == i && *b == bit)
                .map(|(_, _, t)| *t)
                .unwrap_or(f64::INFINITY)
        }
    };
    Emergence {
        prod_money_t1: effective(0, BitKind::ProdForMoney),
        other_money_t2: effective(1, BitKind::OtherForMoney),
        switch_to_one,
        result,
    }
}

#[test]
fn criterion_06_money_emergence_dynamics() {
    let start = Instant::now();
    let hi = solve_emergence(0.07);
    let lo = solve_emergence(0.06);
    let mut all = true;
    for (label, e) in [("0.07", &hi), ("0.06", &lo)] {
        all &= check(
            6,
            e.result.converged
                && e.result.iterations <= 50
                && e.result.target.profile == StrategyProfile::full_money([1, 1, 0]).unwrap(),
            &format!(
                "delta_m = {label}: converged to the full-monetary (1,1,0) state in {} iterations",
                e.result.iterations
            ),
        );
        for (i, bit, t) in &e.switch_to_one {
            println!(
                "       delta_m = {label}: type {} {:?} turns on at t = {t:.3}",
                i + 1,
                bit
            );
        }
    }
    let has = |e: &Emergence, i: usize, bit: BitKind| {
        e.switch_to_one.iter().any(|(ti, b, t)| *ti == i && *b == bit && *t > 0.0)
    };
    all &= check(
        6,
        has(&hi, 0, BitKind::ProdForMoney),
        "delta_m = 0.07: mid-transition 0 -> 1 switch of type 1 prod-for-money",
    );
    all &= check(
        6,
        has(&hi, 1, BitKind::OtherForMoney),
        "delta_m = 0.07: mid-transition 0 -> 1 switch of type 2 other-for-money",
    );
    all &= check(
        6,
        has(&hi, 0, BitKind::ProdForOther),
        "delta_m = 0.07: mid-transition 0 -> 1 switch of type 1 prod-for-other",
    );
    all &= check(
        6,
        lo.prod_money_t1 < hi.prod_money_t1,
        &format!(
            "type 1 accepts money strictly earlier at 0.06 ({} vs {})",
            lo.prod_money_t1, hi.prod_money_t1
        ),
    );
    all &= check(
        6,
        lo.other_money_t2 < hi.other_money_t2,
        &format!(
            "type 2 accepts money strictly earlier at 0.06 ({} vs {})",
            lo.other_money_t2, hi.other_money_t2
        ),
    );
    let elapsed = start.elapsed().as_secs_f64();
    all &= check(6, elapsed < 60.0, &format!("runtime {elapsed:.1} s < 60 s"));
    assert!(all);
}

#[test]
fn criterion_07_monetary_reform() {
    let money = 0.3;
    let pre_params = ModelParams::model_a().with_money(money, 0.1).unwrap();
    let pre_profile =
        StrategyProfile::from_display_matrix([[1, 1, 1], [1, 0, 1], [0, 1, 0]]).unwrap();
    let fps = find_fixed_points(&pre_profile, &pre_params, &default_starts(&pre_params)).unwrap();
    let pre = record_for(&pre_profile, &fps.points[0], &pre_params).unwrap();
    let mut all = check(
        7,
        pre.is_nash && pre.profile.third_row() == [0, 1, 0] && !pre.profile.0[1].other_for_money,
        "pre-reform state at delta_m = 0.1 is Nash with third row (0,1,0) and type 2 refusing money",
    );

    let post_params = pre_params.with_money(money, 0.02).unwrap();
    let post_profile = StrategyProfile::full_money([1, 1, 0]).unwrap();
    let fps = find_fixed_points(&post_profile, &post_params, &default_starts(&post_params)).unwrap();
    let target = record_for(&post_profile, &fps.points[0], &post_params).unwrap();
    let cfg = NashConfig::default();
    let result = find_nash_path(pre.p_star, &target, None, &cfg, &post_params).unwrap();
    all &= check(
        7,
        certify(&result, cfg.tol, &post_params).unwrap(),
        "post-reform equilibrium path is certified",
    );
    let post = result.strategy_path.tail_profile();
    all &= check(
        7,
        post.third_row() == [1, 1, 0] && post.0[1].other_for_money,
        "profile moves to third row (1,1,0) with type 2 accepting money",
    );

    let pre_production = production_rate(&pre.p_star, &pre_profile, &pre_params);
    let mut peak = f64::NEG_INFINITY;
    let mut final_rate = 0.0;
    for (k, t) in result.trajectory.times.iter().enumerate() {
        let rate = production_rate(
            &result.trajectory.states[k],
            &result.strategy_path.profile_at(*t),
            &post_params,
        );
        peak = peak.max(rate);
        final_rate = rate;
    }
    all &= check(
        7,
        peak > final_rate && final_rate > pre_production,
        &format!(
            "production overshoots then settles above pre-reform: pre {pre_production:.5}, peak {peak:.5}, final {final_rate:.5}"
        ),
    );
    assert!(all);
}

#[test]
fn criterion_08_coexistence_region() {
    let full = StrategyProfile::full_money([1, 1, 0]).unwrap();
    let partial =
        StrategyProfile::from_display_matrix([[1, 1, 1], [1, 0, 1], [0, 1, 0]]).unwrap();
    // the pair differs in type 2's other-good-for-money bit
    assert!(full.0[1].other_for_money && !partial.0[1].other_for_money);
    let pair = [full, partial];
    let count = |dm: f64| {
        let params = ModelParams::model_a().with_money(0.3, dm).unwrap();
        let e = classify_profiles(&params, &pair);
        let has_full = e.nash_records().any(|r| r.profile == full);
        let has_partial = e.nash_records().any(|r| r.profile == partial);
        (has_full, has_partial)
    };
    let mut all = true;
    for dm in [0.06, 0.08] {
        let (f, p) = count(dm);
        all &= check(
            8,
            f && p,
            &format!("delta_m = {dm}: both monetary Nash states present (full {f}, partial {p})"),
        );
    }
    for dm in [0.02, 0.12] {
        let (f, p) = count(dm);
        all &= check(
            8,
            f != p,
            &format!("delta_m = {dm}: exactly one of the pair present (full {f}, partial {p})"),
        );
    }
    // boundaries of the coexistence band on the 0.01 grid
    let mut band = (f64::MAX, f64::MIN);
    for k in 0..=14 {
        let dm = k as f64 * 0.01;
        let (f, p) = count(dm);
        if f && p {
            band.0 = band.0.min(dm);
            band.1 = band.1.max(dm);
        }
    }
    all &= check(
        8,
        (band.0 - 0.05).abs() <= 0.0101 && (band.1 - 0.09).abs() <= 0.0101,
        &format!(
            "coexistence band [{:.2}, {:.2}] within one grid step of [0.05, 0.09]",
            band.0, band.1
        ),
    );
    assert!(all);
}

#[test]
fn criterion_09_welfare_maxima() {
    let profile = StrategyProfile::full_money([1, 1, 0]).unwrap();
    let welfare = |params: &ModelParams| {
        let fps = find_fixed_points(&profile, params, &default_starts(params)).ok()?;
        let p_star = *fps.points.first()?;
        let v = steady_value(&p_star, &profile, params).ok()?;
        Some(money_search::welfare::group_welfare(&p_star, &v, params))
    };

    let mut best = (f64::NAN, f64::MIN);
    println!("       welfare over the money stock (delta_m = 0):");
    for k in 1..=40 {
        let m = k as f64 * 0.01;
        let params = ModelParams::model_a().with_money(m, 0.0).unwrap();
        if let Some(rep) = welfare(&params) {
            if rep.w > best.1 {
                best = (m, rep.w);
            }
            if k % 4 == 0 || k == 1 {
                println!("         M = {m:.2}  W = {:+.5}", rep.w);
            }
        }
    }
    let mut all = check(
        9,
        (best.0 - 0.14).abs() <= 0.02 + 1e-12,
        &format!("argmax over M is {:.2} (required 0.14 +/- 0.02)", best.0),
    );

    let mut best = (f64::NAN, f64::MIN);
    let mut curves: Vec<(f64, [f64; 3])> = Vec::new();
    println!("       welfare over the seignorage rate (M = 0.3):");
    for k in 0..=12 {
        let dm = k as f64 * 0.01;
        let params = ModelParams::model_a().with_money(0.3, dm).unwrap();
        if let Some(rep) = welfare(&params) {
            if rep.w > best.1 {
                best = (dm, rep.w);
            }
            curves.push((dm, rep.w_i));
            println!(
                "         dm = {dm:.2}  W = {:+.5}  W_i = {:+.4} {:+.4} {:+.4}",
                rep.w, rep.w_i[0], rep.w_i[1], rep.w_i[2]
            );
        }
    }
    all &= check(
        9,
        (best.0 - 0.04).abs() <= 0.02 + 1e-12,
        &format!("argmax over delta_m is {:.2} (required 0.04 +/- 0.02)", best.0),
    );

    // some low-seignorage step must raise every type's welfare
    let low_step_up = curves.windows(2).any(|w| {
        w[0].0 <= 0.03 && (0..3).all(|i| w[1].1[i] > w[0].1[i])
    });
    all &= check(
        9,
        low_step_up,
        "all three W_i increase over some low-delta_m grid step",
    );
    assert!(all);
}

#[test]
fn criterion_10_no_deviation_certificates() {
    let mut results: Vec<(String, NashResult, ModelParams, f64)> = Vec::new();

    // money emergence at two seignorage rates
    for dm in [0.06, 0.07] {
        let params = ModelParams::model_a().with_money(0.3, dm).unwrap();
        let profile = StrategyProfile::full_money([1, 1, 0]).unwrap();
        let fps = find_fixed_points(&profile, &params, &default_starts(&params)).unwrap();
        let target = record_for(&profile, &fps.points[0], &params).unwrap();
        let p0 = Inventory::new([params.theta[0], 0.0, 0.0, 0.0, 0.075]);
        let cfg = NashConfig::default();
        let r = find_nash_path(p0, &target, None, &cfg, &params).unwrap();
        results.push((format!("emergence delta_m = {dm}"), r, params, cfg.tol));
    }

    // monetary reform
    {
        let pre_params = ModelParams::model_a().with_money(0.3, 0.1).unwrap();
        let pre_profile =
            StrategyProfile::from_display_matrix([[1, 1, 1], [1, 0, 1], [0, 1, 0]]).unwrap();
        let fps = find_fixed_points(&pre_profile, &pre_params, &default_starts(&pre_params)).unwrap();
        let pre = record_for(&pre_profile, &fps.points[0], &pre_params).unwrap();
        let params = pre_params.with_money(0.3, 0.02).unwrap();
        let profile = StrategyProfile::full_money([1, 1, 0]).unwrap();
        let fps = find_fixed_points(&profile, &params, &default_starts(&params)).unwrap();
        let target = record_for(&profile, &fps.points[0], &params).unwrap();
        let cfg = NashConfig::default();
        let r = find_nash_path(pre.p_star, &target, None, &cfg, &params).unwrap();
        results.push(("monetary reform".into(), r, params, cfg.tol));
    }

    // belief-driven multiplicity with uneven population shares
    {
        let params = ModelParams::model_a()
            .with_theta([0.24, 0.16, 0.60])
            .unwrap()
            .with_money(0.2, 0.05)
            .unwrap();
        let p0 = Inventory::new([0.11, 0.06, 0.38, 0.02, 0.06]);
        let seeds: Vec<_> = enumerate_steady_states(&params).nash_records().cloned().collect();
        let cfg = NashConfig {
            max_iter: 200,
            ..NashConfig::default()
        };
        let paths = probe_multiplicity(p0, &params, &seeds, &cfg);
        assert!(paths.len() > 1, "expected multiple equilibrium paths");
        for r in paths {
            results.push((format!("multiplicity -> {}", r.target.profile), r, params, cfg.tol));
        }
    }

    let mut all = true;
    for (label, r, params, tol) in &results {
        let ok = certify(r, *tol, params).unwrap();
        all &= check(
            10,
            r.converged && ok,
            &format!("{label}: converged in {} iterations, certificate holds", r.iterations),
        );
    }
    assert!(all);
}
