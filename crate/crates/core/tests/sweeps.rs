use softmode_core::{
    classify, run_frequency_sweep, run_map, run_power_sweep, sql_bound, Axis, AxisVar, NoiseBreakdown, Preset,
    StabilityStatus, SweepResult, SweepSpec,
};

fn argmin_total(result: &SweepResult) -> (f64, NoiseBreakdown) {
    result
        .rows
        .iter()
        .filter_map(|r| r.outcome.breakdown().map(|b| (r.axis1, *b)))
        .min_by(|a, b| a.1.total.total_cmp(&b.1.total))
        .unwrap()
}

#[test]
fn fig2_curves_respond_at_the_soft_mode() {
    for spec in Preset::Fig2.curve_specs() {
        let r = run_frequency_sweep(&spec).unwrap();
        assert_eq!(r.rows.len(), 2000);
        let (w_min, _) = argmin_total(&r);
        let ss = softmode_core::solve_steady_state(&spec.base).unwrap();
        let soft = (spec.base.omega_m * ss.omega_m_eff).sqrt();
        assert!((w_min - soft).abs() < 1e-3 * spec.base.omega_m, "ratio {}", spec.base.gq_ratio());
        if spec.base.g_q == 0.0 {
            assert!((w_min - spec.base.omega_m).abs() < 1e-3 * spec.base.omega_m);
        }
    }
}

#[test]
fn fig3_noise_terms_versus_power() {
    let specs = Preset::Fig3.curve_specs();
    let conventional = run_power_sweep(&specs[0]).unwrap();
    let noise: Vec<_> = conventional.rows.iter().map(|r| (r.axis1, *r.outcome.breakdown().unwrap())).collect();
    for pair in noise.windows(2) {
        assert!(pair[1].1.backaction > pair[0].1.backaction);
        assert!(pair[1].1.shot < pair[0].1.shot);
    }
    // crossing at ζ = γ_m, about 100 µW
    let crossing = noise.iter().find(|(_, b)| b.backaction >= b.shot).unwrap().0;
    assert!((crossing - 104e-6).abs() / 104e-6 < 0.05, "crossing at {crossing}");
    let (p_conv, b_conv) = argmin_total(&conventional);
    assert!(b_conv.total >= 1.0);

    let soft = run_power_sweep(&specs[2]).unwrap();
    let (p_soft, b_soft) = argmin_total(&soft);
    assert!(b_soft.total < 1.0);
    assert!(p_soft < p_conv);
    // past the collapse power the rows carry a status instead of numbers
    assert!(soft.rows.iter().any(|r| r.outcome.status() == StabilityStatus::Unphysical));
    assert_eq!(soft.rows.len(), specs[2].axis1.n_points);
}

#[test]
fn sweeps_are_deterministic_and_refinement_consistent() {
    let spec = Preset::Fig3.sweep_spec();
    assert_eq!(run_power_sweep(&spec).unwrap(), run_power_sweep(&spec).unwrap());

    let coarse = SweepSpec { axis1: Axis { n_points: 51, ..spec.axis1 }, ..spec };
    let fine = SweepSpec { axis1: Axis { n_points: 101, ..spec.axis1 }, ..spec };
    let (c, f) = (run_power_sweep(&coarse).unwrap(), run_power_sweep(&fine).unwrap());
    for (i, row) in c.rows.iter().enumerate() {
        assert_eq!(*row, f.rows[2 * i]);
    }
}

fn small_map(n_power: usize, n_ratio: usize) -> SweepSpec {
    let spec = Preset::Fig4.sweep_spec();
    SweepSpec {
        axis1: Axis { n_points: n_power, ..spec.axis1 },
        axis2: Some(Axis { n_points: n_ratio, ..spec.axis2.unwrap() }),
        ..spec
    }
}

#[test]
fn map_points_are_coherent_and_above_the_envelope() {
    let spec = small_map(40, 41);
    let r = run_map(&spec).unwrap();
    assert_eq!(r.rows.len(), 40 * 41);
    let mut statuses = std::collections::HashSet::new();
    for row in &r.rows {
        statuses.insert(row.outcome.status());
        let params = spec.base.with_power(row.axis1).with_gq_ratio(row.axis2.unwrap());
        match row.outcome.breakdown() {
            Some(b) => {
                let report = classify(&params).unwrap();
                assert!(report.routh_hurwitz_stable && report.eigen_stable);
                let eff = row.omega_m_eff.unwrap();
                assert!(b.total >= sql_bound(&params, b.omega, eff) - 1e-9);
            }
            None => {
                // unphysical exactly where 2|g_q| I > ω_m
                let eff = row.omega_m_eff.unwrap();
                assert!(eff <= 0.0);
                assert_eq!(row.outcome.status(), StabilityStatus::Unphysical);
            }
        }
    }
    assert!(statuses.contains(&StabilityStatus::Stable));
    assert!(statuses.contains(&StabilityStatus::Unphysical));
}

#[test]
fn map_benchmark_point_and_conventional_column() {
    let spec = Preset::Fig4.sweep_spec();
    let spec = SweepSpec {
        axis1: Axis::log(AxisVar::Power, 12e-6, 120e-6, 2),
        axis2: Some(Axis::linear(AxisVar::GqOverGl, -0.45, 0.0, 2)),
        ..spec
    };
    let r = run_map(&spec).unwrap();
    let bench = r.rows.iter().find(|row| row.axis1 == 12e-6 && row.axis2 == Some(-0.45)).unwrap();
    let total = bench.outcome.breakdown().unwrap().total;
    assert!((total - 0.6).abs() <= 0.1, "total = {total}");

    let full = run_map(&Preset::Fig4.sweep_spec()).unwrap();
    assert_eq!(full.rows.len(), 200 * 200);
    let column: Vec<_> = full.rows.iter().filter(|row| row.axis2 == Some(0.0)).collect();
    assert_eq!(column.len(), 200);
    let best = column
        .iter()
        .min_by(|a, b| {
            let ta = a.outcome.breakdown().unwrap().total;
            let tb = b.outcome.breakdown().unwrap().total;
            ta.total_cmp(&tb)
        })
        .unwrap();
    for row in &column {
        assert!(row.outcome.breakdown().unwrap().total >= 1.0);
    }
    assert!((best.axis1 - 104e-6).abs() / 104e-6 < 0.05);
}
