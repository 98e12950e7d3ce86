use zenolab::experiment::{run_experiment, BathState, ExperimentSpec};
use zenolab::hilbert::LogicalState;
use zenolab::measurement::Strength;
use zenolab::protocol::Variant;

fn deviations(report: &zenolab::experiment::ExperimentReport, variant: Variant, eps: Strength) -> Vec<f64> {
    report
        .rows
        .iter()
        .filter(|r| r.variant == variant && r.epsilon == eps)
        .map(|r| r.deviation)
        .collect()
}

#[test]
fn zeno_convergence_for_strong_enough_group_measurement() {
    let spec = ExperimentSpec {
        m_list: vec![1, 8, 64],
        epsilon_list: vec![Strength::Weak(3.0), Strength::Weak(5.0)],
        variant_list: vec![Variant::Group],
        ..ExperimentSpec::default()
    };
    let report = run_experiment(&spec).unwrap();
    for eps in [Strength::Weak(3.0), Strength::Weak(5.0)] {
        let d = deviations(&report, Variant::Group, eps);
        assert!(d[2] < d[1] && d[1] < d[0], "eps={eps}: {d:?}");
    }
    assert_eq!(report.violations().count(), 0);
}

#[test]
fn bounds_hold_for_other_states_and_seeds() {
    for (seed, state, bath) in [
        (11, LogicalState::Logical("11".into()), BathState::Basis(1)),
        (12, LogicalState::Logical("01".into()), BathState::MaximallyMixed),
    ] {
        let spec = ExperimentSpec {
            seed,
            logical_state: state,
            bath_state: bath,
            m_list: vec![1, 3, 10],
            epsilon_list: vec![Strength::Weak(0.5), Strength::Weak(2.0), Strength::Strong],
            variant_list: vec![Variant::Group, Variant::Generators, Variant::Strong],
            ..ExperimentSpec::default()
        };
        let report = run_experiment(&spec).unwrap();
        let bad: Vec<_> = report.violations().collect();
        assert!(bad.is_empty(), "seed {seed}: {bad:?}");
    }
}

#[test]
fn six_qubit_code_and_qutrit_bath() {
    let spec = ExperimentSpec {
        n: 6,
        bath_dim: 3,
        logical_state: LogicalState::Logical("1010".into()),
        m_list: vec![1, 5],
        epsilon_list: vec![Strength::Weak(1.0)],
        variant_list: vec![Variant::Group, Variant::Generators],
        ..ExperimentSpec::default()
    };
    let report = run_experiment(&spec).unwrap();
    assert_eq!(report.rows.len(), 4);
    assert_eq!(report.violations().count(), 0);
}

#[test]
fn unordered_scales_are_flagged() {
    let spec = ExperimentSpec {
        j0: 0.2,
        j1: 0.5,
        m_list: vec![2],
        epsilon_list: vec![Strength::Strong],
        variant_list: vec![Variant::Strong],
        ..ExperimentSpec::default()
    };
    let report = run_experiment(&spec).unwrap();
    assert!(!report.scales_ordered);
    assert_eq!(report.rows.len(), 1);
}
