use std::f64::consts::FRAC_1_SQRT_2;

use hqw::graphs::{pst_tree, LabeledGraph};
use hqw::linalg::{StateVector, C64};
use hqw::pst::{random_instance, run_pst, segment_line_transfer, verify_pst, PstError, PstPlan};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn path_graph(colors: &[&str]) -> LabeledGraph {
    let mut labels: Vec<&str> = colors.to_vec();
    labels.sort();
    labels.dedup();
    let mut g = LabeledGraph::new(colors.len() + 1, labels).unwrap();
    for (k, col) in colors.iter().enumerate() {
        g.add_edge(k, k + 1, col, 1.0).unwrap();
    }
    g
}

#[test]
fn tree_uniform_superposition() {
    let plan = PstPlan::new(pst_tree(), 0, 14, None).unwrap();
    let s = 1.0 / 3f64.sqrt();
    let alpha = [c(s, 0.0); 3];
    let (fin, tr) = run_pst(&plan, &alpha).unwrap();
    assert!((tr.fidelity - 1.0).abs() < 1e-12);
    let target = plan.embed(&alpha, 14, false);
    assert!((target.inner(&fin).unwrap().norm() - 1.0).abs() < 1e-12);
}

#[test]
fn tree_two_label_coin() {
    let plan = PstPlan::new(pst_tree(), 0, 14, None).unwrap();
    assert_eq!(plan.path(), [0, 2, 6, 14]);
    let alpha = [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0)];
    let (_, tr) = run_pst(&plan, &alpha).unwrap();
    assert!((tr.fidelity - 1.0).abs() < 1e-12);
    // Three hops: each transferred component picks up i^3 = -i.
    assert!((tr.expected_phase - c(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn first_iteration_moves_only_first_component() {
    let plan = PstPlan::new(path_graph(&["a", "b", "c", "a"]), 0, 4, None).unwrap();
    let alpha = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
    let (_, tr) = run_pst(&plan, &alpha).unwrap();
    for it in &tr.iterations {
        assert!((it.fidelity - 1.0).abs() < 1e-12);
        assert!(it.phase_error < 1e-12);
        assert!(it.max_active_sectors <= 1);
    }
    let after_first = tr.stages.iter().find(|s| s.name == "iteration 1: E").unwrap();
    let n = plan.graph().n();
    let a = after_first.state.amplitudes();
    // Primed labels follow the colors: index 3 + i is c_i'.
    assert!((a[3 * n + 4] - c(0.6, 0.0)).norm() < 1e-12);
    assert!((a[4 * n] - c(0.0, 0.8)).norm() < 1e-12);
}

#[test]
fn explicit_longer_path_is_accepted() {
    let mut g = LabeledGraph::new(4, ["x", "y", "z"]).unwrap();
    g.add_edge(0, 1, "x", 1.0).unwrap();
    g.add_edge(1, 2, "y", 1.0).unwrap();
    g.add_edge(2, 3, "x", 1.0).unwrap();
    g.add_edge(0, 3, "z", 1.0).unwrap();
    let plan = PstPlan::new(g, 0, 3, Some(vec![0, 1, 2, 3])).unwrap();
    assert_eq!(plan.path_len(), 3);
    let alpha = [c(0.0, 0.6), c(0.8, 0.0), c(0.0, 0.0)];
    let (_, tr) = run_pst(&plan, &alpha).unwrap();
    assert!((tr.fidelity - 1.0).abs() < 1e-12);
}

#[test]
fn transcript_json_shape() {
    let plan = PstPlan::new(path_graph(&["x", "y"]), 0, 2, None).unwrap();
    let (_, tr) = run_pst(&plan, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let v = tr.to_json();
    assert_eq!(v["stages"][0]["name"], "initial");
    assert_eq!(v["stages"][0]["amplitudes"][0][0], "x");
    assert_eq!(v["iterations"].as_array().unwrap().len(), 2);
    assert!((v["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn errors() {
    let mut g = LabeledGraph::new(4, ["x", "y"]).unwrap();
    g.add_edge(0, 1, "x", 1.0).unwrap();
    g.add_edge(2, 3, "y", 1.0).unwrap();
    assert!(matches!(PstPlan::new(g, 0, 3, None), Err(PstError::InvalidPlan(_))));
    let plan = PstPlan::new(path_graph(&["x", "y"]), 0, 2, None).unwrap();
    assert!(run_pst(&plan, &[c(1.0, 0.0)]).is_err());
    assert!(verify_pst(&StateVector::basis(5, 0), &[c(1.0, 0.0)], 0).is_err());
}

#[test]
fn segment_demo() {
    for m in 2..=8 {
        let t = segment_line_transfer(m).unwrap();
        assert!((t.arrival_probability - 1.0).abs() < 1e-9);
        assert_eq!(t.active_labels.len(), m - 1);
        for w in t.active_labels.windows(2) {
            assert_ne!(w[0], w[1]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_transfers_are_perfect(seed in any::<u64>()) {
        let inst = random_instance(seed, 12, 6);
        let plan = PstPlan::new(inst.graph, inst.source, inst.target, Some(inst.path)).unwrap();
        let (fin, tr) = run_pst(&plan, &inst.alpha).unwrap();
        prop_assert!(tr.fidelity >= 1.0 - 1e-9);
        let n = plan.graph().n();
        for (i, a) in inst.alpha.iter().enumerate() {
            prop_assert!((fin.amplitudes()[i * n + plan.target()].norm() - a.norm()).abs() < 1e-9);
        }
        for p in tr.component_phases.iter().flatten() {
            prop_assert!((p - tr.expected_phase).norm() < 1e-9);
        }
        for s in &tr.stages {
            prop_assert!((s.state.norm_sqr() - 1.0).abs() < 1e-10);
        }
        for it in &tr.iterations {
            prop_assert!(it.max_active_sectors <= 1);
        }
    }
}
