use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use hqw::graphs::{build, GraphFamily, LabeledGraph};
use hqw::linalg::{
    kron, partial_trace_coin, phase_aligned_distance, von_neumann_entropy, ComplexMatrix, DensityOperator, StateVector,
    C64,
};
use hqw::walk::{
    continuous_walk, discrete_coined_walk, entanglement_entropy, oracle_continuous_two_cycle, oracle_p1_two_cycle,
    position_distribution, std_dev, CoinSpec, HybridWalk, InitialState,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
}

#[test]
fn circle_one_step_closed_form() {
    let walk = HybridWalk::new(build(&GraphFamily::Circle2 { a: 1.0, b: 2.0 }).unwrap(), CoinSpec::Hadamard).unwrap();
    for &t in &[0.0, 0.3, 1.0, 2.7] {
        let out = walk.step(t, &StateVector::basis(4, 0)).unwrap();
        let h = FRAC_1_SQRT_2;
        let want =
            [c(h * t.cos(), 0.0), c(0.0, -h * t.sin()), c(h * (2.0 * t).cos(), 0.0), c(0.0, -h * (2.0 * t).sin())];
        assert!(close(out.amplitudes(), &want, 1e-14), "t = {t}");
    }
}

#[test]
fn identity_coin_at_zero_time_is_identity() {
    let g = build(&GraphFamily::Star { n: 4 }).unwrap();
    let walk = HybridWalk::new(g, CoinSpec::Identity).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let psi = StateVector::new((0..16).map(|_| c(rng.gen(), rng.gen())).collect()).normalized();
    assert!(close(walk.step(0.0, &psi).unwrap().amplitudes(), psi.amplitudes(), 1e-14));
}

#[test]
fn star_one_step_closed_form() {
    let n = 10;
    let walk = HybridWalk::new(build(&GraphFamily::Star { n }).unwrap(), CoinSpec::Fourier).unwrap();
    for &t in &[0.2, FRAC_PI_2, 2.0] {
        let out = walk.step(t, &StateVector::basis(n * n, 0)).unwrap();
        let s = 1.0 / (n as f64).sqrt();
        let mut want = vec![c(0.0, 0.0); n * n];
        want[0] = c(s, 0.0);
        for j in 1..n {
            want[j * n] += c(s * t.cos(), 0.0);
            want[j * n + j] += c(0.0, -s * t.sin());
        }
        assert!(close(out.amplitudes(), &want, 1e-12));
    }
}

#[test]
fn star_observables_at_quarter_period() {
    let n = 10;
    let walk = HybridWalk::new(build(&GraphFamily::Star { n }).unwrap(), CoinSpec::Fourier).unwrap();
    let out = walk.step(FRAC_PI_2, &StateVector::basis(n * n, 0)).unwrap();
    let p = position_distribution(&out, n, n).unwrap();
    assert!(p.iter().all(|x| (x - 0.1).abs() < 1e-12));
    let coords: Vec<f64> = (0..n).map(|v| v as f64).collect();
    assert!((std_dev(&p, &coords).unwrap() - 8.25f64.sqrt()).abs() < 1e-12);
    let rho = partial_trace_coin(&DensityOperator::from_pure(&out), n, n).unwrap();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { 0.1 } else { 0.0 };
            assert!((rho.matrix()[(i, j)] - c(want, 0.0)).norm() < 1e-12);
        }
    }
    assert!((entanglement_entropy(&out, n, n).unwrap() - 10f64.log2()).abs() < 1e-12);
}

#[test]
fn star_hamiltonian_blocks() {
    let walk = HybridWalk::new(build(&GraphFamily::Star { n: 4 }).unwrap(), CoinSpec::Fourier).unwrap();
    assert!(walk.block(0).is_zero());
    for j in 1..4 {
        let mut s = ComplexMatrix::zeros(4, 4);
        s[(0, j)] = c(1.0, 0.0);
        s[(j, 0)] = c(1.0, 0.0);
        assert_eq!(walk.block(j), &s);
    }
    assert!(walk.hamiltonian().is_hermitian(1e-15));
}

#[test]
fn circle_stable_band_example() {
    let walk = HybridWalk::new(build(&GraphFamily::Circle2 { a: 2.0, b: 3.0 }).unwrap(), CoinSpec::Hadamard).unwrap();
    let out = walk.step(FRAC_PI_2, &StateVector::basis(4, 0)).unwrap();
    assert!((position_distribution(&out, 2, 2).unwrap()[1] - 0.5).abs() < 1e-12);
    assert!((oracle_p1_two_cycle(2.0, 2.0, 0.4) - 0.5 * (1.0 - (1.6f64).cos())).abs() < 1e-15);
}

#[test]
fn continuous_examples() {
    let mut g = LabeledGraph::new(2, ["0"]).unwrap();
    g.add_edge(0, 1, "0", 0.7).unwrap();
    for &t in &[0.0, 0.5, 3.0] {
        let out = continuous_walk(&g.adjacency(), t, &StateVector::basis(2, 0)).unwrap();
        assert!((out.amplitudes()[1].norm_sqr() - oracle_continuous_two_cycle(0.7, t)).abs() < 1e-12);
    }
    let a = build(&GraphFamily::Star { n: 10 }).unwrap().adjacency();
    let out = continuous_walk(&a, PI / 6.0, &StateVector::basis(10, 0)).unwrap();
    assert!(out.amplitudes()[0].norm_sqr() < 1e-12);
}

#[test]
fn single_label_reduces_to_continuous_walk() {
    let g = build(&GraphFamily::Cycle { n: 7 }).unwrap();
    let walk = HybridWalk::new(g.clone(), CoinSpec::Identity).unwrap();
    let psi = StateVector::basis(7, 2);
    for &t in &[0.4, 1.3, 5.0] {
        let hybrid = walk.step(t, &psi).unwrap();
        let cont = continuous_walk(&g.adjacency(), t, &psi).unwrap();
        let p = position_distribution(&hybrid, 1, 7).unwrap();
        for (x, a) in p.iter().zip(cont.amplitudes()) {
            assert!((x - a.norm_sqr()).abs() < 1e-12);
        }
    }
}

/// Line with shift-then-Hadamard structure in the local coin frame
/// `V = sum_x |x><x| (x) (X if x even, Z if x odd)`.
#[test]
fn line2_step_matches_discrete_walk_in_local_frame() {
    let half = 6;
    let g = build(&GraphFamily::Line2 { half_len: half }).unwrap();
    let n = g.n();
    let walk = HybridWalk::new(g, CoinSpec::Hadamard).unwrap();
    let w = walk.operator_matrix(FRAC_PI_2);

    let h = CoinSpec::Hadamard.realize(2).unwrap();
    let mut shift = ComplexMatrix::zeros(2 * n, 2 * n);
    for x in 0..n - 1 {
        shift[(x + 1, x)] = c(1.0, 0.0);
        shift[(n + x, n + x + 1)] = c(1.0, 0.0);
    }
    let d = &shift * &kron(&h, &ComplexMatrix::identity(n));

    let z = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    let xm = ComplexMatrix::pauli_x();
    let mut v = ComplexMatrix::zeros(2 * n, 2 * n);
    for x in 0..n {
        let local = if x % 2 == 0 { &xm } else { &z };
        for a in 0..2 {
            for b in 0..2 {
                v[(a * n + x, b * n + x)] = local[(a, b)];
            }
        }
    }
    let framed = &(&v * &w) * &v.adjoint();

    // Compare on the interior, away from a 2-site band at each end.
    let keep: Vec<usize> = (0..2 * n).filter(|&i| (2..n - 2).contains(&(i % n))).collect();
    let restrict = |m: &ComplexMatrix| ComplexMatrix::from_fn(keep.len(), keep.len(), |i, j| m[(keep[i], keep[j])]);
    let target = restrict(&d).scale(c(0.0, -1.0));
    let dist = phase_aligned_distance(&restrict(&framed), &target).unwrap();
    assert!(dist < 1e-9, "distance {dist:e}");

    // The raw basis does not satisfy the identity.
    let raw = phase_aligned_distance(&restrict(&w), &target).unwrap();
    assert!(raw > 0.1);
}

#[test]
fn line3_grover_distribution_is_symmetric() {
    let half = 38;
    let g = build(&GraphFamily::Line3 { half_len: half }).unwrap();
    let psi: StateVector = "uniform@pos:0".parse::<InitialState>().unwrap().build(&g).unwrap();
    let traj = HybridWalk::new(g, CoinSpec::Grover).unwrap().run(FRAC_PI_2, 30, &psi).unwrap();
    let p = traj.last_distribution().unwrap();
    for k in 0..p.len() {
        assert!((p[k] - p[p.len() - 1 - k]).abs() < 1e-9);
    }
}

#[test]
fn entropy_matches_partial_trace_route_along_trajectory() {
    let g = build(&GraphFamily::Line3 { half_len: 12 }).unwrap();
    let psi = "basis:1@pos:0".parse::<InitialState>().unwrap().build(&g).unwrap();
    let n = g.n();
    let traj = HybridWalk::new(g, CoinSpec::Fourier).unwrap().run(FRAC_PI_2, 10, &psi).unwrap();
    for (state, s) in traj.states.iter().zip(&traj.entropies) {
        let rho = partial_trace_coin(&DensityOperator::from_pure(state), 3, n).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - s).abs() < 1e-9);
    }
}

#[test]
fn discrete_walk_zero_steps() {
    let h = CoinSpec::Hadamard.realize(2).unwrap();
    let psi = StateVector::coin_at(&[c(1.0, 0.0), c(0.0, 0.0)], 5, 2);
    let traj = discrete_coined_walk(0, &h, &psi, 2).unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj.states[0].amplitudes(), psi.amplitudes());
}

fn random_coin_state(coin: usize, pos: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StateVector::new((0..coin * pos).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .normalized()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identity_coin_preserves_sectors(seed in any::<u64>(), t in -4.0f64..4.0, sector in 0usize..3) {
        let g = build(&GraphFamily::Line3 { half_len: 4 }).unwrap();
        let n = g.n();
        let walk = HybridWalk::new(g, CoinSpec::Identity).unwrap();
        let mut psi = random_coin_state(3, n, seed);
        for (i, a) in psi.amplitudes_mut().iter_mut().enumerate() {
            if i / n != sector {
                *a = c(0.0, 0.0);
            }
        }
        let psi = psi.normalized();
        let out = walk.step(t, &psi).unwrap();
        for (i, a) in out.amplitudes().iter().enumerate() {
            if i / n != sector {
                prop_assert!(a.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn circle_matches_closed_form(a in 0.0f64..4.0, b in 0.0f64..4.0, t in 0.0f64..7.0) {
        let walk = HybridWalk::new(build(&GraphFamily::Circle2 { a, b }).unwrap(), CoinSpec::Hadamard).unwrap();
        let out = walk.step(t, &StateVector::basis(4, 0)).unwrap();
        let p1 = position_distribution(&out, 2, 2).unwrap()[1];
        prop_assert!((p1 - oracle_p1_two_cycle(a, b, t)).abs() < 1e-10);
    }

    #[test]
    fn steps_preserve_norm(seed in any::<u64>(), t in -4.0f64..4.0, n in 3usize..9) {
        let walk = HybridWalk::new(build(&GraphFamily::Star { n }).unwrap(), CoinSpec::Fourier).unwrap();
        let traj = walk.run(t, 5, &random_coin_state(n, n, seed)).unwrap();
        for s in &traj.states {
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
        for p in &traj.distributions {
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn star_is_pi_periodic(n in 4usize..13, t in 0.0f64..3.2) {
        let walk = HybridWalk::new(build(&GraphFamily::Star { n }).unwrap(), CoinSpec::Fourier).unwrap();
        let psi = StateVector::basis(n * n, 0);
        let (a, b) = (walk.step(t, &psi).unwrap(), walk.step(t + PI, &psi).unwrap());
        let (pa, pb) = (position_distribution(&a, n, n).unwrap(), position_distribution(&b, n, n).unwrap());
        for (x, y) in pa.iter().zip(&pb) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let d = entanglement_entropy(&a, n, n).unwrap() - entanglement_entropy(&b, n, n).unwrap();
        prop_assert!(d.abs() < 1e-9);
    }
}
