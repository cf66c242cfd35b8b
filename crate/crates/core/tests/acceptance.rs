//! Acceptance gate: one PASS/FAIL line per criterion; exits nonzero on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use hqw::graphs::{bench8, build, random_regular, GraphFamily, LabeledGraph};
use hqw::linalg::{hermitian_eig, StateVector, C64};
use hqw::matmul::{product_entry, product_values, triangles_at_vertex, Mode, RegularGraphSequence};
use hqw::pst::{random_instance, run_pst, segment_line_transfer, PstPlan};
use hqw::walk::{
    cnot_realizability, discrete_coined_walk, line_reference_hamiltonian, oracle_p1_two_cycle, position_distribution,
    std_dev, CoinSpec, HybridWalk, Trajectory,
};

type Check = Result<String, String>;

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn fit_20_100(sigmas: &[f64]) -> f64 {
    let xs: Vec<f64> = (20..=100).map(|s| s as f64).collect();
    slope(&xs, &sigmas[20..=100])
}

fn circle_p1(a: f64, b: f64, ts: &[f64]) -> Vec<f64> {
    let walk = HybridWalk::new(build(&GraphFamily::Circle2 { a, b }).unwrap(), CoinSpec::Hadamard).unwrap();
    let psi = StateVector::basis(4, 0);
    ts.iter()
        .map(|&t| {
            let out = walk.step(t, &psi).unwrap();
            position_distribution(&out, 2, 2).unwrap()[1]
        })
        .collect()
}

fn ac1() -> Check {
    let start = Instant::now();
    let ts = linspace(0.0, 2.0 * PI, 100);
    let mut err: f64 = 0.0;
    for &a in &linspace(0.1, 3.0, 10) {
        for &b in &linspace(0.2, 4.0, 10) {
            for (p, &t) in circle_p1(a, b, &ts).iter().zip(&ts) {
                err = err.max((p - oracle_p1_two_cycle(a, b, t)).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(err < 1e-10 && secs < 5.0, format!("max |dP1| = {err:.2e}, {secs:.2} s"))
}

fn ac2() -> Check {
    let ts: Vec<f64> = (0..=5).map(|k| FRAC_PI_2 + k as f64 * PI).collect();
    let mut err: f64 = 0.0;
    for &w in &linspace(0.0, 3.0, 31) {
        for p in circle_p1(2.0 * w, 2.0 * w + 1.0, &ts) {
            err = err.max((p - 0.5).abs());
        }
    }
    ensure(err < 1e-9, format!("max |P1 - 1/2| = {err:.2e} over 31 omegas x 6 times"))
}

fn star_observables(walk: &HybridWalk, n: usize, t: f64) -> (Vec<f64>, f64, f64) {
    let out = walk.step(t, &StateVector::basis(n * n, 0)).unwrap();
    let p = position_distribution(&out, n, n).unwrap();
    let coords: Vec<f64> = (0..n).map(|v| v as f64).collect();
    let sigma = std_dev(&p, &coords).unwrap();
    let s = hqw::walk::entanglement_entropy(&out, n, n).unwrap();
    (p, sigma, s)
}

fn ac3() -> Check {
    let (mut dist_err, mut period_err, mut entropy_err): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for n in 4..=12 {
        let walk = HybridWalk::new(build(&GraphFamily::Star { n }).unwrap(), CoinSpec::Fourier).unwrap();
        for &t in &linspace(0.0, PI, 25) {
            let (p, sigma, s) = star_observables(&walk, n, t);
            let nf = n as f64;
            dist_err = dist_err.max((p[0] - ((nf - 1.0) * t.cos().powi(2) + 1.0) / nf).abs());
            for &pv in &p[1..] {
                dist_err = dist_err.max((pv - t.sin().powi(2) / nf).abs());
            }
            let (p2, sigma2, s2) = star_observables(&walk, n, t + PI);
            for (a, b) in p.iter().zip(&p2) {
                period_err = period_err.max((a - b).abs());
            }
            period_err = period_err.max((sigma - sigma2).abs()).max((s - s2).abs());
        }
        let (_, _, s) = star_observables(&walk, n, FRAC_PI_2);
        entropy_err = entropy_err.max((s - (n as f64).log2()).abs());
    }
    ensure(
        dist_err < 1e-10 && period_err < 1e-9 && entropy_err < 1e-9,
        format!("distribution {dist_err:.2e}, period {period_err:.2e}, S_E(pi/2) - log2 N {entropy_err:.2e}"),
    )
}

const STEPS: usize = 100;
const HALF_LEN: usize = STEPS + 8;

fn symmetric_coin() -> [C64; 2] {
    [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, -FRAC_1_SQRT_2)]
}

fn line2_runs() -> (Trajectory, Trajectory) {
    let g = build(&GraphFamily::Line2 { half_len: HALF_LEN }).unwrap();
    let psi = StateVector::coin_at(&symmetric_coin(), g.n(), g.vertex_at(0).unwrap());
    let walk = HybridWalk::new(g, CoinSpec::Hadamard).unwrap();
    let hybrid = walk.run(FRAC_PI_2, STEPS, &psi).unwrap();
    let h = CoinSpec::Hadamard.realize(2).unwrap();
    let discrete = discrete_coined_walk(STEPS, &h, &psi, HALF_LEN).unwrap();
    (hybrid, discrete)
}

fn line3_run(coin: CoinSpec) -> Trajectory {
    let g = build(&GraphFamily::Line3 { half_len: HALF_LEN }).unwrap();
    let uniform = [C64::new(1.0 / 3f64.sqrt(), 0.0); 3];
    let psi = StateVector::coin_at(&uniform, g.n(), g.vertex_at(0).unwrap());
    HybridWalk::new(g, coin).unwrap().run(FRAC_PI_2, STEPS, &psi).unwrap()
}

fn boundary_mass(p: &[f64]) -> f64 {
    p[..2].iter().chain(&p[p.len() - 2..]).sum()
}

fn ac4() -> Check {
    let start = Instant::now();
    let (hybrid, discrete) = line2_runs();
    let secs = start.elapsed().as_secs_f64();
    let (ph, pd) = (hybrid.last_distribution().unwrap(), discrete.last_distribution().unwrap());
    let err = ph.iter().zip(pd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let edge = boundary_mass(ph);
    ensure(
        err < 1e-9 && secs < 30.0 && edge < 1e-12,
        format!("max |dP| = {err:.2e}, boundary mass {edge:.1e}, {secs:.2} s at L = {HALF_LEN}"),
    )
}

fn continuous_sigmas() -> Vec<f64> {
    let h = line_reference_hamiltonian(HALF_LEN);
    let eig = hermitian_eig(&h).unwrap();
    let n = 2 * HALF_LEN + 1;
    let mut psi = vec![C64::new(0.0, 0.0); n];
    psi[HALF_LEN] = C64::new(1.0, 0.0);
    let coords: Vec<f64> = (0..n).map(|v| v as f64 - HALF_LEN as f64).collect();
    (0..=STEPS)
        .map(|s| {
            let out = eig.evolve(s as f64, &psi).unwrap();
            let p: Vec<f64> = out.iter().map(|a| a.norm_sqr()).collect();
            std_dev(&p, &coords).unwrap()
        })
        .collect()
}

fn ac5() -> Check {
    let (hybrid, discrete) = line2_runs();
    let line3 = line3_run(CoinSpec::Grover);
    let slopes = [
        ("line2", fit_20_100(&hybrid.sigmas), 0.54),
        ("discrete", fit_20_100(&discrete.sigmas), 0.54),
        ("line3", fit_20_100(&line3.sigmas), 0.59),
        ("continuous", fit_20_100(&continuous_sigmas()), 0.50),
    ];
    let ok = slopes.iter().all(|(_, s, want)| (s - want).abs() <= 0.02);
    let detail: Vec<String> = slopes.iter().map(|(name, s, want)| format!("{name} {s:.4} (want {want})")).collect();
    ensure(ok, detail.join(", "))
}

fn ac6() -> Check {
    let (hybrid, _) = line2_runs();
    let line3 = line3_run(CoinSpec::Grover);
    let (s2, s3) = (hybrid.entropies[STEPS], line3.entropies[STEPS]);
    ensure(s3 - s2 > 0.05, format!("S_E line3 {s3:.4} bits vs line2 {s2:.4} bits at step {STEPS}"))
}

fn ac7() -> Check {
    let g = build(&GraphFamily::Line3 { half_len: HALF_LEN }).unwrap();
    let origin = g.vertex_at(0).unwrap();
    let walk = HybridWalk::new(g.clone(), CoinSpec::Identity).unwrap();
    let mut worst: f64 = 0.0;
    for m in 0..3 {
        let label = &g.labels()[m];
        let partner = g.edges().iter().find(|e| &e.label == label && e.touches(origin)).map(|e| e.other(origin));
        let psi = StateVector::basis(3 * g.n(), m * g.n() + origin);
        for &t in &[FRAC_PI_2, 0.7, 2.3] {
            let traj = walk.run(t, STEPS, &psi).unwrap();
            for p in &traj.distributions {
                let outside: f64 =
                    p.iter().enumerate().filter(|&(v, _)| v != origin && Some(v) != partner).map(|(_, x)| x).sum();
                worst = worst.max(outside);
            }
        }
    }
    ensure(worst < 1e-12, format!("max mass outside the matched pair {worst:.2e}"))
}

fn ac8() -> Check {
    let mut worst_fidelity: f64 = 1.0;
    let mut worst_phase: f64 = 0.0;
    for seed in 0..50 {
        let inst = random_instance(seed, 12, 6);
        let plan = PstPlan::new(inst.graph, inst.source, inst.target, Some(inst.path)).map_err(|e| e.to_string())?;
        let (_, tr) = run_pst(&plan, &inst.alpha).map_err(|e| e.to_string())?;
        worst_fidelity = worst_fidelity.min(tr.fidelity);
        for ph in tr.component_phases.iter().flatten() {
            worst_phase = worst_phase.max((ph - tr.expected_phase).norm());
        }
    }
    let tree = hqw::graphs::pst_tree();
    let plan = PstPlan::new(tree, 0, 14, None).map_err(|e| e.to_string())?;
    let alpha = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, 0.0)];
    let (_, tr) = run_pst(&plan, &alpha).map_err(|e| e.to_string())?;
    worst_fidelity = worst_fidelity.min(tr.fidelity);
    let mut worst_arrival: f64 = 1.0;
    for m in 2..=8 {
        worst_arrival = worst_arrival.min(segment_line_transfer(m).map_err(|e| e.to_string())?.arrival_probability);
    }
    ensure(
        worst_fidelity >= 1.0 - 1e-9 && worst_phase < 1e-9 && (1.0 - worst_arrival) < 1e-9,
        format!(
            "min fidelity {worst_fidelity:.12} (50 random + tree), max phase error {worst_phase:.1e}, min P(M) {worst_arrival:.12}"
        ),
    )
}

fn classical_product(graphs: &[LabeledGraph]) -> Vec<Vec<i64>> {
    let n = graphs[0].n();
    let mut acc: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for g in graphs {
        let mut a = vec![vec![0i64; n]; n];
        for e in g.edges() {
            a[e.u][e.v] = 1;
            a[e.v][e.u] = 1;
        }
        acc = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * acc[k][j]).sum()).collect()).collect();
    }
    acc
}

fn random_sequence(seed: u64) -> Vec<LabeledGraph> {
    let n = 4 + (seed % 5) as usize;
    let k = 1 + (seed / 5 % 3) as usize;
    (0..k)
        .map(|l| {
            let options: Vec<usize> = (1..=3).filter(|&d| d < n && (n * d) % 2 == 0).collect();
            let d = options[(seed as usize + l) % options.len()];
            random_regular(n, d, seed * 31 + l as u64).unwrap()
        })
        .collect()
}

fn ac9() -> Check {
    let (mut worst, mut col_err): (f64, f64) = (0.0, 0.0);
    for seed in 0..100 {
        let graphs = random_sequence(seed);
        let seq = RegularGraphSequence::from_graphs(&graphs).map_err(|e| e.to_string())?;
        let got = product_values(&seq, Mode::Exact).map_err(|e| e.to_string())?;
        let want = classical_product(&graphs);
        for (gr, wr) in got.iter().zip(&want) {
            for (g, w) in gr.iter().zip(wr) {
                worst = worst.max((g - *w as f64).abs());
            }
        }
        for j in 0..seq.n() {
            let s: f64 = got.iter().map(|r| r[j]).sum();
            col_err = col_err.max((s - seq.degree_product()).abs());
        }
    }
    ensure(worst < 1e-6 && col_err < 1e-9, format!("max |C - A...A| = {worst:.2e}, column-sum error {col_err:.2e}"))
}

fn ac10() -> Check {
    let g = bench8();
    let seq = RegularGraphSequence::power(&g, 3).map_err(|e| e.to_string())?;
    let e = product_entry(&seq, 0, 0, Mode::Exact).map_err(|e| e.to_string())?;
    let p: f64 = 2.0 / 27.0;
    let tri = triangles_at_vertex(&g, 0, Mode::Exact).map_err(|e| e.to_string())?;
    let radius = 3.0 * (p * (1.0 - p) / 20000.0).sqrt();
    let mut inside = 0;
    for seed in 0..100 {
        let s = product_entry(&seq, 0, 0, Mode::Shots { shots: 20000, seed }).map_err(|e| e.to_string())?;
        if (s.estimate - p).abs() <= radius {
            inside += 1;
        }
    }
    ensure(
        (e.probability - p).abs() < 1e-12 && e.rounded() == 2 && tri == 1 && inside >= 99,
        format!(
            "p = {:.6}, C00 = {:.6}, triangles at 0 = {tri}, shots within 3 sigma {inside}/100",
            e.probability, e.value
        ),
    )
}

fn ac11() -> Check {
    let hit = cnot_realizability(4.0, 2.0);
    let miss = cnot_realizability(1.0, 1.0);
    match (&hit, &miss) {
        (Some(g), None) if g.distance < 1e-9 => {
            Ok(format!("(4,2): t = {:.6} (k={}, l={}), distance {:.1e}; (1,1): none", g.t, g.k, g.l, g.distance))
        }
        _ => Err(format!("(4,2): {:?}; (1,1): {:?}", hit.map(|g| g.t), miss.map(|g| g.t))),
    }
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let checks: [Criterion; 11] = [
        ("closed-form circle dynamics", ac1),
        ("stable bands", ac2),
        ("star graph formulas, periodicity, entropy", ac3),
        ("line2 vs discrete Hadamard walk", ac4),
        ("spread slopes", ac5),
        ("entropy ordering", ac6),
        ("flat-band confinement", ac7),
        ("state transfer suite", ac8),
        ("matmul oracle equivalence", ac9),
        ("8-vertex anchor", ac10),
        ("CNOT realizability", ac11),
    ];
    let mut failed = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("AC{:<2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("AC{:<2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
