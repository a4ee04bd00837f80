use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_embed::estimator::{Discretization, RadialGrid};
use radial_embed::solver::*;

const EX42_V: &str = "exp(-r)*r^-3";
const EX42_K: &str = "piecewise[(0,1): r^-1; (1,inf): r^-5/2]";

fn ex42_v(r: f64) -> f64 {
    (-r).exp() / (r * r * r)
}

fn ex42_k(r: f64) -> f64 {
    if r <= 1.0 {
        1.0 / r
    } else {
        r.powf(-2.5)
    }
}

fn disc(p: f64, m: usize) -> Discretization<f64> {
    let n = if p < 3.0 { 3 } else { 4 };
    let grid = RadialGrid::log_spaced(1e-6, 1e3, m, n, p).unwrap();
    Discretization::new(grid, &ex42_v, &ex42_k, None).unwrap()
}

fn problem(family: &str, q: f64, mode: &str, k: &str, m: usize) -> Problem<f64> {
    let js = format!(
        r#"{{"p": 2, "N": 3, "V": "{EX42_V}", "K": "{k}", "nonlinearity": {{"family": "{family}", "q1": {q}}},
            "grid": {{"rmin": 1e-6, "rmax": 1e3, "M": {m}}}, "mode": "{mode}", "seed": 7}}"#
    );
    ProblemConfig::from_json(&js).unwrap().build().unwrap()
}

/// Smooth random profile, nonzero on every free node.
fn profile(d: &Discretization<f64>, rng: &mut ChaCha8Rng, signed: bool) -> Vec<f64> {
    let a = rng.gen_range(0.5..2.0);
    let k = rng.gen_range(0.3..1.5);
    let ph = rng.gen_range(0.0..6.0);
    let decay = rng.gen_range(3.0..30.0);
    let mut u: Vec<f64> = d
        .nodes()
        .iter()
        .map(|&r| {
            let wave = (k * r.ln() + ph).sin();
            let shape = if signed { wave } else { 1.0 + 0.5 * wave };
            a * (-r / decay).exp() * shape
        })
        .collect();
    d.project(&mut u);
    u
}

/// Monotone pair `u = Σ cₖe^{−r/dₖ}`, `h = Σ bₖe^{−r/dₖ}`: every slope of `u`
/// is nonzero and dominates the matching slope of `h`, so the `|u′|^p` term
/// is twice differentiable along the segment even for `p < 2`.
fn taylor_pair(d: &Discretization<f64>, rng: &mut ChaCha8Rng, negate: bool) -> (Vec<f64>, Vec<f64>) {
    let terms: Vec<(f64, f64, f64)> =
        (0..3).map(|_| (rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.3..30.0))).collect();
    let eval = |pick: fn(&(f64, f64, f64)) -> f64| -> Vec<f64> {
        let mut v: Vec<f64> = d.nodes().iter().map(|&r| terms.iter().map(|t| pick(t) * (-r / t.2).exp()).sum()).collect();
        d.project(&mut v);
        v
    };
    let mut u = eval(|t| t.0);
    if negate {
        u.iter_mut().for_each(|x| *x = -*x);
    }
    (u, eval(|t| t.1))
}

/// Least-squares slope of `ln |I(u+εh) − I(u) − εI′(u)h|` against `ln ε`.
fn taylor_slope(f: &Functional<'_, f64>, u: &[f64], h: &[f64]) -> f64 {
    let e0 = f.energy(u).unwrap();
    let d = f.derivative(u, h).unwrap();
    let pts: Vec<(f64, f64)> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&eps| {
            let v: Vec<f64> = u.iter().zip(h).map(|(a, b)| a + eps * b).collect();
            let rem = (f.energy(&v).unwrap() - e0 - eps * d).abs();
            (f64::ln(eps), rem.ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn taylor_remainder_is_second_order() {
    let families = [
        Nonlinearity::PurePower { q: 3.5 },
        Nonlinearity::MinPower { q1: 1.5, q2: 4.0 },
        Nonlinearity::RationalPower { q1: 2.5, q2: 4.5 },
    ];
    for p in [1.5, 2.0, 3.0] {
        let d = disc(p, 256);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (i, nl) in families.iter().enumerate() {
            let f = Functional::new(&d, nl);
            for j in 0..10 {
                let (u, h) = taylor_pair(&d, &mut rng, j % 4 == 3);
                let s = taylor_slope(&f, &u, &h);
                assert!(s >= 1.9, "p = {p}, family {i}, pair {j}: slope {s}");
            }
        }
    }
}

#[test]
fn zero_nonlinearity_gives_zero() {
    let d = disc(2.0, 256);
    let s = solve_sublinear(&d, &Nonlinearity::Zero, &SolverOptions::default()).unwrap();
    assert!(s.u.u.iter().all(|&x| x.abs() < 1e-10));
    assert!(s.energy.abs() < 1e-12);
}

#[test]
fn forcing_alone_gives_a_nonzero_minimizer() {
    // (g7): Q ≥ 0, nonzero on (1, 2), f = 0
    let grid = RadialGrid::log_spaced(1e-6, 1e3, 256, 3, 2.0).unwrap();
    let q = |r: f64| if (1.0..=2.0).contains(&r) { 1.0 } else { 0.0 };
    let d = Discretization::new(grid, &ex42_v, &ex42_k, Some(&q)).unwrap();
    let s = solve_sublinear(&d, &Nonlinearity::Zero, &SolverOptions::default()).unwrap();
    let max = s.u.u.iter().fold(0.0f64, |m, &x| m.max(x));
    assert!(max > 1e-3);
    assert!(s.nonneg_violation <= 1e-8);
    assert!(s.energy < 0.0);
}

#[test]
fn fibering_maximum_matches_closed_form() {
    // V = 0, pure power: I(tu) = t^p A/p − t^q C/q with A = ‖u‖^p, C = ∫K|u|^q
    for (p, q) in [(2.0, 4.0), (1.5, 3.0), (3.0, 5.0)] {
        let n = if p < 3.0 { 3 } else { 4 };
        let grid = RadialGrid::log_spaced(1e-4, 1e2, 200, n, p).unwrap();
        let zero = |_: f64| 0.0;
        let d = Discretization::new(grid, &zero, &ex42_k, None).unwrap();
        let nl = Nonlinearity::PurePower { q };
        let f = Functional::new(&d, &nl);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = profile(&d, &mut rng, false);
        let a = d.norm_pow(&u).unwrap();
        let c: f64 = (0..u.len()).map(|i| d.mass[i] * d.k[i] * u[i].abs().powf(q)).sum();
        let t_star = (a / c).powf(1.0 / (q - p));
        let peak = (1.0 / p - 1.0 / q) * a.powf(q / (q - p)) / c.powf(p / (q - p));
        let at = |t: f64| f.energy(&u.iter().map(|x| t * x).collect::<Vec<_>>()).unwrap();
        assert!((at(t_star) - peak).abs() <= 1e-8 * peak.abs(), "p = {p}: {} vs {peak}", at(t_star));
        assert!(at(t_star * 1.001) < at(t_star) && at(t_star * 0.999) < at(t_star));
        let ut: Vec<f64> = u.iter().map(|x| t_star * x).collect();
        assert!(f.derivative(&ut, &ut).unwrap().abs() <= 1e-8 * a * t_star.powf(p));
    }
}

#[test]
fn sublinear_example() {
    let pb = problem("pure-power", 1.5, "min", EX42_K, 512);
    let s = pb.solve().unwrap();
    assert_eq!(s.kind, SolutionKind::GlobalMin);
    assert!(s.residual <= 1e-6);
    assert!(s.energy < 0.0);
    assert!(s.nonneg_violation <= 1e-8);
    let fine = problem("pure-power", 1.5, "min", EX42_K, 1024).solve().unwrap();
    assert!((fine.energy - s.energy).abs() < 0.01 * s.energy.abs());
    // weak form against random piecewise-linear test functions
    let f = Functional::new(&pb.disc, &pb.nl);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..16 {
        let h = profile(&pb.disc, &mut rng, true);
        let lhs = f.derivative(&s.u.u, &h).unwrap().abs();
        assert!(lhs <= 10.0 * s.tolerance * pb.disc.w_norm(&h).unwrap() * s.energy.abs().max(1.0));
    }
}

#[test]
fn mountain_pass_example_and_scaling() {
    let q = 4.0;
    let pb = problem("pure-power", q, "mp", EX42_K, 512);
    let s = pb.solve().unwrap();
    assert_eq!(s.kind, SolutionKind::MountainPass);
    assert!(s.residual <= 1e-5);
    assert!(s.energy > 0.0);
    let rim = s.rim_level.unwrap();
    assert!(rim > 0.0 && s.energy >= rim);
    assert!(s.nonneg_violation <= 1e-8);
    let norm = pb.disc.norm_pow(&s.u.u).unwrap();
    let kq: f64 = (0..s.u.u.len()).map(|i| pb.disc.mass[i] * pb.disc.k[i] * s.u.u[i].abs().powf(q)).sum();
    assert!((norm - kq).abs() <= 1e-5 * norm);
    let f = Functional::new(&pb.disc, &pb.nl);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..16 {
        let h = profile(&pb.disc, &mut rng, true);
        assert!(f.derivative(&s.u.u, &h).unwrap().abs() <= 10.0 * s.tolerance * pb.disc.w_norm(&h).unwrap());
    }

    let doubled = problem("pure-power", q, "mp", "piecewise[(0,1): 2*r^-1; (1,inf): 2*r^-5/2]", 512).solve().unwrap();
    let factor = 2f64.powf(-1.0 / (q - 2.0));
    let scale = s.u.u.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    for (a, b) in s.u.u.iter().zip(&doubled.u.u) {
        assert!((b - factor * a).abs() <= 1e-4 * scale);
    }
}

#[test]
fn mode_preconditions_are_enforced() {
    let e = problem("pure-power", 1.5, "mp", EX42_K, 64).solve().unwrap_err();
    assert!(matches!(e, SolverError::Hypothesis(_)), "{e}");
    let e = problem("pure-power", 4.0, "min", EX42_K, 64).solve().unwrap_err();
    assert!(matches!(e, SolverError::Hypothesis(_)), "{e}");
    // q = 12 is above the range at the origin, (1, 10)
    let e = problem("pure-power", 12.0, "mp", EX42_K, 64).solve().unwrap_err();
    assert!(matches!(e, SolverError::Hypothesis(_)), "{e}");
}

#[test]
fn min_power_mountain_pass() {
    let js = format!(
        r#"{{"p": 2, "N": 3, "V": "{EX42_V}", "K": "{EX42_K}",
            "nonlinearity": {{"family": "min-power", "q1": 3, "q2": 5}}, "grid": {{"M": 256}}, "mode": "mp", "seed": 2}}"#
    );
    let pb: Problem<f64> = ProblemConfig::from_json(&js).unwrap().build().unwrap();
    let rc = pb.range_check().unwrap();
    assert!(rc.assignment.is_some(), "{rc:?}");
    let s = pb.solve().unwrap();
    assert!(s.energy > 0.0 && s.residual <= 1e-5 && s.nonneg_violation <= 1e-8);
}

#[test]
fn problem_files_reject_unknown_fields() {
    let bad = r#"{"p": 2, "N": 3, "V": "1", "K": "1", "nonlinearity": {"family": "zero"}, "mode": "min", "extra": 1}"#;
    assert!(matches!(ProblemConfig::from_json(bad), Err(ProblemError::Input(_))));
    let bad_dims = r#"{"p": 3, "N": 3, "V": "1", "K": "1", "nonlinearity": {"family": "zero"}, "mode": "min"}"#;
    let cfg = ProblemConfig::from_json(bad_dims).unwrap();
    assert!(matches!(cfg.build::<f64>(), Err(ProblemError::Domain(_))));
    let exact_p = r#"{"p": "3/2", "N": 3, "V": "1", "K": "1", "nonlinearity": {"family": "zero"}, "mode": "min"}"#;
    let pb: Problem<f64> = ProblemConfig::from_json(exact_p).unwrap().build().unwrap();
    assert_eq!(pb.disc.p(), 1.5);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn negative_part_identity(seed in 0u64..10_000, q in 2.2f64..6.0) {
        // sign changes pass through a zero node, where the identity is exact
        let d = disc(2.0, 128);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cut = rng.gen_range(20..100);
        let mut u = profile(&d, &mut rng, false);
        for (i, x) in u.iter_mut().enumerate() {
            if i == cut {
                *x = 0.0;
            } else if i > cut {
                *x = -*x;
            }
        }
        let nl = Nonlinearity::PurePower { q };
        let f = Functional::new(&d, &nl);
        let minus: Vec<f64> = u.iter().map(|&x| (-x).max(0.0)).collect();
        let lhs = f.derivative(&u, &minus).unwrap();
        let rhs = -d.norm_pow(&minus).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs());
    }

    #[test]
    fn energy_of_zero_is_zero(p in 1.2f64..2.9) {
        let d = disc(p, 64);
        let nl = Nonlinearity::RationalPower { q1: 1.5, q2: 3.0 };
        let f = Functional::new(&d, &nl);
        prop_assert_eq!(f.energy(&vec![0.0; d.len()]).unwrap(), 0.0);
    }
}
