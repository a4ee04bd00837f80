use proptest::prelude::*;
use radial_embed::estimator::*;
use radial_embed::exponent::Side;

fn inverse_r(r: f64) -> f64 {
    1.0 / r
}

fn one(_: f64) -> f64 {
    1.0
}

fn zero(_: f64) -> f64 {
    0.0
}

fn disc_on(grid: RadialGrid<f64>, v: fn(f64) -> f64, k: fn(f64) -> f64) -> Discretization<f64> {
    Discretization::new(grid, &v, &k, None).unwrap()
}

fn standard(v: fn(f64) -> f64, k: fn(f64) -> f64) -> Discretization<f64> {
    disc_on(RadialGrid::standard(3, 2.0).unwrap(), v, k)
}

/// Sharp Sobolev constant in ℝ³: `S = (N(N−2)/4)|S^N|^{2/N}` with
/// `|S³| = 2π²`, so `sup ∫|u|⁶ / ‖∇u‖⁶ = S⁻³`.
fn talenti_sup() -> f64 {
    let s = 0.75 * (2.0 * std::f64::consts::PI.powi(2)).powf(2.0 / 3.0);
    s.powi(-3)
}

#[test]
fn power_potential_decays_at_both_ends() {
    let d = standard(inverse_r, one);
    let opts = EstimatorOptions::default();
    for side in [Side::Origin, Side::Infinity] {
        let radii = dyadic_schedule(side, 5);
        let row = decay_row(&d, side, 4.0, &radii, &opts).unwrap();
        assert_eq!(row.class, DecayClass::Decaying, "{side}: {:?}", row.values);
        for w in row.values.windows(2) {
            assert!(w[1] <= w[0] + 3e-6, "{side}: not monotone {:?}", row.values);
        }
        assert!(row.values[0] >= 2.0 * row.values[5], "{side}: {:?}", row.values);
    }
}

#[test]
fn critical_exponent_plateaus_at_the_sobolev_constant() {
    let d = standard(zero, one);
    let radii = dyadic_schedule(Side::Origin, 4);
    let row = decay_row(&d, Side::Origin, 6.0, &radii, &EstimatorOptions::default()).unwrap();
    assert_eq!(row.class, DecayClass::Plateau);
    let exact = talenti_sup();
    for v in &row.values {
        assert!(*v <= exact * 1.005, "{v} exceeds the sharp constant {exact}");
        assert!(*v >= exact * 0.98, "{v} far below the sharp constant {exact}");
    }
}

#[test]
fn supercritical_exponent_does_not_decay_at_the_origin() {
    // V = 0, K = 1: the range at the origin is (1, 6)
    let d = standard(zero, one);
    let radii = dyadic_schedule(Side::Origin, 4);
    let opts = EstimatorOptions { max_iter: 1500, ..Default::default() };
    let row = decay_row(&d, Side::Origin, 8.0, &radii, &opts).unwrap();
    assert_ne!(row.class, DecayClass::Decaying, "{:?}", row.values);
}

#[test]
fn refinement_changes_estimates_little() {
    let coarse = standard(inverse_r, one);
    let fine = disc_on(coarse.grid.refined(), inverse_r, one);
    let opts = EstimatorOptions::default();
    for side in [Side::Origin, Side::Infinity] {
        let a = estimate_sup(&coarse, side, 4.0, 1.0, &opts, &[]).unwrap();
        let b = estimate_sup(&fine, side, 4.0, 1.0, &opts, &[]).unwrap();
        assert!(a.converged && b.converged);
        assert!((a.value - b.value).abs() < 0.02 * b.value, "{side}: {} vs {}", a.value, b.value);
        // the fine witness, restricted to the coarse nodes, is no better than
        // the fine estimate beyond quadrature error
        let restricted = b.witness.resample(coarse.nodes());
        let mut restricted = restricted;
        coarse.project(&mut restricted);
        let v = quotient(&coarse, side, 4.0, 1.0, &restricted).unwrap();
        assert!(v <= b.value * 1.02, "{side}: {v} vs {}", b.value);
    }
}

#[test]
fn singular_potential_pins_nodes() {
    fn exp_inv(r: f64) -> f64 {
        (1.0 / r).exp()
    }
    let d = standard(exp_inv, one);
    assert!(d.pinned.iter().filter(|&&b| b).count() > 1);
    let e = estimate_s0(&d, 3.0, 0.5, &EstimatorOptions::default()).unwrap();
    assert!(e.value.is_finite() && e.value > 0.0);
    for (u, &pin) in e.witness.u.iter().zip(&d.pinned) {
        if pin {
            assert_eq!(*u, 0.0);
        }
    }
}

#[test]
fn tabulated_input_matches_the_closed_form() {
    let grid = RadialGrid::log_spaced(1e-4, 1e2, 128, 3, 2.0).unwrap();
    let fine = grid.refined().refined();
    let mut csv_text = String::from("r,V,K\n");
    for &r in &fine.nodes {
        csv_text.push_str(&format!("{r:e},{:e},{:e}\n", 1.0 / r, 1.0));
    }
    let (v, k) = read_table_csv::<f64, _>(csv_text.as_bytes()).unwrap();
    let a = Discretization::new(grid.clone(), &v, &k, None).unwrap();
    let b = disc_on(grid, inverse_r, one);
    let opts = EstimatorOptions { max_iter: 800, ..Default::default() };
    let ea = estimate_sinf(&a, 4.0, 2.0, &opts).unwrap();
    let eb = estimate_sinf(&b, 4.0, 2.0, &opts).unwrap();
    assert!((ea.value - eb.value).abs() < 1e-6 * eb.value);
}

#[test]
fn decay_report_csv_has_one_row_per_estimate() {
    let grid = RadialGrid::log_spaced(1e-4, 1e2, 96, 3, 2.0).unwrap();
    let d = disc_on(grid, inverse_r, one);
    let radii = dyadic_schedule(Side::Infinity, 2);
    let report = decay_report(&d, Side::Infinity, &[4.0, 5.0], &radii, &EstimatorOptions { max_iter: 300, ..Default::default() }).unwrap();
    assert_eq!(report.status, "empirical");
    let mut out = Vec::new();
    report.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "side,q,R,estimate,converged");
    assert_eq!(lines.len(), 1 + 2 * 3);
}

#[test]
fn nonconverged_estimates_poison_the_class() {
    let grid = RadialGrid::log_spaced(1e-4, 1e2, 96, 3, 2.0).unwrap();
    let d = disc_on(grid, inverse_r, one);
    let radii = dyadic_schedule(Side::Origin, 2);
    let row = decay_row(&d, Side::Origin, 4.0, &radii, &EstimatorOptions { max_iter: 2, ..Default::default() }).unwrap();
    assert_eq!(row.class, DecayClass::Inconclusive);
    assert!(row.slope.is_none());
}

#[test]
fn single_precision_grid_works() {
    let grid = RadialGrid::<f32>::log_spaced(1e-3, 1e2, 64, 3, 2.0).unwrap();
    let v = |r: f32| 1.0 / r;
    let k = |_: f32| 1.0f32;
    let d = Discretization::new(grid, &v, &k, None).unwrap();
    let opts = EstimatorOptions { max_iter: 200, rel_tol: 1e-5, ..Default::default() };
    let e = estimate_s0(&d, 4.0f32, 1.0, &opts).unwrap();
    assert!(e.value > 0.0 && e.value.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn witnesses_are_feasible(q in 2.5f64..5.5, lr in -3.0f64..3.0, origin in any::<bool>(), seed in 0u64..1000) {
        let grid = RadialGrid::log_spaced(1e-4, 1e2, 96, 3, 2.0).unwrap();
        let d = disc_on(grid, inverse_r, one);
        let side = if origin { Side::Origin } else { Side::Infinity };
        let r = lr.exp();
        let e = estimate_sup(&d, side, q, r, &EstimatorOptions { max_iter: 300, seed, ..Default::default() }, &[]).unwrap();
        prop_assert!(e.value >= 0.0);
        prop_assert!((d.w_norm(&e.witness.u).unwrap() - 1.0).abs() <= 1e-8);
        let again = quotient(&d, side, q, r, &e.witness.u).unwrap();
        prop_assert!((again - e.value).abs() <= 1e-9 * e.value.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn norm_is_homogeneous(lambda in -50.0f64..50.0, c in -4.0f64..2.0, w in 0.3f64..3.0) {
        let grid = RadialGrid::log_spaced(1e-4, 1e2, 64, 3, 1.5).unwrap();
        let d = disc_on(grid, inverse_r, one);
        let u = bump(&d, c, w);
        let scaled: Vec<f64> = u.iter().map(|x| lambda * x).collect();
        let a = d.w_norm(&scaled).unwrap();
        let b = lambda.abs() * d.w_norm(&u).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(f64::MIN_POSITIVE));
    }
}
