#[path = "common/oracle.rs"]
mod oracle;

use num_bigint::BigInt;
use oracle::{q, qi, Q};
use proptest::prelude::*;
use radial_embed::catalog::*;
use radial_embed::exponent::*;

type E = ExtendedRational<BigInt>;
type D = ProblemDims<BigInt>;
type S = PotentialSpec<BigInt>;

fn sp(s: &str) -> S {
    parse_potential(s).unwrap()
}

fn fin(x: Q) -> E {
    E::Finite(x)
}

fn rs(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn pw(e: &Q) -> String {
    format!("r^{}", rs(e))
}

fn best(v: &str, k: &str, d: &D) -> BestRanges<BigInt> {
    best_ranges(&sp(v), &sp(k), d).unwrap()
}

#[test]
fn power_pair_matches_closed_form() {
    // V = r^-a, K = r^(1-a), a ≤ p
    for (pn, pd, n) in [(2, 1, 3), (3, 2, 3), (5, 2, 4), (3, 1, 5)] {
        let p = q(pn, pd);
        let nq = qi(n as i64);
        let d = D::new(p.clone(), n).unwrap();
        for a in [q(1, 1), q(1, 2), q(-1, 1), q(1, 3), p.clone()] {
            if a > p {
                continue;
            }
            let r = best(&pw(&(-a.clone())), &pw(&(qi(1) - &a)), &d);
            let q_up = &p * (&nq - &a + qi(1)) / (&nq - &p);
            let q_lo = &p * (&p * &nq - &a * (&p - qi(1))) / (&p * (&nq - qi(1)) - &a * (&p - qi(1)));
            assert_eq!(r.origin.range, ExponentSet::open(E::one(), fin(q_up.clone())), "p={p} N={n} a={a}");
            assert_eq!(r.infinity.range, ExponentSet::half_line(fin(q_lo.clone())), "p={p} N={n} a={a}");
            if a < p {
                assert_eq!(r.conclusion.single(), Some(&ExponentSet::open(fin(q_lo), fin(q_up))));
            } else {
                assert_eq!(q_lo, q_up);
                assert!(matches!(r.conclusion.kind, EmbeddingKind::SumSpace { .. }));
            }
        }
    }
}

#[test]
fn zero_potential() {
    let d = D::new(qi(2), 3).unwrap();
    let r = best("0", "r^1/2", &d);
    assert_eq!(r.origin.range, ExponentSet::open(E::one(), E::int(7)));
    assert_eq!(r.infinity.range, ExponentSet::half_line(E::int(7)));
    assert!(matches!(r.conclusion.kind, EmbeddingKind::SumSpace { .. }));
    let r = best("0", "piecewise[(0,1): r^1; (1,inf): r^-2]", &d);
    assert_eq!(r.conclusion.single(), Some(&ExponentSet::open(E::int(2), E::int(8))));
    // below the threshold −1 − (p−1)N/p the origin gives nothing
    let r = best("0", "r^-3", &d);
    assert!(r.origin.range.is_empty());
    assert!(matches!(r.conclusion.kind, EmbeddingKind::None { .. }));
}

#[test]
fn exponential_potential() {
    let d = D::new(qi(2), 3).unwrap();
    for dd in [q(0, 1), q(1, 2), q(-3, 2)] {
        let top = fin(qi(2) * (&dd + qi(3)));
        let r = best("exp(-r)", &pw(&dd), &d);
        assert_eq!(r.origin.range, ExponentSet::open(E::one(), top.clone()));
        assert_eq!(r.infinity.range, ExponentSet::half_line(top.clone()));
        let r = best("exp(-2r)", &format!("{}*exp(-1/2r)", pw(&dd)), &d);
        assert_eq!(r.conclusion.single(), Some(&ExponentSet::open(E::one(), top)));
    }
}

#[test]
fn singular_exponential_potential() {
    let d = D::new(qi(2), 3).unwrap();
    for b in [q(1, 3), q(1, 2), q(3, 4), qi(1)] {
        let k = format!("exp({}/r)", rs(&b));
        let r = best("exp(1/r)", &k, &d);
        let lo = if qi(2) * &b > qi(1) { qi(2) * &b } else { qi(1) };
        assert_eq!(r.origin.range, ExponentSet::half_line(fin(lo.clone())), "b={b}");
        assert_eq!(r.conclusion.single(), Some(&ExponentSet::half_line(E::int(2))));
        let r = best("piecewise[(0,2): exp(1/r); (2,inf): 0]", &k, &d);
        assert_eq!(r.conclusion.single(), Some(&ExponentSet::half_line(E::int(6))));
        let r = best("asym[0: exp(1/r); inf: r^3]", &k, &d);
        assert_eq!(r.conclusion.single(), Some(&ExponentSet::half_line(fin(lo))));
    }
}

#[test]
fn inverse_square_weight_with_hardy_term() {
    // V = e^-r r^-3, K = r^-1 near 0 and r^-5/2 near ∞
    let d = D::new(qi(2), 3).unwrap();
    let r = best("exp(-r)*r^-3", "piecewise[(0,1): r^-1; (1,inf): r^-5/2]", &d);
    assert_eq!(r.conclusion.single(), Some(&ExponentSet::open(E::one(), E::int(10))));
    // b ≥ p(N + b0 − 1) leaves only a sum of spaces
    let r = best("exp(-r)*r^-3", "piecewise[(0,1): r^-1; (1,inf): r^2]", &d);
    assert_eq!(r.origin.range, ExponentSet::open(E::one(), E::int(10)));
    assert_eq!(r.infinity.range, ExponentSet::half_line(E::int(10)));
    assert!(matches!(r.conclusion.kind, EmbeddingKind::SumSpace { .. }));
}

#[test]
fn power_potential_beats_comparison_ranges() {
    let d = D::new(qi(2), 3).unwrap();
    for an in [1, 16, 32, 48, 63] {
        let a = qi(-4) + q(an, 64);
        for b in [q(-7, 2), q(-11, 4), q(-2, 1), q(1, 2)] {
            for b0 in [&a + q(1, 8), qi(-3), qi(0)] {
                let ex = example35_exponents(&a, &b, &b0, &d).unwrap();
                let k = format!("piecewise[(0,1): {}; (1,inf): {}]", pw(&b0), pw(&b));
                let r = best(&pw(&a), &k, &d);
                assert!(r.origin.range.contains_set(&ex.q1), "a={a} b={b} b0={b0}");
                assert!(r.infinity.range.contains_set(&ex.q2), "a={a} b={b} b0={b0}");
            }
        }
    }
}

fn term_src() -> impl Strategy<Value = String> {
    (1i64..=4, -12i64..=12, -2i64..=2, -2i64..=2).prop_map(|(c, e, s, si)| {
        let mut out = format!("{c}*r^{}", rs(&q(e, 4)));
        if s != 0 || si != 0 {
            out.push_str(&format!("*exp({s}r+{si}/r)").replace("+-", "-"));
        }
        out
    })
}

fn potential_src() -> impl Strategy<Value = String> {
    (term_src(), term_src(), any::<bool>())
        .prop_map(|(a, b, two)| if two { format!("piecewise[(0,1): {a}; (1,inf): {b}]") } else { a })
}

fn dims() -> impl Strategy<Value = D> {
    prop_oneof![Just((qi(2), 3u32)), Just((q(3, 2), 3)), Just((q(5, 2), 4)), Just((qi(3), 5))]
        .prop_map(|(p, n)| D::new(p, n).unwrap())
}

/// `r^γ V ≥ c > 0` near the end, decided straight from the end term.
fn lower_bound_holds(t: &Term<BigInt>, g: &Q, side: Side) -> bool {
    if t.is_zero() {
        return false;
    }
    let e = g + &t.power;
    match side {
        Side::Origin => t.inv_rate > qi(0) || (t.inv_rate == qi(0) && e <= qi(0)),
        Side::Infinity => t.rate > qi(0) || (t.rate == qi(0) && e >= qi(0)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scaling_k_changes_nothing(v in potential_src(), k in potential_src(), c in 1i64..=9, dd in 1i64..=7, d in dims()) {
        let (vs, ks) = (sp(&v), sp(&k));
        let a = best_ranges(&vs, &ks, &d).unwrap();
        let b = best_ranges(&vs, &ks.scaled(&q(c, dd)), &d).unwrap();
        prop_assert_eq!(a.conclusion, b.conclusion);
    }

    #[test]
    fn pure_powers_give_affine_alpha(a in -16i64..=16, b in -16i64..=16, beta in 0i64..=12, side in prop_oneof![Just(Side::Origin), Just(Side::Infinity)]) {
        let d = D::new(qi(2), 3).unwrap();
        let (a, b) = (q(a, 4), q(b, 4));
        let end = analyze_end(&sp(&pw(&a)), &sp(&pw(&b)), side, &d);
        let beta = q(beta, 12);
        prop_assert_eq!(end.alpha_bound(&beta), AlphaBound::Bound(fin(&b - &a * &beta)));
    }

    #[test]
    fn gamma_best_is_sharp_and_downward_closed(v in term_src(), t in 0i64..=8, d in dims()) {
        let vt = sp(&v).end_term(Side::Origin).clone();
        let end = analyze_end(&sp(&v), &sp("1"), Side::Origin, &d);
        let p = d.p().clone();
        match end.gamma_best {
            Some(E::PosInf) => prop_assert!(lower_bound_holds(&vt, &(&p + qi(t * 7)), Side::Origin)),
            Some(E::Finite(g)) => {
                prop_assert!(g >= p);
                let mid = &p + (&g - &p) * q(t, 8);
                prop_assert!(lower_bound_holds(&vt, &mid, Side::Origin));
                prop_assert!(!lower_bound_holds(&vt, &(&g + q(1, 97)), Side::Origin));
            }
            Some(_) => prop_assert!(false, "−∞ at the origin"),
            None => prop_assert!(!lower_bound_holds(&vt, &p, Side::Origin)),
        }
        let vt = sp(&v).end_term(Side::Infinity).clone();
        let end = analyze_end(&sp(&v), &sp("1"), Side::Infinity, &d);
        match end.gamma_best {
            Some(E::NegInf) => prop_assert!(lower_bound_holds(&vt, &(&p - qi(t * 7)), Side::Infinity)),
            Some(E::Finite(g)) => {
                prop_assert!(g <= p);
                let mid = &g + (&p - &g) * q(t, 8);
                prop_assert!(lower_bound_holds(&vt, &mid, Side::Infinity));
                prop_assert!(!lower_bound_holds(&vt, &(&g - q(1, 97)), Side::Infinity));
            }
            Some(_) => prop_assert!(false, "+∞ at infinity"),
            None => prop_assert!(!lower_bound_holds(&vt, &p, Side::Infinity)),
        }
    }

    #[test]
    fn rational_grid_never_beats_exact(v in potential_src(), k in potential_src(), d in dims()) {
        let (vs, ks) = (sp(&v), sp(&k));
        for side in [Side::Origin, Side::Infinity] {
            let end = analyze_end(&vs, &ks, side, &d);
            let exact = best_end(&end, &d).unwrap().range;
            if let Some(g) = grid_range(&end, &d, 16).unwrap() {
                prop_assert!(exact.contains_set(&g), "{side}: exact {exact}, grid {g}");
            }
        }
    }

    #[test]
    fn reported_witnesses_are_admissible(v in potential_src(), k in potential_src(), d in dims()) {
        let r = best_ranges(&sp(&v), &sp(&k), &d).unwrap();
        for end in [&r.origin, &r.infinity] {
            let a = analyze_end(&sp(&v), &sp(&k), end.side, &d);
            for c in &end.contributions {
                for w in &c.witnesses {
                    let bound = a.alpha_bound(w.profile.beta());
                    let ok = w.limit || match (&bound, end.side) {
                        (AlphaBound::Bound(b), Side::Origin) => w.profile.alpha <= *b,
                        (AlphaBound::Bound(b), Side::Infinity) => w.profile.alpha >= *b,
                        (AlphaBound::Infeasible, _) => false,
                    };
                    prop_assert!(ok, "{:?} vs {:?}", w, bound);
                }
            }
        }
    }
}
