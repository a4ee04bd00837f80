//! Independent exact evaluator for the admissible region and thresholds,
//! written straight from the defining inequalities without sharing code with
//! the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::Ratio;

pub type Q = Ratio<BigInt>;

pub fn q(n: i64, d: i64) -> Q {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    q(n, 1)
}

fn mx(a: Q, b: Q) -> Q {
    if a > b {
        a
    } else {
        b
    }
}

fn mn(a: Q, b: Q) -> Q {
    if a < b {
        a
    } else {
        b
    }
}

pub fn base(p: &Q, beta: &Q) -> Q {
    mx(qi(1), p * beta)
}

pub fn qstar(p: &Q, n: &Q, alpha: &Q, beta: &Q) -> Q {
    p * (alpha - p * beta + n) / (n - p)
}

pub fn q_low(p: &Q, n: &Q, alpha: &Q, beta: &Q, gamma: &Q) -> Q {
    p * (alpha - gamma * beta + n) / (n - gamma)
}

pub fn q_high(p: &Q, n: &Q, alpha: &Q, beta: &Q, gamma: &Q) -> Q {
    let one = qi(1);
    p * (p * alpha + (&one - p * beta) * gamma + p * (n - &one)) / (p * (n - &one) - gamma * (p - &one))
}

pub fn astar(p: &Q, n: &Q, beta: &Q) -> Q {
    let one = qi(1);
    mx(p * beta - &one - (p - &one) * n / p, -(&one - beta) * n)
}

/// Membership in the region, each definition evaluated on its own.
pub fn member(p: &Q, n: &Q, alpha: &Q, qq: &Q, beta: &Q, gamma: &Q) -> bool {
    let one = qi(1);
    let gc = p * (n - &one) / (p - &one);
    let b = base(p, beta);
    let def1 = gamma >= p && gamma < n && {
        let up = mn(q_low(p, n, alpha, beta, gamma), q_high(p, n, alpha, beta, gamma));
        &b < qq && qq < &up
    };
    let def2 = gamma == n && &b < qq && qq < &q_high(p, n, alpha, beta, gamma) && *alpha > -(&one - beta) * n;
    let def3 = gamma > n && *gamma < gc && {
        let lo = mx(b.clone(), q_low(p, n, alpha, beta, gamma));
        &lo < qq && *qq < q_high(p, n, alpha, beta, gamma)
    };
    let def4 = *gamma == gc && {
        let lo = mx(b.clone(), q_low(p, n, alpha, beta, gamma));
        &lo < qq && *alpha > -(&one - beta) * gamma
    };
    let def5 = *gamma > gc && {
        let lo = mx(mx(b.clone(), q_low(p, n, alpha, beta, gamma)), q_high(p, n, alpha, beta, gamma));
        &lo < qq
    };
    def1 || def2 || def3 || def4 || def5
}

/// `max{1, pβ, q_*, q_**}` for `γ < N`.
pub fn thm2_direct(p: &Q, n: &Q, alpha: &Q, beta: &Q, gamma: &Q) -> Q {
    mx(mx(base(p, beta), q_low(p, n, alpha, beta, gamma)), q_high(p, n, alpha, beta, gamma))
}
