//! Tree generating functions and the identities that tie them together.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::power::{factorial, int, PowerSeries, Rational};

fn nat_pow(n: usize, e: usize) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(n), e))
}

/// `T•(z) = Σ n^(n-1) z^n / n!`, rooted labeled trees.
pub fn rooted_tree_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |n| if n == 0 { Rational::zero() } else { nat_pow(n, n - 1) / factorial(n) })
}

/// `T(z) = Σ n^(n-2) z^n / n!`, labeled trees.
pub fn tree_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |n| match n {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => nat_pow(n, n - 2) / factorial(n),
    })
}

/// `T••(z) = Σ n^n z^n / n!`, doubly rooted labeled trees.
pub fn doubly_rooted_tree_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |n| if n == 0 { Rational::zero() } else { nat_pow(n, n) / factorial(n) })
}

/// `T1(z) = z + Σ_{n≥1} n^n z^(n+1) / (n+1)!`, non-splittable trees weighted
/// by `z^(vertices-1) / (vertices-1)!`.
pub fn t1_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| match k {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => nat_pow(k - 1, k - 1) / factorial(k),
    })
}

/// `s e^{-s}` as a series in `s`.
fn s_exp_minus_s(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |k| {
        if k == 0 {
            Rational::zero()
        } else {
            let sign = if (k - 1) % 2 == 0 { int(1) } else { int(-1) };
            sign / factorial(k - 1)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
    pub max_degree: usize,
    pub first_failure: Option<usize>,
}

impl IdentityCheck {
    fn compare(name: &'static str, lhs: PowerSeries, rhs: PowerSeries, order: usize) -> Self {
        let lhs = lhs.truncate(order);
        let rhs = rhs.truncate(order);
        let first_failure = lhs.first_difference(&rhs);
        IdentityCheck { name, passed: first_failure.is_none(), max_degree: order, first_failure }
    }
}

/// All eight generating-function identities through degree `order`.
pub fn identity_suite(order: usize) -> Vec<IdentityCheck> {
    identity_suite_with(order, &t1_series(order + 1))
}

/// The suite with a caller-supplied `T1` of order at least `order + 1`, so a
/// corrupted series can serve as a negative control.
pub fn identity_suite_with(order: usize, t1: &PowerSeries) -> Vec<IdentityCheck> {
    let work = order + 2;
    let rooted = rooted_tree_series(work);
    let tree = tree_series(work);
    let one = PowerSeries::one(work);
    let z = PowerSeries::var(work);
    let t_prime = tree.derive();
    let mut out = Vec::with_capacity(8);

    let half = Rational::new(BigInt::one(), BigInt::from(2));
    out.push(IdentityCheck::compare("dissymmetry", rooted.sub(&rooted.mul(&rooted).scale(&half)), tree.clone(), order));

    let doubly = one.sub(&rooted).recip().expect("unit constant term").mul(&rooted);
    out.push(IdentityCheck::compare("doubly-rooted", doubly_rooted_tree_series(work), doubly, order));

    let functional = z.mul(&rooted.exp().expect("zero constant term"));
    out.push(IdentityCheck::compare("functional-equation", rooted.clone(), functional, order));

    let second = t_prime.derive();
    let zt = z.truncate(t_prime.order()).mul(&t_prime);
    let rhs = t_prime.mul(&t_prime).div(&one.truncate(zt.order()).sub(&zt)).expect("unit constant term");
    out.push(IdentityCheck::compare("second-derivative", second, rhs, order));

    let t1_from_t = one.truncate(t_prime.order()).sub(&t_prime.recip().expect("unit constant term"));
    out.push(IdentityCheck::compare("t1-in-t", t1.clone(), t1_from_t, order));

    let t1_prime = t1.derive();
    let one_minus_rooted = one.sub(&rooted).recip().expect("unit constant term");
    out.push(IdentityCheck::compare("t1-prime-rooted", t1_prime.clone(), one_minus_rooted, order));

    let sigma = s_exp_minus_s(work);
    let geometric = PowerSeries::from_fn(work, |_| Rational::one());
    out.push(IdentityCheck::compare(
        "relation1",
        t1_prime.compose(&sigma).expect("zero constant term"),
        geometric,
        order,
    ));

    let one_minus_exp = PowerSeries::from_fn(work, |k| {
        if k == 0 {
            Rational::zero()
        } else {
            let sign = if k % 2 == 1 { int(1) } else { int(-1) };
            sign / factorial(k)
        }
    });
    out.push(IdentityCheck::compare(
        "relation2",
        t1.compose(&sigma).expect("zero constant term"),
        one_minus_exp,
        order,
    ));
    out
}
