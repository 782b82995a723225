//! Falling factorials, partial Bell and potential polynomials, and the
//! cluster-to-virial conversion by Lagrange inversion.

use num_traits::{One, Zero};

use super::power::{factorial, int, PowerSeries, Rational};
use crate::error::{Error, Result};

/// `x (x-1) ⋯ (x-k+1)`.
pub fn falling_factorial(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (x - int(i as i64)))
}

/// Generalized binomial coefficient `x^{k̲} / k!`.
pub fn gen_binomial(x: &Rational, k: usize) -> Rational {
    falling_factorial(x, k) / factorial(k)
}

/// Multiplicity vectors `(k_1, …, k_m)` with `Σ k_i = k` and `Σ i k_i = n`.
fn block_profiles(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(size: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 && k == 0 {
            out.push(cur.clone());
            return;
        }
        if size == 0 || k == 0 || n == 0 {
            return;
        }
        for count in (0..=(n / size).min(k)).rev() {
            cur[size - 1] = count;
            go(size - 1, n - size * count, k - count, cur, out);
        }
        cur[size - 1] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    go(n, n, k, &mut cur, &mut out);
    out
}

/// Partial Bell polynomial `B_{n,k}(x_1, …, x_{n-k+1})` by its explicit sum;
/// `xs[0]` is `x_1`.
pub fn bell_partial(n: usize, k: usize, xs: &[Rational]) -> Result<Rational> {
    if n == 0 && k == 0 {
        return Ok(Rational::one());
    }
    if k == 0 || k > n {
        return if k == 0 || n == 0 {
            Ok(Rational::zero())
        } else {
            Err(Error::InvalidArgument(format!("B_{{{n},{k}}} needs 1 <= k <= n")))
        };
    }
    if xs.len() < n - k + 1 {
        return Err(Error::InvalidArgument(format!(
            "B_{{{n},{k}}} needs {} arguments, got {}",
            n - k + 1,
            xs.len()
        )));
    }
    let mut total = Rational::zero();
    for profile in block_profiles(n, k) {
        let mut term = factorial(n);
        for (idx, &ki) in profile.iter().enumerate() {
            if ki == 0 {
                continue;
            }
            let i = idx + 1;
            term /= factorial(ki) * num_traits::pow(factorial(i), ki);
            term *= num_traits::pow(xs[idx].clone(), ki);
        }
        total += term;
    }
    Ok(total)
}

/// Potential polynomial `P_n^{(r)} = Σ_k r^{k̲} B_{n,k}(xs)`.
pub fn potential_polynomial(n: usize, r: &Rational, xs: &[Rational]) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("potential polynomials start at n = 1".into()));
    }
    let mut total = Rational::zero();
    for k in 1..=n {
        total += falling_factorial(r, k) * bell_partial(n, k, xs)?;
    }
    Ok(total)
}

/// `P_n^{(r)}` read off the series `(1 + Σ x_j t^j / j!)^r`.
pub fn potential_by_series(n: usize, r: &Rational, xs: &[Rational]) -> Result<Rational> {
    let base = PowerSeries::from_fn(n, |j| if j == 0 { Rational::one() } else { &xs[j - 1] / factorial(j) });
    Ok(base.pow_rational(r)?.coeff(n) * factorial(n))
}

fn check_normalized(b: &[Rational], n: usize) -> Result<()> {
    if b.first().map(|b1| b1.is_one()) != Some(true) {
        return Err(Error::InvalidArgument("cluster coefficients must start with b_1 = 1".into()));
    }
    if b.len() < n + 1 {
        return Err(Error::InvalidArgument(format!("beta_{} needs b_1..b_{}, got {} values", n + 1, n + 1, b.len())));
    }
    Ok(())
}

/// `β_{n+1} = Σ_k binom(-n, k) k! B_{n,k}(b_2, …, b_{n+1})`, with `b[0] = b_1`.
pub fn lagrange_virial(b: &[Rational], n: usize) -> Result<Rational> {
    check_normalized(b, n)?;
    if n == 0 {
        return Ok(Rational::one());
    }
    let minus_n = -int(n as i64);
    let mut total = Rational::zero();
    for k in 1..=n {
        total += gen_binomial(&minus_n, k) * factorial(k) * bell_partial(n, k, &b[1..])?;
    }
    Ok(total)
}

/// Exact `Σ_{k=1}^m binom(-n,k) binom(m-1,k-1) = (-1)^m binom(n,m)`.
pub fn binomial_identity_check(n: usize, m: usize) -> bool {
    if m == 0 || m > n {
        return false;
    }
    let minus_n = -int(n as i64);
    let lhs: Rational = (1..=m)
        .map(|k| gen_binomial(&minus_n, k) * gen_binomial(&int(m as i64 - 1), k - 1))
        .fold(Rational::zero(), |a, b| a + b);
    let sign = if m % 2 == 0 { int(1) } else { int(-1) };
    lhs == sign * gen_binomial(&int(n as i64), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::power::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn falling_and_binomial() {
        assert_eq!(gen_binomial(&int(-2), 2), int(3));
        assert_eq!(gen_binomial(&rat(7, 3), 0), int(1));
        assert_eq!(falling_factorial(&int(-5), 1), int(-5));
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell_partial(3, 1, &ints(&[5, 7, 11])).unwrap(), int(11));
        assert_eq!(bell_partial(3, 2, &ints(&[1, 1, 1])).unwrap(), int(3));
        assert_eq!(bell_partial(4, 2, &ints(&[1, 1, 1])).unwrap(), int(7));
        assert!(bell_partial(2, 3, &ints(&[1, 1])).is_err());
        // Stirling numbers of the second kind.
        let ones = ints(&[1; 8]);
        let s: Vec<Rational> = (1..=5).map(|k| bell_partial(5, k, &ones).unwrap()).collect();
        assert_eq!(s, ints(&[1, 15, 25, 10, 1]));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential_polynomial(1, &int(3), &ints(&[2])).unwrap(), int(6));
        assert_eq!(potential_polynomial(2, &int(-1), &ints(&[1, 1])).unwrap(), int(1));
        let xs = vec![rat(1, 3), rat(-2, 5), int(4), rat(1, 7), int(-1)];
        for n in 1..=5 {
            let r = rat(-3, 2);
            assert_eq!(potential_polynomial(n, &r, &xs).unwrap(), potential_by_series(n, &r, &xs).unwrap());
        }
    }

    #[test]
    fn lagrange_small() {
        let b = ints(&[1, -1, 2]);
        assert_eq!(lagrange_virial(&b, 1).unwrap(), int(1));
        assert_eq!(lagrange_virial(&b, 2).unwrap(), int(2));
        assert!(lagrange_virial(&ints(&[2, 1]), 1).is_err());
    }

    #[test]
    fn binomial_identity_small() {
        assert!(binomial_identity_check(2, 1));
        assert!(binomial_identity_check(3, 3));
        assert!(!binomial_identity_check(3, 0));
    }
}
