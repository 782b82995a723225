//! Virial coefficients by direct functional reversion of the density series.

use num_traits::{One, Zero};

use super::power::{factorial, PowerSeries, Rational};
use crate::error::{Error, Result};

/// Compositional inverse of `f = z + O(z^2)` through `f.order()`, by
/// iterating `g ← z - (f(g) - g)`.
pub fn revert(f: &PowerSeries) -> Result<PowerSeries> {
    if !f.coeff(0).is_zero() || (f.order() >= 1 && !f.coeff(1).is_one()) {
        return Err(Error::Series("reversion needs a series of the form z + O(z^2)".into()));
    }
    let order = f.order();
    let z = PowerSeries::var(order);
    let h = f.sub(&z);
    let mut g = z.clone();
    for _ in 0..order {
        g = z.sub(&h.compose(&g)?);
    }
    Ok(g)
}

/// `β_{n+1}` from `b_1 = 1, b_2, …` by inverting `ρ(z) = z p'(z)` and
/// substituting into `p(z) = Σ b_k z^k / k!`.
pub fn reversion_oracle(b: &[Rational], n: usize) -> Result<Rational> {
    if b.first().map(|b1| b1.is_one()) != Some(true) {
        return Err(Error::InvalidArgument("cluster coefficients must start with b_1 = 1".into()));
    }
    if b.len() < n + 1 {
        return Err(Error::InvalidArgument(format!("beta_{} needs b_1..b_{}, got {} values", n + 1, n + 1, b.len())));
    }
    let order = n + 1;
    let p = PowerSeries::from_fn(order, |k| if k == 0 { Rational::zero() } else { &b[k - 1] / factorial(k) });
    let rho = PowerSeries::from_fn(order, |k| if k == 0 { Rational::zero() } else { &b[k - 1] / factorial(k - 1) });
    let z_of_rho = revert(&rho)?;
    let pressure = p.compose(&z_of_rho)?;
    Ok(pressure.coeff(order) * factorial(order))
}
