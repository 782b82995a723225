use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).fold(BigInt::one(), |acc, k| acc * k))
}

/// Truncated formal power series with exact rational coefficients.
///
/// Coefficients up to and including `order` are known; anything beyond is
/// unknown rather than zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series from coefficients `c_0, …, c_order`; must be nonempty.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least its constant term");
        PowerSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        PowerSeries { coeffs: (0..=order).map(f).collect() }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::zero())
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The indeterminate `z`.
    pub fn var(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 1 { Rational::one() } else { Rational::zero() })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, value: Rational) {
        self.coeffs[k] = value;
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        PowerSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::from_fn(order, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.order(), |k| -&self.coeffs[k])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.order(), |k| &self.coeffs[k] * c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("reciprocal of a series with zero constant term".into()));
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for k in 1..=self.order() {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `self ∘ inner`; requires `inner` to have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series("composition with an inner series of nonzero constant term".into()));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        // Horner in the inner series.
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Formal derivative; order drops by one.
    pub fn derive(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |k| &self.coeffs[k + 1] * int(k as i64 + 1))
    }

    /// Antiderivative with zero constant term; order grows by one.
    pub fn integrate(&self) -> Self {
        Self::from_fn(self.order() + 1, |k| {
            if k == 0 {
                Rational::zero()
            } else {
                &self.coeffs[k - 1] / int(k as i64)
            }
        })
    }

    /// `exp(self)`; requires zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Series("exp of a series with nonzero constant term".into()));
        }
        // E' = f' E, solved degree by degree.
        let n = self.order();
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = Rational::one();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += int(j as i64) * &self.coeffs[j] * &out[k - j];
            }
            out[k] = acc / int(k as i64);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `log(self)`; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("log of a series whose constant term is not 1".into()));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(self.derive().div(&self.truncate(self.order() - 1))?.integrate())
    }

    /// `self^r` for rational `r`; requires constant term 1.
    pub fn pow_rational(&self, r: &Rational) -> Result<Self> {
        self.log()?.scale(r).exp()
    }

    /// Degree of the first coefficient where the two series differ, compared
    /// through the smaller order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let order = self.order().min(other.order());
        (0..=order).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn to_f64_partial_sum(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// One line per nonzero coefficient: `c_k z^k` with exact fractions.
impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            any = true;
            let sign = if c.is_negative() { "-" } else { " " };
            writeln!(f, "{sign}{} z^{k}", c.abs())?;
        }
        if !any {
            writeln!(f, " 0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_and_compose() {
        let z2 = PowerSeries::var(4).pow(2);
        assert_eq!(z2.derive(), PowerSeries::new(vec![int(0), int(2), int(0), int(0)]));
        let exp = PowerSeries::var(4).exp().unwrap();
        let composed = exp.compose(&z2).unwrap();
        assert_eq!(composed.coeffs(), &[int(1), int(0), int(1), int(0), rat(1, 2)]);
        assert!(exp.compose(&exp).is_err());
    }

    #[test]
    fn recip_and_log() {
        let one_minus_z = PowerSeries::one(5).sub(&PowerSeries::var(5));
        let geo = one_minus_z.recip().unwrap();
        assert!(geo.coeffs().iter().all(|c| c.is_one()));
        let log = geo.log().unwrap();
        assert_eq!(log.coeff(3), &rat(1, 3));
        assert!(PowerSeries::var(3).recip().is_err());
        let sqrt = geo.pow_rational(&rat(1, 2)).unwrap();
        assert_eq!(sqrt.mul(&sqrt), geo);
    }

    #[test]
    fn integrate_inverts_derive() {
        let s = PowerSeries::from_fn(6, |k| rat(k as i64 * 3 - 1, k as i64 + 2)).sub(&PowerSeries::constant(rat(-1, 2), 6));
        assert_eq!(s.derive().integrate().truncate(6).coeffs()[1..], s.coeffs()[1..]);
    }

    #[test]
    fn display_lists_terms() {
        let s = PowerSeries::new(vec![int(0), int(1), rat(-1, 2)]);
        assert_eq!(s.to_string(), " 1 z^1\n-1/2 z^2\n + O(z^3)");
    }
}
