//! A single lacunary series `theta = sum_{n >= 1} g^(-a_n)`.
//!
//! The series is held as its base and exponent schedule; rationals are only
//! materialized on request. Every partial sum and tail over `k in (m, n]`
//! has the g-adic form `N / g^(a_n)` with `N = sum_k g^(a_n - a_k)`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powercmp::factorize;
use crate::rational::{Rational, RationalInterval};
use crate::schedule::PowerSchedule;

/// Largest accepted base; products of two bases must fit in a `u64`.
pub const MAX_BASE: u64 = u32::MAX as u64;

#[derive(Clone, Debug)]
pub struct LacunarySeries {
    base: u64,
    schedule: Arc<PowerSchedule>,
}

/// Reduced fraction `p/q` approximating a series or composite at index `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub n: usize,
    #[serde(with = "decimal_int")]
    pub p: BigInt,
    #[serde(with = "decimal_uint")]
    pub q: BigUint,
}

impl Convergent {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }

    pub(crate) fn from_reduced(n: usize, r: Rational) -> Self {
        let (p, q) = r.into_parts();
        Convergent { n, p, q }
    }
}

pub(crate) mod decimal_int {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod decimal_uint {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl LacunarySeries {
    pub fn new(base: u64, schedule: Arc<PowerSchedule>) -> Result<Self> {
        if !(2..=MAX_BASE).contains(&base) {
            return Err(Error::InvalidArgument(format!("series base must be in 2..={MAX_BASE}, got {base}")));
        }
        Ok(LacunarySeries { base, schedule })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn schedule(&self) -> &Arc<PowerSchedule> {
        &self.schedule
    }

    pub fn primes(&self) -> Vec<u64> {
        factorize(self.base).into_iter().map(|(p, _)| p).collect()
    }

    fn power(&self, e: u64) -> BigUint {
        Pow::pow(&BigUint::from(self.base), e)
    }

    /// `sum_{k=from+1}^{to} g^(a_to - a_k)` and `a_to`.
    fn gadic_sum(&self, from: usize, to: usize) -> Result<(BigUint, u64)> {
        debug_assert!(from < to);
        let mut num = BigUint::one();
        let mut prev = self.schedule.exponent_u64(from + 1)?;
        for k in from + 2..=to {
            let a = self.schedule.exponent_u64(k)?;
            num = num * self.power(a - prev) + 1u32;
            prev = a;
        }
        Ok((num, prev))
    }

    /// `theta_n` as an unreduced rational with denominator `g^(a_n)`.
    pub fn partial_rational(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Ok(Rational::zero());
        }
        let (num, e) = self.gadic_sum(0, n)?;
        Ok(Rational::new(BigInt::from(num), self.power(e)))
    }

    pub fn partial_sum(&self, n: usize) -> Result<Convergent> {
        if n == 0 {
            return Err(Error::InvalidArgument("partial sums start at n = 1".into()));
        }
        let raw = self.partial_rational(n)?;
        Ok(Convergent::from_reduced(n, raw.reduced_by_primes(&self.primes())))
    }

    /// The two-sided bound `(1/g^(a_{n+1}), 2/g^(a_{n+1}))` on `theta - theta_n`.
    pub fn tail_sandwich(&self, n: usize) -> Result<(Rational, Rational)> {
        let den = self.power(self.schedule.exponent_u64(n + 1)?);
        Ok((Rational::unit_fraction(den.clone()), Rational::new(2, den)))
    }

    /// `g^(-a_{n+1}) * g/(g-1)`, a proven bound on `theta - theta_n`.
    pub fn rigorous_tail_upper(&self, n: usize) -> Result<Rational> {
        let a = self.schedule.exponent_u64(n + 1)?;
        Ok(self.geometric_tail(a))
    }

    /// `g^(-m) * g/(g-1)`: bounds `sum_{k > n} g^(-a_k)` whenever `a_{n+1} >= m`,
    /// since consecutive exponents differ by at least one.
    fn geometric_tail(&self, m: u64) -> Rational {
        Rational::unit_fraction(self.power(m - 1) * (self.base - 1))
    }

    /// Bound on `theta - theta_n` that needs only `a_n` within budget: uses
    /// `a_{n+1}` when it is within budget, and `a_{n+1} >= a_n + 1` otherwise.
    pub fn remainder_bound(&self, n: usize) -> Result<Rational> {
        match self.schedule.exponent_u64(n + 1) {
            Ok(a) => Ok(self.geometric_tail(a)),
            Err(Error::ExponentBudgetExceeded { .. }) if n >= 1 => {
                Ok(self.geometric_tail(self.schedule.exponent_u64(n)? + 1))
            }
            Err(e) => Err(e),
        }
    }

    /// `[theta_n, theta_n + remainder_bound(n)]`, which contains `theta`.
    pub fn enclose(&self, n_terms: usize) -> Result<RationalInterval> {
        if n_terms == 0 {
            return Err(Error::InvalidArgument("enclosures need at least one term".into()));
        }
        let lo = self.partial_rational(n_terms)?;
        let hi = &lo + &self.remainder_bound(n_terms)?;
        RationalInterval::new(lo, hi)
    }

    /// Enclosure of `theta - theta_n` from the exact terms `n+1..=depth`
    /// plus the remainder bound beyond `depth`. `depth >= n`.
    pub fn tail_enclosure(&self, n: usize, depth: usize) -> Result<RationalInterval> {
        if depth < n {
            return Err(Error::InvalidArgument(format!("depth {depth} below index {n}")));
        }
        let rem = self.remainder_bound(depth)?;
        if depth == n {
            return RationalInterval::new(Rational::zero(), rem);
        }
        let (num, e) = self.gadic_sum(n, depth)?;
        let lo = Rational::new(BigInt::from(num), self.power(e));
        let hi = &lo + &rem;
        RationalInterval::new(lo, hi)
    }

    /// `theta` truncated toward zero to `digits` decimal places, read off an
    /// enclosure whose endpoints truncate identically.
    pub fn decimal_digits(&self, digits: usize) -> Result<String> {
        if digits == 0 {
            return Err(Error::InvalidArgument("digits must be positive".into()));
        }
        agreeing_digits(digits, |n| self.enclose(n))
    }
}

/// Deepens `enclosure(1), enclosure(2), ...` until both endpoints truncate to
/// the same decimal string. Budget exhaustion becomes `PrecisionUnattainable`.
pub(crate) fn agreeing_digits(
    digits: usize,
    mut enclosure: impl FnMut(usize) -> Result<RationalInterval>,
) -> Result<String> {
    for n in 1.. {
        let iv = match enclosure(n) {
            Ok(iv) => iv,
            Err(Error::ExponentBudgetExceeded { .. }) => return Err(Error::PrecisionUnattainable { digits }),
            Err(e) => return Err(e),
        };
        let lo = iv.lo().to_decimal_trunc(digits);
        if lo == iv.hi().to_decimal_trunc(digits) && lo_hi_same_sign(&iv) {
            return Ok(lo);
        }
        // once the next term no longer shrinks the remainder there is nothing left to gain
        if n > 64 {
            break;
        }
    }
    Err(Error::PrecisionUnattainable { digits })
}

fn lo_hi_same_sign(iv: &RationalInterval) -> bool {
    !(iv.lo().is_negative() && iv.hi().is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn series(g: u64, a1: u64) -> LacunarySeries {
        let s = Arc::new(PowerSchedule::new(a1, Ratio::from_integer(1)).unwrap());
        LacunarySeries::new(g, s).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn partial_sums() {
        let s = series(2, 2);
        let c = s.partial_sum(3).unwrap();
        assert_eq!((c.p.to_string(), c.q.to_string()), ("20481".into(), "65536".into()));
        let c = s.partial_sum(1).unwrap();
        assert_eq!(c.value().to_string(), "1/4");
        let c = series(3, 2).partial_sum(2).unwrap();
        assert_eq!((c.p.to_string(), c.q.to_string()), ("10".into(), "81".into()));
        assert!(s.partial_sum(0).is_err());
    }

    #[test]
    fn sandwich_and_tail_bounds() {
        let s = series(2, 2);
        assert_eq!(s.tail_sandwich(1).unwrap(), (q("1/16"), q("2/16")));
        assert_eq!(s.tail_sandwich(2).unwrap(), (q("1/65536"), q("2/65536")));
        assert_eq!(s.rigorous_tail_upper(1).unwrap(), q("1/8"));
        let t = series(3, 2);
        assert_eq!(t.rigorous_tail_upper(1).unwrap(), q("1/54"));
        // 3^-4 + 3^-16 + 3^-256 < 1/54
        let tail = t.tail_enclosure(1, 3).unwrap();
        assert!(*tail.hi() < q("1/54"));
        assert!(*tail.lo() > q("123456/10000000"));
    }

    #[test]
    fn enclosures_nest() {
        let s = series(2, 2);
        assert_eq!(s.enclose(1).unwrap(), RationalInterval::new(q("1/4"), q("3/8")).unwrap());
        let e1 = s.enclose(1).unwrap();
        let e2 = s.enclose(2).unwrap();
        let e3 = s.enclose(3).unwrap();
        assert!(e3.is_subset_of(&e2) && e2.is_subset_of(&e1));
        assert_eq!(e2.width(), q("2/65536"));
    }

    #[test]
    fn remainder_falls_back_past_budget() {
        let s = series(2, 2);
        // a_6 = 2^32 is past the default budget; the bound uses a_5 + 1
        let r = s.remainder_bound(5).unwrap();
        assert_eq!(r, Rational::unit_fraction(BigUint::one() << 65536u32));
        assert!(s.rigorous_tail_upper(5).is_err());
        let e5 = s.enclose(5).unwrap();
        assert!(e5.is_subset_of(&s.enclose(4).unwrap()));
    }

    #[test]
    fn decimal_expansions() {
        assert_eq!(series(2, 2).decimal_digits(10).unwrap(), "0.3125152587");
        assert_eq!(series(3, 2).decimal_digits(6).unwrap(), "0.123456");
        assert!(series(5, 3).decimal_digits(1).unwrap().starts_with("0."));
        assert!(series(2, 2).decimal_digits(0).is_err());
    }

    #[test]
    fn decimal_precision_limited_by_budget() {
        let s = Arc::new(PowerSchedule::with_budget(2, Ratio::from_integer(1), 4).unwrap());
        let s = LacunarySeries::new(2, s).unwrap();
        // terms up to 2^-16 only; the remainder stays near 2^-16
        assert!(s.decimal_digits(3).is_ok());
        assert_eq!(s.decimal_digits(12), Err(Error::PrecisionUnattainable { digits: 12 }));
    }
}
