//! Order relations between pure powers `b^e` that are far too large to
//! materialize.
//!
//! [`compare`] never builds `b^e`. Equality is decided exactly from the prime
//! factorizations of the bases; bases sharing a primitive root are ordered by
//! their rewritten exponents; everything else goes through outward-rounded
//! logarithm enclosures whose precision doubles until they separate.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::lnbound::{ln_u64, LnEnclosure};
use crate::rational::Rational;

/// Starting precision of the logarithm path, in fractional bits.
pub const START_PRECISION: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurePower {
    base: u64,
    exp: BigUint,
}

impl PurePower {
    pub fn new(base: u64, exp: impl Into<BigUint>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("power base must be >= 2, got {base}")));
        }
        Ok(PurePower { base, exp: exp.into() })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exp(&self) -> &BigUint {
        &self.exp
    }

    /// Exact value. Only for callers that have checked the size.
    pub fn materialize(&self) -> BigUint {
        let e: u64 = (&self.exp).try_into().expect("exponent too large to materialize");
        Pow::pow(&BigUint::from(self.base), e)
    }

    /// `(floor(log2 b) * e, (floor(log2 b) + 1) * e)`: the value lies in
    /// `[2^lo, 2^hi)`.
    fn log2_bracket(&self) -> (BigUint, BigUint) {
        let fl = 63 - self.base.leading_zeros() as u64;
        (&self.exp * fl, &self.exp * (fl + 1))
    }
}

/// How a comparison was decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    /// One side has exponent zero.
    Trivial,
    /// Bases are powers of a common primitive root; exponents compared exactly.
    CommonBase,
    /// Log enclosures separated. `precisions` lists every precision tried.
    LogEnclosure { precisions: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub ordering: Ordering,
    pub method: Method,
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `b = root^mult` with `root` not a perfect power.
fn primitive_root(b: u64) -> (u64, u32) {
    let f = factorize(b);
    let mult = f.iter().fold(0u32, |g, &(_, k)| g.gcd(&k));
    let root = f.iter().map(|&(p, k)| p.pow(k / mult)).product();
    (root, mult)
}

/// Exact test of `x == y` via proportional factorization vectors:
/// `x.exp * v_p(x.base) == y.exp * v_p(y.base)` for every prime `p`.
pub fn powers_equal(x: &PurePower, y: &PurePower) -> bool {
    match (x.exp.is_zero(), y.exp.is_zero()) {
        (true, true) => return true,
        (true, false) | (false, true) => return false,
        _ => {}
    }
    let fx = factorize(x.base);
    let fy = factorize(y.base);
    fx.len() == fy.len() && fx.iter().zip(&fy).all(|(&(px, kx), &(py, ky))| px == py && &x.exp * kx == &y.exp * ky)
}

pub fn compare(x: &PurePower, y: &PurePower) -> Ordering {
    compare_traced(x, y).ordering
}

pub fn compare_traced(x: &PurePower, y: &PurePower) -> Comparison {
    match (x.exp.is_zero(), y.exp.is_zero()) {
        (true, true) => return Comparison { ordering: Ordering::Equal, method: Method::Trivial },
        (true, false) => return Comparison { ordering: Ordering::Less, method: Method::Trivial },
        (false, true) => return Comparison { ordering: Ordering::Greater, method: Method::Trivial },
        _ => {}
    }
    let (rx, mx) = primitive_root(x.base);
    let (ry, my) = primitive_root(y.base);
    if rx == ry {
        let ordering = (&x.exp * mx).cmp(&(&y.exp * my));
        return Comparison { ordering, method: Method::CommonBase };
    }
    debug_assert!(!powers_equal(x, y));
    let mut precisions = Vec::new();
    let mut bits = START_PRECISION;
    loop {
        precisions.push(bits);
        let lx = ln_u64(x.base, bits).scale(&x.exp);
        let ly = ln_u64(y.base, bits).scale(&y.exp);
        if let Some(ordering) = lx.separate(&ly) {
            return Comparison { ordering, method: Method::LogEnclosure { precisions } };
        }
        bits *= 2;
    }
}

/// Orders `x` against a positive rational threshold, exactly.
///
/// Bit-length brackets settle the comparison whenever the two sides differ
/// in size by more than a factor of two in bits; otherwise `x` is no larger
/// than the already-materialized threshold and is built outright.
pub fn power_vs_threshold(x: &PurePower, t: &Rational) -> Ordering {
    assert!(t.is_positive(), "threshold must be positive");
    if x.exp.is_zero() {
        return Rational::one().cmp(t);
    }
    let num = t.numer().magnitude();
    let den = t.denom();
    let (bn, bd) = (num.bits() as i128, den.bits() as i128);
    // 2^(bn - 1 - bd) < t < 2^(bn - bd + 1)
    let t_upper = bn - bd + 1;
    let t_lower = bn - bd - 1;
    if t_upper <= 0 {
        return Ordering::Greater;
    }
    let (xlo, xhi) = x.log2_bracket();
    if xlo >= BigUint::from(t_upper as u128) {
        return Ordering::Greater;
    }
    if t_lower >= 0 && xhi <= BigUint::from(t_lower as u128) {
        return Ordering::Less;
    }
    (x.materialize() * den).cmp(num)
}

/// Orders `b^(e/2)` against a positive rational `t` by squaring both sides.
pub fn half_power_vs_threshold(base: u64, exp: &BigUint, t: &Rational) -> Result<Ordering> {
    let x = PurePower::new(base, exp.clone())?;
    Ok(power_vs_threshold(&x, &t.pow(2)))
}

/// Log enclosure of `x` at a given precision, for callers that need the
/// magnitude rather than an ordering.
pub fn ln_power(x: &PurePower, frac_bits: u64) -> LnEnclosure {
    ln_u64(x.base, frac_bits).scale(&x.exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(b: u64, e: u64) -> PurePower {
        PurePower::new(b, e).unwrap()
    }

    #[test]
    fn known_orderings() {
        assert_eq!(compare(&pp(3, 256), &pp(6, 48)), Ordering::Greater);
        assert_eq!(compare(&pp(4, 15), &pp(2, 30)), Ordering::Equal);
        // 65536 ln 2 ~ 45426.1 > 41000 ln 3 ~ 45043.3
        assert_eq!(compare(&pp(2, 65536), &pp(3, 41000)), Ordering::Greater);
    }

    #[test]
    fn threshold_examples() {
        let t = |s: &str| s.parse::<Rational>().unwrap();
        assert_eq!(power_vs_threshold(&pp(6, 1), &t("54")), Ordering::Less);
        assert_eq!(power_vs_threshold(&pp(6, 2), &t("36")), Ordering::Equal);
        assert_eq!(power_vs_threshold(&pp(6, 8), &t("54")), Ordering::Greater);
        assert_eq!(power_vs_threshold(&pp(2, 1), &t("1/3")), Ordering::Greater);
        assert_eq!(power_vs_threshold(&pp(2, 0), &t("1")), Ordering::Equal);
        assert_eq!(power_vs_threshold(&pp(2, 100_000), &t("1000000/3")), Ordering::Greater);
        assert_eq!(power_vs_threshold(&pp(3, 5), &t("243/1")), Ordering::Equal);
        assert_eq!(power_vs_threshold(&pp(3, 5), &t("486/2")), Ordering::Equal);
        assert_eq!(power_vs_threshold(&pp(3, 5), &t("487/2")), Ordering::Less);
    }

    #[test]
    fn half_powers() {
        let t = "36".parse::<Rational>().unwrap();
        assert_eq!(half_power_vs_threshold(6, &BigUint::from(4u32), &t).unwrap(), Ordering::Equal);
        assert_eq!(half_power_vs_threshold(6, &BigUint::from(2u32), &t).unwrap(), Ordering::Less);
        assert_eq!(half_power_vs_threshold(6, &BigUint::from(5u32), &t).unwrap(), Ordering::Greater);
    }

    #[test]
    fn zero_exponents() {
        assert_eq!(compare(&pp(2, 0), &pp(3, 0)), Ordering::Equal);
        assert_eq!(compare(&pp(2, 0), &pp(3, 1)), Ordering::Less);
        assert!(powers_equal(&pp(5, 0), &pp(7, 0)));
    }

    #[test]
    fn factorization() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(primitive_root(64), (2, 6));
        assert_eq!(primitive_root(36), (6, 2));
        assert_eq!(primitive_root(12), (12, 1));
        assert!(PurePower::new(1, 3u32).is_err());
    }

    #[test]
    fn near_ties_refine_precision() {
        // ln(2^62 + 1) - 62 ln 2 ~ 2^-62, below the width of a 64-bit enclosure of 62 ln 2
        let x = pp((1 << 62) + 1, 1000);
        let y = pp(2, 62_000);
        let c = compare_traced(&x, &y);
        assert_eq!(c.ordering, Ordering::Greater);
        match c.method {
            Method::LogEnclosure { precisions } => {
                assert!(precisions.len() >= 2, "{precisions:?}");
                assert_eq!(precisions[0], START_PRECISION);
                assert!(precisions.windows(2).all(|w| w[1] == 2 * w[0]));
            }
            m => panic!("unexpected method {m:?}"),
        }
        assert_eq!(compare(&y, &x), Ordering::Less);
    }
}
