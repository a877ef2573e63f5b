//! Exact rationals over `num-bigint` integers.
//!
//! Arithmetic never normalizes: denominators here are routinely powers like
//! `g^65536`, and a gcd after every operation would dominate the cost. Call
//! [`Rational::reduced`] (or [`Rational::reduced_by_primes`] when the prime
//! support of the denominator is known) when a canonical form is needed.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Rational {
    num: BigInt,
    den: BigUint,
}

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigUint>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational { num: num.into(), den }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational { num: n.into(), den: BigUint::one() }
    }

    /// `1 / den`.
    pub fn unit_fraction(den: impl Into<BigUint>) -> Self {
        Rational::new(BigInt::one(), den)
    }

    pub fn zero() -> Self {
        Rational::from_integer(0)
    }

    pub fn one() -> Self {
        Rational::from_integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn into_parts(self) -> (BigInt, BigUint) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational { num: self.num.abs(), den: self.den.clone() }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let (sign, mag) = (self.num.sign(), self.num.magnitude().clone());
        Some(Rational { num: BigInt::from_biguint(sign, self.den.clone()), den: mag })
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational { num: Pow::pow(&self.num, e), den: Pow::pow(&self.den, e) }
    }

    /// Canonical form with `gcd(num, den) = 1`.
    pub fn reduced(&self) -> Self {
        let g = self.num.magnitude().gcd(&self.den);
        if g.is_one() {
            return self.clone();
        }
        Rational { num: BigInt::from_biguint(self.num.sign(), self.num.magnitude() / &g), den: &self.den / &g }
    }

    /// Cancels common factors drawn from `primes` only. Equals [`reduced`]
    /// whenever every prime dividing the denominator is listed.
    ///
    /// [`reduced`]: Rational::reduced
    pub fn reduced_by_primes(&self, primes: &[u64]) -> Self {
        let mut num = self.num.magnitude().clone();
        let mut den = self.den.clone();
        for &p in primes {
            let p = BigUint::from(p);
            loop {
                if num.is_zero() {
                    break;
                }
                let (qd, rd) = den.div_rem(&p);
                if !rd.is_zero() {
                    break;
                }
                let (qn, rn) = num.div_rem(&p);
                if !rn.is_zero() {
                    break;
                }
                num = qn;
                den = qd;
            }
        }
        if num.is_zero() {
            den = BigUint::one();
        }
        Rational { num: BigInt::from_biguint(self.num.sign(), num), den }
    }

    /// `floor(self)`.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&BigInt::from(self.den.clone()))
    }

    /// Decimal expansion truncated toward zero to `digits` places.
    pub fn to_decimal_trunc(&self, digits: usize) -> String {
        let scale = Pow::pow(&BigUint::from(10u32), digits);
        let scaled = (self.num.magnitude() * scale) / &self.den;
        let mut s = scaled.to_str_radix(10);
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        let split = s.len() - digits;
        let sign = if self.num.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{s}")
        } else {
            format!("{sign}{}.{}", &s[..split], &s[split..])
        }
    }

    /// `self^(1/root)` in scientific notation, truncated toward zero to
    /// `sig` significant digits. Decided entirely by exact comparisons.
    pub fn root_scientific(&self, root: u32, sig: u32) -> String {
        assert!(root >= 1 && sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        if self.is_negative() {
            assert!(root == 1, "even root of a negative value");
            return format!("-{}", self.abs().root_scientific(1, sig));
        }
        let ten = |e: i64| -> Rational {
            let p = Pow::pow(&BigUint::from(10u32), e.unsigned_abs());
            if e >= 0 {
                Rational::from_integer(BigInt::from(p))
            } else {
                Rational::unit_fraction(p)
            }
        };
        // 10^(e*root) <= self < 10^((e+1)*root)
        let bits = self.num.magnitude().bits() as i64 - self.den.bits() as i64;
        let mut e = (bits as f64 * std::f64::consts::LOG10_2 / root as f64).floor() as i64;
        while ten(e * root as i64) > *self {
            e -= 1;
        }
        while ten((e + 1) * root as i64) <= *self {
            e += 1;
        }
        // largest mantissa m with (m * 10^(e - sig + 1))^root <= self
        let shift = e - sig as i64 + 1;
        let fits = |m: u64| -> bool {
            let v = &Rational::from_integer(m) * &ten(shift);
            v.pow(root) <= *self
        };
        let (mut lo, mut hi) = (10u64.pow(sig - 1), 10u64.pow(sig));
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let digits = lo.to_string();
        let mantissa = if digits.len() > 1 { format!("{}.{}", &digits[..1], &digits[1..]) } else { digits };
        format!("{mantissa}e{e}")
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl From<num_rational::Ratio<u64>> for Rational {
    fn from(r: num_rational::Ratio<u64>) -> Self {
        Rational::new(BigInt::from(*r.numer()), BigUint::from(*r.denom()))
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num.sign(), other.num.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        if self.den == other.den {
            return self.num.cmp(&other.num);
        }
        let lhs = &self.num * BigInt::from(other.den.clone());
        let rhs = &other.num * BigInt::from(self.den.clone());
        lhs.cmp(&rhs)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if self.den == rhs.den {
            return Rational { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        Rational {
            num: &self.num * BigInt::from(rhs.den.clone()) + &rhs.num * BigInt::from(self.den.clone()),
            den: &self.den * &rhs.den,
        }
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Rational) -> Rational {
        let inv = rhs.recip().expect("division by zero");
        self * &inv
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let den: BigUint = d.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational { num, den })
    }
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

/// Serialized reduced, as `{"num": "<decimal>", "den": "<decimal>"}`.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let r = self.reduced();
        RationalRepr { num: r.num.to_str_radix(10), den: r.den.to_str_radix(10) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RationalRepr::deserialize(deserializer)?;
        let num: BigInt = repr.num.parse().map_err(D::Error::custom)?;
        let den: BigUint = repr.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational { num, den })
    }
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalInterval {
    lo: Rational,
    hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn is_subset_of(&self, other: &RationalInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &RationalInterval) -> RationalInterval {
        RationalInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn shift(&self, by: &Rational) -> RationalInterval {
        RationalInterval { lo: &self.lo + by, hi: &self.hi + by }
    }

    /// Product of two intervals with non-negative endpoints.
    pub fn mul_nonneg(&self, other: &RationalInterval) -> RationalInterval {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        RationalInterval { lo: &self.lo * &other.lo, hi: &self.hi * &other.hi }
    }

    /// Quotient of a non-negative interval by a strictly positive one.
    pub fn div_positive(&self, other: &RationalInterval) -> RationalInterval {
        debug_assert!(!self.lo.is_negative() && other.lo.is_positive());
        RationalInterval { lo: &self.lo / &other.hi, hi: &self.hi / &other.lo }
    }

    /// Enclosure of `{|x| : x in self}`.
    pub fn abs(&self) -> RationalInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            RationalInterval { lo: -&self.hi, hi: -&self.lo }
        } else {
            let hi = std::cmp::max(-&self.lo, self.hi.clone());
            RationalInterval { lo: Rational::zero(), hi }
        }
    }

    /// Exact lower bound on `|x - y|` over both intervals, `None` if they overlap.
    pub fn separation(&self, other: &RationalInterval) -> Option<Rational> {
        if self.lo > other.hi {
            Some(&self.lo - &other.hi)
        } else if other.lo > self.hi {
            Some(&other.lo - &self.hi)
        } else {
            None
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
