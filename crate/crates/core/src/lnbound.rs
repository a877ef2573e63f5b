//! Outward-rounded enclosures of natural logarithms in fixed point.
//!
//! An enclosure at `frac_bits = F` is a pair of integers `(lo, hi)` with
//! `lo / 2^F <= ln x <= hi / 2^F`. Every truncation is rounded away from the
//! true value, so the bounds hold unconditionally.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

const GUARD_BITS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LnEnclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub frac_bits: u64,
}

impl LnEnclosure {
    /// `[lo, hi] * k` for a non-negative integer `k`.
    pub fn scale(&self, k: &BigUint) -> LnEnclosure {
        let k = BigInt::from(k.clone());
        LnEnclosure { lo: &self.lo * &k, hi: &self.hi * &k, frac_bits: self.frac_bits }
    }

    pub fn add(&self, other: &LnEnclosure) -> LnEnclosure {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        LnEnclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, frac_bits: self.frac_bits }
    }

    pub fn sub(&self, other: &LnEnclosure) -> LnEnclosure {
        debug_assert_eq!(self.frac_bits, other.frac_bits);
        LnEnclosure { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo, frac_bits: self.frac_bits }
    }

    pub fn lo_rational(&self) -> Rational {
        Rational::new(self.lo.clone(), BigUint::one() << self.frac_bits)
    }

    pub fn hi_rational(&self) -> Rational {
        Rational::new(self.hi.clone(), BigUint::one() << self.frac_bits)
    }

    /// Rigorous ordering of two enclosures, or `None` while they overlap.
    pub fn separate(&self, other: &LnEnclosure) -> Option<std::cmp::Ordering> {
        if self.lo > other.hi {
            Some(std::cmp::Ordering::Greater)
        } else if self.hi < other.lo {
            Some(std::cmp::Ordering::Less)
        } else {
            None
        }
    }
}

/// `2^W * atanh(p/q)` for `0 <= p/q <= 1/3`, as `(lower, upper)`.
fn atanh_scaled(p: &BigUint, q: &BigUint, w: u64) -> (BigUint, BigUint) {
    if p.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let p2 = p * p;
    let q2 = q * q;
    let one_scaled = BigUint::one() << w;
    let mut t_lo = (&one_scaled * p) / q;
    let mut t_hi = (&one_scaled * p).div_ceil(q);
    let mut sum_lo = BigUint::zero();
    let mut sum_hi = BigUint::zero();
    let mut j = 0u64;
    // once t_hi <= 1 the remaining terms sum to at most 1/(1 - 1/9) < 2 units
    while t_hi > BigUint::one() {
        let k = BigUint::from(2 * j + 1);
        sum_lo += &t_lo / &k;
        sum_hi += t_hi.div_ceil(&k);
        t_lo = (&t_lo * &p2) / &q2;
        t_hi = (&t_hi * &p2).div_ceil(&q2);
        j += 1;
    }
    sum_hi += 2u32;
    (sum_lo, sum_hi)
}

fn floor_shift(x: &BigInt, bits: u64) -> BigInt {
    x.div_floor(&(BigInt::one() << bits))
}

fn ceil_shift(x: &BigInt, bits: u64) -> BigInt {
    -((-x).div_floor(&(BigInt::one() << bits)))
}

/// `ln 2`, at `w` working bits.
fn ln2_work(w: u64) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_scaled(&BigUint::one(), &BigUint::from(3u32), w);
    (BigInt::from(lo) * 2, BigInt::from(hi) * 2)
}

/// `ln m` for `m >= 1` at `w` working bits, via `k ln 2 + 2 atanh((m - 2^k)/(m + 2^k))`.
fn ln_work(m: &BigUint, w: u64) -> (BigInt, BigInt) {
    let k = m.bits() - 1;
    let pow = BigUint::one() << k;
    let (l2lo, l2hi) = ln2_work(w);
    let base_lo = &l2lo * BigInt::from(k);
    let base_hi = &l2hi * BigInt::from(k);
    if *m == pow {
        return (base_lo, base_hi);
    }
    let (alo, ahi) = atanh_scaled(&(m - &pow), &(m + &pow), w);
    (base_lo + BigInt::from(alo) * 2, base_hi + BigInt::from(ahi) * 2)
}

/// Enclosure of `ln n` for `n >= 1` at `frac_bits` fractional bits.
pub fn ln_biguint(n: &BigUint, frac_bits: u64) -> LnEnclosure {
    assert!(!n.is_zero(), "ln(0)");
    let w = frac_bits + GUARD_BITS;
    // keep w + 64 leading bits; the discarded tail only widens the interval
    let keep = w + 64;
    let (lo, hi) = if n.bits() <= keep {
        ln_work(n, w)
    } else {
        let s = n.bits() - keep;
        let top = n >> s;
        let (l2lo, l2hi) = ln2_work(w);
        let (lo, _) = ln_work(&top, w);
        let (_, hi) = ln_work(&(&top + 1u32), w);
        (lo + &l2lo * BigInt::from(s), hi + &l2hi * BigInt::from(s))
    };
    LnEnclosure { lo: floor_shift(&lo, GUARD_BITS), hi: ceil_shift(&hi, GUARD_BITS), frac_bits }
}

pub fn ln_u64(n: u64, frac_bits: u64) -> LnEnclosure {
    ln_biguint(&BigUint::from(n), frac_bits)
}

/// Enclosure of `ln x` for a positive rational `x`.
pub fn ln_rational(x: &Rational, frac_bits: u64) -> LnEnclosure {
    assert!(x.is_positive(), "ln of a non-positive rational");
    let num = ln_biguint(x.numer().magnitude(), frac_bits);
    let den = ln_biguint(x.denom(), frac_bits);
    num.sub(&den)
}
