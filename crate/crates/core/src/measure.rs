//! Approximation-measure bounds `|theta - xi| > 1/(2 H d^2)^(1 + 4d)` for an
//! algebraic `xi` of degree `d` and naive height `H`, the index `n1` that
//! brackets `2 H d^2` between consecutive half-powers of `g1 g2`, and exact
//! checks against concrete algebraic targets.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::powercmp::{power_vs_threshold, PurePower};
use crate::rational::{Rational, RationalInterval};
use crate::witness::{CompositeNumber, Order};

/// An algebraic number described by degree and naive height, optionally
/// with a rational enclosure of a concrete value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicTarget {
    degree: u32,
    height: BigUint,
    value_enclosure: Option<RationalInterval>,
}

impl AlgebraicTarget {
    pub fn new(degree: u32, height: impl Into<BigUint>) -> Result<Self> {
        let height = height.into();
        if degree < 2 {
            return Err(Error::InvalidArgument(format!("degree must be >= 2, got {degree}")));
        }
        if height.is_zero() {
            return Err(Error::InvalidArgument("height must be >= 1".into()));
        }
        Ok(AlgebraicTarget { degree, height, value_enclosure: None })
    }

    pub fn with_enclosure(mut self, enclosure: RationalInterval) -> Self {
        self.value_enclosure = Some(enclosure);
        self
    }

    /// Target for the root of `coeffs` (constant term first) inside `bracket`.
    /// Degree and height are read off the polynomial, which is assumed minimal.
    pub fn from_polynomial(coeffs: &[BigInt], bracket: &RationalInterval, width: &Rational) -> Result<Self> {
        let coeffs = trim(coeffs);
        let height = coeffs.iter().map(|c| c.magnitude().clone()).max().unwrap_or_default();
        let degree = u32::try_from(coeffs.len().saturating_sub(1))
            .map_err(|_| Error::InvalidArgument("polynomial degree too large".into()))?;
        let enclosure = root_enclosure(coeffs, bracket, width)?;
        Ok(Self::new(degree, height)?.with_enclosure(enclosure))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn height(&self) -> &BigUint {
        &self.height
    }

    pub fn value_enclosure(&self) -> Option<&RationalInterval> {
        self.value_enclosure.as_ref()
    }

    /// `2 H d^2`.
    pub fn scale(&self) -> BigUint {
        &self.height * 2u32 * self.degree * self.degree
    }
}

fn trim(coeffs: &[BigInt]) -> &[BigInt] {
    let len = coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &coeffs[..len]
}

/// `1 / (H d^2 q^d)`.
pub fn liouville_gap_bound(t: &AlgebraicTarget, q: &BigUint) -> Result<Rational> {
    if q.is_zero() {
        return Err(Error::InvalidArgument("q must be >= 1".into()));
    }
    let den = &t.height * t.degree * t.degree * Pow::pow(q, t.degree);
    Ok(Rational::unit_fraction(den))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRow {
    pub n: usize,
    /// `(g1 g2)^(a_n)` against `(2 H d^2)^2`; `less` is the required outcome.
    pub left: Order,
    /// `(2 H d^2)^2` against `(g1 g2)^(a_{n+1})`; `less` is the required outcome.
    pub right: Order,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum BracketOutcome {
    Found { n1: usize },
    Tie { n: usize, side: Side },
    NotFound,
}

/// Consistency checks at the bracketing index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketConsequences {
    /// `(g1 g2)^(a_{n1+1}) > 2 H d^2 (g1 g2)^(d a_{n1})`.
    pub gap_exceeds_scaled_power: bool,
    /// `a_{n1+1} > 2 d a_{n1}`, i.e. `(g1 g2)^(a_{n1+1}/2) > (g1 g2)^(d a_{n1})`.
    pub half_power_dominates: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracketing {
    /// `2 H d^2`.
    #[serde(with = "crate::series::decimal_uint")]
    pub scale: BigUint,
    pub rows: Vec<BracketRow>,
    pub outcome: BracketOutcome,
    pub consequences: Option<BracketConsequences>,
}

/// Scans `n = 1..=n_max` for `(g1 g2)^(a_n / 2) < 2 H d^2 < (g1 g2)^(a_{n+1} / 2)`,
/// squaring both sides. A tie on the right at `n` is the left comparison at
/// `n + 1`, so it is reported there unless `n = n_max`.
pub fn scan_n1(c: &CompositeNumber, t: &AlgebraicTarget, n_max: usize) -> Result<Bracketing> {
    let pair = c.s1().base() * c.s2().base();
    let scale = t.scale();
    let square = Rational::from(&scale * &scale);
    let mut rows = Vec::new();
    let mut outcome = BracketOutcome::NotFound;
    for n in 1..=n_max {
        let an = c.schedule().exponent(n)?;
        let next = c.schedule().exponent(n + 1)?;
        let left = power_vs_threshold(&PurePower::new(pair, an)?, &square);
        let right = power_vs_threshold(&PurePower::new(pair, next)?, &square).reverse();
        rows.push(BracketRow { n, left: left.into(), right: right.into() });
        if left == Ordering::Equal {
            outcome = BracketOutcome::Tie { n, side: Side::Left };
            break;
        }
        if right == Ordering::Equal && n == n_max {
            outcome = BracketOutcome::Tie { n, side: Side::Right };
            break;
        }
        if left == Ordering::Less && right == Ordering::Less {
            outcome = BracketOutcome::Found { n1: n };
            break;
        }
    }
    let consequences = match outcome {
        BracketOutcome::Found { n1 } => Some(consequences(c, t, n1)?),
        _ => None,
    };
    Ok(Bracketing { scale, rows, outcome, consequences })
}

fn consequences(c: &CompositeNumber, t: &AlgebraicTarget, n1: usize) -> Result<BracketConsequences> {
    let pair = c.s1().base() * c.s2().base();
    let an = c.schedule().exponent(n1)?;
    let next = c.schedule().exponent(n1 + 1)?;
    let d_an = &an * t.degree;
    let gap_exceeds_scaled_power = if next >= d_an {
        let x = PurePower::new(pair, &next - &d_an)?;
        power_vs_threshold(&x, &Rational::from(t.scale())) == Ordering::Greater
    } else {
        false
    };
    Ok(BracketConsequences { gap_exceeds_scaled_power, half_power_dominates: next > d_an * 2u32 })
}

/// Like [`scan_n1`], but ties and exhaustion become errors.
pub fn find_n1(c: &CompositeNumber, t: &AlgebraicTarget, n_max: usize) -> Result<Bracketing> {
    let b = scan_n1(c, t, n_max)?;
    match b.outcome {
        BracketOutcome::Found { .. } => Ok(b),
        BracketOutcome::Tie { n, side } => Err(Error::TieEncountered { n, side }),
        BracketOutcome::NotFound => Err(Error::NotFound { n_max }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureBound {
    pub degree: u32,
    #[serde(with = "crate::series::decimal_uint")]
    pub height: BigUint,
    /// `2 H d^2`.
    #[serde(with = "crate::series::decimal_uint")]
    pub base: BigUint,
    /// `1 + 4d`.
    pub exponent: u32,
    pub bound: Rational,
    /// The bound with `H` left symbolic, e.g. `1/(18H)^13`.
    pub closed_form: String,
    /// The bound with `H` substituted, e.g. `1/(18)^13`.
    pub instantiated: String,
    pub n1: Option<usize>,
    pub trace: Vec<String>,
}

impl MeasureBound {
    pub fn with_n1(mut self, n1: usize) -> Self {
        self.n1 = Some(n1);
        self
    }
}

/// `1 / (2 H d^2)^(1 + 4d)`, the same for all four composites.
pub fn approximation_measure(t: &AlgebraicTarget) -> MeasureBound {
    let d = t.degree;
    let base = t.scale();
    let exponent = 1 + 4 * d;
    let bound = Rational::unit_fraction(Pow::pow(&base, exponent));
    let closed_form = format!("1/({}H)^{exponent}", 2 * d * d);
    let instantiated = format!("1/({base})^{exponent}");
    let trace = vec![
        format!("d = {d}, H = {}", t.height),
        format!("2Hd^2 = {}H = {base}", 2 * d * d),
        format!("1 + 4d = {exponent}"),
        format!("|theta1+theta2-xi| > {closed_form}"),
        format!("|theta1+theta2-xi| > {instantiated}"),
    ];
    MeasureBound {
        degree: d,
        height: t.height.clone(),
        base,
        exponent,
        bound,
        closed_form,
        instantiated,
        n1: None,
        trace,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetVerdict {
    /// The certified distance exceeds the bound.
    Pass,
    /// The certified distance does not exceed the bound.
    BelowBound,
    /// The enclosures overlap.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetCheck {
    pub depth: usize,
    pub theta: RationalInterval,
    pub xi: RationalInterval,
    pub distance_lower: Option<Rational>,
    pub bound: Rational,
    pub verdict: TargetVerdict,
}

/// Compares the exact separation of the composite's and the target's
/// enclosures with the approximation-measure bound.
pub fn check_against_target(c: &CompositeNumber, t: &AlgebraicTarget, depth: usize) -> Result<TargetCheck> {
    if depth == 0 {
        return Err(Error::InsufficientDepth { n: 0, depth });
    }
    let xi = t.value_enclosure.clone().ok_or_else(|| Error::InvalidArgument("target has no value enclosure".into()))?;
    let theta = c.value_enclosure(depth)?;
    let bound = approximation_measure(t).bound;
    let distance_lower = theta.separation(&xi).map(|d| d.reduced());
    let verdict = match &distance_lower {
        None => TargetVerdict::Indeterminate,
        Some(d) if *d > bound => TargetVerdict::Pass,
        Some(_) => TargetVerdict::BelowBound,
    };
    Ok(TargetCheck { depth, theta, xi, distance_lower, bound, verdict })
}

fn eval(coeffs: &[BigInt], x: &Rational) -> Rational {
    // Horner over a common denominator: sum c_i num^i den^(k-i)
    let (num, den) = (x.numer(), BigInt::from(x.denom().clone()));
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for c in coeffs.iter().rev() {
        acc = acc * num + c * &den_pow;
        den_pow *= &den;
    }
    Rational::new(acc, BigUint::one())
}

/// Sign of the polynomial at `x`; the common denominator is positive.
fn sign_at(coeffs: &[BigInt], x: &Rational) -> Ordering {
    eval(coeffs, x).numer().sign().cmp(&num_bigint::Sign::NoSign)
}

/// Bisects `bracket` on sign changes of `coeffs` (constant term first) until
/// the width is at most `width`.
pub fn root_enclosure(coeffs: &[BigInt], bracket: &RationalInterval, width: &Rational) -> Result<RationalInterval> {
    if !width.is_positive() {
        return Err(Error::InvalidArgument("width must be positive".into()));
    }
    let coeffs = trim(coeffs);
    let mut lo = bracket.lo().reduced();
    let mut hi = bracket.hi().reduced();
    let s_lo = sign_at(coeffs, &lo);
    let s_hi = sign_at(coeffs, &hi);
    if s_lo == Ordering::Equal {
        return Ok(RationalInterval::point(lo));
    }
    if s_hi == Ordering::Equal {
        return Ok(RationalInterval::point(hi));
    }
    if s_lo == s_hi {
        return Err(Error::NoSignChange);
    }
    let half = Rational::new(1, 2u32);
    while &hi - &lo > *width {
        let mid = (&(&lo + &hi) * &half).reduced();
        match sign_at(coeffs, &mid) {
            Ordering::Equal => return Ok(RationalInterval::point(mid)),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    RationalInterval::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::PowerSchedule;
    use crate::witness::Op;
    use num_rational::Ratio;
    use std::sync::Arc;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn example(op: Op) -> CompositeNumber {
        let s = Arc::new(PowerSchedule::new(2, Ratio::from_integer(1)).unwrap());
        CompositeNumber::new(op, 2, 3, s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn cube_root_two() -> AlgebraicTarget {
        let bracket = RationalInterval::new(q("1"), q("2")).unwrap();
        AlgebraicTarget::from_polynomial(&ints(&[-2, 0, 0, 1]), &bracket, &q("1/1000000")).unwrap()
    }

    #[test]
    fn liouville_bounds() {
        let t = AlgebraicTarget::new(3, 2u32).unwrap();
        assert_eq!(liouville_gap_bound(&t, &BigUint::from(36u32)).unwrap(), q("1/839808"));
        let t = AlgebraicTarget::new(2, 1u32).unwrap();
        assert_eq!(liouville_gap_bound(&t, &BigUint::one()).unwrap(), q("1/4"));
        assert!(liouville_gap_bound(&t, &BigUint::zero()).is_err());
    }

    #[test]
    fn measure_closed_form() {
        let m = approximation_measure(&AlgebraicTarget::new(3, 1u32).unwrap());
        assert_eq!(m.instantiated, "1/(18)^13");
        assert_eq!(m.closed_form, "1/(18H)^13");
        assert_eq!(m.bound, Rational::unit_fraction(Pow::pow(BigUint::from(18u32), 13u32)));
        let m = approximation_measure(&AlgebraicTarget::new(2, 1u32).unwrap());
        assert_eq!(m.bound, Rational::unit_fraction(Pow::pow(BigUint::from(8u32), 9u32)));
        assert!(AlgebraicTarget::new(1, 1u32).is_err());
        assert!(AlgebraicTarget::new(2, 0u32).is_err());
    }

    #[test]
    fn bracketing() {
        let c = example(Op::Sum);
        let b = find_n1(&c, &AlgebraicTarget::new(3, 3u32).unwrap(), 4).unwrap();
        assert_eq!(b.outcome, BracketOutcome::Found { n1: 2 });
        assert_eq!(b.rows[0].right, Order::Greater);
        let cons = b.consequences.unwrap();
        assert!(cons.gap_exceeds_scaled_power);
        assert!(!cons.half_power_dominates);
        let tie = find_n1(&c, &AlgebraicTarget::new(3, 2u32).unwrap(), 4).unwrap_err();
        assert_eq!(tie, Error::TieEncountered { n: 2, side: Side::Left });
        let far = find_n1(&c, &AlgebraicTarget::new(3, 1_000_000u32).unwrap(), 2).unwrap_err();
        assert_eq!(far, Error::NotFound { n_max: 2 });
        let edge = scan_n1(&c, &AlgebraicTarget::new(3, 2u32).unwrap(), 1).unwrap();
        assert_eq!(edge.outcome, BracketOutcome::Tie { n: 1, side: Side::Right });
    }

    #[test]
    fn roots() {
        let bracket = RationalInterval::new(q("1"), q("2")).unwrap();
        let r = root_enclosure(&ints(&[-2, 0, 0, 1]), &bracket, &q("1/1000")).unwrap();
        assert!(r.width() <= q("1/1000"));
        assert!(r.lo().to_decimal_trunc(2) == "1.25" || r.hi().to_decimal_trunc(2) == "1.25");
        let bracket = RationalInterval::new(q("0"), q("2")).unwrap();
        let r = root_enclosure(&ints(&[-1, 1]), &bracket, &q("1/2")).unwrap();
        assert!(r.contains(&q("1")));
        let bracket = RationalInterval::new(q("0"), q("1")).unwrap();
        assert_eq!(root_enclosure(&ints(&[1, 0, 1]), &bracket, &q("1/2")), Err(Error::NoSignChange));
    }

    #[test]
    fn target_checks() {
        let t = cube_root_two();
        assert_eq!((t.degree(), t.height().clone()), (3, BigUint::from(2u32)));
        let sum = check_against_target(&example(Op::Sum), &t, 3).unwrap();
        assert_eq!(sum.verdict, TargetVerdict::Pass);
        assert_eq!(sum.distance_lower.as_ref().unwrap().to_decimal_trunc(3), "0.823");
        let diff = check_against_target(&example(Op::Difference), &t, 3).unwrap();
        assert_eq!(diff.verdict, TargetVerdict::Pass);
        assert_ne!(diff.distance_lower, sum.distance_lower);

        let c = example(Op::Sum);
        let point = c.convergent(3).unwrap().value();
        let inside = AlgebraicTarget::new(3, 2u32).unwrap().with_enclosure(RationalInterval::point(point));
        assert_eq!(check_against_target(&c, &inside, 3).unwrap().verdict, TargetVerdict::Indeterminate);
        assert!(check_against_target(&c, &AlgebraicTarget::new(3, 2u32).unwrap(), 3).is_err());
    }
}
