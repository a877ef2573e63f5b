//! Sum, difference, product and quotient of two lacunary series sharing a
//! schedule, and the finite checks that make them Liouville-type witnesses:
//! certified gap bounds, the threshold index `n0`, Roth-instance checks and
//! empirical approximation exponents.
//!
//! The classical bounds are stated for `g1 > g2`, with `g2` the smaller base.
//! Here the bases may come in either order; wherever those bounds need "the
//! smaller base" [`CompositeNumber::small_base`] is used.

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lnbound::{ln_biguint, ln_rational};
use crate::powercmp::{compare, PurePower};
use crate::rational::{Rational, RationalInterval};
use crate::schedule::PowerSchedule;
use crate::series::{agreeing_digits, Convergent, LacunarySeries};

/// Enclosure depth used for the constants `1 + theta1 + theta2` and `1/theta2`.
const CONSTANT_DEPTH: usize = 3;

/// How far past the default depth a Roth check may deepen.
const MAX_EXTRA_DEPTH: usize = 4;

/// Fractional bits of the logarithm enclosures behind empirical exponents.
const EXPONENT_PRECISION: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Sum,
    Difference,
    Product,
    Quotient,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Sum, Op::Difference, Op::Product, Op::Quotient];

    pub fn name(self) -> &'static str {
        match self {
            Op::Sum => "sum",
            Op::Difference => "difference",
            Op::Product => "product",
            Op::Quotient => "quotient",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Sum => "theta1+theta2",
            Op::Difference => "theta1-theta2",
            Op::Product => "theta1*theta2",
            Op::Quotient => "theta1/theta2",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Op::Sum),
            "difference" | "diff" => Ok(Op::Difference),
            "product" => Ok(Op::Product),
            "quotient" => Ok(Op::Quotient),
            _ => {
                Err(Error::InvalidArgument(format!("unknown op {s:?} (expected sum, difference, product or quotient)")))
            }
        }
    }
}

/// Serializable [`Ordering`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Order {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Order::Less,
            Ordering::Equal => Order::Equal,
            Ordering::Greater => Order::Greater,
        }
    }
}

/// Outcome of a check against an interval that may not be decisive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    /// Exact equality where a strict inequality was required.
    Tie,
    Indeterminate,
}

#[derive(Clone, Debug)]
pub struct CompositeNumber {
    op: Op,
    s1: LacunarySeries,
    s2: LacunarySeries,
}

impl CompositeNumber {
    pub fn new(op: Op, g1: u64, g2: u64, schedule: Arc<PowerSchedule>) -> Result<Self> {
        let s1 = LacunarySeries::new(g1, schedule.clone())?;
        let s2 = LacunarySeries::new(g2, schedule)?;
        Self::from_series(op, s1, s2)
    }

    pub fn from_series(op: Op, s1: LacunarySeries, s2: LacunarySeries) -> Result<Self> {
        if !Arc::ptr_eq(s1.schedule(), s2.schedule()) {
            return Err(Error::InvalidArgument("both series must share one schedule".into()));
        }
        if s1.base() == s2.base() {
            return Err(Error::InvalidArgument(format!("bases must be distinct, both are {}", s1.base())));
        }
        Ok(CompositeNumber { op, s1, s2 })
    }

    pub fn op(&self) -> Op {
        self.op
    }

    pub fn s1(&self) -> &LacunarySeries {
        &self.s1
    }

    pub fn s2(&self) -> &LacunarySeries {
        &self.s2
    }

    pub fn schedule(&self) -> &Arc<PowerSchedule> {
        self.s1.schedule()
    }

    /// The smaller of the two bases; its tail dominates every gap.
    pub fn small_base(&self) -> u64 {
        self.s1.base().min(self.s2.base())
    }

    fn primes(&self) -> Vec<u64> {
        let mut p = self.s1.primes();
        p.extend(self.s2.primes());
        p.sort_unstable();
        p.dedup();
        p
    }

    fn pair_base(&self) -> u64 {
        self.s1.base() * self.s2.base()
    }

    /// The op applied to the two partial sums, unreduced.
    fn convergent_raw(&self, n: usize) -> Result<Rational> {
        let x = self.s1.partial_rational(n)?;
        let y = self.s2.partial_rational(n)?;
        Ok(match self.op {
            Op::Sum => &x + &y,
            Op::Difference => &x - &y,
            Op::Product => &x * &y,
            Op::Quotient => &x / &y,
        })
    }

    /// Reduced `p_n / q_n` for the composite.
    pub fn convergent(&self, n: usize) -> Result<Convergent> {
        if n == 0 {
            return Err(Error::InvalidArgument("convergents start at n = 1".into()));
        }
        let raw = self.convergent_raw(n)?;
        let reduced = match self.op {
            Op::Quotient => raw.reduced(),
            _ => raw.reduced_by_primes(&self.primes()),
        };
        Ok(Convergent::from_reduced(n, reduced))
    }

    /// The denominator the classical argument pairs with the convergent:
    /// `q_{n,1} q_{n,2}`, or `q_{n,1} p_{n,2}` for the quotient.
    pub fn pairing_denominator(&self, n: usize) -> Result<BigUint> {
        let c1 = self.s1.partial_sum(n)?;
        let c2 = self.s2.partial_sum(n)?;
        Ok(match self.op {
            Op::Quotient => &c1.q * c2.p.magnitude(),
            _ => &c1.q * &c2.q,
        })
    }

    /// Enclosure of the composite value from `depth` terms of each series.
    pub fn value_enclosure(&self, depth: usize) -> Result<RationalInterval> {
        let e1 = self.s1.enclose(depth)?;
        let e2 = self.s2.enclose(depth)?;
        Ok(match self.op {
            Op::Sum => e1.add(&e2),
            Op::Difference => e1.sub(&e2),
            Op::Product => e1.mul_nonneg(&e2),
            Op::Quotient => e1.div_positive(&e2),
        })
    }

    fn constant_depth(&self) -> Result<usize> {
        let last = self.schedule().last_within_budget(CONSTANT_DEPTH)?;
        Ok(last.unwrap_or(CONSTANT_DEPTH).max(1))
    }

    /// Certified upper bound on `|value - p_n/q_n|` in the classical form:
    /// `4 / g^(a_{n+1})` for sum and difference,
    /// `2(1 + theta1 + theta2) / g^(a_{n+1})` for the product, and
    /// `(2 + 4 g2^(a_1)) / (theta2 g^(a_{n+1}))` for the quotient (`n >= 2`),
    /// with `g` the smaller base and the theta-constants replaced by
    /// rational enclosure bounds.
    pub fn gap_bound(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Err(Error::InvalidArgument("gap bounds start at n = 1".into()));
        }
        let a_next = self.schedule().exponent_u64(n + 1)?;
        let den = Pow::pow(&BigUint::from(self.small_base()), a_next);
        let scale = Rational::unit_fraction(den);
        let numerator = match self.op {
            Op::Sum | Op::Difference => Rational::from(4u64),
            Op::Product => {
                let depth = self.constant_depth()?;
                let hi1 = self.s1.enclose(depth)?.hi().clone();
                let hi2 = self.s2.enclose(depth)?.hi().clone();
                &Rational::from(2u64) * &(&(&Rational::one() + &hi1) + &hi2)
            }
            Op::Quotient => {
                if n < 2 {
                    return Err(Error::QuotientIndexRestricted { n });
                }
                let a1 = self.schedule().exponent_u64(1)?;
                let g2_a1 = Pow::pow(&BigUint::from(self.s2.base()), a1);
                // theta_{n,2} > g2^(-a_1) is what bounds 1/theta_{n,2} by g2^(a_1)
                let floor = Rational::unit_fraction(g2_a1.clone());
                if self.s2.partial_rational(n)? <= floor {
                    return Err(Error::InvalidArgument(format!("theta_{{n,2}} <= g2^(-a_1) at n = {n}")));
                }
                let lo2 = self.s2.enclose(self.constant_depth()?)?.lo().clone();
                let inv_theta2 = lo2.recip().expect("series values are positive");
                let c = Rational::from(BigUint::from(2u32) + g2_a1 * 4u32);
                &c * &inv_theta2
            }
        };
        Ok(&numerator * &scale)
    }

    /// `depth` clamped to what the budget allows, but never below `n`.
    fn clamp_depth(&self, n: usize, depth: usize) -> Result<usize> {
        self.schedule().exponent(n)?;
        match self.schedule().last_within_budget(depth)? {
            Some(last) => Ok(last.clamp(n, depth)),
            None => Ok(depth),
        }
    }

    /// Default enclosure depth for index `n`: `n + 2`, clamped to the budget.
    pub fn default_depth(&self, n: usize) -> Result<usize> {
        self.clamp_depth(n, n + 2)
    }

    /// Enclosure of `|value - p_n/q_n|` from `depth >= n` terms of each series.
    pub fn true_gap_enclosure(&self, n: usize, depth: usize) -> Result<RationalInterval> {
        if n == 0 || depth < n {
            return Err(Error::InvalidArgument(format!("need 1 <= n <= depth (n = {n}, depth = {depth})")));
        }
        let signed = match self.op {
            Op::Sum => self.s1.tail_enclosure(n, depth)?.add(&self.s2.tail_enclosure(n, depth)?),
            Op::Difference => self.s1.tail_enclosure(n, depth)?.sub(&self.s2.tail_enclosure(n, depth)?),
            Op::Product | Op::Quotient => {
                let c = self.convergent_raw(n)?;
                self.value_enclosure(depth)?.shift(&-&c)
            }
        };
        Ok(signed.abs())
    }

    /// Scans `n = 1..=n_max` for `g^(a_{n+1}) > (g1 g2)^(d a_n)`, `g` the
    /// smaller base, clearing `d = u/v` into `g^(v a_{n+1})` vs `(g1 g2)^(u a_n)`.
    pub fn scan_threshold(&self, d: Ratio<u64>, n_max: usize) -> Result<ThresholdScan> {
        check_exponent_target(d)?;
        let (u, v) = (*d.numer(), *d.denom());
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let an = self.schedule().exponent(n)?;
            let next = self.schedule().exponent(n + 1)?;
            let lhs = PurePower::new(self.small_base(), next * v)?;
            let rhs = PurePower::new(self.pair_base(), an * u)?;
            let ord = compare(&lhs, &rhs);
            rows.push(ThresholdRow { n, order: ord.into(), holds: ord == Ordering::Greater });
        }
        let n0 = rows.iter().find(|r| r.holds).map(|r| r.n);
        let persists = n0.is_none_or(|n0| rows.iter().filter(|r| r.n >= n0).all(|r| r.holds));
        Ok(ThresholdScan { d: d.into(), rows, n0, persists })
    }

    /// Smallest `n <= n_max` at which the threshold inequality holds.
    pub fn find_n0(&self, d: Ratio<u64>, n_max: usize) -> Result<ThresholdScan> {
        let scan = self.scan_threshold(d, n_max)?;
        if scan.n0.is_none() {
            return Err(Error::NotFound { n_max });
        }
        Ok(scan)
    }

    /// Is `|value - p_n/q_n| < q_n^(-d_eff)`, with `q_n` the reduced denominator?
    pub fn verify_roth_instance(&self, n: usize, d_eff: Ratio<u64>) -> Result<RothCheck> {
        if d_eff <= Ratio::from_integer(2) {
            return Err(Error::InvalidArgument(format!("d_eff must exceed 2, got {d_eff}")));
        }
        let q = self.convergent(n)?.q;
        let start = self.default_depth(n)?;
        let stop = self.clamp_depth(n, start + MAX_EXTRA_DEPTH)?;
        let one = Rational::one();
        for depth in start..=stop {
            let gap = self.true_gap_enclosure(n, depth)?;
            let upper = scaled_power(gap.hi(), &q, d_eff);
            let verdict = match upper.cmp(&one) {
                Ordering::Less => Some(Verdict::Holds),
                _ => match scaled_power(gap.lo(), &q, d_eff).cmp(&one) {
                    Ordering::Greater => Some(Verdict::Fails),
                    Ordering::Equal if gap.lo() == gap.hi() => Some(Verdict::Tie),
                    _ => None,
                },
            };
            if let Some(verdict) = verdict {
                let margin = upper.root_scientific(*d_eff.denom() as u32, 4);
                return Ok(RothCheck { n, d_eff: d_eff.into(), q, depth, verdict, ratio_pow: upper, margin });
            }
        }
        Err(Error::InsufficientDepth { n, depth: stop })
    }

    /// Enclosure of `-ln|value - p_n/q_n| / ln q_n`.
    pub fn empirical_exponent(&self, n: usize, depth: usize) -> Result<RationalInterval> {
        let gap = self.true_gap_enclosure(n, depth)?;
        if !gap.lo().is_positive() {
            return Err(Error::InsufficientDepth { n, depth });
        }
        let q = self.convergent(n)?.q;
        if q <= BigUint::one() {
            return Err(Error::InvalidArgument(format!("q_{n} = 1 has no logarithmic scale")));
        }
        let f = EXPONENT_PRECISION;
        let ln_hi = ln_rational(gap.hi(), f);
        let ln_lo = ln_rational(gap.lo(), f);
        let ln_q = ln_biguint(&q, f);
        // -ln(gap) lies in [-ln_hi.hi, -ln_lo.lo]; ln q in [ln_q.lo, ln_q.hi] > 0
        let x0 = Rational::new(-ln_hi.hi, BigUint::one());
        let x1 = Rational::new(-ln_lo.lo, BigUint::one());
        let y0 = Rational::new(ln_q.lo, BigUint::one());
        let y1 = Rational::new(ln_q.hi, BigUint::one());
        if !y0.is_positive() {
            return Err(Error::InvalidArgument("ln q enclosure not positive".into()));
        }
        let lo = std::cmp::min(&x0 / &y0, &x0 / &y1);
        let hi = std::cmp::max(&x1 / &y0, &x1 / &y1);
        RationalInterval::new(lo.reduced(), hi.reduced())
    }

    /// Runs every check over `n_range` and packages the results. Indices are
    /// evaluated in parallel; records come back in index order.
    pub fn certify(&self, d: Ratio<u64>, n_range: RangeInclusive<usize>) -> Result<WitnessCertificate> {
        check_exponent_target(d)?;
        let d_eff = (d + Ratio::from_integer(2)) / Ratio::from_integer(2);
        let (from, to) = (*n_range.start(), *n_range.end());
        let empty = n_range.is_empty() || to == 0;
        let (threshold, threshold_error) = if empty {
            (None, None)
        } else {
            match self.scan_threshold(d, to) {
                Ok(scan) => (Some(scan), None),
                Err(e) if e.is_budget() => {
                    // keep the rows whose a_{n+1} fits in the budget
                    let last = self.schedule().last_within_budget(to + 1)?.unwrap_or(to + 1);
                    let partial = self.scan_threshold(d, last.saturating_sub(1)).ok();
                    (partial, Some(e.to_string()))
                }
                Err(e) => (None, Some(e.to_string())),
            }
        };
        let records: Vec<WitnessRecord> = if empty {
            Vec::new()
        } else {
            (from.max(1)..=to).into_par_iter().map(|n| self.record(n, d, d_eff, threshold.as_ref())).collect()
        };
        let summary = Summary::from_records(&records, threshold.as_ref());
        let schedule = self.schedule();
        Ok(WitnessCertificate {
            op: self.op,
            g1: self.s1.base(),
            g2: self.s2.base(),
            a1: schedule.a1().to_string(),
            beta: schedule.beta().into(),
            budget_bits: schedule.budget_bits(),
            d: d.into(),
            d_eff: d_eff.into(),
            n_from: from,
            n_to: to,
            threshold,
            threshold_error,
            records,
            summary,
        })
    }

    fn record(&self, n: usize, d: Ratio<u64>, d_eff: Ratio<u64>, scan: Option<&ThresholdScan>) -> WitnessRecord {
        let mut rec = WitnessRecord::empty(n);
        rec.threshold_holds = scan.and_then(|s| s.rows.iter().find(|r| r.n == n)).map(|r| r.holds);
        if let Err(e) = self.fill_record(&mut rec, d, d_eff) {
            rec.status = RecordStatus::Failed;
            rec.notes.push(e.to_string());
        }
        rec
    }

    fn fill_record(&self, rec: &mut WitnessRecord, d: Ratio<u64>, d_eff: Ratio<u64>) -> Result<()> {
        let n = rec.n;
        let conv = self.convergent(n)?;
        let pairing = self.pairing_denominator(n)?;
        rec.reduced_q_matches_pairing = Some(conv.q == pairing);
        rec.convergent = Some(conv);
        if self.op == Op::Quotient && n < 2 {
            rec.status = RecordStatus::Restricted;
            rec.notes.push(Error::QuotientIndexRestricted { n }.to_string());
            return Ok(());
        }
        let depth = self.default_depth(n)?;
        rec.depth = Some(depth);
        let gap = self.true_gap_enclosure(n, depth)?;
        let bound = self.gap_bound(n)?;
        rec.gap_bound_dominates = Some(*gap.hi() <= bound);
        let constant = if self.op == Op::Product { 1u64 } else { 4 };
        rec.bound_below_pairing_power =
            Some(scaled_power(&bound, &pairing, d) < Rational::from(constant).pow(*d.denom() as u32));
        rec.gap_bound = Some(bound);
        match self.verify_roth_instance(n, d_eff) {
            Ok(check) => {
                rec.roth = Some(RothSummary { verdict: check.verdict, margin: check.margin, depth: check.depth })
            }
            Err(e) if e.is_budget() => rec.notes.push(format!("roth: {e}")),
            Err(e) => return Err(e),
        }
        match self.empirical_exponent(n, depth) {
            Ok(iv) => rec.empirical_exponent = Some(iv),
            Err(e) if e.is_budget() => rec.notes.push(format!("empirical exponent: {e}")),
            Err(e) => return Err(e),
        }
        if self.op == Op::Quotient {
            rec.quotient_forms = Some(self.quotient_forms(n, d, &gap)?);
        }
        Ok(())
    }

    /// Truth of `gap <= 4/(q_{n,1} q_{n,2})^d` and of
    /// `gap < 4(1 + theta2)/(q_{n,1} p_{n,2})^d`.
    fn quotient_forms(&self, n: usize, d: Ratio<u64>, gap: &RationalInterval) -> Result<QuotientForms> {
        let c1 = self.s1.partial_sum(n)?;
        let c2 = self.s2.partial_sum(n)?;
        let v = *d.denom() as u32;
        let qq = &c1.q * &c2.q;
        let qp = &c1.q * c2.p.magnitude();
        let four_v = Rational::from(4u64).pow(v);
        let q_form = if scaled_power(gap.hi(), &qq, d) <= four_v {
            Verdict::Holds
        } else if scaled_power(gap.lo(), &qq, d) > four_v {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        };
        let theta2 = self.s2.enclose(self.constant_depth()?)?;
        let four = Rational::from(4u64);
        let rhs_lo = (&four * &(&Rational::one() + theta2.lo())).pow(v);
        let rhs_hi = (&four * &(&Rational::one() + theta2.hi())).pow(v);
        let p_form = if scaled_power(gap.hi(), &qp, d) < rhs_lo {
            Verdict::Holds
        } else if scaled_power(gap.lo(), &qp, d) >= rhs_hi {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        };
        Ok(QuotientForms { q_form, p_form })
    }

    /// Decimal expansion of the composite value, truncated toward zero.
    pub fn decimal_digits(&self, digits: usize) -> Result<String> {
        if digits == 0 {
            return Err(Error::InvalidArgument("digits must be positive".into()));
        }
        agreeing_digits(digits, |n| self.value_enclosure(n))
    }
}

fn check_exponent_target(d: Ratio<u64>) -> Result<()> {
    if d <= Ratio::from_integer(2) {
        return Err(Error::InvalidArgument(format!("d must exceed 2, got {d}")));
    }
    Ok(())
}

/// `x^v * base^u` for `d = u/v`: compares against `c^v` to decide `x` vs `c * base^(-d)`.
fn scaled_power(x: &Rational, base: &BigUint, d: Ratio<u64>) -> Rational {
    let u = u32::try_from(*d.numer()).expect("exponent numerator fits in u32");
    let v = u32::try_from(*d.denom()).expect("exponent denominator fits in u32");
    let scale = Rational::new(BigInt::from(Pow::pow(base, u)), BigUint::one());
    &x.pow(v) * &scale
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub n: usize,
    /// `g^(a_{n+1})` against `(g1 g2)^(d a_n)`.
    pub order: Order,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdScan {
    pub d: Rational,
    pub rows: Vec<ThresholdRow>,
    pub n0: Option<usize>,
    /// The inequality holds at every scanned index from `n0` on.
    pub persists: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RothCheck {
    pub n: usize,
    pub d_eff: Rational,
    pub q: BigUint,
    pub depth: usize,
    pub verdict: Verdict,
    /// `(gap_hi * q^(d_eff))^v` for `d_eff = u/v`, exact. Below 1 iff the check passes.
    pub ratio_pow: Rational,
    /// `gap_hi / q^(-d_eff)`, four significant digits, truncated.
    pub margin: String,
}

impl RothCheck {
    pub fn passes(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RothSummary {
    pub verdict: Verdict,
    pub margin: String,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientForms {
    pub q_form: Verdict,
    pub p_form: Verdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordStatus {
    Checked,
    Restricted,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub n: usize,
    pub status: RecordStatus,
    pub convergent: Option<Convergent>,
    pub reduced_q_matches_pairing: Option<bool>,
    pub threshold_holds: Option<bool>,
    pub depth: Option<usize>,
    pub gap_bound: Option<Rational>,
    pub gap_bound_dominates: Option<bool>,
    pub bound_below_pairing_power: Option<bool>,
    pub roth: Option<RothSummary>,
    pub empirical_exponent: Option<RationalInterval>,
    pub quotient_forms: Option<QuotientForms>,
    pub notes: Vec<String>,
}

impl WitnessRecord {
    fn empty(n: usize) -> Self {
        WitnessRecord {
            n,
            status: RecordStatus::Checked,
            convergent: None,
            reduced_q_matches_pairing: None,
            threshold_holds: None,
            depth: None,
            gap_bound: None,
            gap_bound_dominates: None,
            bound_below_pairing_power: None,
            roth: None,
            empirical_exponent: None,
            quotient_forms: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub n0: Option<usize>,
    pub roth_passes: Vec<usize>,
    pub bounds_sound: bool,
    pub n0_precedes_roth_passes: bool,
    pub failed_records: usize,
}

impl Summary {
    fn from_records(records: &[WitnessRecord], scan: Option<&ThresholdScan>) -> Self {
        let n0 = scan.and_then(|s| s.n0);
        let roth_passes: Vec<usize> = records
            .iter()
            .filter(|r| r.roth.as_ref().is_some_and(|c| c.verdict == Verdict::Holds))
            .map(|r| r.n)
            .collect();
        Summary {
            n0,
            bounds_sound: records.iter().all(|r| r.gap_bound_dominates != Some(false)),
            n0_precedes_roth_passes: n0.is_some_and(|n0| roth_passes.iter().all(|&n| n0 <= n)),
            roth_passes,
            failed_records: records.iter().filter(|r| r.status == RecordStatus::Failed).count(),
        }
    }
}

/// Verified finite steps of the transcendence argument for one composite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub op: Op,
    pub g1: u64,
    pub g2: u64,
    pub a1: String,
    pub beta: Rational,
    pub budget_bits: u32,
    pub d: Rational,
    pub d_eff: Rational,
    pub n_from: usize,
    pub n_to: usize,
    pub threshold: Option<ThresholdScan>,
    pub threshold_error: Option<String>,
    pub records: Vec<WitnessRecord>,
    pub summary: Summary,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(op: Op) -> CompositeNumber {
        let s = Arc::new(PowerSchedule::new(2, Ratio::from_integer(1)).unwrap());
        CompositeNumber::new(op, 2, 3, s).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn convergents() {
        let c = example(Op::Sum).convergent(2).unwrap();
        assert_eq!((c.p.to_string(), c.q.to_string()), ("565".into(), "1296".into()));
        assert_eq!(example(Op::Difference).convergent(1).unwrap().value(), q("5/36"));
        assert_eq!(example(Op::Product).convergent(1).unwrap().value(), q("1/36"));
        // (1/4) / (1/9)
        let c = example(Op::Quotient).convergent(1).unwrap();
        assert_eq!((c.p.to_string(), c.q.to_string()), ("9".into(), "4".into()));
    }

    #[test]
    fn construction_rules() {
        let s = Arc::new(PowerSchedule::new(2, Ratio::from_integer(1)).unwrap());
        assert!(CompositeNumber::new(Op::Sum, 3, 3, s.clone()).is_err());
        let other = Arc::new(PowerSchedule::new(2, Ratio::from_integer(1)).unwrap());
        let s1 = LacunarySeries::new(2, s).unwrap();
        let s2 = LacunarySeries::new(3, other).unwrap();
        assert!(CompositeNumber::from_series(Op::Sum, s1, s2).is_err());
        assert_eq!("diff".parse::<Op>().unwrap(), Op::Difference);
        assert!("mod".parse::<Op>().is_err());
    }

    #[test]
    fn sum_gap_bound_uses_small_base() {
        assert_eq!(example(Op::Sum).gap_bound(2).unwrap(), q("4/65536"));
        assert!(example(Op::Quotient).gap_bound(1).is_err());
    }

    #[test]
    fn quotient_bound_constant() {
        // (2 + 4*9) * V / 2^16 with V = 1/lo(theta2) <= 9
        let b = example(Op::Quotient).gap_bound(2).unwrap();
        let v = &b * &q("65536/38");
        assert!(v <= q("9") && v > q("8"));
    }

    #[test]
    fn gap_enclosures() {
        let g = example(Op::Sum).true_gap_enclosure(1, 3).unwrap();
        assert!(*g.lo() > q("1/16") && *g.hi() < q("4/9"));
        assert_eq!(g.lo().to_decimal_trunc(6), "0.074860");
        let d = example(Op::Difference).true_gap_enclosure(1, 3).unwrap();
        assert_eq!(d.lo().to_decimal_trunc(6), "0.050169");
        for op in Op::ALL {
            let g = example(op).true_gap_enclosure(2, 2).unwrap();
            assert!(!g.lo().is_negative());
        }
    }

    #[test]
    fn threshold_scan() {
        let s = Arc::new(PowerSchedule::with_budget(2, Ratio::from_integer(1), 32).unwrap());
        let c = CompositeNumber::new(Op::Sum, 2, 3, s.clone()).unwrap();
        let scan = c.find_n0(Ratio::from_integer(3), 5).unwrap();
        assert_eq!(scan.n0, Some(3));
        assert!(scan.persists);
        let weaker = c.find_n0(Ratio::new(5, 2), 5).unwrap();
        assert!(weaker.n0.unwrap() <= 3);
        let swapped = CompositeNumber::new(Op::Sum, 3, 2, s).unwrap();
        assert_eq!(swapped.find_n0(Ratio::from_integer(3), 5).unwrap().n0, Some(3));
        assert_eq!(c.find_n0(Ratio::from_integer(3), 2).unwrap_err(), Error::NotFound { n_max: 2 });
        assert!(c.find_n0(Ratio::from_integer(2), 3).is_err());
    }

    #[test]
    fn roth_instances() {
        let c = example(Op::Sum);
        let d = Ratio::new(5, 2);
        assert_eq!(c.verify_roth_instance(2, d).unwrap().verdict, Verdict::Fails);
        let pass = c.verify_roth_instance(3, d).unwrap();
        assert!(pass.passes(), "{pass:?}");
        assert!(pass.margin.contains("e-"));
    }

    #[test]
    fn empirical_exponents() {
        let c = example(Op::Sum);
        let d2 = c.empirical_exponent(2, 4).unwrap();
        assert!(d2.contains(&q("1547/1000")) || d2.lo().to_decimal_trunc(3) == "1.547");
        assert!(c.empirical_exponent(2, 2).is_err());
        let shallow = c.empirical_exponent(1, 2).unwrap();
        let deep = c.empirical_exponent(1, 3).unwrap();
        assert!(deep.width() <= shallow.width());
    }

    #[test]
    fn empty_certificate() {
        let cert = example(Op::Sum).certify(Ratio::from_integer(3), RangeInclusive::new(2, 1)).unwrap();
        assert!(cert.records.is_empty());
        assert!(cert.threshold.is_none());
        assert_eq!(cert.g1, 2);
        let long = example(Op::Sum).certify(Ratio::from_integer(3), 3..=6).unwrap();
        assert_eq!(long.summary.n0, Some(3));
        assert_eq!(long.threshold.unwrap().rows.len(), 4);
        assert!(long.threshold_error.is_some());
        assert_eq!(long.summary.failed_records, 2);
    }

    #[test]
    fn composite_digits() {
        assert_eq!(example(Op::Sum).decimal_digits(6).unwrap(), "0.435972");
        assert!(example(Op::Quotient).decimal_digits(3).unwrap().starts_with("2.531"));
    }
}
