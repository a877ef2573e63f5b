//! Exponent sequences `a_{n+1} = a_n^(1 + beta)` with a lazily grown cache.

use std::cmp::Ordering;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::powercmp::{compare, PurePower};

/// Default exponent budget: every computed `a_n` satisfies `a_n <= 2^20`.
pub const DEFAULT_BUDGET_BITS: u32 = 20;

/// Exponents are used as `u64` power bases downstream.
pub const MAX_BUDGET_BITS: u32 = 63;

pub struct PowerSchedule {
    a1: BigUint,
    beta: Ratio<u64>,
    budget_bits: u32,
    cache: RwLock<Vec<BigUint>>,
}

impl PowerSchedule {
    pub fn new(a1: u64, beta: Ratio<u64>) -> Result<Self> {
        Self::with_budget(a1, beta, DEFAULT_BUDGET_BITS)
    }

    pub fn with_budget(a1: u64, beta: Ratio<u64>, budget_bits: u32) -> Result<Self> {
        if a1 < 2 {
            return Err(Error::InvalidArgument(format!("a1 must be >= 2, got {a1}")));
        }
        if *beta.numer() == 0 {
            return Err(Error::InvalidArgument("beta must be positive".into()));
        }
        if budget_bits == 0 || budget_bits > MAX_BUDGET_BITS {
            return Err(Error::InvalidArgument(format!(
                "budget_bits must be in 1..={MAX_BUDGET_BITS}, got {budget_bits}"
            )));
        }
        let a1 = BigUint::from(a1);
        if a1 > BigUint::one() << budget_bits {
            return Err(Error::ExponentBudgetExceeded { index: 1, budget_bits });
        }
        Ok(PowerSchedule { a1: a1.clone(), beta, budget_bits, cache: RwLock::new(vec![a1]) })
    }

    pub fn a1(&self) -> &BigUint {
        &self.a1
    }

    pub fn beta(&self) -> Ratio<u64> {
        self.beta
    }

    pub fn budget_bits(&self) -> u32 {
        self.budget_bits
    }

    /// `a_n` for `n >= 1`, extending the cache as needed.
    pub fn exponent(&self, n: usize) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::InvalidArgument("exponent index starts at 1".into()));
        }
        if let Some(a) = self.cache.read().expect("schedule cache poisoned").get(n - 1) {
            return Ok(a.clone());
        }
        let mut cache = self.cache.write().expect("schedule cache poisoned");
        while cache.len() < n {
            let next = self.step(cache.last().expect("cache holds a_1"), cache.len() + 1)?;
            cache.push(next);
        }
        Ok(cache[n - 1].clone())
    }

    /// `a_n` as a machine integer; always fits once within budget.
    pub fn exponent_u64(&self, n: usize) -> Result<u64> {
        Ok(self.exponent(n)?.to_u64().expect("budget keeps exponents below 2^63"))
    }

    /// Index of the last exponent within budget, or `None` if the sequence
    /// stays within budget through `limit`.
    pub fn last_within_budget(&self, limit: usize) -> Result<Option<usize>> {
        for n in 1..=limit {
            match self.exponent(n) {
                Ok(_) => {}
                Err(Error::ExponentBudgetExceeded { .. }) => return Ok(Some(n - 1)),
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    /// `a_index = prev^((u + v) / v)`, requiring `prev` to be a perfect v-th power.
    fn step(&self, prev: &BigUint, index: usize) -> Result<BigUint> {
        let (u, v) = (*self.beta.numer(), *self.beta.denom());
        let root = if v == 1 {
            prev.clone()
        } else {
            let v32 = u32::try_from(v).map_err(|_| Error::NonIntegralExponent { index, root: v })?;
            let r = prev.nth_root(v32);
            if Pow::pow(&r, v32) != *prev {
                return Err(Error::NonIntegralExponent { index, root: v });
            }
            r
        };
        let power = u + v;
        // root^power < 2^(bits(root) * power); reject early when even the lower
        // estimate 2^((bits(root) - 1) * power) is past the budget
        let budget = self.budget_bits as u64;
        if (root.bits() - 1).saturating_mul(power) > budget {
            return Err(Error::ExponentBudgetExceeded { index, budget_bits: self.budget_bits });
        }
        let next = Pow::pow(&root, power);
        if next > BigUint::one() << budget {
            return Err(Error::ExponentBudgetExceeded { index, budget_bits: self.budget_bits });
        }
        Ok(next)
    }
}

impl Clone for PowerSchedule {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("schedule cache poisoned").clone();
        PowerSchedule { a1: self.a1.clone(), beta: self.beta, budget_bits: self.budget_bits, cache: RwLock::new(cache) }
    }
}

impl fmt::Debug for PowerSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSchedule")
            .field("a1", &self.a1)
            .field("beta", &self.beta)
            .field("budget_bits", &self.budget_bits)
            .finish()
    }
}

/// The window `a_n^alpha <= a_{n+1} < a_n^(k alpha)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthWindow {
    alpha: Ratio<u64>,
    k: Ratio<u64>,
}

impl GrowthWindow {
    pub fn new(alpha: Ratio<u64>, k: Ratio<u64>) -> Result<Self> {
        let one = Ratio::from_integer(1);
        if alpha <= one || k <= one {
            return Err(Error::InvalidArgument(format!("alpha and k must exceed 1 (alpha={alpha}, k={k})")));
        }
        Ok(GrowthWindow { alpha, k })
    }

    pub fn alpha(&self) -> Ratio<u64> {
        self.alpha
    }

    pub fn k(&self) -> Ratio<u64> {
        self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub holds: bool,
    /// Both sides are exactly equal.
    pub tight: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    /// `a_n^alpha <= a_{n+1}`
    pub lower: BoundCheck,
    /// `a_{n+1} < a_n^(k alpha)`
    pub upper: BoundCheck,
}

impl GrowthRow {
    pub fn passes(&self) -> bool {
        self.lower.holds && self.upper.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
}

impl GrowthReport {
    pub fn failing(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.passes()).map(|r| r.n).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(GrowthRow::passes)
    }
}

/// Decides both window inequalities for `1 <= n <= n_max` by clearing the
/// rational exponents: `a_n^(p/q) <= a_{n+1}` iff `a_n^p <= a_{n+1}^q`.
pub fn validate_growth(s: &PowerSchedule, w: &GrowthWindow, n_max: usize) -> Result<GrowthReport> {
    let ka = w.k * w.alpha;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let an = s.exponent_u64(n)?;
        let next = s.exponent_u64(n + 1)?;
        let lo = compare(&PurePower::new(an, *w.alpha.numer())?, &PurePower::new(next, *w.alpha.denom())?);
        let hi = compare(&PurePower::new(next, *ka.denom())?, &PurePower::new(an, *ka.numer())?);
        rows.push(GrowthRow {
            n,
            lower: BoundCheck { holds: lo != Ordering::Greater, tight: lo == Ordering::Equal },
            upper: BoundCheck { holds: hi == Ordering::Less, tight: hi == Ordering::Equal },
        });
    }
    Ok(GrowthReport { rows })
}
