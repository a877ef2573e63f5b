//! Exact arithmetic for lacunary series `sum g^(-a_n)` with
//! `a_{n+1} = a_n^(1 + beta)`, their sum, difference, product and quotient,
//! and certificates for the rational-approximation inequalities they satisfy.
//!
//! Nothing here decides an inequality in floating point: comparisons are
//! exact rational comparisons, or power comparisons routed through
//! [`powercmp`] with outward-rounded logarithm enclosures.

pub mod error;
pub mod lnbound;
pub mod measure;
pub mod powercmp;
pub mod rational;
pub mod schedule;
pub mod series;
pub mod witness;

pub use error::{Error, Result, Side};
pub use measure::{AlgebraicTarget, MeasureBound};
pub use powercmp::PurePower;
pub use rational::{Rational, RationalInterval};
pub use schedule::{GrowthWindow, PowerSchedule};
pub use series::{Convergent, LacunarySeries};
pub use witness::{CompositeNumber, Op, WitnessCertificate};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::Ratio;
