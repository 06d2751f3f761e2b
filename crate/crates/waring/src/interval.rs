//! Rational-endpoint interval arithmetic with dyadic outward rounding.
//!
//! Every operation returns an enclosure of the exact result. Endpoints are
//! rounded outward to `precision`-bit dyadic rationals after each operation,
//! which bounds coefficient growth while preserving containment. Precision is
//! doubled on demand by the callers that need tighter enclosures.

use crate::scalar::{round_down, round_up, sign, Rat};
use num::{One, Signed};

pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct IntervalF {
    lo: Rat,
    hi: Rat,
    precision: u32,
}

impl IntervalF {
    pub fn new(lo: Rat, hi: Rat, precision: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalF { lo, hi, precision }.rounded()
    }

    /// Exact point interval (no rounding: the point is kept exactly).
    pub fn point(x: Rat) -> Self {
        IntervalF {
            lo: x.clone(),
            hi: x,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        sign(&self.lo) <= 0 && sign(&self.hi) >= 0
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    /// Largest absolute value attained on the interval.
    pub fn mag(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }

    fn rounded(self) -> Self {
        if self.is_point() {
            return self;
        }
        let precision = self.precision;
        IntervalF {
            lo: round_down(&self.lo, precision),
            hi: round_up(&self.hi, precision),
            precision,
        }
    }

    fn binary(a: &Self, b: &Self, lo: Rat, hi: Rat) -> Self {
        IntervalF {
            lo,
            hi,
            precision: a.precision.max(b.precision),
        }
        .rounded()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::binary(self, rhs, &self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::binary(self, rhs, &self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }

    pub fn neg(&self) -> Self {
        IntervalF {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            precision: self.precision,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Self::binary(self, rhs, lo, hi)
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Self {
        assert!(!self.contains_zero(), "division by interval containing zero");
        IntervalF {
            lo: self.hi.clone().recip(),
            hi: self.lo.clone().recip(),
            precision: self.precision,
        }
        .rounded()
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = IntervalF::point(Rat::one()).with_precision(self.precision);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul(&IntervalF::point(c.clone()))
    }
}
