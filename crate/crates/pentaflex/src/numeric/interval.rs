//! Closed dyadic intervals with outward rounding.

use super::dyadic::{Dyadic, Rounding};
use num_rational::BigRational;

/// `[lo, hi]` with dyadic endpoints, `lo <= hi`. Every operation rounds
/// outward at a given working precision, so the true value of the
/// represented expression always stays inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn point(d: Dyadic) -> Interval {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Interval {
        Interval::point(Dyadic::zero())
    }

    pub fn from_rational(r: &BigRational, precision: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rational(r, precision, Rounding::Down),
            hi: Dyadic::from_rational(r, precision, Rounding::Up),
        }
    }

    fn round_out(self, precision: u32) -> Interval {
        Interval {
            lo: self.lo.round(precision, Rounding::Down),
            hi: self.hi.round(precision, Rounding::Up),
        }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// `Some(sign)` if the whole interval is on one side of zero (or is
    /// exactly zero), `None` if it straddles.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.as_rational() <= r && r <= &self.hi.as_rational()
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Interval, precision: u32) -> Interval {
        Interval { lo: self.lo.add(&other.lo), hi: self.hi.add(&other.hi) }.round_out(precision)
    }

    pub fn sub(&self, other: &Interval, precision: u32) -> Interval {
        self.add(&other.neg(), precision)
    }

    pub fn mul(&self, other: &Interval, precision: u32) -> Interval {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for x in &c[1..] {
            if *x < lo {
                lo = x.clone();
            }
            if *x > hi {
                hi = x.clone();
            }
        }
        Interval { lo, hi }.round_out(precision)
    }

    /// `None` when the divisor straddles zero.
    pub fn div(&self, other: &Interval, precision: u32) -> Option<Interval> {
        match other.sign() {
            Some(1) | Some(-1) => {}
            _ => return None,
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let d = a.div(b, precision, Rounding::Down);
                let u = a.div(b, precision, Rounding::Up);
                if lo.as_ref().map_or(true, |x| d < *x) {
                    lo = Some(d);
                }
                if hi.as_ref().map_or(true, |x| u > *x) {
                    hi = Some(u);
                }
            }
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap() }.round_out(precision))
    }

    /// `None` when the interval is entirely negative. A lower endpoint
    /// below zero is clamped: the enclosure is for sqrt of the
    /// nonnegative part.
    pub fn sqrt(&self, precision: u32) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() { Dyadic::zero() } else { self.lo.clone() };
        Some(Interval {
            lo: lo.sqrt(precision, Rounding::Down),
            hi: self.hi.sqrt(precision, Rounding::Up),
        })
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// True if `self` lies inside `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Midpoint as decimal string for reporting.
    pub fn midpoint_decimal(&self, digits: u32) -> String {
        let two = Dyadic::from_int(2);
        self.lo.add(&self.hi).div(&two, 128, Rounding::Down).to_decimal_string(digits)
    }

    /// ceil(log2 width), or None for a point interval.
    pub fn width_log2(&self) -> Option<i64> {
        self.width().log2_abs_floor().map(|l| l + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn containment_through_ops() {
        let a = Interval::from_rational(&rat(1, 3), 32);
        let b = Interval::from_rational(&rat(1, 6), 32);
        let sum = a.add(&b, 32);
        assert!(sum.contains_rational(&rat(1, 2)));
        let prod = a.mul(&b, 32);
        assert!(prod.contains_rational(&rat(1, 18)));
        let quot = a.div(&b, 32).unwrap();
        assert!(quot.contains_rational(&rat(2, 1)));
    }

    #[test]
    fn div_by_straddling_is_none() {
        let a = Interval::from_rational(&rat(1, 1), 32);
        let b = Interval { lo: Dyadic::from_int(-1), hi: Dyadic::from_int(1) };
        assert!(a.div(&b, 32).is_none());
    }

    #[test]
    fn sqrt_of_two_contains_truth() {
        let two = Interval::from_rational(&rat(2, 1), 64);
        let s = two.sqrt(64).unwrap();
        let lo2 = s.lo.as_rational().pow(2);
        let hi2 = s.hi.as_rational().pow(2);
        assert!(lo2 <= rat(2, 1) && rat(2, 1) <= hi2);
    }

    #[test]
    fn signs() {
        assert_eq!(Interval::from_rational(&rat(5, 8), 32).sign(), Some(1));
        assert_eq!(Interval::from_rational(&rat(-5, 8), 32).sign(), Some(-1));
        assert_eq!(Interval::zero().sign(), Some(0));
        let straddle = Interval { lo: Dyadic::from_int(-1), hi: Dyadic::from_int(1) };
        assert_eq!(straddle.sign(), None);
    }

    #[test]
    fn finer_precision_nests() {
        let a = Interval::from_rational(&rat(1, 3), 16);
        let b = Interval::from_rational(&rat(1, 3), 64);
        assert!(b.subset_of(&a));
    }
}
