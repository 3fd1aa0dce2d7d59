//! The scalar substrate: exact rationals unioned with certified
//! adaptive-precision interval values.
//!
//! Arithmetic between two exact scalars stays exact; anything touching a
//! certified value yields a certified value. Signs are decided by exact
//! comparison or by interval refinement up to a caller-specified
//! precision cap, never by guessing.

use super::dyadic::Dyadic;
use super::expr::{EvalError, Expr};
use super::interval::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 128;
/// Default cap for adaptive refinement.
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sign undecidable at {max_bits} bits")]
    SignUndecidable { max_bits: u32 },
    #[error("square root of a certified-negative value")]
    NegativeRadicand,
}

/// An interval enclosure together with the expression it encloses, so it
/// can be refined on demand.
#[derive(Debug, Clone)]
pub struct CertifiedScalar {
    expr: Expr,
    interval: Interval,
    precision_bits: u32,
}

impl CertifiedScalar {
    /// Evaluate `expr` at `precision` bits, escalating past transient
    /// divisor-straddle failures up to `max_bits`.
    pub fn evaluate(expr: Expr, precision: u32, max_bits: u32) -> Result<CertifiedScalar, NumericError> {
        let mut p = precision.max(8);
        loop {
            match expr.eval(p) {
                Ok(interval) => {
                    return Ok(CertifiedScalar { expr, interval, precision_bits: p })
                }
                Err(EvalError::NegativeRadicand) => return Err(NumericError::NegativeRadicand),
                Err(EvalError::DivisorStraddlesZero) => {
                    if p >= max_bits {
                        return Err(NumericError::SignUndecidable { max_bits });
                    }
                    p = (p * 2).min(max_bits);
                }
            }
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Exact value when symbolically known (rational subtree or perfect
    /// squares all the way down).
    pub fn exact_value(&self) -> Option<&BigRational> {
        self.expr.exact()
    }

    /// Refine until the enclosure width is at most `2^(-width_bits)`.
    pub fn refine_to_width(&self, width_bits: u32, max_bits: u32) -> Result<CertifiedScalar, NumericError> {
        let target = Dyadic::pow2(-(width_bits as i64));
        if self.interval.width() <= target {
            return Ok(self.clone());
        }
        let mut p = self.precision_bits;
        loop {
            if p >= max_bits {
                return Err(NumericError::SignUndecidable { max_bits });
            }
            p = (p * 2).min(max_bits);
            match self.expr.eval(p) {
                Ok(interval) => {
                    if interval.width() <= target {
                        return Ok(CertifiedScalar { expr: self.expr.clone(), interval, precision_bits: p });
                    }
                }
                Err(EvalError::NegativeRadicand) => return Err(NumericError::NegativeRadicand),
                Err(EvalError::DivisorStraddlesZero) => {}
            }
        }
    }

    /// Decide the sign, refining up to `max_bits`. Returns 0 only when
    /// an exact symbolic zero is available.
    pub fn sign(&self, max_bits: u32) -> Result<i8, NumericError> {
        if let Some(e) = self.expr.exact() {
            return Ok(rational_sign(e));
        }
        if let Some(s) = self.interval.sign() {
            if s != 0 {
                return Ok(s);
            }
        }
        let mut p = self.precision_bits;
        while p < max_bits {
            p = (p * 2).min(max_bits);
            match self.expr.eval(p) {
                Ok(iv) => {
                    if let Some(s) = iv.sign() {
                        if s != 0 {
                            return Ok(s);
                        }
                        // A point interval at zero without symbolic
                        // exactness cannot arise; treat as undecidable.
                    }
                }
                Err(EvalError::NegativeRadicand) => return Err(NumericError::NegativeRadicand),
                Err(EvalError::DivisorStraddlesZero) => {}
            }
        }
        Err(NumericError::SignUndecidable { max_bits })
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

/// Exact rational or certified interval value.
#[derive(Debug, Clone)]
pub enum Scalar {
    Exact(BigRational),
    Certified(CertifiedScalar),
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Scalar {
        Scalar::Exact(r)
    }
}

impl From<CertifiedScalar> for Scalar {
    fn from(c: CertifiedScalar) -> Scalar {
        Scalar::Certified(c)
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Scalar {
        Scalar::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Certified(c) => c.exact_value(),
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Scalar::Exact(r) => Expr::constant(r.clone()),
            Scalar::Certified(c) => c.expr().clone(),
        }
    }

    fn target_precision(&self, other: Option<&Scalar>) -> u32 {
        let p1 = match self {
            Scalar::Certified(c) => c.precision_bits(),
            Scalar::Exact(_) => DEFAULT_PRECISION_BITS,
        };
        let p2 = match other {
            Some(Scalar::Certified(c)) => c.precision_bits(),
            _ => DEFAULT_PRECISION_BITS,
        };
        p1.max(p2)
    }

    fn combine<FE, FC>(&self, other: &Scalar, fe: FE, fc: FC) -> Scalar
    where
        FE: FnOnce(&BigRational, &BigRational) -> BigRational,
        FC: FnOnce(&Expr, &Expr) -> Expr,
    {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(fe(a, b)),
            _ => {
                let expr = fc(&self.to_expr(), &other.to_expr());
                let p = self.target_precision(Some(other));
                // Pure +,-,*,min,max cannot fail to evaluate.
                let c = CertifiedScalar::evaluate(expr, p, DEFAULT_MAX_PRECISION_BITS)
                    .expect("non-division arithmetic cannot fail");
                Scalar::Certified(c)
            }
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.combine(other, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.combine(other, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.combine(other, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Certified(c) => {
                let expr = c.expr().neg();
                let p = c.precision_bits();
                Scalar::Certified(
                    CertifiedScalar::evaluate(expr, p, DEFAULT_MAX_PRECISION_BITS)
                        .expect("negation cannot fail"),
                )
            }
        }
    }

    pub fn min(&self, other: &Scalar) -> Scalar {
        self.combine(other, |a, b| a.min(b).clone(), |a, b| a.min(b))
    }

    pub fn max(&self, other: &Scalar) -> Scalar {
        self.combine(other, |a, b| a.max(b).clone(), |a, b| a.max(b))
    }

    /// Division; the divisor must have a decidable nonzero sign.
    pub fn div(&self, other: &Scalar, max_bits: u32) -> Result<Scalar, NumericError> {
        match certified_sign(other, max_bits)? {
            0 => Err(NumericError::DivisionByZero),
            _ => match (self, other) {
                (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a / b)),
                _ => {
                    let expr = self.to_expr().div(&other.to_expr());
                    let p = self.target_precision(Some(other));
                    Ok(Scalar::Certified(CertifiedScalar::evaluate(expr, p, max_bits)?))
                }
            },
        }
    }

    /// Certified square root; always yields a certified scalar with
    /// enclosure width at most `2^(-precision_bits)`.
    pub fn sqrt(&self, precision_bits: u32, max_bits: u32) -> Result<CertifiedScalar, NumericError> {
        match certified_sign(self, max_bits) {
            Ok(s) if s < 0 => return Err(NumericError::NegativeRadicand),
            Ok(_) => {}
            Err(NumericError::SignUndecidable { max_bits }) => {
                return Err(NumericError::SignUndecidable { max_bits })
            }
            Err(e) => return Err(e),
        }
        let expr = self.to_expr().sqrt();
        let c = CertifiedScalar::evaluate(expr, precision_bits.max(DEFAULT_PRECISION_BITS), max_bits)?;
        c.refine_to_width(precision_bits, max_bits)
    }

    /// Certified enclosure of this scalar at the given precision.
    pub fn enclosure(&self, precision_bits: u32) -> Interval {
        match self {
            Scalar::Exact(r) => Interval::from_rational(r, precision_bits),
            Scalar::Certified(c) => c.interval().clone(),
        }
    }

    /// Refine (certified only) until the enclosure width is at most
    /// `2^(-width_bits)`.
    pub fn refined(&self, width_bits: u32, max_bits: u32) -> Result<Scalar, NumericError> {
        match self {
            Scalar::Exact(_) => Ok(self.clone()),
            Scalar::Certified(c) => Ok(Scalar::Certified(c.refine_to_width(width_bits, max_bits)?)),
        }
    }
}

/// Decide the sign of a scalar: exact for rationals, by refinement for
/// certified values. Returns 0 only on a provable zero.
pub fn certified_sign(x: &Scalar, max_bits: u32) -> Result<i8, NumericError> {
    match x {
        Scalar::Exact(r) => Ok(rational_sign(r)),
        Scalar::Certified(c) => c.sign(max_bits),
    }
}

/// Convenience: sum of a slice of scalars.
pub fn scalar_sum<'a, I: IntoIterator<Item = &'a Scalar>>(items: I) -> Scalar {
    let mut acc = Scalar::zero();
    for x in items {
        acc = acc.add(x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_stays_exact() {
        let a = Scalar::from_frac(1, 3);
        let b = Scalar::from_frac(1, 6);
        match a.add(&b) {
            Scalar::Exact(r) => assert_eq!(r, rat(1, 2)),
            _ => panic!("expected exact"),
        }
        let x = Scalar::from_frac(7, 11);
        match x.sub(&x) {
            Scalar::Exact(r) => assert!(r.is_zero()),
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn certified_contaminates() {
        let s2 = Scalar::from_int(2).sqrt(64, 1024).unwrap();
        let y = Scalar::from(s2).mul(&Scalar::from_int(3));
        assert!(!y.is_exact());
    }

    #[test]
    fn sqrt_width_contract() {
        let c = Scalar::from_int(238225).sqrt(80, 1024).unwrap();
        assert!(c.interval().width() <= Dyadic::pow2(-80));
        assert!(c.interval().contains_rational(&rat(488, 1)) || c.interval().lo.as_rational() > rat(488, 1));
        // true value is sqrt(238225) = 488.08...; check containment by squaring
        let lo2 = c.interval().lo.as_rational().pow(2);
        let hi2 = c.interval().hi.as_rational().pow(2);
        assert!(lo2 <= rat(238225, 1) && rat(238225, 1) <= hi2);
    }

    #[test]
    fn sqrt_of_zero_is_point() {
        let c = Scalar::zero().sqrt(64, 1024).unwrap();
        assert_eq!(c.exact_value(), Some(&BigRational::zero()));
        assert!(c.interval().width().is_zero());
    }

    #[test]
    fn sqrt_of_negative_errors() {
        assert_eq!(
            Scalar::from_int(-1).sqrt(64, 1024).unwrap_err(),
            NumericError::NegativeRadicand
        );
    }

    #[test]
    fn signs() {
        assert_eq!(certified_sign(&Scalar::from_frac(-39, 89), 256).unwrap(), -1);
        // sqrt(4) - 2 is provably zero by exact cancellation
        let c = Scalar::from_int(4).sqrt(64, 1024).unwrap();
        let z = Scalar::from(c).sub(&Scalar::from_int(2));
        assert_eq!(certified_sign(&z, 256).unwrap(), 0);
        // 5/8 enclosed with small width decides positive
        let c = Scalar::from_frac(25, 64).sqrt(10, 1024).unwrap();
        assert_eq!(certified_sign(&Scalar::from(c), 256).unwrap(), 1);
    }

    #[test]
    fn undecidable_near_zero() {
        // sqrt(2)*sqrt(2) - 2 is truly zero but not symbolically exact:
        // the sign must come back undecidable rather than a zero guess.
        let s2 = Scalar::from(Scalar::from_int(2).sqrt(64, 1024).unwrap());
        let z = s2.mul(&s2).sub(&Scalar::from_int(2));
        assert!(matches!(
            certified_sign(&z, 512),
            Err(NumericError::SignUndecidable { .. })
        ));
    }

    #[test]
    fn division_by_zero_detected() {
        let a = Scalar::from_int(1);
        assert_eq!(a.div(&Scalar::zero(), 256).unwrap_err(), NumericError::DivisionByZero);
    }

    #[test]
    fn monotone_refinement() {
        let c = Scalar::from_int(7).sqrt(32, 4096).unwrap();
        let finer = c.refine_to_width(200, 4096).unwrap();
        assert!(finer.interval().width() <= c.interval().width());
        assert!(finer.interval().width() <= Dyadic::pow2(-200));
    }
}
