//! Arbitrary-precision dyadic rationals `m * 2^e` with directed rounding.
//!
//! These are the endpoints of certified intervals. Addition, subtraction
//! and multiplication are exact; division and square root round in a
//! caller-chosen direction. No floating hardware is involved anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

impl Rounding {
    pub fn flip(self) -> Rounding {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// A dyadic rational `mantissa * 2^exponent`, normalized so the mantissa
/// is odd (or zero with exponent zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

fn shl(m: &BigInt, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    m << (k as usize)
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Dyadic {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    /// 2^k
    pub fn pow2(k: i64) -> Dyadic {
        Dyadic { mantissa: BigInt::one(), exponent: k }
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz as usize;
            self.exponent += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn sign(&self) -> i8 {
        match self.mantissa.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let m = shl(&self.mantissa, self.exponent - e) + shl(&other.mantissa, other.exponent - e);
        Dyadic::new(m, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    pub fn as_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(shl(&self.mantissa, self.exponent))
        } else {
            BigRational::new(self.mantissa.clone(), shl(&BigInt::one(), -self.exponent))
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn mantissa_bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Round so the mantissa fits in `precision` bits, in the given direction.
    pub fn round(&self, precision: u32, dir: Rounding) -> Dyadic {
        let bits = self.mantissa.bits();
        if bits <= precision as u64 {
            return self.clone();
        }
        let k = (bits - precision as u64) as i64;
        let pow = shl(&BigInt::one(), k);
        let q = match dir {
            Rounding::Down => self.mantissa.div_floor(&pow),
            Rounding::Up => self.mantissa.div_ceil(&pow),
        };
        Dyadic::new(q, self.exponent + k)
    }

    /// Directed conversion from an exact rational, keeping at least
    /// `precision` significant bits.
    pub fn from_rational(r: &BigRational, precision: u32, dir: Rounding) -> Dyadic {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = r.numer();
        let den = r.denom();
        if den.is_one() {
            return Dyadic::new(num.clone(), 0).round(precision, dir);
        }
        let nbits = num.bits() as i64;
        let dbits = den.bits() as i64;
        let shift = (precision as i64 + dbits - nbits + 2).max(0);
        let scaled = shl(num, shift);
        let q = match dir {
            Rounding::Down => scaled.div_floor(den),
            Rounding::Up => scaled.div_ceil(den),
        };
        Dyadic::new(q, -shift).round(precision, dir)
    }

    /// Directed quotient with `precision` significant bits.
    pub fn div(&self, other: &Dyadic, precision: u32, dir: Rounding) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        let q = BigRational::new(self.mantissa.clone(), other.mantissa.clone());
        let mut d = Dyadic::from_rational(&q, precision, dir);
        d.exponent += self.exponent - other.exponent;
        d
    }

    /// Directed square root with `precision` significant bits.
    /// Panics if `self` is negative.
    pub fn sqrt(&self, precision: u32, dir: Rounding) -> Dyadic {
        assert!(!self.is_negative(), "dyadic sqrt of negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale so the integer sqrt carries enough bits and the exponent
        // stays even.
        let bits = self.mantissa.bits() as i64;
        let mut k = (2 * precision as i64 + 4 - bits).max(0);
        if (self.exponent - k) % 2 != 0 {
            k += 1;
        }
        let scaled = shl(&self.mantissa, k);
        let root = scaled.sqrt(); // floor
        let m = match dir {
            Rounding::Down => root,
            Rounding::Up => {
                if (&root * &root) == scaled {
                    root
                } else {
                    root + 1
                }
            }
        };
        Dyadic::new(m, (self.exponent - k) / 2).round(precision, dir)
    }

    /// Decimal string with `digits` significant digits (round-to-nearest-ish,
    /// adequate for reporting).
    pub fn to_decimal_string(&self, digits: u32) -> String {
        rational_to_decimal(&self.as_rational(), digits)
    }

    /// floor(log2 |x|), or None for zero.
    pub fn log2_abs_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64 - 1)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let diff = self.sub(other);
        match diff.sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

/// Render a rational as a decimal string with the given number of
/// significant digits.
pub fn rational_to_decimal(r: &BigRational, digits: u32) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Find decimal exponent: smallest k with a < 10^(k+1), a >= 10^k.
    let ten = BigRational::from_integer(BigInt::from(10));
    let mut k: i64 = 0;
    let mut probe = a.clone();
    if probe >= BigRational::one() {
        while probe >= ten {
            probe /= &ten;
            k += 1;
        }
    } else {
        while probe < BigRational::one() {
            probe *= &ten;
            k -= 1;
        }
    }
    // digits of a * 10^(digits-1-k), rounded to nearest
    let shift = digits as i64 - 1 - k;
    let mut scaled = a.clone();
    let pow = ten_pow(shift.unsigned_abs());
    if shift >= 0 {
        scaled *= &pow;
    } else {
        scaled /= &pow;
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = (scaled + half).floor().to_integer();
    let digits_str = rounded.to_string();
    // Account for a rounding carry adding a digit.
    let k = k + (digits_str.len() as i64 - digits as i64);
    let mantissa = &digits_str[..digits as usize];
    let sign = if neg { "-" } else { "" };
    if (0..digits as i64).contains(&k) {
        let point = (k + 1) as usize;
        let trimmed = format!("{}.{}", &mantissa[..point], &mantissa[point..]);
        let trimmed = trimmed.trim_end_matches('0').trim_end_matches('.').to_string();
        format!("{sign}{trimmed}")
    } else if (-4..0).contains(&k) {
        let zeros = "0".repeat((-k - 1) as usize);
        let trimmed = mantissa.trim_end_matches('0');
        let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
        format!("{sign}0.{zeros}{trimmed}")
    } else {
        let rest = mantissa[1..].trim_end_matches('0');
        if rest.is_empty() {
            format!("{sign}{}e{}", &mantissa[..1], k)
        } else {
            format!("{sign}{}.{}e{}", &mantissa[..1], rest, k)
        }
    }
}

fn ten_pow(k: u64) -> BigRational {
    let mut n = BigInt::one();
    for _ in 0..k {
        n *= 10;
    }
    BigRational::from_integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(5), -3); // 0.625
        assert_eq!(a.add(&b).as_rational(), rat(11, 8));
        assert_eq!(a.sub(&b).as_rational(), rat(1, 8));
        assert_eq!(a.mul(&b).as_rational(), rat(15, 32));
    }

    #[test]
    fn rounding_directions() {
        let third = rat(1, 3);
        let lo = Dyadic::from_rational(&third, 20, Rounding::Down);
        let hi = Dyadic::from_rational(&third, 20, Rounding::Up);
        assert!(lo.as_rational() < third);
        assert!(hi.as_rational() > third);
        assert!((hi.as_rational() - lo.as_rational()) < rat(1, 1 << 20));
    }

    #[test]
    fn sqrt_brackets_true_value() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Rounding::Down);
        let hi = two.sqrt(64, Rounding::Up);
        assert!(lo.as_rational().pow(2) <= rat(2, 1));
        assert!(hi.as_rational().pow(2) >= rat(2, 1));
        assert!(lo < hi);
    }

    #[test]
    fn sqrt_exact_square() {
        let four = Dyadic::from_int(4);
        assert_eq!(four.sqrt(32, Rounding::Down), Dyadic::from_int(2));
        assert_eq!(four.sqrt(32, Rounding::Up), Dyadic::from_int(2));
    }

    #[test]
    fn ordering() {
        let a = Dyadic::new(BigInt::from(1), -1);
        let b = Dyadic::new(BigInt::from(3), -2);
        assert!(a < b);
        assert!(b > a);
        assert_eq!(a.cmp(&a), Ordering::Equal);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal(&rat(1, 2), 17), "0.5");
        assert_eq!(rational_to_decimal(&rat(-39, 89), 5), "-0.4382");
        assert_eq!(rational_to_decimal(&rat(1000, 1), 4), "1000");
    }
}
