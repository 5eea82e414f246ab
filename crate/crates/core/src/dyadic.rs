//! Exact arithmetic on the dyadic rationals `Z[1/2]`.
//!
//! Every value is stored as `mantissa * 2^exponent` in canonical form: the
//! mantissa is odd, or the value is zero with exponent zero. Equality is
//! therefore structural. There is no general division; halving is an
//! exponent decrement.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision signed integer.
pub type BigInteger = BigInt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    /// Builds `mantissa * 2^exponent`, normalising to canonical form.
    pub fn new(mantissa: BigInt, exponent: i64) -> Result<Self> {
        if mantissa.is_zero() {
            return Ok(Self::zero());
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        let exponent = i64::try_from(tz)
            .ok()
            .and_then(|tz| exponent.checked_add(tz))
            .ok_or(Error::ExponentOverflow)?;
        Ok(Dyadic {
            mantissa: mantissa >> tz,
            exponent,
        })
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from(1)
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::new(n, 0).expect("integer exponent cannot overflow")
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// True when the value is an integer.
    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    /// Exact integer value, if the value is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        let e = usize::try_from(self.exponent).ok()?;
        Some(&self.mantissa << e)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let e = self.exponent.min(other.exponent);
        let a = shift_up(&self.mantissa, self.exponent, e)?;
        let b = shift_up(&other.mantissa, other.exponent, e)?;
        Self::new(a + b, e)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let exponent = self
            .exponent
            .checked_add(other.exponent)
            .ok_or(Error::ExponentOverflow)?;
        // product of odd mantissas is odd, so it is already canonical
        Ok(Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent,
        })
    }

    /// Multiplication by `2^k`.
    pub fn checked_mul_pow2(&self, k: i64) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let exponent = self.exponent.checked_add(k).ok_or(Error::ExponentOverflow)?;
        Ok(Dyadic {
            mantissa: self.mantissa.clone(),
            exponent,
        })
    }

    pub fn half(&self) -> Result<Self> {
        self.checked_mul_pow2(-1)
    }

    pub fn pow(&self, n: u32) -> Self {
        if self.is_zero() {
            return if n == 0 { Self::one() } else { Self::zero() };
        }
        let exponent = self
            .exponent
            .checked_mul(i64::from(n))
            .expect("dyadic exponent overflow");
        Dyadic {
            mantissa: num_traits::pow(self.mantissa.clone(), n as usize),
            exponent,
        }
    }

    /// Floor of `log2 |x|` for nonzero values, i.e. the position of the leading bit.
    pub fn magnitude_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64 - 1)
        }
    }

    /// Three-way comparison of absolute values.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.magnitude_exponent(), other.magnitude_exponent()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) if a != b => a.cmp(&b),
            _ => {
                let e = self.exponent.min(other.exponent);
                let a = self.mantissa.magnitude() << (self.exponent - e) as usize;
                let b = other.mantissa.magnitude() << (other.exponent - e) as usize;
                a.cmp(&b)
            }
        }
    }

    /// Rounds towards negative infinity to at most `bits` significant bits.
    pub fn round_to_bits(&self, bits: u64) -> Self {
        let len = self.mantissa.bits();
        if len <= bits {
            return self.clone();
        }
        let drop = len - bits;
        Self::new(&self.mantissa >> drop as usize, self.exponent + drop as i64).expect("dyadic exponent overflow")
    }

    /// Nearest `f64` (truncated to 64 significant bits first).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let len = self.mantissa.bits();
        let (m, e) = if len > 64 {
            let drop = len - 64;
            (&self.mantissa >> drop as usize, self.exponent + drop as i64)
        } else {
            (self.mantissa.clone(), self.exponent)
        };
        ldexp(m.to_f64().unwrap_or(f64::NAN), e)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let (m, e, s) = x.integer_decode();
        let m = BigInt::from(m) * i64::from(s);
        Self::new(m, i64::from(e)).ok()
    }

    /// Approximate `log2 |x|`; negative infinity for zero.
    pub fn log2_abs(&self) -> f64 {
        match self.magnitude_exponent() {
            None => f64::NEG_INFINITY,
            Some(top) => {
                let len = self.mantissa.bits();
                let lead = if len > 60 {
                    (self.mantissa.magnitude() >> (len - 60) as usize).to_f64().unwrap() / 2f64.powi(59)
                } else {
                    self.mantissa.abs().to_f64().unwrap() / 2f64.powi(len as i32 - 1)
                };
                top as f64 + lead.log2()
            }
        }
    }
}

fn shift_up(m: &BigInt, from: i64, to: i64) -> Result<BigInt> {
    let d = from.checked_sub(to).ok_or(Error::ExponentOverflow)?;
    let d = usize::try_from(d).map_err(|_| Error::ExponentOverflow)?;
    Ok(m << d)
}

/// `x * 2^e` without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_integer(BigInt::from(n))
    }
}

impl From<i32> for Dyadic {
    fn from(n: i32) -> Self {
        Dyadic::from(i64::from(n))
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic::from_integer(n)
    }
}

impl From<&BigInt> for Dyadic {
    fn from(n: &BigInt) -> Self {
        Dyadic::from_integer(n.clone())
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        let by_abs = self.cmp_abs(other);
        if sa < 0 {
            by_abs.reverse()
        } else {
            by_abs
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                self.$checked(rhs).expect("dyadic exponent overflow")
            }
        }
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                (&self).$method(rhs)
            }
        }
        impl $tr<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // small nonnegative exponents print as plain integers
        if (0..=64).contains(&self.exponent) {
            write!(f, "{}", &self.mantissa << self.exponent as usize)
        } else {
            write!(f, "{}*2^{}", self.mantissa, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `m*2^e` or a plain decimal integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid dyadic value `{s}`"));
        match s.split_once('*') {
            None => s.parse::<BigInt>().map(Dyadic::from).map_err(|_| bad()),
            Some((m, rest)) => {
                let e = rest.trim().strip_prefix("2^").ok_or_else(bad)?;
                let m = m.trim().parse::<BigInt>().map_err(|_| bad())?;
                let e = e.trim().parse::<i64>().map_err(|_| bad())?;
                Dyadic::new(m, e)
            }
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(dy(1, 0) + dy(1, -1), dy(3, -1));
        assert_eq!(dy(3, -1) + Dyadic::zero(), dy(3, -1));
        let s = dy(3, -2) + dy(1, -2);
        assert_eq!(s, dy(1, 0));
        assert_eq!(s.mantissa(), &BigInt::from(1));
        assert_eq!(s.exponent(), 0);
    }

    #[test]
    fn mul_examples() {
        assert_eq!(dy(3, -1) * dy(1, 1), dy(3, 0));
        assert_eq!(dy(7, -5) * Dyadic::one(), dy(7, -5));
        let p = dy(5, -3) * dy(3, -1);
        assert_eq!((p.mantissa().clone(), p.exponent()), (BigInt::from(15), -4));
    }

    #[test]
    fn compare_abs_examples() {
        assert_eq!(dy(-3, -1).cmp_abs(&dy(1, 0)), Ordering::Greater);
        assert_eq!(Dyadic::zero().cmp_abs(&Dyadic::zero()), Ordering::Equal);
        assert_eq!(dy(7, -3).cmp_abs(&dy(1, 0)), Ordering::Less);
    }

    #[test]
    fn canonical_form() {
        let x = Dyadic::new(BigInt::from(12), 3).unwrap();
        assert_eq!((x.mantissa().clone(), x.exponent()), (BigInt::from(3), 5));
        let z = Dyadic::new(BigInt::zero(), 17).unwrap();
        assert_eq!(z.exponent(), 0);
        assert_eq!(dy(1, 3) - dy(1, 3), Dyadic::zero());
    }

    #[test]
    fn ordering_mixed_signs() {
        let mut v = vec![dy(3, -1), dy(-5, 2), Dyadic::zero(), dy(1, 10), dy(-1, -40)];
        v.sort();
        assert_eq!(v, vec![dy(-5, 2), dy(-1, -40), Dyadic::zero(), dy(3, -1), dy(1, 10)]);
    }

    #[test]
    fn overflow_is_reported() {
        let big = Dyadic::pow2(i64::MAX);
        assert_eq!(big.checked_mul(&dy(1, 1)), Err(Error::ExponentOverflow));
        let tiny = Dyadic::pow2(i64::MIN);
        assert_eq!(tiny.half(), Err(Error::ExponentOverflow));
    }

    #[test]
    fn text_form() {
        assert_eq!("3*2^-2".parse::<Dyadic>().unwrap(), dy(3, -2));
        assert_eq!("-7".parse::<Dyadic>().unwrap(), dy(-7, 0));
        assert_eq!("12*2^0".parse::<Dyadic>().unwrap(), dy(3, 2));
        assert_eq!(dy(3, -2).to_string(), "3*2^-2");
        assert_eq!(dy(-7, 0).to_string(), "-7");
        assert!("3*3^2".parse::<Dyadic>().is_err());
        assert!("abc".parse::<Dyadic>().is_err());
    }

    #[test]
    fn float_conversions() {
        assert_eq!(dy(3, -2).to_f64(), 0.75);
        assert_eq!(Dyadic::from_f64(0.75).unwrap(), dy(3, -2));
        assert_eq!(Dyadic::from_f64(-0.0).unwrap(), Dyadic::zero());
        assert!(Dyadic::from_f64(f64::NAN).is_none());
        assert_eq!(dy(1, -1100).to_f64(), 0.0);
        assert_eq!(dy(1, 2000).to_f64(), f64::INFINITY);
        assert!((dy(3, 200).log2_abs() - (200.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn rounding_keeps_leading_bits() {
        let x = dy(0b1011_0111, 0);
        assert_eq!(x.round_to_bits(4), dy(0b1011, 4));
        assert_eq!(x.round_to_bits(64), x);
    }
}
