//! Fixed-precision complex arithmetic over dyadic values.
//!
//! Each operation computes the exact dyadic result and then truncates the
//! mantissa to `prec` bits, so a value always remains an exact dyadic.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::dyadic::Dyadic;

/// `a / b` to `prec` significant bits. `b` must be nonzero.
pub fn div_real(a: &Dyadic, b: &Dyadic, prec: u64) -> Dyadic {
    assert!(!b.is_zero(), "division by zero");
    if a.is_zero() {
        return Dyadic::zero();
    }
    let (ba, bb) = (a.mantissa().bits() as i64, b.mantissa().bits() as i64);
    let shift = (prec as i64 + bb - ba + 1).max(0);
    let q: BigInt = (a.mantissa() << shift as usize) / b.mantissa();
    Dyadic::new(q, a.exponent() - shift - b.exponent()).expect("dyadic exponent overflow")
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MpComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl MpComplex {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        MpComplex { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn real(re: Dyadic) -> Self {
        MpComplex { re, im: Dyadic::zero() }
    }

    pub fn from_c64(z: Complex64) -> Self {
        MpComplex {
            re: Dyadic::from_f64(z.re).unwrap_or_default(),
            im: Dyadic::from_f64(z.im).unwrap_or_default(),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        MpComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn round(&self, prec: u64) -> Self {
        MpComplex {
            re: self.re.round_to_bits(prec),
            im: self.im.round_to_bits(prec),
        }
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        MpComplex {
            re: (&self.re + &o.re).round_to_bits(prec),
            im: (&self.im + &o.im).round_to_bits(prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        MpComplex {
            re: (&self.re - &o.re).round_to_bits(prec),
            im: (&self.im - &o.im).round_to_bits(prec),
        }
    }

    /// Exact difference.
    pub fn sub_exact(&self, o: &Self) -> Self {
        MpComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        MpComplex {
            re: re.round_to_bits(prec),
            im: im.round_to_bits(prec),
        }
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn recip(&self, prec: u64) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr().round_to_bits(prec + 8);
        Some(MpComplex {
            re: div_real(&self.re, &n, prec),
            im: div_real(&(-&self.im), &n, prec),
        })
    }

    pub fn div(&self, o: &Self, prec: u64) -> Option<Self> {
        Some(self.mul(&o.recip(prec + 8)?, prec))
    }

    /// Approximate `log2 |z|`.
    pub fn log2_abs(&self) -> f64 {
        0.5 * self.norm_sqr().log2_abs()
    }
}
