//! Integer polynomials: exact evaluation at dyadic points, Taylor shifts,
//! subresultant gcd and the square-free substitutions used by the isolator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Univariate polynomial with integer coefficients, lowest degree first.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient vector and every other polynomial has a nonzero
/// leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Coefficients of `f(center + y)` in powers of `y`: `coeffs[i] = f^(i)(center) / i!`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorExpansion {
    pub center: Dyadic,
    pub coeffs: Vec<Dyadic>,
}

impl TaylorExpansion {
    /// Evaluates the expansion at offset `y` from the center.
    pub fn evaluate_offset(&self, y: &Dyadic) -> Dyadic {
        self.coeffs.iter().rev().fold(Dyadic::zero(), |acc, c| &(&acc * y) + c)
    }

    /// `sum_{i>=1} |coeffs[i]| * r^i`, the tail majorant on a disc of radius `r`.
    pub fn tail_majorant(&self, r: &Dyadic) -> Dyadic {
        let mut total = Dyadic::zero();
        let mut rp = Dyadic::one();
        for c in self.coeffs.iter().skip(1) {
            rp = &rp * r;
            total = &total + &(&c.abs() * &rp);
        }
        total
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Exact value at a dyadic point.
    pub fn evaluate(&self, x: &Dyadic) -> Dyadic {
        let Some(d) = self.degree() else {
            return Dyadic::zero();
        };
        if x.exponent() >= 0 {
            let xi = x.to_integer().expect("nonnegative exponent is an integer");
            let v = self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xi + c);
            return Dyadic::from(v);
        }
        // x = m / 2^k: scale by 2^(k d) so the Horner loop stays integral
        let k = (-x.exponent()) as usize;
        let m = x.mantissa();
        let mut acc = self.coeffs[d].clone();
        for i in (0..d).rev() {
            acc = acc * m + (&self.coeffs[i] << (k * (d - i)));
        }
        Dyadic::new(acc, -((k * d) as i64)).expect("dyadic exponent overflow")
    }

    /// Sign of the value at `x`: -1, 0 or +1.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        self.evaluate(x).signum()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Taylor coefficients at `center`.
    ///
    /// With `center = m / 2^k` the polynomial is rescaled to
    /// `F(X) = 2^(k d) f(X / 2^k)`, shifted by the integer `m` with synthetic
    /// division, and scaled back, so no factorials or fractions appear.
    pub fn taylor_expansion(&self, center: &Dyadic) -> TaylorExpansion {
        let Some(d) = self.degree() else {
            return TaylorExpansion {
                center: center.clone(),
                coeffs: Vec::new(),
            };
        };
        let k = if center.exponent() < 0 {
            (-center.exponent()) as usize
        } else {
            0
        };
        let m = if k == 0 {
            center.to_integer().expect("integer center")
        } else {
            center.mantissa().clone()
        };
        let mut c: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a << (k * (d - i)))
            .collect();
        if !m.is_zero() {
            for i in 0..d {
                for j in (i..d).rev() {
                    let t = &m * &c[j + 1];
                    c[j] += t;
                }
            }
        }
        let coeffs = c
            .into_iter()
            .enumerate()
            .map(|(i, ci)| Dyadic::new(ci, (k as i64) * (i as i64 - d as i64)).expect("dyadic exponent overflow"))
            .collect();
        TaylorExpansion {
            center: center.clone(),
            coeffs,
        }
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// The polynomial divided by its content, with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut cont = self.content();
        if self.leading_coefficient().unwrap().is_negative() {
            cont = -cont;
        }
        Self::new(self.coeffs.iter().map(|c| c / &cont).collect())
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn div_scalar_exact(&self, s: &BigInt) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % s).is_zero());
                    c / s
                })
                .collect(),
        )
    }

    /// Pseudo-remainder `prem(self, divisor) = lc(divisor)^(delta+1) * self mod divisor`
    /// with `delta = deg self - deg divisor`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        let db = divisor.degree().expect("pseudo-division by zero polynomial");
        let Some(da) = self.degree() else {
            return Self::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = divisor.leading_coefficient().unwrap();
        let mut r = self.coeffs.clone();
        let mut steps = 0u32;
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let lr = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= lb;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                r[i + shift] -= &lr * b;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps += 1;
        }
        let total = (da - db + 1) as u32;
        let mut out = Self::new(r);
        if total > steps {
            out = out.scale(&num_traits::pow(lb.clone(), (total - steps) as usize));
        }
        out
    }

    /// Exact quotient over the integers; fails unless `divisor` divides `self` in `Z[X]`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let db = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(da) = self.degree() else {
            return Ok(Self::zero());
        };
        if da < db {
            return Err(Error::InexactDivision);
        }
        let lb = divisor.leading_coefficient().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let (c, rem) = r.last().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                r[i + shift] -= &c * b;
            }
            q[shift] = c;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        if !r.is_empty() {
            return Err(Error::InexactDivision);
        }
        Ok(Self::new(q))
    }

    /// `L`: the largest bit length among the coefficient magnitudes.
    pub fn bit_length(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0))
    }

    /// A power of two `B` with every complex root strictly inside `|z| < B`:
    /// the smaller of `2^L` and the Cauchy bound rounded up to a power of two.
    pub fn root_bound(&self) -> Result<Dyadic> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::ConstantPolynomial);
        }
        let l = self.bit_length()?;
        let lead = self.coeffs[d].abs();
        let max_lower = self.coeffs[..d]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let target = &lead + &max_lower;
        let mut k = 0u64;
        while (&lead << k as usize) < target {
            k += 1;
        }
        Ok(Dyadic::pow2(k.min(l) as i64))
    }

    /// Human readable form such as `X^2 - 2`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{i}"),
            };
            if mono.is_empty() || !a.is_one() {
                out.push_str(&a.to_string());
            }
            out.push_str(&mono);
        }
        out
    }
}

/// Primitive gcd with positive leading coefficient, by the subresultant
/// polynomial remainder sequence.
pub fn gcd(f: &IntPolynomial, g: &IntPolynomial) -> Result<IntPolynomial> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(Error::BothZero),
        (true, false) => return Ok(g.primitive_part()),
        (false, true) => return Ok(f.primitive_part()),
        _ => {}
    }
    let (mut a, mut b) = (f.primitive_part(), g.primitive_part());
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut sg = BigInt::one();
    let mut sh = BigInt::one();
    loop {
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(b.primitive_part());
        }
        if r.degree() == Some(0) {
            return Ok(IntPolynomial::constant(BigInt::one()));
        }
        a = b;
        b = r.div_scalar_exact(&(&sg * num_traits::pow(sh.clone(), delta)));
        sg = a.leading_coefficient().unwrap().clone();
        sh = if delta == 0 {
            sh
        } else {
            let num = num_traits::pow(sg.clone(), delta);
            let den = num_traits::pow(sh, delta - 1);
            num / den
        };
    }
}

/// `f / gcd(f, f')`, primitive with positive leading coefficient.
pub fn square_free_part(f: &IntPolynomial) -> Result<IntPolynomial> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = gcd(f, &f.derivative())?;
    Ok(f.div_exact(&g)?.primitive_part())
}

/// `p / gcd(p, q)`; for square-free `p` the result is coprime to `q`.
pub fn coprime_part(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = gcd(p, q)?;
    Ok(p.div_exact(&g)?.primitive_part())
}

impl fmt::Display for IntPolynomial {
    /// Comma separated coefficients, lowest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({})", self.pretty())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("invalid coefficient `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_default();
                    a + b
                })
                .collect(),
        )
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}
