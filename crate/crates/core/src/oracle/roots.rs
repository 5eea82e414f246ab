//! Simultaneous complex root finding by Aberth–Ehrlich iteration.
//!
//! A double precision pass runs first. Its result is accepted when each
//! root's error estimate is tiny compared with the distance to the nearest
//! other root; otherwise the iteration continues in fixed-precision dyadic
//! arithmetic, doubling the precision until the same test passes. Real roots
//! are then snapped to the real axis using an exact Sturm count, and the
//! remaining roots are made exactly conjugate-symmetric.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use super::mp::MpComplex;
use super::sturm::SturmSequence;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::poly::{gcd, IntPolynomial};

const F64_SWEEPS: usize = 200;
const MP_SWEEPS: usize = 400;
const MP_START_BITS: u64 = 256;
const MP_MAX_BITS: u64 = 1 << 15;
/// Required gap, in bits, between a root's error and its nearest neighbour.
const SEPARATION_MARGIN_BITS: f64 = 30.0;
const RESIDUAL_LIMIT: f64 = 1e-8;

/// All complex roots of a polynomial, with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    roots: Vec<MpComplex>,
    residual_bound: f64,
    precision_bits: u64,
}

impl RootSet {
    pub fn empty() -> Self {
        RootSet {
            roots: Vec::new(),
            residual_bound: 0.0,
            precision_bits: 53,
        }
    }

    /// Builds a root set from given values, e.g. for hand-made test models.
    pub fn from_c64(roots: &[Complex64]) -> Self {
        RootSet {
            roots: roots.iter().map(|&z| MpComplex::from_c64(z)).collect(),
            residual_bound: 0.0,
            precision_bits: 53,
        }
    }

    pub fn roots(&self) -> &[MpComplex] {
        &self.roots
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.roots.iter().map(MpComplex::to_c64).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `max |p(r)| / (||p||_2 max(1, |r|)^d)` over the returned roots.
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }

    /// Working precision that produced the roots; 53 means double precision.
    pub fn precision_bits(&self) -> u64 {
        self.precision_bits
    }

    /// Roots whose imaginary part is exactly zero.
    pub fn real_roots(&self) -> impl Iterator<Item = &Dyadic> {
        self.roots.iter().filter(|z| z.im.is_zero()).map(|z| &z.re)
    }
}

pub fn complex_roots(p: &IntPolynomial) -> Result<RootSet> {
    let d = match p.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantPolynomial),
        Some(d) => d,
    };
    let nonconvergence = || Error::NonConvergence { poly: p.pretty() };
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let q = IntPolynomial::new(p.coeffs()[zeros..].to_vec());
    let mut roots = vec![MpComplex::zero(); zeros];
    let mut precision_bits = 53;
    if q.degree().unwrap_or(0) > 0 {
        let (found, bits) = nonzero_roots(&q).ok_or_else(nonconvergence)?;
        precision_bits = bits;
        let real_count = if gcd(&q, &q.derivative())?.degree() == Some(0) {
            let b = q.root_bound()?;
            Some(SturmSequence::new(&q)?.count(&-&b, &b))
        } else {
            None
        };
        roots.extend(snap_to_axis(found, real_count).ok_or_else(nonconvergence)?);
    }
    roots.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));

    let eval_bits = precision_bits.max(128) + 64;
    let coeffs: Vec<Dyadic> = p.coeffs().iter().map(Dyadic::from).collect();
    let norm_log2 = 0.5
        * p.coeffs()
            .iter()
            .fold(Dyadic::zero(), |acc, c| {
                let c = Dyadic::from(c);
                &acc + &(&c * &c)
            })
            .log2_abs();
    let mut residual_bound: f64 = 0.0;
    for r in &roots {
        let (v, _) = horner_mp(&coeffs, r, eval_bits);
        let scale = d as f64 * r.log2_abs().max(0.0);
        let lg = v.log2_abs() - norm_log2 - scale;
        residual_bound = residual_bound.max(lg.exp2());
    }
    if residual_bound.is_nan() || residual_bound >= RESIDUAL_LIMIT {
        return Err(nonconvergence());
    }
    debug_assert_eq!(roots.len(), d);
    Ok(RootSet {
        roots,
        residual_bound,
        precision_bits,
    })
}

/// Roots of a polynomial with nonzero constant term, and the precision used.
fn nonzero_roots(q: &IntPolynomial) -> Option<(Vec<MpComplex>, u64)> {
    let log_coeffs: Vec<f64> = q.coeffs().iter().map(|c| Dyadic::from(c).log2_abs()).collect();
    let mut z = initial_guesses(&log_coeffs);

    let fc: Vec<f64> = q.coeffs().iter().map(|c| Dyadic::from(c).to_f64()).collect();
    if fc.iter().all(|c| c.is_finite()) {
        let (found, corr) = aberth_f64(&fc, &z);
        if let Some(corr) = corr {
            if accept_f64(&fc, &found, &corr) {
                return Some((found.iter().map(|&w| MpComplex::from_c64(w)).collect(), 53));
            }
        }
        if found.iter().all(|w| w.re.is_finite() && w.im.is_finite()) {
            z = found;
        }
    }
    separate_coincident(&mut z);

    let coeffs: Vec<Dyadic> = q.coeffs().iter().map(Dyadic::from).collect();
    let mut zm: Vec<MpComplex> = z.iter().map(|&w| MpComplex::from_c64(w)).collect();
    let mut prec = MP_START_BITS;
    while prec <= MP_MAX_BITS {
        if let Some(corr_log2) = aberth_mp(&coeffs, &mut zm, prec) {
            if accept_mp(&coeffs, &log_coeffs, &zm, &corr_log2, prec) {
                return Some((zm, prec));
            }
        }
        prec *= 2;
    }
    None
}

/// Guesses on circles whose radii come from the upper convex hull of
/// `(i, log2 |a_i|)`, the Newton polygon of the coefficients.
fn initial_guesses(log_coeffs: &[f64]) -> Vec<Complex64> {
    let d = log_coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = log_coeffs
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(i, &v)| (i, v))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(d);
    for w in hull.windows(2) {
        let ((i, li), (j, lj)) = (w[0], w[1]);
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp2().clamp(1e-300, 1e300);
        for k in 0..count {
            let theta = 2.0 * PI * (k as f64 / count as f64 + i as f64 / d as f64) + 0.7;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    out
}

fn horner_f64(a: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Gauss–Seidel Aberth sweeps; returns the roots and, on convergence,
/// the correction sizes of one final unfrozen sweep.
fn aberth_f64(a: &[f64], start: &[Complex64]) -> (Vec<Complex64>, Option<Vec<f64>>) {
    let mut z = start.to_vec();
    let n = z.len();
    let mut done = vec![false; n];
    let mut converged = false;
    let mut corr = vec![0.0; n];
    for _ in 0..F64_SWEEPS {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let Some(delta) = aberth_step_f64(a, &z, i) else {
                all = false;
                z[i] *= Complex64::new(1.0, 1e-7);
                continue;
            };
            z[i] -= delta;
            if delta.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            converged = true;
            break;
        }
    }
    if !converged {
        return (z, None);
    }
    for i in 0..n {
        match aberth_step_f64(a, &z, i) {
            Some(delta) => {
                z[i] -= delta;
                corr[i] = delta.norm();
            }
            None => return (z, None),
        }
    }
    (z, Some(corr))
}

fn aberth_step_f64(a: &[f64], z: &[Complex64], i: usize) -> Option<Complex64> {
    let (p, dp) = horner_f64(a, z[i]);
    if p == Complex64::zero() {
        return Some(Complex64::zero());
    }
    let ratio = p / dp;
    let s: Complex64 = (0..z.len()).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
    let delta = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
    (delta.re.is_finite() && delta.im.is_finite()).then_some(delta)
}

fn accept_f64(a: &[f64], z: &[Complex64], corr: &[f64]) -> bool {
    let n = z.len();
    (0..n).all(|i| {
        let r = z[i].norm();
        let (_, dp) = horner_f64(a, z[i]);
        let mut acc = 0.0;
        let mut rp = 1.0;
        for c in a {
            acc += c.abs() * rp;
            rp *= r;
        }
        let err = (8.0 * f64::EPSILON * acc / dp.norm()).max(corr[i]);
        let sep = (0..n)
            .filter(|&j| j != i)
            .map(|j| (z[i] - z[j]).norm())
            .fold(f64::INFINITY, f64::min)
            .min(r);
        err.is_finite() && err <= sep * (-SEPARATION_MARGIN_BITS).exp2()
    })
}

fn separate_coincident(z: &mut [Complex64]) {
    for i in 0..z.len() {
        for j in 0..i {
            if (z[i] - z[j]).norm() <= 1e-12 * z[i].norm() {
                let tweak = Complex64::from_polar(1e-9, 1.0 + i as f64);
                z[i] *= Complex64::new(1.0, 0.0) + tweak;
            }
        }
    }
}

fn horner_mp(a: &[Dyadic], z: &MpComplex, prec: u64) -> (MpComplex, MpComplex) {
    let mut p = MpComplex::zero();
    let mut dp = MpComplex::zero();
    for c in a.iter().rev() {
        dp = dp.mul(z, prec).add(&p, prec);
        p = p.mul(z, prec).add(&MpComplex::real(c.clone()), prec);
    }
    (p, dp)
}

fn aberth_step_mp(a: &[Dyadic], z: &[MpComplex], i: usize, prec: u64) -> Option<MpComplex> {
    let (p, dp) = horner_mp(a, &z[i], prec);
    if p.is_zero() {
        return Some(MpComplex::zero());
    }
    let ratio = p.div(&dp, prec)?;
    let mut s = MpComplex::zero();
    for (j, zj) in z.iter().enumerate() {
        if j != i {
            s = s.add(&z[i].sub(zj, prec).recip(prec)?, prec);
        }
    }
    let one = MpComplex::real(Dyadic::one());
    ratio.div(&one.sub(&ratio.mul(&s, prec), prec), prec)
}

/// Aberth sweeps at `prec` bits; on convergence returns `log2 |correction|`
/// of a final unfrozen sweep for each root.
fn aberth_mp(a: &[Dyadic], z: &mut [MpComplex], prec: u64) -> Option<Vec<f64>> {
    let n = z.len();
    let mut done = vec![false; n];
    let mut converged = false;
    for _ in 0..MP_SWEEPS {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let Some(delta) = aberth_step_mp(a, z, i, prec) else {
                all = false;
                let tweak = MpComplex::new(Dyadic::one(), Dyadic::pow2(-40));
                z[i] = z[i].mul(&tweak, prec);
                continue;
            };
            z[i] = z[i].sub(&delta, prec);
            // |delta|^2 <= 2^-prec |z|^2
            let lhs = delta.norm_sqr();
            let rhs = z[i].norm_sqr().checked_mul_pow2(-(prec as i64)).ok()?;
            if lhs <= rhs {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let mut corr = Vec::with_capacity(n);
    for i in 0..n {
        let delta = aberth_step_mp(a, z, i, prec)?;
        z[i] = z[i].sub(&delta, prec);
        corr.push(delta.log2_abs());
    }
    Some(corr)
}

fn accept_mp(a: &[Dyadic], log_coeffs: &[f64], z: &[MpComplex], corr_log2: &[f64], prec: u64) -> bool {
    let n = z.len();
    let slack = ((a.len()) as f64).log2() + 4.0;
    (0..n).all(|i| {
        let lr = z[i].log2_abs();
        let lacc = log_coeffs
            .iter()
            .enumerate()
            .map(|(k, lc)| lc + k as f64 * lr)
            .fold(f64::NEG_INFINITY, f64::max);
        let (_, dp) = horner_mp(a, &z[i], prec);
        let noise = -(prec as f64) + slack + lacc - dp.log2_abs();
        let err = noise.max(corr_log2[i]);
        let sep = (0..n)
            .filter(|&j| j != i)
            .map(|j| z[i].sub_exact(&z[j]).log2_abs())
            .fold(f64::INFINITY, f64::min)
            .min(lr);
        err.is_finite() && err <= sep - SEPARATION_MARGIN_BITS
    })
}

/// Puts the `real_count` most nearly real roots on the axis and pairs the rest.
fn snap_to_axis(mut roots: Vec<MpComplex>, real_count: Option<usize>) -> Option<Vec<MpComplex>> {
    let Some(k) = real_count else {
        return Some(roots);
    };
    let key = |z: &MpComplex| {
        if z.im.is_zero() {
            f64::NEG_INFINITY
        } else {
            z.im.log2_abs() - z.log2_abs()
        }
    };
    roots.sort_by(|a, b| key(a).total_cmp(&key(b)));
    let mut out = Vec::with_capacity(roots.len());
    for z in roots.iter().take(k) {
        out.push(MpComplex::real(z.re.clone()));
    }
    let rest = &roots[k.min(roots.len())..];
    let upper: Vec<&MpComplex> = rest.iter().filter(|z| z.im.signum() > 0).collect();
    if 2 * upper.len() != rest.len() {
        return None;
    }
    for z in upper {
        out.push(z.clone());
        out.push(z.conj());
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn close(set: &RootSet, expected: &[Complex64], tol: f64) -> bool {
        let got = set.to_c64();
        got.len() == expected.len() && expected.iter().all(|e| got.iter().any(|g| (g - e).norm() < tol))
    }

    #[test]
    fn quadratic_examples() {
        let r = complex_roots(&p(&[1, 0, 1])).unwrap();
        assert!(close(&r, &[Complex64::i(), -Complex64::i()], 1e-10));
        let s = 2f64.sqrt();
        let r = complex_roots(&p(&[-2, 0, 1])).unwrap();
        assert!(close(&r, &[Complex64::new(s, 0.0), Complex64::new(-s, 0.0)], 1e-10));
        assert_eq!(r.real_roots().count(), 2);
    }

    #[test]
    fn cubic_with_zero_root() {
        let r = complex_roots(&p(&[0, -1, 0, 1])).unwrap();
        let e: Vec<Complex64> = [-1.0, 0.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert!(close(&r, &e, 1e-10));
        assert!(r.roots().iter().any(|z| z.is_zero()));
    }

    #[test]
    fn errors() {
        assert_eq!(complex_roots(&p(&[4])), Err(Error::ConstantPolynomial));
        assert_eq!(complex_roots(&IntPolynomial::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn conjugate_pairs_are_exact() {
        let r = complex_roots(&p(&[5, -3, 2, 0, 1])).unwrap();
        for z in r.roots() {
            assert!(r.roots().contains(&z.conj()));
        }
    }

    #[test]
    fn resolves_mignotte_cluster() {
        // X^8 - 2 (2^7 X - 1)^2 has two real roots about 2^-35 apart near 2^-7
        let a = IntPolynomial::from_i64(&[-1, 128]);
        let f = &IntPolynomial::monomial(1.into(), 8) - &(&a * &a).scale(&2.into());
        let r = complex_roots(&f).unwrap();
        assert!(r.precision_bits() > 53);
        let mut near: Vec<&Dyadic> = r
            .real_roots()
            .filter(|x| (x.to_f64() - 1.0 / 128.0).abs() < 1e-6)
            .collect();
        near.sort();
        assert_eq!(near.len(), 2);
        let gap = (near[1] - near[0]).to_f64();
        // x = 1/a + t with 2 a^2 t^2 = a^-8 gives a gap of sqrt(2) * 2^-35
        let expected = 2f64.sqrt() * 2f64.powi(-35);
        assert!((gap / expected - 1.0).abs() < 1e-3, "gap {gap:e}");
    }

    #[test]
    fn newton_polygon_radii() {
        // roots 1/1000 and 1000: two well separated circles
        let z = initial_guesses(&[0.0, (1000.001f64).log2(), 0.0]);
        let mut radii: Vec<f64> = z.iter().map(|w| w.norm()).collect();
        radii.sort_by(f64::total_cmp);
        assert!(radii[0] < 0.01 && radii[1] > 100.0);
    }
}
