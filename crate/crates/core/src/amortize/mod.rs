//! Continuous amortization: stopping functions built from root distances,
//! the integral bound on the subdivision tree, and its closed-form majorant.
//!
//! Root positions are kept as exact dyadics. Every quadrature segment
//! measures distances from its own endpoints, so root clusters far below
//! double precision resolution relative to the interval width still
//! integrate correctly.

mod quadrature;
mod voronoi;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::isolate::{benchmark_interval, Interval, Substitution};
use crate::oracle::{complex_roots, RootSet};
use crate::poly::IntPolynomial;

pub use quadrature::{adaptive_simpson, graded_from_zero};
use voronoi::Site;
pub use voronoi::{MpComplexView, RootKind, VoronoiCell};

const REL_TOL: f64 = 1e-9;

/// Roots of `g` and `h` on a fixed interval, with the problem size.
#[derive(Clone, Debug)]
pub struct StoppingModel {
    pub roots_f: RootSet,
    pub roots_fp: RootSet,
    pub interval: Interval,
    pub degree_d: usize,
    pub bits_l: u64,
}

impl StoppingModel {
    /// Model for `f` on `interval`, using the square-free substitution.
    pub fn new(f: &IntPolynomial, interval: Interval) -> Result<Self> {
        let s = Substitution::new(f)?;
        let roots_f = complex_roots(&s.g)?;
        let roots_fp = if s.h.degree().unwrap_or(0) == 0 {
            RootSet::empty()
        } else {
            complex_roots(&s.h)?
        };
        Ok(StoppingModel {
            roots_f,
            roots_fp,
            interval,
            degree_d: f.degree().unwrap_or(0),
            bits_l: f.bit_length()?,
        })
    }

    pub fn benchmark(f: &IntPolynomial) -> Result<Self> {
        Self::new(f, benchmark_interval(f)?)
    }

    fn sites(&self) -> Vec<Site> {
        let tag = |rs: &RootSet, kind| {
            rs.roots()
                .iter()
                .map(move |r| Site { root: r.clone(), kind })
                .collect::<Vec<_>>()
        };
        let mut s = tag(&self.roots_f, RootKind::Function);
        s.extend(tag(&self.roots_fp, RootKind::Derivative));
        s
    }

    fn precision(&self) -> u64 {
        self.roots_f
            .precision_bits()
            .max(self.roots_fp.precision_bits())
            .max(64)
            + 64
    }
}

pub fn harmonic_mean(z: &[f64]) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = z.iter().find(|&&v| v.is_nan() || v <= 0.0) {
        return Err(Error::NonPositive(bad));
    }
    Ok(z.len() as f64 / z.iter().map(|v| 1.0 / v).sum::<f64>())
}

/// Sum of reciprocal distances from `x` to every root in `roots`.
pub fn sigma(x: f64, roots: &RootSet) -> Result<f64> {
    let z = Complex64::new(x, 0.0);
    let mut s = 0.0;
    for r in roots.to_c64() {
        let d = (z - r).norm();
        if d == 0.0 {
            return Err(Error::AtRoot(x));
        }
        s += 1.0 / d;
    }
    Ok(s)
}

/// `2 / (3 sigma)`, infinite for an empty root set.
fn stopping_term(x: f64, roots: &RootSet) -> Result<f64> {
    let s = sigma(x, roots)?;
    Ok(if s == 0.0 { f64::INFINITY } else { 2.0 / (3.0 * s) })
}

pub fn stopping_g0(x: f64, m: &StoppingModel) -> Result<f64> {
    stopping_term(x, &m.roots_f)
}

pub fn stopping_g1(x: f64, m: &StoppingModel) -> Result<f64> {
    stopping_term(x, &m.roots_fp)
}

/// `max(G0, G1)`; `+inf` when either root set is empty.
pub fn stopping_g(x: f64, m: &StoppingModel) -> Result<f64> {
    Ok(stopping_g0(x, m)?.max(stopping_g1(x, m)?))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Integrand {
    /// `2 / G = min(3 sigma_g, 3 sigma_h)`.
    G,
    /// `3 sigma_h` on cells of `g`-roots, `3 sigma_g` on cells of `h`-roots.
    F,
}

/// One integration segment: site offsets from each endpoint.
struct Segment<'a> {
    sites: &'a [Site],
    from_lo: Vec<Complex64>,
    from_hi: Vec<Complex64>,
    half: f64,
}

impl<'a> Segment<'a> {
    fn new(sites: &'a [Site], lo: &Dyadic, hi: &Dyadic) -> Self {
        let off = |x: &Dyadic| -> Vec<Complex64> {
            sites
                .iter()
                .map(|s| Complex64::new((x - &s.root.re).to_f64(), s.root.im.to_f64()))
                .collect()
        };
        Segment {
            sites,
            from_lo: off(lo),
            from_hi: off(hi),
            half: 0.5 * (hi - lo).to_f64(),
        }
    }

    /// Sums of reciprocal distances to `g`- and `h`-roots at `x = end + dir t`.
    fn sums(&self, offs: &[Complex64], dir: f64, t: f64) -> (f64, f64) {
        let (mut sg, mut sh) = (0.0, 0.0);
        for (s, o) in self.sites.iter().zip(offs) {
            let r = 1.0 / (o.re + dir * t).hypot(o.im);
            match s.kind {
                RootKind::Function => sg += r,
                RootKind::Derivative => sh += r,
            }
        }
        (sg, sh)
    }

    fn integrate(&self, mode: Integrand, owner: RootKind) -> Result<f64> {
        let value = |(sg, sh): (f64, f64)| -> f64 {
            match (mode, owner) {
                (Integrand::G, _) => 3.0 * sg.min(sh),
                (Integrand::F, RootKind::Function) => 3.0 * sh,
                (Integrand::F, RootKind::Derivative) => 3.0 * sg,
            }
        };
        let n = self.sites.len() as f64 + 1.0;
        let scale = |offs: &[Complex64]| {
            offs.iter()
                .map(|o| o.norm())
                .filter(|&d| d > 0.0)
                .fold(f64::INFINITY, f64::min)
                / n
        };
        let left = |t: f64| value(self.sums(&self.from_lo, 1.0, t));
        let right = |t: f64| value(self.sums(&self.from_hi, -1.0, t));
        let a = graded_from_zero(&left, self.half, scale(&self.from_lo), REL_TOL);
        let b = graded_from_zero(&right, self.half, scale(&self.from_hi), REL_TOL);
        match (a, b) {
            (Some(a), Some(b)) => Ok(a + b),
            _ => Err(Error::Quadrature("non-finite integrand".into())),
        }
    }
}

/// Breakpoints: cell boundaries, root abscissae inside the interval, ends.
fn segments(m: &StoppingModel, sites: &[Site]) -> Result<Vec<(Dyadic, Dyadic, RootKind)>> {
    let i = &m.interval;
    let runs = voronoi::cell_runs(sites, i, m.precision())?;
    let mut out = Vec::new();
    for (lo, hi, owner) in runs {
        let mut cuts: Vec<Dyadic> = sites
            .iter()
            .map(|s| s.root.re.clone())
            .filter(|x| &lo < x && x < &hi)
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            out.push((w[0].clone(), w[1].clone(), sites[owner].kind));
        }
    }
    Ok(out)
}

fn integrate(m: &StoppingModel, mode: Integrand) -> Result<f64> {
    if m.interval.is_point() {
        return Ok(0.0);
    }
    let sites = m.sites();
    if sites.is_empty() {
        return Ok(0.0);
    }
    segments(m, &sites)?
        .iter()
        .map(|(lo, hi, owner)| Segment::new(&sites, lo, hi).integrate(mode, *owner))
        .sum()
}

/// `int_I 2 / G` without clamping.
pub fn integral_2_over_g(m: &StoppingModel) -> Result<f64> {
    integrate(m, Integrand::G)
}

/// Upper bound on the subdivision tree size: `max(1, int_I 2 / G)`.
pub fn integral_bound_g(m: &StoppingModel) -> Result<f64> {
    Ok(integral_2_over_g(m)?.max(1.0))
}

pub fn integral_2_over_f(m: &StoppingModel) -> Result<f64> {
    integrate(m, Integrand::F)
}

pub fn voronoi_cells(m: &StoppingModel) -> Result<Vec<VoronoiCell>> {
    let sites = m.sites();
    let cells = voronoi::cells(&sites, &m.interval, m.precision())?;
    Ok(sites
        .iter()
        .zip(cells)
        .map(|(s, cell)| VoronoiCell {
            root: (&s.root).into(),
            kind: s.kind,
            cell,
        })
        .collect())
}

/// `int_r^s 3 / |x - a| dx` in closed form, with `r`, `s` given as exact
/// offsets from `Re a`.
fn log_term(r: &Dyadic, s: &Dyadic, im: &Dyadic) -> f64 {
    if r >= s {
        return 0.0;
    }
    if im.is_zero() {
        let (r, s) = (r.to_f64(), s.to_f64());
        return if r >= 0.0 {
            3.0 * (s / r).ln()
        } else if s <= 0.0 {
            3.0 * (r / s).ln()
        } else {
            f64::INFINITY
        };
    }
    let b = im.abs().to_f64();
    let (u, v) = (r.to_f64() / b, s.to_f64() / b);
    // same-sign ranges via the difference formula to avoid cancellation
    let d = if u >= 0.0 {
        ((v + v.hypot(1.0)) / (u + u.hypot(1.0))).ln()
    } else if v <= 0.0 {
        ((-u + u.hypot(1.0)) / (-v + v.hypot(1.0))).ln()
    } else {
        v.asinh() - u.asinh()
    };
    3.0 * d
}

/// `sum_a int_{I \ I_a} 3 / |x - a| dx` over all roots of `g` and `h`.
pub fn closed_form_bound(m: &StoppingModel) -> Result<f64> {
    let sites = m.sites();
    let cells = voronoi::cells(&sites, &m.interval, m.precision())?;
    let (lo, hi) = (m.interval.lo(), m.interval.hi());
    let mut total = 0.0;
    for (s, cell) in sites.iter().zip(&cells) {
        let re = &s.root.re;
        let (a, b) = match cell {
            Some(c) => (c.lo(), c.hi()),
            None => (hi, hi),
        };
        total += log_term(&(lo - re), &(a - re), &s.root.im);
        total += log_term(&(b - re), &(hi - re), &s.root.im);
    }
    Ok(total)
}

/// `25 d L + 42 d ln d`.
pub fn constant_bound(d: usize, l: u64) -> f64 {
    let d = d as f64;
    25.0 * d * l as f64 + 42.0 * d * d.ln()
}

/// Additive allowance for low-order terms at small `d`, `L`.
pub fn constant_slack(d: usize) -> f64 {
    4.0 * d as f64 + 16.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub integral_2_over_g: f64,
    pub integral_2_over_f: f64,
    pub closed_form_sum: f64,
    pub paper_constant_bound: f64,
}

impl BoundReport {
    /// `int 2/G <= 1.01 int 2/F <= 1.02 closed form`.
    pub fn chain_holds(&self) -> bool {
        self.integral_2_over_g <= 1.01 * self.integral_2_over_f
            && 1.01 * self.integral_2_over_f <= 1.02 * self.closed_form_sum
    }
}

pub fn bound_report(f: &IntPolynomial) -> Result<BoundReport> {
    bound_report_for(&StoppingModel::benchmark(f)?)
}

pub fn bound_report_for(m: &StoppingModel) -> Result<BoundReport> {
    Ok(BoundReport {
        integral_2_over_g: integral_2_over_g(m)?,
        integral_2_over_f: integral_2_over_f(m)?,
        closed_form_sum: closed_form_bound(m)?,
        paper_constant_bound: constant_bound(m.degree_d, m.bits_l),
    })
}
