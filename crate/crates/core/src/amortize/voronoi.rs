use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::isolate::Interval;
use crate::oracle::mp::{div_real, MpComplex};

/// Which polynomial a site is a root of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootKind {
    /// Root of the square-free part `g`.
    Function,
    /// Root of the coprime derivative part `h`.
    Derivative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VoronoiCell {
    pub root: MpComplexView,
    pub kind: RootKind,
    /// `None` when the root is nowhere the nearest on the interval.
    pub cell: Option<Interval>,
}

/// Serializable double-precision view of a root.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MpComplexView {
    pub re: f64,
    pub im: f64,
}

impl From<&MpComplex> for MpComplexView {
    fn from(z: &MpComplex) -> Self {
        MpComplexView {
            re: z.re.to_f64(),
            im: z.im.to_f64(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Site {
    pub root: MpComplex,
    pub kind: RootKind,
}

impl Site {
    fn dist_sqr(&self, x: &Dyadic) -> Dyadic {
        let d = x - &self.root.re;
        &(&d * &d) + &(&self.root.im * &self.root.im)
    }

    /// Conjugates share the key, and so share a cell.
    fn key(&self) -> (&Dyadic, Dyadic) {
        (&self.root.re, self.root.im.abs())
    }
}

/// Index of a site nearest to `x`; ties go to the first site in order.
pub(crate) fn nearest(sites: &[Site], x: &Dyadic) -> usize {
    let mut best = 0;
    let mut best_d = sites[0].dist_sqr(x);
    for (i, s) in sites.iter().enumerate().skip(1) {
        let d = s.dist_sqr(x);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Real points strictly inside `i` where two sites are equidistant.
fn bisectors(sites: &[Site], i: &Interval, prec: u64) -> Vec<Dyadic> {
    let mut out = Vec::new();
    for (k, a) in sites.iter().enumerate() {
        for b in &sites[k + 1..] {
            let den = &b.root.re - &a.root.re;
            if den.is_zero() {
                continue;
            }
            let num = &b.root.norm_sqr() - &a.root.norm_sqr();
            let x = div_real(&num, &(&den + &den), prec);
            if i.lo() < &x && &x < i.hi() {
                out.push(x);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Maximal runs of `i` on which one site (or conjugate pair) is nearest,
/// as `(lo, hi, site index)`.
pub(crate) fn cell_runs(sites: &[Site], i: &Interval, prec: u64) -> Result<Vec<(Dyadic, Dyadic, usize)>> {
    if sites.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut cuts = vec![i.lo().clone()];
    cuts.extend(bisectors(sites, i, prec));
    cuts.push(i.hi().clone());
    let mut runs: Vec<(Dyadic, Dyadic, usize)> = Vec::new();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]).half()?;
        let win = nearest(sites, &mid);
        match runs.last_mut() {
            Some(last) if sites[last.2].key() == sites[win].key() => last.1 = w[1].clone(),
            _ => runs.push((w[0].clone(), w[1].clone(), win)),
        }
    }
    Ok(runs)
}

pub(crate) fn cells(sites: &[Site], i: &Interval, prec: u64) -> Result<Vec<Option<Interval>>> {
    let runs = cell_runs(sites, i, prec)?;
    sites
        .iter()
        .map(|s| {
            let mine: Vec<_> = runs.iter().filter(|r| sites[r.2].key() == s.key()).collect();
            match (mine.first(), mine.last()) {
                (Some(a), Some(b)) => Interval::new(a.0.clone(), b.1.clone()).map(Some),
                _ => Ok(None),
            }
        })
        .collect()
}
