//! The evaluation-based subdivision isolator.
//!
//! The input polynomial `f` is replaced by its square-free part `g`, and its
//! derivative by `h`, the square-free part of `f'` made coprime to `g`. An
//! interval `J` is terminal when either
//!
//! * C0: `|g(m)| > sum_{i>=1} |g^(i)(m)/i!| (w/2)^i`, so `g` has no root in `J`, or
//! * C1: the same inequality holds for `h`, so `g` has at most one root in `J`,
//!
//! where `m` and `w` are the midpoint and width of `J`. Both inequalities are
//! decided exactly in dyadic arithmetic.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::poly::{coprime_part, square_free_part, IntPolynomial};

/// Closed interval with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval);
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// `[-b, b]`.
    pub fn symmetric(b: Dyadic) -> Result<Self> {
        Interval::new(-&b, b)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Result<Dyadic> {
        self.lo.checked_add(&self.hi)?.half()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn bisect(&self) -> Result<(Interval, Interval)> {
        let m = self.midpoint()?;
        Ok((
            Interval {
                lo: self.lo.clone(),
                hi: m.clone(),
            },
            Interval {
                lo: m,
                hi: self.hi.clone(),
            },
        ))
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shape of the subdivision tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubdivisionStats {
    /// `#P`, the number of leaves.
    pub partition_size: u64,
    pub bisections: u64,
    pub max_depth: u32,
    pub c0_terminations: u64,
    pub c1_terminations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolationReport {
    /// Each interval has exactly one root of `f` in its interior.
    pub isolating_intervals: Vec<Interval>,
    /// Exact roots met at bisection midpoints.
    pub point_roots: Vec<Dyadic>,
    /// Roots lying on the endpoints of the input interval.
    pub endpoint_roots: Vec<Dyadic>,
    pub stats: SubdivisionStats,
}

impl IsolationReport {
    /// Number of distinct real roots accounted for.
    pub fn root_count(&self) -> usize {
        self.isolating_intervals.len() + self.point_roots.len() + self.endpoint_roots.len()
    }
}

/// The polynomials the predicates are evaluated on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    /// Square-free part of `f`.
    pub g: IntPolynomial,
    /// Square-free part of `f'`, made coprime to `g`.
    pub h: IntPolynomial,
}

impl Substitution {
    pub fn new(f: &IntPolynomial) -> Result<Self> {
        match f.degree() {
            None => return Err(Error::ZeroPolynomial),
            Some(0) => return Err(Error::ConstantPolynomial),
            _ => {}
        }
        let g = square_free_part(f)?;
        let h = coprime_part(&square_free_part(&f.derivative())?, &g)?;
        Ok(Substitution { g, h })
    }
}

/// Which polynomial condition C1 is evaluated on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DerivativeTest {
    /// `h`, the square-free part of `f'` coprime to `f`.
    #[default]
    SquareFreeCoprime,
    /// The unmodified derivative `f'`. Experimental: when `f` has repeated
    /// roots this can fail to terminate, which surfaces as a depth-cap error.
    Raw,
}

/// Order in which pending intervals are examined. The report does not
/// depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WorkOrder {
    #[default]
    DepthFirst,
    BreadthFirst,
}

#[derive(Clone, Debug, Default)]
pub struct IsolatorConfig {
    /// Maximum bisection depth; `None` means `8 * (L + 64)`.
    pub depth_cap: Option<u32>,
    pub derivative_test: DerivativeTest,
    pub order: WorkOrder,
}

/// `|p(m)| > sum_{i>=1} |p^(i)(m)/i!| (w/2)^i` with `m`, `w` the midpoint and width of `j`.
pub fn taylor_exclusion(p: &IntPolynomial, j: &Interval) -> Result<bool> {
    if p.is_zero() {
        return Ok(false);
    }
    let t = p.taylor_expansion(&j.midpoint()?);
    let r = j.width().half()?;
    Ok(t.coeffs[0].abs() > t.tail_majorant(&r))
}

/// Condition C0 on the square-free part `g`.
pub fn condition_c0(g: &IntPolynomial, j: &Interval) -> Result<bool> {
    taylor_exclusion(g, j)
}

/// Condition C1 on `h`, using `h`'s own Taylor coefficients.
pub fn condition_c1(h: &IntPolynomial, j: &Interval) -> Result<bool> {
    taylor_exclusion(h, j)
}

pub fn isolate(f: &IntPolynomial, interval: &Interval) -> Result<IsolationReport> {
    isolate_with(f, interval, &IsolatorConfig::default())
}

pub fn isolate_with(f: &IntPolynomial, interval: &Interval, config: &IsolatorConfig) -> Result<IsolationReport> {
    let sub = Substitution::new(f)?;
    if interval.width().signum() <= 0 {
        return Err(Error::DegenerateInterval);
    }
    let g = &sub.g;
    let h = match config.derivative_test {
        DerivativeTest::SquareFreeCoprime => sub.h.clone(),
        DerivativeTest::Raw => f.derivative(),
    };
    let bits = f.bit_length()?;
    let cap = config
        .depth_cap
        .unwrap_or_else(|| u32::try_from(8 * (bits + 64)).unwrap_or(u32::MAX));

    let mut endpoint_roots = Vec::new();
    for x in [interval.lo(), interval.hi()] {
        if g.sign_at(x) == 0 {
            endpoint_roots.push(x.clone());
        }
    }

    let mut stats = SubdivisionStats::default();
    let mut isolating_intervals = Vec::new();
    let mut point_roots = Vec::new();
    let mut work = VecDeque::from([(interval.clone(), 0u32)]);
    let next = |w: &mut VecDeque<(Interval, u32)>| match config.order {
        WorkOrder::DepthFirst => w.pop_back(),
        WorkOrder::BreadthFirst => w.pop_front(),
    };
    while let Some((j, depth)) = next(&mut work) {
        stats.max_depth = stats.max_depth.max(depth);
        if condition_c0(g, &j)? {
            stats.partition_size += 1;
            stats.c0_terminations += 1;
            continue;
        }
        if condition_c1(&h, &j)? {
            stats.partition_size += 1;
            stats.c1_terminations += 1;
            if g.sign_at(j.lo()) * g.sign_at(j.hi()) < 0 {
                isolating_intervals.push(j);
            }
            continue;
        }
        if depth >= cap {
            return Err(Error::DepthCapExceeded { cap });
        }
        let (left, right) = j.bisect()?;
        if g.sign_at(left.hi()) == 0 {
            point_roots.push(left.hi().clone());
        }
        stats.bisections += 1;
        match config.order {
            // right first so the left half is processed next
            WorkOrder::DepthFirst => work.extend([(right, depth + 1), (left, depth + 1)]),
            WorkOrder::BreadthFirst => work.extend([(left, depth + 1), (right, depth + 1)]),
        }
    }
    isolating_intervals.sort_by(|a: &Interval, b| a.lo().cmp(b.lo()));
    point_roots.sort();
    Ok(IsolationReport {
        isolating_intervals,
        point_roots,
        endpoint_roots,
        stats,
    })
}

/// Isolates every real root: runs on `[-B, B]` with `B` the root bound of `f`.
pub fn isolate_benchmark(f: &IntPolynomial) -> Result<IsolationReport> {
    isolate(f, &benchmark_interval(f)?)
}

/// `[-B, B]` with `B = root_bound(f)`.
pub fn benchmark_interval(f: &IntPolynomial) -> Result<Interval> {
    Interval::symmetric(f.root_bound()?)
}
