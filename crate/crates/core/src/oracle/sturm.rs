use num_traits::Signed;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::isolate::Interval;
use crate::poly::IntPolynomial;

/// Sturm chain `p0 = g`, `p1 = g'`, `p_{k+1} = -rem(p_{k-1}, p_k)`, each
/// remainder cleared of denominators and content by positive factors only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmSequence {
    chain: Vec<IntPolynomial>,
}

impl SturmSequence {
    pub fn new(g: &IntPolynomial) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut chain = vec![g.clone()];
        let mut next = g.derivative();
        while !next.is_zero() {
            chain.push(next);
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            let mut r = a.pseudo_rem(b);
            let delta = a.degree().unwrap() + 1 - b.degree().unwrap();
            if b.leading_coefficient().unwrap().is_negative() && delta % 2 == 1 {
                r = -&r;
            }
            let r = -&r;
            let c = r.content();
            next = if r.is_zero() {
                r
            } else {
                IntPolynomial::new(r.coeffs().iter().map(|x| x / &c).collect())
            };
        }
        Ok(SturmSequence { chain })
    }

    pub fn chain(&self) -> &[IntPolynomial] {
        &self.chain
    }

    /// Sign variations of the chain evaluated at `x`, zeros dropped.
    pub fn variations_at(&self, x: &Dyadic) -> usize {
        let mut last = 0;
        let mut v = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &Dyadic, hi: &Dyadic) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }
}

/// Number of distinct real roots of `g` in `(lo, hi]`.
pub fn sturm_count(g: &IntPolynomial, j: &Interval) -> Result<usize> {
    Ok(SturmSequence::new(g)?.count(j.lo(), j.hi()))
}

/// Number of distinct real roots of `g` in the closed interval `j`.
pub fn sturm_count_closed(g: &IntPolynomial, j: &Interval) -> Result<usize> {
    let at_lo = usize::from(g.sign_at(j.lo()) == 0 && !j.is_point());
    Ok(sturm_count(g, j)? + at_lo)
}

/// Disjoint intervals each holding exactly one real root of `g` in `i`.
///
/// A root hit exactly by bisection is returned as a point interval; every
/// other interval has its root in the open interior.
pub fn sturm_isolate(g: &IntPolynomial, i: &Interval) -> Result<Vec<Interval>> {
    let seq = SturmSequence::new(g)?;
    let mut out = Vec::new();
    if g.sign_at(i.lo()) == 0 {
        out.push(Interval::point(i.lo().clone()));
    }
    let mut stack = vec![i.clone()];
    while let Some(j) = stack.pop() {
        match seq.count(j.lo(), j.hi()) {
            0 => {}
            1 if g.sign_at(j.hi()) == 0 => out.push(Interval::point(j.hi().clone())),
            1 => out.push(j),
            _ => {
                let (l, r) = j.bisect()?;
                stack.push(r);
                stack.push(l);
            }
        }
    }
    Ok(out)
}
