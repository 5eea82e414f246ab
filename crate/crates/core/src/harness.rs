//! Benchmark families, batch runs and report files.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amortize::{bound_report, constant_bound, constant_slack, BoundReport};
use crate::error::{Error, Result};
use crate::isolate::{benchmark_interval, isolate_benchmark, Substitution};
use crate::oracle::{sturm_count, sturm_count_closed};
use crate::poly::IntPolynomial;

pub const DEFAULT_SEED: u64 = 0x5eed_0001;

/// `SQFE_SEED` if set and parseable, else [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("SQFE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Chebyshev,
    Mignotte,
    Random,
    Wilkinson,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Chebyshev, Family::Mignotte, Family::Random, Family::Wilkinson];

    pub fn name(self) -> &'static str {
        match self {
            Family::Chebyshev => "chebyshev",
            Family::Mignotte => "mignotte",
            Family::Random => "random",
            Family::Wilkinson => "wilkinson",
        }
    }

    /// Whether the generated polynomial depends on `L`.
    pub fn uses_bits(self) -> bool {
        matches!(self, Family::Mignotte | Family::Random)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameters(format!("unknown family `{s}`")))
    }
}

fn mix(seed: u64, d: usize, l: u64) -> u64 {
    let mut z = seed ^ (d as u64).rotate_left(32) ^ l.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform integer in `[-(2^l - 1), 2^l - 1]`.
fn uniform_coeff(rng: &mut ChaCha8Rng, l: u64) -> BigInt {
    let span_bits = l + 1;
    let limit = (BigInt::one() << (span_bits as usize)) - 2;
    loop {
        let mut v = BigInt::zero();
        let mut left = span_bits;
        while left > 0 {
            let take = left.min(32);
            let chunk = rng.gen::<u32>() as u64 & ((1u64 << take) - 1);
            v = (v << take as usize) + chunk;
            left -= take;
        }
        if v <= limit {
            return v - ((BigInt::one() << l as usize) - 1);
        }
    }
}

pub fn family_generate(family: Family, d: usize, l: u64, seed: u64) -> Result<IntPolynomial> {
    if d < 2 || l < 2 {
        return Err(Error::InvalidParameters(format!(
            "need d >= 2 and L >= 2, got d = {d}, L = {l}"
        )));
    }
    let x = IntPolynomial::from_i64(&[0, 1]);
    Ok(match family {
        Family::Mignotte => {
            if l % 2 == 1 || l < 4 {
                return Err(Error::InvalidParameters(format!("mignotte needs even L >= 4, got {l}")));
            }
            let a = BigInt::one() << (l / 2 - 1) as usize;
            let lin = IntPolynomial::new(vec![BigInt::from(-1), a]);
            let sq = &lin * &lin;
            &IntPolynomial::monomial(BigInt::one(), d) - &sq.scale(&BigInt::from(2))
        }
        Family::Wilkinson => (1..=d as i64).fold(IntPolynomial::constant(BigInt::one()), |acc, k| {
            &acc * &IntPolynomial::from_i64(&[-k, 1])
        }),
        Family::Chebyshev => {
            let two_x = x.scale(&BigInt::from(2));
            let (mut prev, mut cur) = (IntPolynomial::constant(BigInt::one()), x);
            for _ in 1..d {
                let next = &(&two_x * &cur) - &prev;
                prev = cur;
                cur = next;
            }
            cur
        }
        Family::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, d, l));
            let mut c: Vec<BigInt> = (0..d).map(|_| uniform_coeff(&mut rng, l)).collect();
            let lead = loop {
                let v = uniform_coeff(&mut rng, l);
                if !v.is_zero() {
                    break v;
                }
            };
            c.push(lead);
            IntPolynomial::new(c)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub family: String,
    pub degree_d: usize,
    /// Actual coefficient bit length of the generated polynomial.
    #[serde(rename = "bits_L")]
    pub bits_l: u64,
    pub partition_size: u64,
    pub bisections: u64,
    /// `max(1, int 2/G)`; absent if the bound computation failed.
    pub integral_bound: Option<f64>,
    pub closed_form_bound: Option<f64>,
    pub paper_constant_bound: f64,
    pub wall_time_ms: f64,
}

impl BenchmarkRecord {
    pub fn constant_limit(&self) -> f64 {
        self.paper_constant_bound + constant_slack(self.degree_d)
    }

    pub fn within_constant_bound(&self) -> bool {
        self.partition_size as f64 <= self.constant_limit()
    }

    /// `#P <= ceil(1.01 max(1, int 2/G))`; vacuous when the bound is absent.
    pub fn within_integral_bound(&self) -> bool {
        self.integral_bound
            .is_none_or(|b| self.partition_size as f64 <= (1.01 * b).ceil())
    }

    fn sort_key(&self) -> (&str, usize, u64) {
        (&self.family, self.degree_d, self.bits_l)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub families: Vec<Family>,
    pub degrees: Vec<usize>,
    pub bits: Vec<u64>,
    pub seed: u64,
}

impl GridSpec {
    /// Generation jobs. Families that ignore `L` get one job per degree.
    pub fn jobs(&self) -> Vec<(Family, usize, u64)> {
        let mut out = Vec::new();
        for &fam in &self.families {
            for &d in &self.degrees {
                if fam.uses_bits() {
                    out.extend(self.bits.iter().map(|&l| (fam, d, l)));
                } else if let Some(&l) = self.bits.first() {
                    out.push((fam, d, l));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecordFailure {
    pub family: Family,
    pub degree_d: usize,
    pub bits_l: u64,
    pub error: Error,
}

impl fmt::Display for RecordFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} d={} L={}: {}",
            self.family, self.degree_d, self.bits_l, self.error
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchmarkRun {
    pub records: Vec<BenchmarkRecord>,
    /// Full bound report per record, same order.
    pub reports: Vec<Option<BoundReport>>,
    pub failures: Vec<RecordFailure>,
}

/// Generates, isolates and bounds one polynomial.
pub fn run_one(
    family: Family,
    d: usize,
    l: u64,
    seed: u64,
) -> std::result::Result<(BenchmarkRecord, Option<BoundReport>), RecordFailure> {
    let fail = |error| RecordFailure {
        family,
        degree_d: d,
        bits_l: l,
        error,
    };
    let f = family_generate(family, d, l, seed).map_err(fail)?;
    run_polynomial(family.name(), &f).map_err(|(e, _)| fail(e))
}

/// Isolates and bounds `f`. A bound failure still yields a record, returned
/// alongside the error.
#[allow(clippy::type_complexity, clippy::result_large_err)]
pub fn run_polynomial(
    family: &str,
    f: &IntPolynomial,
) -> std::result::Result<(BenchmarkRecord, Option<BoundReport>), (Error, Option<BenchmarkRecord>)> {
    let start = Instant::now();
    let iso = isolate_benchmark(f).map_err(|e| (e, None))?;
    let report = bound_report(f);
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let d = f.degree().unwrap_or(0);
    let l = f.bit_length().map_err(|e| (e, None))?;
    let rep = report.as_ref().ok().copied();
    let record = BenchmarkRecord {
        family: family.to_string(),
        degree_d: d,
        bits_l: l,
        partition_size: iso.stats.partition_size,
        bisections: iso.stats.bisections,
        integral_bound: rep.map(|r| r.integral_2_over_g.max(1.0)),
        closed_form_bound: rep.map(|r| r.closed_form_sum),
        paper_constant_bound: constant_bound(d, l),
        wall_time_ms,
    };
    match report {
        Ok(r) => Ok((record, Some(r))),
        Err(e) => Err((e, Some(record))),
    }
}

/// Runs every job of the grid in parallel; output ordered by `(family, d, L)`.
pub fn run_benchmark(spec: &GridSpec) -> Result<BenchmarkRun> {
    let jobs = spec.jobs();
    if jobs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(fam, d, l)| {
            let fail = |error| RecordFailure {
                family: fam,
                degree_d: d,
                bits_l: l,
                error,
            };
            match family_generate(fam, d, l, spec.seed) {
                Err(e) => (None, None, Some(fail(e))),
                Ok(f) => match run_polynomial(fam.name(), &f) {
                    Ok((rec, rep)) => (Some(rec), rep, None),
                    Err((e, rec)) => (rec, None, Some(fail(e))),
                },
            }
        })
        .collect();
    let mut run = BenchmarkRun::default();
    let mut paired = Vec::new();
    for (rec, rep, fail) in results {
        if let Some(rec) = rec {
            paired.push((rec, rep));
        }
        run.failures.extend(fail);
    }
    paired.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    (run.records, run.reports) = paired.into_iter().unzip();
    Ok(run)
}

pub fn write_csv<W: Write>(records: &[BenchmarkRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchmarkRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

pub fn write_json<W: Write>(records: &[BenchmarkRecord], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, records).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<BenchmarkRecord>> {
    serde_json::from_reader(input).map_err(|e| Error::Parse(e.to_string()))
}

/// `d (L + ln d)`.
pub fn size_measure(d: usize, l: u64) -> f64 {
    let d = d as f64;
    d * (l as f64 + d.ln())
}

/// Two columns: `d (L + ln d)` and `partition_size`.
pub fn write_plot<W: Write>(records: &[BenchmarkRecord], mut out: W) -> Result<()> {
    writeln!(out, "# d(L+ln d)\tpartition_size")?;
    for r in records {
        writeln!(out, "{}\t{}", size_measure(r.degree_d, r.bits_l), r.partition_size)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: String,
    pub records: usize,
    /// Largest `partition_size / (d (L + ln d))`.
    pub max_ratio: f64,
    pub constant_violations: usize,
    pub integral_violations: usize,
}

pub fn summarize(records: &[BenchmarkRecord]) -> Vec<FamilySummary> {
    let mut names: Vec<&str> = records.iter().map(|r| r.family.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    names
        .into_iter()
        .map(|name| {
            let rs: Vec<_> = records.iter().filter(|r| r.family == name).collect();
            FamilySummary {
                family: name.to_string(),
                records: rs.len(),
                max_ratio: rs
                    .iter()
                    .map(|r| r.partition_size as f64 / size_measure(r.degree_d, r.bits_l))
                    .fold(0.0, f64::max),
                constant_violations: rs.iter().filter(|r| !r.within_constant_bound()).count(),
                integral_violations: rs.iter().filter(|r| !r.within_integral_bound()).count(),
            }
        })
        .collect()
}

/// One polynomial per line in coefficient form; `#` starts a comment.
pub fn parse_polynomial_file(text: &str) -> Result<Vec<IntPolynomial>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let f: IntPolynomial = body.parse().map_err(|e| Error::Parse(format!("line {}: {e}", k + 1)))?;
        out.push(f);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

/// One named check of [`verify_polynomial`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

/// Isolation cross-checked against the Sturm oracle, plus the bound chain,
/// the integral bound and the constant bound on the benchmark interval.
pub fn verify_polynomial(f: &IntPolynomial) -> Result<Vec<Check>> {
    let iso = isolate_benchmark(f)?;
    let sub = Substitution::new(f)?;
    let g = &sub.g;
    let i = benchmark_interval(f)?;
    let mut checks = Vec::new();

    let expected = sturm_count_closed(g, &i)?;
    checks.push(Check {
        name: "root count",
        ok: iso.root_count() == expected,
        detail: format!("isolator {}, Sturm {expected}", iso.root_count()),
    });
    let bad_intervals = iso
        .isolating_intervals
        .iter()
        .filter(|j| {
            g.sign_at(j.lo()) == 0 || sturm_count(g, j).map_or(true, |n| n - usize::from(g.sign_at(j.hi()) == 0) != 1)
        })
        .count();
    checks.push(Check {
        name: "isolating intervals",
        ok: bad_intervals == 0,
        detail: format!(
            "{} intervals, {bad_intervals} without exactly one root",
            iso.isolating_intervals.len()
        ),
    });
    let inexact = iso
        .point_roots
        .iter()
        .chain(&iso.endpoint_roots)
        .filter(|r| !g.evaluate(r).is_zero())
        .count();
    checks.push(Check {
        name: "exact point roots",
        ok: inexact == 0,
        detail: format!(
            "{} point roots, {inexact} inexact",
            iso.point_roots.len() + iso.endpoint_roots.len()
        ),
    });
    let st = &iso.stats;
    checks.push(Check {
        name: "tree shape",
        ok: st.partition_size == st.bisections + 1,
        detail: format!("#P = {}, bisections = {}", st.partition_size, st.bisections),
    });

    let b = bound_report(f)?;
    let bound = (1.01 * b.integral_2_over_g.max(1.0)).ceil();
    checks.push(Check {
        name: "integral bound",
        ok: st.partition_size as f64 <= bound,
        detail: format!(
            "#P = {} <= ceil(1.01 max(1, {:.4}))",
            st.partition_size, b.integral_2_over_g
        ),
    });
    checks.push(Check {
        name: "bound chain",
        ok: b.chain_holds(),
        detail: format!(
            "{:.4} <= 1.01 * {:.4} <= 1.02 * {:.4}",
            b.integral_2_over_g, b.integral_2_over_f, b.closed_form_sum
        ),
    });
    let d = f.degree().unwrap_or(0);
    let limit = b.paper_constant_bound + constant_slack(d);
    checks.push(Check {
        name: "constant bound",
        ok: st.partition_size as f64 <= limit,
        detail: format!(
            "#P = {} <= {:.1} + {:.0}",
            st.partition_size,
            b.paper_constant_bound,
            constant_slack(d)
        ),
    });
    Ok(checks)
}
