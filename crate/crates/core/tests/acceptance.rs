//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqfe::amortize::{bound_report, constant_slack, harmonic_mean, sigma, BoundReport};
use sqfe::harness::{default_seed, family_generate, run_benchmark, BenchmarkRecord, Family, GridSpec};
use sqfe::oracle::{complex_roots, sturm_count, sturm_count_closed, sturm_isolate, RootSet};
use sqfe::{
    benchmark_interval, condition_c0, condition_c1, coprime_part, gcd, isolate, isolate_benchmark, square_free_part,
    Dyadic, Error, IntPolynomial, Interval, IsolationReport, Substitution,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    let mut detail = detail;
    if let Some(first) = failures.first() {
        detail = format!("{detail}; {} failures, first: {first}", failures.len());
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn iv(a: &str, b: &str) -> Interval {
    Interval::new(d(a), d(b)).unwrap()
}

/// A benchmark polynomial with everything the criteria need.
struct Case {
    label: String,
    f: IntPolynomial,
    report: IsolationReport,
    bounds: Result<BoundReport, Error>,
}

fn random_cases(seed: u64, n: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|k| {
            let deg = rng.gen_range(2..=12);
            let l = rng.gen_range(2..=16);
            let s = rng.gen::<u64>();
            let f = family_generate(Family::Random, deg, l, s).unwrap();
            let report = isolate_benchmark(&f).unwrap();
            Case {
                label: format!("random #{k} (d={deg}, L={l}, seed={s})"),
                bounds: bound_report(&f),
                f,
                report,
            }
        })
        .collect()
}

fn oracle_equivalence(cases: &[Case]) -> Outcome {
    let mut failures = Vec::new();
    for c in cases {
        let g = square_free_part(&c.f).unwrap();
        let i = benchmark_interval(&c.f).unwrap();
        let expected = sturm_count_closed(&g, &i).unwrap();
        let oracle = sturm_isolate(&g, &i).unwrap();
        if c.report.root_count() != expected || oracle.len() != expected {
            failures.push(format!(
                "{}: {} roots vs oracle {expected}",
                c.label,
                c.report.root_count()
            ));
            continue;
        }
        for j in &c.report.isolating_intervals {
            let inner = sturm_count(&g, j).unwrap() - usize::from(g.sign_at(j.hi()) == 0);
            if inner != 1 || g.sign_at(j.lo()) == 0 {
                failures.push(format!("{}: interval {j} holds {inner} roots", c.label));
            }
        }
        for r in c.report.point_roots.iter().chain(&c.report.endpoint_roots) {
            if !g.evaluate(r).is_zero() {
                failures.push(format!("{}: point root {r} is not exact", c.label));
            }
        }
    }
    outcome(&failures, format!("{} random polynomials", cases.len()))
}

fn integral_ok(partition: u64, b: &BoundReport) -> bool {
    partition as f64 <= (1.01 * b.integral_2_over_g.max(1.0)).ceil()
}

fn theorem_bound(cases: &[Case], grid: &[(BenchmarkRecord, Option<BoundReport>)]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for c in cases {
        match &c.bounds {
            Ok(b) if integral_ok(c.report.stats.partition_size, b) => checked += 1,
            Ok(b) => failures.push(format!("{}: #P = {} > {:?}", c.label, c.report.stats.partition_size, b)),
            Err(e) => failures.push(format!("{}: bound failed: {e}", c.label)),
        }
    }
    for (r, b) in grid.iter().filter(|(r, _)| r.family != "random") {
        match b {
            Some(b) if integral_ok(r.partition_size, b) => checked += 1,
            Some(b) => failures.push(format!(
                "{} d={} L={}: #P = {} > {:?}",
                r.family, r.degree_d, r.bits_l, r.partition_size, b
            )),
            None => failures.push(format!("{} d={} L={}: no bound", r.family, r.degree_d, r.bits_l)),
        }
    }
    outcome(&failures, format!("{checked} runs within ceil(1.01 max(1, int 2/G))"))
}

fn chain(cases: &[Case], grid: &[(BenchmarkRecord, Option<BoundReport>)]) -> Outcome {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let all = cases
        .iter()
        .map(|c| (c.label.clone(), c.bounds.as_ref().ok().copied()))
        .chain(
            grid.iter()
                .map(|(r, b)| (format!("{} d={} L={}", r.family, r.degree_d, r.bits_l), *b)),
        );
    let mut n = 0;
    for (label, b) in all {
        n += 1;
        match b {
            Some(b) if b.chain_holds() => {
                worst = worst.max(b.integral_2_over_g / b.closed_form_sum.max(f64::MIN_POSITIVE));
            }
            Some(b) => failures.push(format!("{label}: {b:?}")),
            None => failures.push(format!("{label}: no bound")),
        }
    }
    outcome(&failures, format!("{n} records, max int(2/G)/closed form = {worst:.3}"))
}

fn constant_bound_grid(grid: &[(BenchmarkRecord, Option<BoundReport>)], failed: &[String]) -> Outcome {
    let mut failures: Vec<String> = failed.to_vec();
    let mut worst: f64 = 0.0;
    for (r, _) in grid {
        let limit = r.paper_constant_bound + constant_slack(r.degree_d);
        worst = worst.max(r.partition_size as f64 / r.paper_constant_bound);
        if r.partition_size as f64 > limit {
            failures.push(format!(
                "{} d={} L={}: #P = {} > {limit:.1}",
                r.family, r.degree_d, r.bits_l, r.partition_size
            ));
        }
    }
    outcome(
        &failures,
        format!(
            "{} records, slack +4d+16, max #P/(25dL+42 d ln d) = {worst:.4}",
            grid.len()
        ),
    )
}

fn square_free_random(rng: &mut ChaCha8Rng) -> IntPolynomial {
    loop {
        let deg = rng.gen_range(2..=8);
        let l = rng.gen_range(2..=10);
        let f = family_generate(Family::Random, deg, l, rng.gen()).unwrap();
        if gcd(&f, &f.derivative()).unwrap().degree() == Some(0) {
            return f;
        }
    }
}

fn random_dyadic(rng: &mut ChaCha8Rng, bound: &Dyadic) -> Dyadic {
    let b = bound.to_f64();
    let x = rng.gen_range(-b..b);
    Dyadic::from_f64(x).unwrap().round_to_bits(20)
}

fn lemma_suites(seed: u64) -> Outcome {
    const TRIALS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..TRIALS {
        let n = rng.gen_range(1..=16);
        let z: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-3.0..3.0))).collect();
        let min = z.iter().copied().fold(f64::INFINITY, f64::min);
        let y = min * rng.gen_range(0.0..1.0);
        let hm = harmonic_mean(&z).unwrap();
        let shifted: Vec<f64> = z.iter().map(|v| v - y).collect();
        if shifted.iter().all(|&v| v > 0.0) {
            let lhs = harmonic_mean(&shifted).unwrap();
            if lhs < hm - n as f64 * y - 1e-12 * hm {
                failures.push(format!("HM1 trial {t}: {lhs} < {hm} - {n} * {y}"));
            }
        }
        for &zi in &z {
            if hm > n as f64 * zi * (1.0 + 1e-12) {
                failures.push(format!("HM2 trial {t}: {hm} > {n} * {zi}"));
            }
        }
    }
    let mut worst_identity: f64 = 0.0;
    let mut worst_lemma = f64::NEG_INFINITY;
    for t in 0..TRIALS {
        let f = square_free_random(&mut rng);
        let roots = complex_roots(&f).unwrap();
        let bound = f.root_bound().unwrap();
        let x = loop {
            let x = random_dyadic(&mut rng, &bound);
            if !f.evaluate(&x).is_zero() {
                break x;
            }
        };
        let xf = x.to_f64();
        let s = sigma(xf, &roots).unwrap();
        let dist: Vec<f64> = roots
            .to_c64()
            .iter()
            .map(|r| (Complex64::new(xf, 0.0) - r).norm())
            .collect();
        let hm_side = harmonic_mean(&dist).unwrap() / dist.len() as f64;
        let rel = (1.0 / s - hm_side).abs() / hm_side;
        worst_identity = worst_identity.max(rel);
        if rel > 1e-9 {
            failures.push(format!("HM/sigma identity trial {t}: relative error {rel:e}"));
        }
        let taylor = f.taylor_expansion(&x);
        let log_f = taylor.coeffs[0].log2_abs();
        let mut log_fact = 0.0;
        for k in 1..taylor.coeffs.len() {
            log_fact += (k as f64).log2();
            let c = &taylor.coeffs[k];
            if c.is_zero() {
                continue;
            }
            // log2 |f^(k)(x) / f(x)| - k log2 sigma
            let excess = c.log2_abs() + log_fact - log_f - k as f64 * s.log2();
            worst_lemma = worst_lemma.max(excess);
            if excess > 1.01f64.log2() {
                failures.push(format!("derivative ratio trial {t}, n = {k}: excess 2^{excess}"));
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{TRIALS} trials per suite, worst identity error {worst_identity:.1e}, worst derivative ratio {:.4}",
            worst_lemma.exp2()
        ),
    )
}

fn width_below(m: &Dyadic, w: f64) -> Option<Interval> {
    let half = Dyadic::from_f64(0.5 * w)?.round_to_bits(30);
    if half.is_zero() {
        return None;
    }
    Interval::new(m - &half, m + &half).ok()
}

fn predicate_soundness(seed: u64) -> Outcome {
    const TRIALS: usize = 5_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut hits = (0, 0);
    let mut suff = 0;
    for t in 0..TRIALS {
        let deg = rng.gen_range(2..=10);
        let l = rng.gen_range(2..=12);
        let f = family_generate(Family::Random, deg, l, rng.gen()).unwrap();
        let s = Substitution::new(&f).unwrap();
        let bound = f.root_bound().unwrap();
        let roots_g = complex_roots(&s.g).unwrap();
        let roots_h = if s.h.degree() == Some(0) {
            RootSet::empty()
        } else {
            complex_roots(&s.h).unwrap()
        };
        let check = |j: &Interval, tag: &str, failures: &mut Vec<String>, hits: &mut (usize, usize)| {
            if condition_c0(&s.g, j).unwrap() {
                hits.0 += 1;
                let n = sturm_count_closed(&s.g, j).unwrap();
                if n != 0 {
                    failures.push(format!("trial {t} {tag}: C0 on {j} but {n} roots"));
                }
            }
            if condition_c1(&s.h, j).unwrap() {
                hits.1 += 1;
                let n = sturm_count_closed(&s.g, j).unwrap();
                if n > 1 {
                    failures.push(format!("trial {t} {tag}: C1 on {j} but {n} roots"));
                }
            }
        };
        let a = random_dyadic(&mut rng, &bound);
        let w = Dyadic::pow2(rng.gen_range(-12..=(bound.log2_abs() as i64 + 1)));
        let j = Interval::new(a.clone(), &a + &w).unwrap();
        check(&j, "random", &mut failures, &mut hits);

        let m = random_dyadic(&mut rng, &bound);
        let mf = m.to_f64();
        let (Ok(sg), Ok(sh)) = (sigma(mf, &roots_g), sigma(mf, &roots_h)) else {
            continue;
        };
        let u = rng.gen_range(0.05..1.0);
        if let Some(j) = width_below(&m, 0.99 * u / sg) {
            suff += 1;
            check(&j, "sized for g", &mut failures, &mut hits);
            if !condition_c0(&s.g, &j).unwrap() {
                failures.push(format!("trial {t}: w({j}) <= 0.99/sigma_g but C0 false"));
            }
        }
        let jh = if sh == 0.0 {
            width_below(&m, u * bound.to_f64())
        } else {
            width_below(&m, 0.99 * u / sh)
        };
        if let Some(j) = jh {
            suff += 1;
            check(&j, "sized for h", &mut failures, &mut hits);
            if !condition_c1(&s.h, &j).unwrap() {
                failures.push(format!("trial {t}: w({j}) <= 0.99/sigma_h but C1 false"));
            }
        }
    }
    outcome(
        &failures,
        format!(
            "{TRIALS} triples, {} C0 hits, {} C1 hits, {suff} sufficiency checks",
            hits.0, hits.1
        ),
    )
}

fn exactness_regression() -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    let mut eq = |name: &str, got: String, want: &str| {
        n += 1;
        if got != want {
            failures.push(format!("{name}: got {got}, want {want}"));
        }
    };
    eq("1 + 1*2^-1", (&d("1") + &d("1*2^-1")).to_string(), "3*2^-1");
    eq("x + 0", (&d("5*2^-7") + &Dyadic::zero()).to_string(), "5*2^-7");
    eq("3*2^-2 + 1*2^-2", (&d("3*2^-2") + &d("1*2^-2")).to_string(), "1");
    eq("3*2^-1 * 1*2^1", (&d("3*2^-1") * &d("1*2^1")).to_string(), "3");
    eq("x * 1", (&d("5*2^-7") * &Dyadic::one()).to_string(), "5*2^-7");
    eq("5*2^-3 * 3*2^-1", (&d("5*2^-3") * &d("3*2^-1")).to_string(), "15*2^-4");
    eq(
        "|-3*2^-1| vs 1",
        format!("{:?}", d("-3*2^-1").cmp_abs(&d("1"))),
        "Greater",
    );
    eq(
        "|0| vs |0|",
        format!("{:?}", Dyadic::zero().cmp_abs(&Dyadic::zero())),
        "Equal",
    );
    eq("|7*2^-3| vs 1", format!("{:?}", d("7*2^-3").cmp_abs(&d("1"))), "Less");
    eq(
        "canonical zero",
        format!("{:?}", (Dyadic::zero().mantissa().clone(), Dyadic::zero().exponent())),
        "(0, 0)",
    );

    let x2m2 = p(&[-2, 0, 1]);
    eq("(X^2-2)(0)", x2m2.evaluate(&Dyadic::zero()).to_string(), "-2");
    eq("(X^2-2)(3/2)", x2m2.evaluate(&d("3*2^-1")).to_string(), "1*2^-2");
    eq("0(x)", IntPolynomial::zero().evaluate(&d("3*2^-1")).to_string(), "0");
    eq("(X^2-2)'", x2m2.derivative().to_string(), "0,2");
    eq("5'", p(&[5]).derivative().to_string(), "0");
    eq("(X^3-X)'", p(&[0, -1, 0, 1]).derivative().to_string(), "-1,0,3");
    let taylor = |f: &IntPolynomial, m: &str| {
        f.taylor_expansion(&d(m))
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    eq("taylor X^2 at 1", taylor(&p(&[0, 0, 1]), "1"), "1, 2, 1");
    eq(
        "taylor X^3-X at 1/2",
        taylor(&p(&[0, -1, 0, 1]), "1*2^-1"),
        "-3*2^-3, -1*2^-2, 3*2^-1, 1",
    );
    eq("taylor 7 at 3", taylor(&p(&[7]), "3"), "7");
    let g = |a: &[i64], b: &[i64]| gcd(&p(a), &p(b)).unwrap().to_string();
    eq("gcd(X^2, 2X)", g(&[0, 0, 1], &[0, 2]), "0,1");
    eq("gcd(X^2-1, X-1)", g(&[-1, 0, 1], &[-1, 1]), "-1,1");
    eq("gcd((X-1)^2(X+2), (X-1)(X+3))", g(&[2, -3, 0, 1], &[-3, 2, 1]), "-1,1");
    eq(
        "gcd(0, 0)",
        format!("{:?}", gcd(&IntPolynomial::zero(), &IntPolynomial::zero())),
        "Err(BothZero)",
    );
    let sf = |a: &[i64]| square_free_part(&p(a)).unwrap().to_string();
    eq("sqfree X^2", sf(&[0, 0, 1]), "0,1");
    eq("sqfree X^2-2", sf(&[-2, 0, 1]), "-2,0,1");
    eq("sqfree (X-1)^2(X+2)", sf(&[2, -3, 0, 1]), "-2,1,1");
    let cp = |a: &[i64], b: &[i64]| coprime_part(&p(a), &p(b)).unwrap().to_string();
    eq("coprime X(X-1), X", cp(&[0, -1, 1], &[0, 1]), "-1,1");
    eq("coprime X-1, X+1", cp(&[-1, 1], &[1, 1]), "-1,1");
    eq("coprime X, X^2-1", cp(&[0, 1], &[-1, 0, 1]), "0,1");
    eq("root_bound X^2-2", x2m2.root_bound().unwrap().to_string(), "4");
    eq("root_bound X", p(&[0, 1]).root_bound().unwrap().to_string(), "1");
    eq(
        "root_bound X^2+1 >= 1",
        (p(&[1, 0, 1]).root_bound().unwrap() >= Dyadic::one()).to_string(),
        "true",
    );
    eq("L(X^2-2)", x2m2.bit_length().unwrap().to_string(), "2");
    eq("L(X)", p(&[0, 1]).bit_length().unwrap().to_string(), "1");
    eq("L(1000X+1)", p(&[1, 1000]).bit_length().unwrap().to_string(), "10");
    eq(
        "C0 X [-1,1]",
        condition_c0(&p(&[0, 1]), &iv("-1", "1")).unwrap().to_string(),
        "false",
    );
    eq(
        "C0 X [1,2]",
        condition_c0(&p(&[0, 1]), &iv("1", "2")).unwrap().to_string(),
        "true",
    );
    eq(
        "C0 X^2-2 [0,1]",
        condition_c0(&x2m2, &iv("0", "1")).unwrap().to_string(),
        "true",
    );
    eq(
        "C1 1 [-1,1]",
        condition_c1(&p(&[1]), &iv("-1", "1")).unwrap().to_string(),
        "true",
    );
    eq(
        "C1 X [-1,1]",
        condition_c1(&p(&[0, 1]), &iv("-1", "1")).unwrap().to_string(),
        "false",
    );
    eq(
        "C1 X [1,2]",
        condition_c1(&p(&[0, 1]), &iv("1", "2")).unwrap().to_string(),
        "true",
    );
    let r = isolate(&p(&[1, 0, 1]), &iv("-2", "2")).unwrap();
    eq("isolate X^2+1", r.root_count().to_string(), "0");
    let r = isolate(&x2m2, &iv("-4", "4")).unwrap();
    eq("isolate X^2-2 intervals", r.isolating_intervals.len().to_string(), "2");
    let big = BigInt::from(2);
    let signs_ok = r.isolating_intervals.iter().all(|j| {
        let (a, b) = (j.lo(), j.hi());
        let sq = |x: &Dyadic| (x * x).cmp(&Dyadic::from_integer(big.clone()));
        sq(a) != sq(b) && (a.signum() >= 0) == (b.signum() >= 0)
    });
    eq("isolate X^2-2 brackets +-sqrt2", signs_ok.to_string(), "true");
    let r = isolate_benchmark(&p(&[0, -1, 0, 1])).unwrap();
    eq("isolate_benchmark X^3-X", r.root_count().to_string(), "3");
    outcome(&failures, format!("{n} examples"))
}

fn main() -> ExitCode {
    let seed = default_seed();
    println!("acceptance gate, seed {seed}");
    let mut results: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let timed = |f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed().as_secs_f64())
    };

    let t = Instant::now();
    let cases = random_cases(seed, 1000);
    let cases_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let spec = GridSpec {
        families: Family::ALL.to_vec(),
        degrees: vec![4, 6, 8, 12, 16],
        bits: vec![8, 16, 32],
        seed,
    };
    let run = run_benchmark(&spec).unwrap();
    let grid_secs = t.elapsed().as_secs_f64();
    let grid: Vec<_> = run.records.iter().cloned().zip(run.reports.iter().copied()).collect();
    let grid_failures: Vec<String> = run.failures.iter().map(|f| f.to_string()).collect();
    let expected_jobs = spec.jobs().len();

    let (o, s) = timed(&mut || oracle_equivalence(&cases));
    results.push((1, "oracle equivalence", o, s + cases_secs));
    let (o, s) = timed(&mut || theorem_bound(&cases, &grid));
    results.push((2, "integral bound on tree size", o, s));
    let (o, s) = timed(&mut || chain(&cases, &grid));
    results.push((3, "bound chain", o, s));
    let (mut o, s) = timed(&mut || constant_bound_grid(&grid, &grid_failures));
    if grid.len() != expected_jobs {
        o.pass = false;
        o.detail = format!("{}; only {} of {expected_jobs} grid records", o.detail, grid.len());
    }
    results.push((4, "constant bound grid", o, s + grid_secs));
    let (o, s) = timed(&mut || lemma_suites(seed ^ 0x1e44a));
    results.push((5, "lemma property suites", o, s));
    let (o, s) = timed(&mut || predicate_soundness(seed ^ 0xc0c1));
    results.push((6, "predicate soundness", o, s));
    let (o, s) = timed(&mut || exactness_regression());
    results.push((7, "exactness regression", o, s));

    let mut all = true;
    for (k, name, o, secs) in &results {
        all &= o.pass;
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{k}] {name} ({secs:.1}s): {}", o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
