use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sqfe::amortize::bound_report;
use sqfe::harness::{
    default_seed, family_generate, parse_polynomial_file, run_benchmark, summarize, verify_polynomial, write_csv,
    write_json, write_plot, Family, GridSpec,
};
use sqfe::{benchmark_interval, isolate, Dyadic, Error, IntPolynomial, Interval, IsolationReport};

#[derive(Parser)]
#[command(
    name = "sqfe",
    version,
    about = "Exact real-root isolation with subdivision-tree bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate the real roots of each polynomial.
    Isolate {
        #[command(flatten)]
        input: PolyInput,
        /// Search interval instead of the benchmark interval [-B, B].
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        interval: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Integral and closed-form bounds on the subdivision tree.
    Bound {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        json: bool,
    },
    /// Run a grid of benchmark families and write CSV, JSON and plot files.
    Bench(BenchArgs),
    /// Cross-check isolation against the Sturm oracle and the bounds.
    Verify {
        /// Polynomial or file; omitted means a seeded random batch.
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
        /// Size of the random batch.
        #[arg(long, default_value_t = 20)]
        random: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct PolyInput {
    /// Coefficients lowest degree first (`-2,0,1`), or a file with one per line.
    #[arg(allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated families.
    #[arg(long, value_delimiter = ',', default_value = "chebyshev,mignotte,random,wilkinson")]
    families: Vec<String>,
    /// Run degrees 2..=DMAX.
    #[arg(long, default_value_t = 8, conflicts_with = "degrees")]
    dmax: usize,
    /// Explicit comma-separated degrees.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Comma-separated coefficient bit lengths.
    #[arg(long = "L", value_delimiter = ',', default_value = "8,16,32")]
    bits: Vec<u64>,
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

/// Failure with its process exit status.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(exit_status(&e), e.to_string())
    }
}

fn exit_status(e: &Error) -> u8 {
    match e {
        Error::NonConvergence { .. } | Error::Quadrature(_) => 3,
        Error::Parse(_)
        | Error::ZeroPolynomial
        | Error::ConstantPolynomial
        | Error::InvalidInterval
        | Error::DegenerateInterval
        | Error::EmptyInput
        | Error::InvalidParameters(_)
        | Error::Io(_) => 1,
        _ => 2,
    }
}

fn load(input: &str) -> Result<Vec<IntPolynomial>, Fail> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Fail(1, format!("{}: {e}", path.display())))?;
        Ok(parse_polynomial_file(&text)?)
    } else {
        Ok(vec![input.parse()?])
    }
}

fn approx(x: &Dyadic) -> String {
    let v = x.to_f64();
    if v == 0.0 || (1e-4..1e7).contains(&v.abs()) {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

fn print_report(f: &IntPolynomial, i: &Interval, r: &IsolationReport) {
    println!("{} on {i}", f.pretty());
    println!("{} real roots", r.root_count());
    for x in &r.endpoint_roots {
        println!("  endpoint {x}");
    }
    for x in &r.point_roots {
        println!("  point    {x}");
    }
    for j in &r.isolating_intervals {
        println!("  interval {j}  ~ ({}, {})", approx(j.lo()), approx(j.hi()));
    }
    let s = &r.stats;
    println!(
        "#P = {}, bisections = {}, max depth = {}, C0 leaves = {}, C1 leaves = {}",
        s.partition_size, s.bisections, s.max_depth, s.c0_terminations, s.c1_terminations
    );
}

fn cmd_isolate(input: &str, interval: Option<Vec<String>>, as_json: bool) -> Result<(), Fail> {
    let polys = load(input)?;
    let fixed = match interval {
        Some(v) => Some(Interval::new(v[0].parse()?, v[1].parse()?)?),
        None => None,
    };
    let mut out = Vec::new();
    for (k, f) in polys.iter().enumerate() {
        let i = match &fixed {
            Some(i) => i.clone(),
            None => benchmark_interval(f)?,
        };
        let r = isolate(f, &i)?;
        if as_json {
            out.push(json!({ "polynomial": f.to_string(), "interval": i, "report": r }));
        } else {
            if k > 0 {
                println!();
            }
            print_report(f, &i, &r);
        }
    }
    if as_json {
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    }
    Ok(())
}

fn cmd_bound(input: &str, as_json: bool) -> Result<(), Fail> {
    let mut chain_ok = true;
    let mut out = Vec::new();
    for (k, f) in load(input)?.iter().enumerate() {
        let b = bound_report(f)?;
        chain_ok &= b.chain_holds();
        if as_json {
            out.push(json!({ "polynomial": f.to_string(), "bounds": b, "chain_holds": b.chain_holds() }));
            continue;
        }
        if k > 0 {
            println!();
        }
        println!("{}", f.pretty());
        println!("  integral 2/G         {:.6}", b.integral_2_over_g);
        println!("  integral bound       {:.6}", b.integral_2_over_g.max(1.0));
        println!("  integral 2/F         {:.6}", b.integral_2_over_f);
        println!("  closed form          {:.6}", b.closed_form_sum);
        println!("  25dL + 42 d ln d     {:.6}", b.paper_constant_bound);
        println!(
            "  chain                {}",
            if b.chain_holds() { "ok" } else { "VIOLATED" }
        );
    }
    if as_json {
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    }
    if chain_ok {
        Ok(())
    } else {
        Err(Fail(2, "bound chain violated".into()))
    }
}

fn cmd_bench(a: BenchArgs) -> Result<(), Fail> {
    let families = a
        .families
        .iter()
        .map(|s| s.parse::<Family>())
        .collect::<Result<Vec<_>, _>>()?;
    let degrees = a.degrees.unwrap_or_else(|| (2..=a.dmax).collect());
    let spec = GridSpec {
        families,
        degrees,
        bits: a.bits,
        seed: a.seed.unwrap_or_else(default_seed),
    };
    let run = run_benchmark(&spec)?;
    fs::create_dir_all(&a.out).map_err(|e| Fail(1, format!("{}: {e}", a.out.display())))?;
    let create = |name: &str| {
        let p = a.out.join(name);
        fs::File::create(&p).map_err(|e| Fail(1, format!("{}: {e}", p.display())))
    };
    write_csv(&run.records, create("records.csv")?)?;
    write_json(&run.records, create("records.json")?)?;
    write_plot(&run.records, create("plot.txt")?)?;
    let summary = summarize(&run.records);
    serde_json::to_writer_pretty(create("summary.json")?, &summary).map_err(|e| Fail(1, e.to_string()))?;

    println!(
        "seed {}, {} records written to {}",
        spec.seed,
        run.records.len(),
        a.out.display()
    );
    println!("constant bound: 25dL + 42 d ln d with additive slack 4d + 16");
    println!(
        "{:<10} {:>7} {:>22} {:>10} {:>10}",
        "family", "records", "max #P/(d(L+ln d))", "const viol", "int viol"
    );
    for s in &summary {
        println!(
            "{:<10} {:>7} {:>22.4} {:>10} {:>10}",
            s.family, s.records, s.max_ratio, s.constant_violations, s.integral_violations
        );
    }
    let chain_violations = run.reports.iter().flatten().filter(|b| !b.chain_holds()).count();
    if chain_violations > 0 {
        println!("bound chain violated on {chain_violations} records");
    }
    for f in &run.failures {
        eprintln!("failed: {f}");
    }
    let violations: usize = summary
        .iter()
        .map(|s| s.constant_violations + s.integral_violations)
        .sum::<usize>()
        + chain_violations;
    let worst_failure = run.failures.iter().map(|f| exit_status(&f.error)).max();
    if violations > 0 || worst_failure == Some(2) {
        Err(Fail(2, format!("{violations} bound violations")))
    } else if let Some(code) = worst_failure {
        Err(Fail(code, format!("{} records failed", run.failures.len())))
    } else {
        Ok(())
    }
}

fn cmd_verify(poly: Option<String>, random: usize, seed: Option<u64>, as_json: bool) -> Result<(), Fail> {
    let polys = match poly {
        Some(p) => load(&p)?,
        None => {
            let seed = seed.unwrap_or_else(default_seed);
            (0..random)
                .map(|k| {
                    let d = 2 + k % 11;
                    let l = 2 + (k * 7) as u64 % 15;
                    family_generate(Family::Random, d, l, seed.wrapping_add(k as u64))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let mut failed = 0;
    let mut out = Vec::new();
    for f in &polys {
        let checks = verify_polynomial(f)?;
        let ok = checks.iter().all(|c| c.ok);
        failed += usize::from(!ok);
        if as_json {
            out.push(json!({ "polynomial": f.to_string(), "ok": ok, "checks": checks }));
            continue;
        }
        println!("{} {}", if ok { "ok  " } else { "FAIL" }, f.pretty());
        for c in checks.iter().filter(|c| !ok || !c.ok) {
            println!(
                "     {:<20} {:<4} {}",
                c.name,
                if c.ok { "ok" } else { "FAIL" },
                c.detail
            );
        }
    }
    if as_json {
        println!("{}", serde_json::to_string_pretty(&out).expect("checks serialize"));
    } else {
        println!("{} of {} polynomials verified", polys.len() - failed, polys.len());
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Fail(2, format!("{failed} polynomials failed verification")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Isolate { input, interval, json } => cmd_isolate(&input.poly, interval, json),
        Command::Bound { input, json } => cmd_bound(&input.poly, json),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify {
            poly,
            random,
            seed,
            json,
        } => cmd_verify(poly, random, seed, json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("sqfe: {msg}");
            ExitCode::from(code)
        }
    }
}
