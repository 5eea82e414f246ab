//! Exact real-root isolation by evaluation-based subdivision, with tools to
//! measure the subdivision tree against integral and closed-form bounds.

pub mod amortize;
pub mod dyadic;
pub mod error;
pub mod harness;
pub mod isolate;
pub mod oracle;
pub mod poly;

pub use amortize::{
    bound_report, closed_form_bound, constant_bound, constant_slack, harmonic_mean, integral_2_over_f,
    integral_bound_g, sigma, stopping_g, voronoi_cells, BoundReport, StoppingModel, VoronoiCell,
};
pub use dyadic::{BigInteger, Dyadic};
pub use error::{Error, Result};
pub use harness::{family_generate, run_benchmark, verify_polynomial, BenchmarkRecord, BenchmarkRun, Family, GridSpec};
pub use isolate::{
    benchmark_interval, condition_c0, condition_c1, isolate, isolate_benchmark, isolate_with, DerivativeTest, Interval,
    IsolationReport, IsolatorConfig, SubdivisionStats, Substitution, WorkOrder,
};
pub use oracle::{complex_roots, sturm_count, sturm_isolate, RootSet, SturmSequence};
pub use poly::{coprime_part, gcd, square_free_part, IntPolynomial, TaylorExpansion};
