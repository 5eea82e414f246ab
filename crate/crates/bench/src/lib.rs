//! Shared inputs for the criterion benches.

use sqfe::harness::{family_generate, Family};
use sqfe::IntPolynomial;

/// `(label, polynomial)` pairs covering each family at a few sizes.
pub fn workloads() -> Vec<(String, IntPolynomial)> {
    let mut out = Vec::new();
    for fam in Family::ALL {
        for d in [4usize, 8, 16] {
            let f = family_generate(fam, d, 16, 7).expect("valid parameters");
            out.push((format!("{fam}/d{d}"), f));
        }
    }
    out
}
