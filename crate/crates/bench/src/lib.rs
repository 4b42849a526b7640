//! Inputs shared by the benchmarks.

use edf_core::constructions::{self, ConstructionResult};

/// Constructions large enough that verification cost is visible.
pub fn verification_inputs() -> Vec<(&'static str, ConstructionResult)> {
    vec![
        ("noncyclic l=19", constructions::noncyclic_cedf(19).unwrap()),
        ("m4 l=12 d=4", constructions::m4_cedf(12, 4).unwrap()),
        ("cyclotomic edf 243/11", constructions::cyclotomic_edf(243, 11).unwrap()),
        ("kab* 3,3,3", constructions::kab_star_edf(3, 3, 3, None).unwrap()),
    ]
}
