//! Published MS counts for the H3+ (STO-3G, six spin orbitals) circuits, printed
//! next to the recomputed values in the demo tables.

pub const UCCSD_PARALLEL_MS: usize = 24;
pub const UCCSD_BASELINE_MS: usize = 80;
pub const UCCSD_FACTOR: f64 = 3.3;

pub const TROTTER_PARALLEL_MS: usize = 26;
pub const TROTTER_STRING_MS: usize = 56;
pub const TROTTER_NAIVE_MS: usize = 176;
pub const TROTTER_SPEEDUP: f64 = 2.2;
