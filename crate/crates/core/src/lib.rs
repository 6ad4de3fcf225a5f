//! Persistent homology and discrete-Morse complexity profiles of filtered
//! simplicial complexes.
//!
//! The crate computes, along a filtration:
//!
//! * the persistence pairing (barcode) over the two-element field,
//! * a greedy acyclic matching maintained incrementally, giving the
//!   critical-count sequence C(K_t) in time linear in the number of
//!   simplices beyond the filtration itself,
//! * at desk scale, exact oracles: collapsibility by exhaustive free-pair
//!   search and the minimal Morse number by branch and bound,
//! * Morse spikes: levels where homology is unchanged relative to both
//!   neighbors while the Morse complexity strictly rises, a combinatorial
//!   signal invisible to persistent homology.
//!
//! Homology-stable windows are a necessary condition for the stronger
//! simple-homotopy stability notions; full torsion invariants are out of
//! scope. Coefficients are F2 throughout: complexes whose integral homology
//! differs only by torsion can therefore be misclassified by the homology
//! side (not by the Morse side), which none of the bundled examples do.

pub mod filtration;
pub mod morse;
pub mod persistence;
pub mod profile;
pub mod simplicial;

pub use filtration::{
    catalog, cone, dunce_hat, vietoris_rips, ClosureMode, Filtration, FiltrationError,
    PointCloud, RipsScale, Sublevel, CATALOG_NAMES,
};
pub use morse::{
    collapse_search, exact_min_morse, greedy_incremental, is_acyclic, verify_collapse_sequence,
    CollapseCertificate, CriticalCounts, GreedyProfile, GreedyState, MinMorse, MorseError,
    MorseMatching,
};
pub use persistence::{reduce, EssentialClass, PersistencePair, PersistencePairing};
pub use profile::{
    assemble_profile, detect_spikes, morse_complexity_profile, Confidence, LevelProfile,
    MorseProfile, ProfileError, ProfileReport, Spike, SpikeReport,
};
pub use simplicial::{
    ComplexError, F2Matrix, Simplex, SimplexId, SimplicialComplex, VertexId,
};

/// Default cap for the exact minimal-Morse search.
pub const DEFAULT_EXACT_CAP: usize = 25;

/// Default node budget for the collapsibility search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
