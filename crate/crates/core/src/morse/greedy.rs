//! Greedy incremental matching along a filtration.
//!
//! Simplices are processed in canonical filtration order. Each new simplex
//! tries to pair with one of its still-unmatched faces, free faces first
//! (faces whose only inserted unmatched coface is the new simplex), then
//! the rest in ascending id; the first candidate that keeps the matching
//! acyclic wins. A simplex left critical can still be matched later when
//! one of its cofaces arrives, so the per-level critical counts can both
//! rise and fall along the filtration.
//!
//! The per-insertion acyclicity check is a depth-first search bounded by
//! the (r, r+1) layer the candidate pair lives in, not a constant-time
//! probe; the near-linear total cost over a whole filtration is an
//! empirical property, measured by the acceptance suite.

use crate::filtration::Filtration;
use crate::simplicial::SimplexId;

use super::{CriticalCounts, CycleScratch, MorseError, MorseMatching};

/// Mutable state of the incremental matcher over a filtration prefix.
pub struct GreedyState<'a> {
    filtration: &'a Filtration,
    inserted: usize,
    partner: Vec<Option<SimplexId>>,
    /// Number of inserted, currently unmatched cofaces per simplex.
    unmatched_cofaces: Vec<u32>,
    critical_by_dim: Vec<usize>,
    scratch: CycleScratch,
}

impl<'a> GreedyState<'a> {
    pub fn new(filtration: &'a Filtration) -> Self {
        let n = filtration.len();
        let dim = if n == 0 { 0 } else { filtration.complex().dim() };
        Self {
            filtration,
            inserted: 0,
            partner: vec![None; n],
            unmatched_cofaces: vec![0; n],
            critical_by_dim: vec![0; dim + 1],
            scratch: CycleScratch::new(n),
        }
    }

    /// Number of simplices inserted so far (a prefix of the filtration).
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn partner(&self, id: SimplexId) -> Option<SimplexId> {
        self.partner[id]
    }

    /// Inserts the next simplex in filtration order and applies the greedy
    /// policy. Returns the id just inserted.
    pub fn insert_next(&mut self) -> SimplexId {
        let tau = self.insert_next_critical();
        let complex = self.filtration.complex();

        if complex.dim_of(tau) > 0 {
            // Free-face pass, then the remaining unmatched faces; face
            // lists are ascending, so each pass scans in ascending id.
            for free_pass in [true, false] {
                for i in 0..complex.faces(tau).len() {
                    let sigma = complex.faces(tau)[i];
                    if self.partner[sigma].is_some() {
                        continue;
                    }
                    let is_free = self.unmatched_cofaces[sigma] == 1;
                    if is_free != free_pass {
                        continue;
                    }
                    if !self.scratch.would_close_cycle(
                        complex,
                        &self.partner,
                        sigma,
                        tau,
                    ) {
                        self.match_pair(sigma, tau);
                        return tau;
                    }
                }
            }
        }
        tau
    }

    /// Inserts the next simplex without attempting any match, leaving it
    /// critical. Pairs can then be driven explicitly via `try_add_pair`.
    pub fn insert_next_critical(&mut self) -> SimplexId {
        let tau = self.inserted;
        assert!(tau < self.filtration.len(), "filtration fully inserted");
        self.inserted += 1;
        let complex = self.filtration.complex();
        for &f in complex.faces(tau) {
            self.unmatched_cofaces[f] += 1;
        }
        self.critical_by_dim[complex.dim_of(tau)] += 1;
        tau
    }

    fn match_pair(&mut self, sigma: SimplexId, tau: SimplexId) {
        let complex = self.filtration.complex();
        self.partner[sigma] = Some(tau);
        self.partner[tau] = Some(sigma);
        self.critical_by_dim[complex.dim_of(sigma)] -= 1;
        self.critical_by_dim[complex.dim_of(tau)] -= 1;
        for &g in complex.faces(sigma) {
            self.unmatched_cofaces[g] -= 1;
        }
        for &g in complex.faces(tau) {
            self.unmatched_cofaces[g] -= 1;
        }
    }

    /// Attempts to add the pair `(sigma, tau)`. The pair is added iff no
    /// directed cycle arises in its layer; on rejection the state is
    /// unchanged. Both simplices must be inserted and unmatched, and
    /// `sigma` must be a codimension-one face of `tau`.
    pub fn try_add_pair(
        &mut self,
        sigma: SimplexId,
        tau: SimplexId,
    ) -> Result<bool, MorseError> {
        let complex = self.filtration.complex();
        if sigma >= self.inserted || tau >= self.inserted {
            return Err(MorseError::InvalidPair { sigma, tau });
        }
        if !complex.faces(tau).contains(&sigma) {
            return Err(MorseError::NotIncident { sigma, tau });
        }
        if self.partner[sigma].is_some() || self.partner[tau].is_some() {
            return Err(MorseError::InvalidPair { sigma, tau });
        }
        if self
            .scratch
            .would_close_cycle(complex, &self.partner, sigma, tau)
        {
            return Ok(false);
        }
        self.match_pair(sigma, tau);
        Ok(true)
    }

    /// Current critical counts, padded to the filtration's top dimension.
    pub fn critical_counts(&self) -> CriticalCounts {
        CriticalCounts::new(self.critical_by_dim.clone())
    }

    /// The matching as it stands now; pairs only involve inserted
    /// simplices, everything else is unmatched.
    pub fn matching_snapshot(&self) -> MorseMatching {
        MorseMatching::from_partner(self.partner.clone())
    }

    pub fn into_matching(self) -> MorseMatching {
        MorseMatching::from_partner(self.partner)
    }
}

/// Per-level critical counts plus the final matching.
#[derive(Debug, Clone)]
pub struct GreedyProfile {
    pub per_level: Vec<CriticalCounts>,
    pub matching: MorseMatching,
}

impl GreedyProfile {
    /// Total critical count at each level.
    pub fn totals(&self) -> Vec<usize> {
        self.per_level.iter().map(CriticalCounts::total).collect()
    }
}

/// Runs the greedy matcher over the whole filtration, recording the
/// critical counts after each level.
pub fn greedy_incremental(filtration: &Filtration) -> GreedyProfile {
    let mut state = GreedyState::new(filtration);
    let mut per_level = Vec::with_capacity(filtration.num_levels());
    for level in 0..filtration.num_levels() {
        let end = filtration.level_end(level);
        while state.inserted() < end {
            state.insert_next();
        }
        per_level.push(state.critical_counts());
    }
    GreedyProfile {
        per_level,
        matching: state.into_matching(),
    }
}
