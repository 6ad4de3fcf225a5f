//! Discrete vector fields as partial matchings on the Hasse diagram.
//!
//! A matching pairs simplices with codimension-one cofaces, each simplex in
//! at most one pair; unmatched simplices are critical. A matching is the
//! gradient field of a discrete Morse function exactly when the Hasse
//! diagram with matched edges reversed has no directed cycle, and any such
//! cycle stays inside a single (r, r+1) layer, which is what the checks
//! here exploit.

mod collapse;
mod exact;
mod greedy;

pub use collapse::{collapse_search, verify_collapse_sequence, CollapseCertificate};
pub use exact::{exact_min_morse, MinMorse};
pub use greedy::{greedy_incremental, GreedyProfile, GreedyState};

use serde::Serialize;
use thiserror::Error;

use crate::simplicial::{SimplexId, SimplicialComplex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorseError {
    #[error("pair ({sigma}, {tau}) is not a valid matching pair")]
    InvalidPair { sigma: SimplexId, tau: SimplexId },
    #[error("simplex {sigma} is not a codimension-one face of {tau}")]
    NotIncident { sigma: SimplexId, tau: SimplexId },
    #[error("search budget exhausted after {states_visited} states")]
    BudgetExhausted { states_visited: u64 },
    #[error("complex has {size} simplices, over the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("operation requires a non-empty complex")]
    EmptyComplex,
}

/// Critical-simplex counts by dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalCounts {
    per_dim: Vec<usize>,
}

impl CriticalCounts {
    pub fn new(per_dim: Vec<usize>) -> Self {
        Self { per_dim }
    }

    pub fn per_dim(&self) -> &[usize] {
        &self.per_dim
    }

    pub fn total(&self) -> usize {
        self.per_dim.iter().sum()
    }

    /// The alternating sum, which equals the Euler characteristic for any
    /// structurally valid matching since paired simplices cancel.
    pub fn alternating_sum(&self) -> i64 {
        self.per_dim
            .iter()
            .enumerate()
            .map(|(p, &c)| if p % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// A partial matching on the Hasse diagram (discrete vector field),
/// stored as an involution on simplex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseMatching {
    partner: Vec<Option<SimplexId>>,
}

impl MorseMatching {
    pub fn empty(num_simplices: usize) -> Self {
        Self {
            partner: vec![None; num_simplices],
        }
    }

    pub(crate) fn from_partner(partner: Vec<Option<SimplexId>>) -> Self {
        Self { partner }
    }

    /// Builds a matching from explicit `(sigma, tau)` pairs on `complex`,
    /// checking incidence and that no simplex is used twice.
    pub fn from_pairs(
        complex: &SimplicialComplex,
        pairs: &[(SimplexId, SimplexId)],
    ) -> Result<Self, MorseError> {
        let mut partner = vec![None; complex.len()];
        for &(sigma, tau) in pairs {
            if sigma >= complex.len() || tau >= complex.len() {
                return Err(MorseError::InvalidPair { sigma, tau });
            }
            if !complex.faces(tau).contains(&sigma) {
                return Err(MorseError::NotIncident { sigma, tau });
            }
            if partner[sigma].is_some() || partner[tau].is_some() {
                return Err(MorseError::InvalidPair { sigma, tau });
            }
            partner[sigma] = Some(tau);
            partner[tau] = Some(sigma);
        }
        Ok(Self { partner })
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, id: SimplexId) -> Option<SimplexId> {
        self.partner[id]
    }

    pub fn is_critical(&self, id: SimplexId) -> bool {
        self.partner[id].is_none()
    }

    /// Matched pairs as `(sigma, tau)` with `sigma` the face, ascending.
    /// Faces precede cofaces in id order, so the face is the smaller id.
    pub fn pairs(&self) -> Vec<(SimplexId, SimplexId)> {
        self.partner
            .iter()
            .enumerate()
            .filter_map(|(id, &p)| match p {
                Some(q) if q > id => Some((id, q)),
                _ => None,
            })
            .collect()
    }

    pub fn critical(&self) -> Vec<SimplexId> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(id, _)| id)
            .collect()
    }

    /// Tallies unmatched simplices by dimension, padded to `complex.dim()`.
    pub fn critical_counts(&self, complex: &SimplicialComplex) -> CriticalCounts {
        let mut per_dim = vec![0usize; complex.dim() + 1];
        for (id, p) in self.partner.iter().enumerate() {
            if p.is_none() {
                per_dim[complex.dim_of(id)] += 1;
            }
        }
        CriticalCounts::new(per_dim)
    }

    /// Matching dump: `{"pairs": [[sigma, tau], ...], "critical": [...]}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump {
            pairs: Vec<(SimplexId, SimplexId)>,
            critical: Vec<SimplexId>,
        }
        serde_json::to_string_pretty(&Dump {
            pairs: self.pairs(),
            critical: self.critical(),
        })
        .expect("matching dump serializes")
    }
}

/// Checks whether `matching` is a gradient field on `complex`: structurally
/// valid and free of non-trivial closed V-paths (equivalently, the modified
/// Hasse diagram has no directed cycle in any layer).
pub fn is_acyclic(
    complex: &SimplicialComplex,
    matching: &MorseMatching,
) -> Result<bool, MorseError> {
    if matching.len() != complex.len() {
        return Err(MorseError::InvalidPair {
            sigma: matching.len(),
            tau: complex.len(),
        });
    }
    for (sigma, tau) in matching.pairs() {
        if !complex.faces(tau).contains(&sigma) {
            return Err(MorseError::NotIncident { sigma, tau });
        }
    }

    // Walk the V-path digraph on matched lower simplices:
    // sigma -> partner(sigma) -> every other face of the partner.
    // Three-color DFS per node; a back edge is a closed V-path.
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = complex.len();
    let matched_up = |id: SimplexId| matching.partner(id).is_some_and(|p| p > id);
    let mut color = vec![WHITE; n];
    let mut stack: Vec<(SimplexId, usize)> = Vec::new();
    for start in 0..n {
        if !matched_up(start) || color[start] != WHITE {
            continue;
        }
        stack.push((start, 0));
        color[start] = GRAY;
        while let Some(top) = stack.len().checked_sub(1) {
            let (node, next) = stack[top];
            let tau = matching.partner(node).expect("node is matched up");
            let faces = complex.faces(tau);
            if next < faces.len() {
                stack[top].1 += 1;
                let y = faces[next];
                if y != node && matched_up(y) {
                    match color[y] {
                        GRAY => return Ok(false),
                        WHITE => {
                            color[y] = GRAY;
                            stack.push((y, 0));
                        }
                        BLACK => {}
                        _ => unreachable!(),
                    }
                }
            } else {
                color[node] = BLACK;
                stack.pop();
            }
        }
    }
    Ok(true)
}

/// Scratch buffers for the incremental cycle check, reusable across calls.
pub(crate) struct CycleScratch {
    mark: Vec<u64>,
    epoch: u64,
    stack: Vec<SimplexId>,
}

impl CycleScratch {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            mark: vec![0; n],
            epoch: 0,
            stack: Vec::new(),
        }
    }

    /// Would adding the pair `(sigma, tau)` to `partner` close a V-path
    /// cycle? True iff `sigma` is reachable from another face of `tau`
    /// along the existing matching. Only matched-upward simplices can
    /// extend a path, and face ids are smaller than coface ids, so
    /// "matched upward" is just `partner[y] > y`.
    pub(crate) fn would_close_cycle(
        &mut self,
        complex: &SimplicialComplex,
        partner: &[Option<SimplexId>],
        sigma: SimplexId,
        tau: SimplexId,
    ) -> bool {
        self.epoch += 1;
        self.stack.clear();
        for &x in complex.faces(tau) {
            if x != sigma && partner[x].is_some_and(|p| p > x) && self.mark[x] != self.epoch {
                self.mark[x] = self.epoch;
                self.stack.push(x);
            }
        }
        while let Some(x) = self.stack.pop() {
            let up = partner[x].expect("stacked nodes are matched up");
            for &y in complex.faces(up) {
                if y == x {
                    continue;
                }
                if y == sigma {
                    return true;
                }
                if partner[y].is_some_and(|p| p > y) && self.mark[y] != self.epoch {
                    self.mark[y] = self.epoch;
                    self.stack.push(y);
                }
            }
        }
        false
    }
}
