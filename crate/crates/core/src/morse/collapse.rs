//! Exhaustive collapsibility search.
//!
//! A free pair is a simplex with exactly one proper coface together with
//! that coface; removing both is an elementary collapse. Greedy collapsing
//! is not confluent, so the search backtracks over free-pair choices and
//! memoizes residual simplex sets it has proven dead. The answer is
//! definite unless the node budget runs out.

use std::collections::HashSet;

use serde::Serialize;

use crate::simplicial::{SimplexId, SimplicialComplex};

use super::MorseError;

/// Outcome of a collapse search: a replayable sequence of free pairs
/// reducing the complex to one vertex, or a definite refutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CollapseCertificate {
    Collapsible { pairs: Vec<(SimplexId, SimplexId)> },
    NotCollapsible { states_visited: u64 },
}

impl CollapseCertificate {
    pub fn is_collapsible(&self) -> bool {
        matches!(self, Self::Collapsible { .. })
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            collapsible: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            pairs: Option<&'a Vec<(SimplexId, SimplexId)>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            states_visited: Option<u64>,
        }
        let out = match self {
            Self::Collapsible { pairs } => Out {
                collapsible: true,
                pairs: Some(pairs),
                states_visited: None,
            },
            Self::NotCollapsible { states_visited } => Out {
                collapsible: false,
                pairs: None,
                states_visited: Some(*states_visited),
            },
        };
        serde_json::to_string_pretty(&out).expect("certificate serializes")
    }
}

/// Searches for a collapse of `complex` to a single vertex by exhaustive
/// backtracking over free pairs, visiting at most `node_budget` states.
/// A disconnected complex is refuted immediately: it can never reach a
/// single vertex.
pub fn collapse_search(
    complex: &SimplicialComplex,
    node_budget: u64,
) -> Result<CollapseCertificate, MorseError> {
    if complex.is_empty() {
        return Err(MorseError::EmptyComplex);
    }
    if !complex.is_connected() {
        return Ok(CollapseCertificate::NotCollapsible { states_visited: 0 });
    }
    let mut search = Search {
        complex,
        alive: vec![true; complex.len()],
        alive_cofaces: complex
            .simplices()
            .map(|(id, _)| complex.cofaces(id).len() as u32)
            .collect(),
        alive_count: complex.len(),
        sequence: Vec::new(),
        memo: HashSet::new(),
        visited: 0,
        budget: node_budget,
    };
    match search.dfs() {
        Ok(true) => Ok(CollapseCertificate::Collapsible {
            pairs: search.sequence,
        }),
        Ok(false) => Ok(CollapseCertificate::NotCollapsible {
            states_visited: search.visited,
        }),
        Err(e) => Err(e),
    }
}

/// Replays a collapse sequence against `complex`, checking each pair is a
/// free pair at its step and that the final residue is a single vertex.
pub fn verify_collapse_sequence(
    complex: &SimplicialComplex,
    pairs: &[(SimplexId, SimplexId)],
) -> bool {
    let mut alive = vec![true; complex.len()];
    let mut alive_cofaces: Vec<u32> = complex
        .simplices()
        .map(|(id, _)| complex.cofaces(id).len() as u32)
        .collect();
    let mut alive_count = complex.len();
    for &(sigma, tau) in pairs {
        let ok = sigma < complex.len()
            && tau < complex.len()
            && alive[sigma]
            && alive[tau]
            && complex.faces(tau).contains(&sigma)
            && alive_cofaces[sigma] == 1
            && alive_cofaces[tau] == 0;
        if !ok {
            return false;
        }
        alive[sigma] = false;
        alive[tau] = false;
        alive_count -= 2;
        for &g in complex.faces(sigma) {
            alive_cofaces[g] -= 1;
        }
        for &g in complex.faces(tau) {
            alive_cofaces[g] -= 1;
        }
    }
    alive_count == 1
        && alive
            .iter()
            .position(|&a| a)
            .is_some_and(|id| complex.dim_of(id) == 0)
}

struct Search<'a> {
    complex: &'a SimplicialComplex,
    alive: Vec<bool>,
    alive_cofaces: Vec<u32>,
    alive_count: usize,
    sequence: Vec<(SimplexId, SimplexId)>,
    memo: HashSet<Vec<u64>>,
    visited: u64,
    budget: u64,
}

impl Search<'_> {
    fn dfs(&mut self) -> Result<bool, MorseError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(MorseError::BudgetExhausted {
                states_visited: self.visited,
            });
        }
        if self.alive_count == 1 {
            return Ok(true);
        }
        // Prefer peeling from the top dimension; cones and most collapsible
        // complexes then collapse on the first descent.
        let mut candidates = self.free_pairs();
        candidates.sort_by_key(|&(sigma, tau)| {
            (std::cmp::Reverse(self.complex.dim_of(tau)), sigma, tau)
        });
        for (sigma, tau) in candidates {
            self.remove(sigma, tau);
            if !self.memo.contains(&self.key()) {
                self.sequence.push((sigma, tau));
                if self.dfs()? {
                    return Ok(true);
                }
                self.sequence.pop();
            }
            self.restore(sigma, tau);
        }
        self.memo.insert(self.key());
        Ok(false)
    }

    /// All free pairs of the residual complex: sigma alive with exactly one
    /// alive codimension-one coface tau, and tau itself maximal.
    fn free_pairs(&self) -> Vec<(SimplexId, SimplexId)> {
        let mut out = Vec::new();
        for sigma in 0..self.complex.len() {
            if !self.alive[sigma] || self.alive_cofaces[sigma] != 1 {
                continue;
            }
            let tau = self
                .complex
                .cofaces(sigma)
                .iter()
                .copied()
                .find(|&t| self.alive[t])
                .expect("count says one alive coface");
            if self.alive_cofaces[tau] == 0 {
                out.push((sigma, tau));
            }
        }
        out
    }

    fn remove(&mut self, sigma: SimplexId, tau: SimplexId) {
        self.alive[sigma] = false;
        self.alive[tau] = false;
        self.alive_count -= 2;
        for &g in self.complex.faces(sigma) {
            self.alive_cofaces[g] -= 1;
        }
        for &g in self.complex.faces(tau) {
            self.alive_cofaces[g] -= 1;
        }
    }

    fn restore(&mut self, sigma: SimplexId, tau: SimplexId) {
        self.alive[sigma] = true;
        self.alive[tau] = true;
        self.alive_count += 2;
        for &g in self.complex.faces(sigma) {
            self.alive_cofaces[g] += 1;
        }
        for &g in self.complex.faces(tau) {
            self.alive_cofaces[g] += 1;
        }
    }

    fn key(&self) -> Vec<u64> {
        let mut key = vec![0u64; self.alive.len().div_ceil(64)];
        for (i, &a) in self.alive.iter().enumerate() {
            if a {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        key
    }
}
