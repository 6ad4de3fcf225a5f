//! Persistent homology of a filtration over the two-element field.
//!
//! `reduce` runs the standard left-to-right column reduction on the boundary
//! matrix in filtration order and reads off the birth/death pairing. Every
//! simplex ends up in exactly one role: birth of a finite pair, death of a
//! finite pair, or an essential birth. Sublevel Betti numbers, persistent
//! Betti numbers and homology-isomorphism windows are all answered from the
//! pairing; an independent rank oracle cross-checks them in the test suite.

use std::fmt::Write as _;

use serde::Serialize;

use crate::filtration::Filtration;
use crate::simplicial::SimplexId;

/// A finite birth/death pair. `dim` is the homology dimension, i.e. the
/// dimension of the birth simplex. Pairs with `birth_grade == death_grade`
/// exist in no sublevel complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: SimplexId,
    pub death: SimplexId,
    pub dim: usize,
    pub birth_grade: f64,
    pub death_grade: f64,
}

/// A class born at `birth` that never dies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssentialClass {
    pub birth: SimplexId,
    pub dim: usize,
    pub birth_grade: f64,
}

/// The persistence pairing (barcode) of a filtration.
#[derive(Debug, Clone)]
pub struct PersistencePairing {
    pairs: Vec<PersistencePair>,
    essentials: Vec<EssentialClass>,
    levels: Vec<f64>,
    num_simplices: usize,
    max_dim: usize,
}

/// Standard column reduction over F2. Deterministic: columns are processed
/// in filtration order and each column repeatedly adds the unique earlier
/// column sharing its lowest 1.
pub fn reduce(filtration: &Filtration) -> PersistencePairing {
    let complex = filtration.complex();
    let n = complex.len();
    let mut columns: Vec<Vec<SimplexId>> = Vec::with_capacity(n);
    // owner[r] = the reduced column whose lowest 1 sits in row r.
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut pairs = Vec::new();

    for j in 0..n {
        let mut col: Vec<SimplexId> = complex.faces(j).to_vec();
        while let Some(&low) = col.last() {
            match owner[low] {
                Some(k) => col = xor_sorted(&col, &columns[k]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            owner[low] = Some(j);
            pairs.push(PersistencePair {
                birth: low,
                death: j,
                dim: complex.dim_of(low),
                birth_grade: filtration.grade(low),
                death_grade: filtration.grade(j),
            });
        }
        columns.push(col);
    }

    let mut is_death = vec![false; n];
    for p in &pairs {
        is_death[p.death] = true;
        is_death[p.birth] = true;
    }
    let essentials = (0..n)
        .filter(|&j| !is_death[j])
        .map(|j| EssentialClass {
            birth: j,
            dim: complex.dim_of(j),
            birth_grade: filtration.grade(j),
        })
        .collect();

    PersistencePairing {
        pairs,
        essentials,
        levels: filtration.levels().to_vec(),
        num_simplices: n,
        max_dim: complex.dim(),
    }
}

fn xor_sorted(a: &[SimplexId], b: &[SimplexId]) -> Vec<SimplexId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() && k < b.len() {
        match a[i].cmp(&b[k]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[k]);
                k += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                k += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[k..]);
    out
}

impl PersistencePairing {
    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn essentials(&self) -> &[EssentialClass] {
        &self.essentials
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn num_simplices(&self) -> usize {
        self.num_simplices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Betti numbers of the sublevel complex at `t`, padded to the top
    /// dimension of the filtration.
    pub fn betti_at(&self, t: f64) -> Vec<usize> {
        let mut betti = vec![0usize; self.max_dim + 1];
        for p in &self.pairs {
            if p.birth_grade <= t && p.death_grade > t {
                betti[p.dim] += 1;
            }
        }
        for e in &self.essentials {
            if e.birth_grade <= t {
                betti[e.dim] += 1;
            }
        }
        betti
    }

    /// Rank of the inclusion-induced map from the sublevel at `i` to the
    /// sublevel at `i + p` in homology dimension `k`: classes born by `i`
    /// that survive past `i + p`. The target grade is the floating-point
    /// sum `i + p`; grades are compared exactly, so callers aiming at a
    /// specific level should pick `p` with that sum in mind.
    pub fn persistent_betti(&self, i: f64, p: f64, k: usize) -> usize {
        assert!(p >= 0.0, "persistence offset must be non-negative");
        let t = i + p;
        let mut count = 0;
        for pair in &self.pairs {
            if pair.dim == k && pair.birth_grade <= i && pair.death_grade > t {
                count += 1;
            }
        }
        for e in &self.essentials {
            if e.dim == k && e.birth_grade <= i {
                count += 1;
            }
        }
        count
    }

    /// A barcode event strictly inside `(a, b]` obstructs the window: the
    /// birth or death grade of a positive-length pair, or the birth grade of
    /// an essential class. Zero-length pairs exist in no sublevel complex
    /// and change no inclusion-induced map, so they are not events.
    fn has_event_in(&self, a: f64, b: f64) -> bool {
        let inside = |g: f64| g > a && g <= b;
        self.pairs
            .iter()
            .filter(|p| p.birth_grade < p.death_grade)
            .any(|p| inside(p.birth_grade) || inside(p.death_grade))
            || self.essentials.iter().any(|e| inside(e.birth_grade))
    }

    /// True iff every inclusion between sublevels in `[a, b]` induces an
    /// isomorphism on homology in every dimension.
    pub fn is_iso_window(&self, a: f64, b: f64) -> bool {
        assert!(a <= b, "window must satisfy a <= b");
        !self.has_event_in(a, b)
    }

    /// Maximal grade intervals `[a, b]` over the filtration levels on which
    /// all inclusions induce homology isomorphisms.
    ///
    /// This is the homological shadow of stability: it is a necessary
    /// condition for every inclusion in the window to be a (simple) homotopy
    /// equivalence, not a sufficient one. Homotopy equivalence itself is not
    /// decided here.
    pub fn homology_stable_windows(&self) -> Vec<(f64, f64)> {
        let mut windows = Vec::new();
        if self.levels.is_empty() {
            return windows;
        }
        let mut start = 0;
        for i in 1..self.levels.len() {
            if self.has_event_in(self.levels[i - 1], self.levels[i]) {
                windows.push((self.levels[start], self.levels[i - 1]));
                start = i;
            }
        }
        windows.push((self.levels[start], *self.levels.last().unwrap()));
        windows
    }

    /// Barcode as JSON: an array of `{dim, birth, death}` with `death: null`
    /// for essential classes. Entries are ordered by dimension, then birth
    /// grade, then death.
    pub fn barcode_json(&self) -> String {
        serde_json::to_string_pretty(&self.barcode_entries()).expect("barcode serializes")
    }

    /// Barcode as CSV with header `dim,birth,death`; an empty death field
    /// marks an essential class.
    pub fn barcode_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for e in self.barcode_entries() {
            match e.death {
                Some(d) => writeln!(out, "{},{},{}", e.dim, e.birth, d).unwrap(),
                None => writeln!(out, "{},{},", e.dim, e.birth).unwrap(),
            }
        }
        out
    }

    fn barcode_entries(&self) -> Vec<BarcodeEntry> {
        let mut entries: Vec<BarcodeEntry> = self
            .pairs
            .iter()
            .map(|p| BarcodeEntry {
                dim: p.dim,
                birth: p.birth_grade,
                death: Some(p.death_grade),
            })
            .chain(self.essentials.iter().map(|e| BarcodeEntry {
                dim: e.dim,
                birth: e.birth_grade,
                death: None,
            }))
            .collect();
        entries.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.partial_cmp(&b.birth).unwrap())
                .then_with(|| match (a.death, b.death) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Greater,
                    (Some(_), None) => std::cmp::Ordering::Less,
                    (Some(x), Some(y)) => x.partial_cmp(&y).unwrap(),
                })
        });
        entries
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
struct BarcodeEntry {
    dim: usize,
    birth: f64,
    death: Option<f64>,
}
