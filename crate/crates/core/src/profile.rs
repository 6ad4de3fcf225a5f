//! The Morse complexity profile of a filtration and spike detection.
//!
//! The profile records, per filtration level, the Betti vector, the greedy
//! critical counts, and (where the sublevel complex is small enough) the
//! exact minimal Morse data. A spike is an interior level whose homology
//! agrees with both neighbors under the inclusion maps while its Morse
//! complexity strictly exceeds theirs; spikes found on exact values carry
//! exact confidence, those found on greedy counts only are labeled
//! heuristic, since the greedy count is just an upper bound.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::filtration::Filtration;
use crate::morse::{
    exact_min_morse, greedy_incremental, CriticalCounts, GreedyProfile, MorseError,
};
use crate::persistence::{reduce, PersistencePairing};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile and pairing come from different filtrations")]
    MismatchedInputs,
}

/// Exact minimal Morse data at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactLevel {
    pub total: usize,
    pub per_dim: Vec<usize>,
}

/// One level of the Morse complexity profile.
#[derive(Debug, Clone)]
pub struct LevelProfile {
    pub grade: f64,
    pub betti: Vec<usize>,
    pub greedy: CriticalCounts,
    pub exact: Option<ExactLevel>,
}

impl LevelProfile {
    pub fn greedy_total(&self) -> usize {
        self.greedy.total()
    }
}

impl Serialize for LevelProfile {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            grade: f64,
            betti: &'a [usize],
            greedy_c: &'a [usize],
            greedy_total: usize,
            exact_m: Option<&'a [usize]>,
            exact_total: Option<usize>,
        }
        Row {
            grade: self.grade,
            betti: &self.betti,
            greedy_c: self.greedy.per_dim(),
            greedy_total: self.greedy.total(),
            exact_m: self.exact.as_ref().map(|e| e.per_dim.as_slice()),
            exact_total: self.exact.as_ref().map(|e| e.total),
        }
        .serialize(serializer)
    }
}

/// The Morse complexity profile across all levels of a filtration.
#[derive(Debug, Clone, Serialize)]
pub struct MorseProfile {
    pub levels: Vec<LevelProfile>,
}

impl MorseProfile {
    pub fn grades(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.grade).collect()
    }

    pub fn greedy_totals(&self) -> Vec<usize> {
        self.levels.iter().map(LevelProfile::greedy_total).collect()
    }

    pub fn exact_totals(&self) -> Vec<Option<usize>> {
        self.levels
            .iter()
            .map(|l| l.exact.as_ref().map(|e| e.total))
            .collect()
    }
}

/// Assembles the profile from precomputed persistence and greedy results,
/// running the exact search at every level whose sublevel complex has at
/// most `exact_cap` simplices.
pub fn assemble_profile(
    filtration: &Filtration,
    pairing: &PersistencePairing,
    greedy: &GreedyProfile,
    exact_cap: usize,
) -> Result<MorseProfile, ProfileError> {
    if pairing.levels() != filtration.levels()
        || greedy.per_level.len() != filtration.num_levels()
    {
        return Err(ProfileError::MismatchedInputs);
    }
    let mut levels = Vec::with_capacity(filtration.num_levels());
    for (i, &grade) in filtration.levels().iter().enumerate() {
        let sub = filtration.sublevel_at(i);
        let exact = if sub.len() <= exact_cap {
            let complex = sub.to_complex();
            match exact_min_morse(&complex, exact_cap) {
                Ok(m) => Some(ExactLevel {
                    total: m.total,
                    per_dim: m.per_dim,
                }),
                Err(MorseError::EmptyComplex) => None,
                Err(e) => unreachable!("cap already checked: {e}"),
            }
        } else {
            None
        };
        levels.push(LevelProfile {
            grade,
            betti: pairing.betti_at(grade),
            greedy: greedy.per_level[i].clone(),
            exact,
        });
    }
    Ok(MorseProfile { levels })
}

/// Runs persistence and the greedy matcher, then assembles the profile.
pub fn morse_complexity_profile(filtration: &Filtration, exact_cap: usize) -> MorseProfile {
    let pairing = reduce(filtration);
    let greedy = greedy_incremental(filtration);
    assemble_profile(filtration, &pairing, &greedy, exact_cap)
        .expect("pairing and greedy come from this filtration")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    /// All three levels carry exact minimal Morse numbers.
    Exact,
    /// Judged on greedy upper bounds only.
    Heuristic,
}

/// A detected spike with the complexity values at levels t-1, t, t+1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spike {
    pub level: usize,
    pub confidence: Confidence,
    pub values: [usize; 3],
    pub homology_iso_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct SpikeReport {
    pub spikes: Vec<Spike>,
}

impl SpikeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spike report serializes")
    }

    /// CSV with one row per spike.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("level,confidence,value_prev,value_at,value_next,homology_iso_verified\n");
        for s in &self.spikes {
            let confidence = match s.confidence {
                Confidence::Exact => "exact",
                Confidence::Heuristic => "heuristic",
            };
            writeln!(
                out,
                "{},{},{},{},{},{}",
                s.level, confidence, s.values[0], s.values[1], s.values[2],
                s.homology_iso_verified
            )
            .unwrap();
        }
        out
    }
}

/// Reports every interior level where the inclusions into and out of the
/// level induce homology isomorphisms while the Morse complexity strictly
/// rises and falls. Exact values are used when available at all three
/// levels; otherwise the greedy counts decide and the spike is labeled
/// heuristic. First and last levels have no two neighbors and are never
/// reported.
pub fn detect_spikes(
    profile: &MorseProfile,
    pairing: &PersistencePairing,
) -> Result<SpikeReport, ProfileError> {
    let grades = profile.grades();
    if pairing.levels() != grades {
        return Err(ProfileError::MismatchedInputs);
    }
    let mut spikes = Vec::new();
    for t in 1..profile.levels.len().saturating_sub(1) {
        let window = [&profile.levels[t - 1], &profile.levels[t], &profile.levels[t + 1]];
        let exact: Option<[usize; 3]> = match (&window[0].exact, &window[1].exact, &window[2].exact)
        {
            (Some(x), Some(y), Some(z)) => Some([x.total, y.total, z.total]),
            _ => None,
        };
        let (values, confidence) = match exact {
            Some(v) => (v, Confidence::Exact),
            None => (
                [
                    window[0].greedy_total(),
                    window[1].greedy_total(),
                    window[2].greedy_total(),
                ],
                Confidence::Heuristic,
            ),
        };
        if !(values[1] > values[0] && values[1] > values[2]) {
            continue;
        }
        if !pairing.is_iso_window(grades[t - 1], grades[t + 1]) {
            continue;
        }
        spikes.push(Spike {
            level: t,
            confidence,
            values,
            homology_iso_verified: true,
        });
    }
    Ok(SpikeReport { spikes })
}

/// Combined machine output for the profile pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub levels: Vec<LevelProfile>,
    pub spikes: Vec<Spike>,
}

impl ProfileReport {
    pub fn new(profile: MorseProfile, report: SpikeReport) -> Self {
        Self {
            levels: profile.levels,
            spikes: report.spikes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    /// CSV with one row per level. Vector-valued columns are padded to the
    /// top dimension; exact columns are empty where no exact value exists.
    pub fn to_csv(&self) -> String {
        let dim = self
            .levels
            .iter()
            .map(|l| l.betti.len())
            .max()
            .unwrap_or(1)
            - 1;
        let mut out = String::from("level,grade,greedy_total,exact_total");
        for k in 0..=dim {
            write!(out, ",b{k}").unwrap();
        }
        for k in 0..=dim {
            write!(out, ",c{k}").unwrap();
        }
        for k in 0..=dim {
            write!(out, ",m{k}").unwrap();
        }
        out.push('\n');
        for (i, level) in self.levels.iter().enumerate() {
            write!(out, "{i},{},{}", level.grade, level.greedy_total()).unwrap();
            match &level.exact {
                Some(e) => write!(out, ",{}", e.total).unwrap(),
                None => out.push(','),
            }
            for k in 0..=dim {
                write!(out, ",{}", level.betti.get(k).copied().unwrap_or(0)).unwrap();
            }
            for k in 0..=dim {
                write!(
                    out,
                    ",{}",
                    level.greedy.per_dim().get(k).copied().unwrap_or(0)
                )
                .unwrap();
            }
            for k in 0..=dim {
                match &level.exact {
                    Some(e) => {
                        write!(out, ",{}", e.per_dim.get(k).copied().unwrap_or(0)).unwrap()
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}
