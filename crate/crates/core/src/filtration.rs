//! Filtrations of simplicial complexes: ingestion, validation, Vietoris-Rips
//! construction from point data, and the built-in example complexes.
//!
//! A filtration is a complex plus one monotone grade per simplex. Simplices
//! are kept in canonical order (grade, then dimension, then lexicographic
//! vertex list), so every sublevel complex is a prefix of the id range.
//!
//! File format: one simplex per line, `<grade> <v0> <v1> ... <vk>`, `#`
//! starts a comment, grades are decimal floats, vertices non-negative
//! integers. Serialization emits canonical order with shortest round-trip
//! float formatting, so parse(serialize(f)) reproduces f exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::simplicial::{ComplexError, SimplexId, SimplicialComplex, VertexId};

#[derive(Debug, Error, PartialEq)]
pub enum FiltrationError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("face {face:?} (grade {face_grade}) is graded after coface {simplex:?} (grade {grade})")]
    NonMonotone {
        simplex: Vec<VertexId>,
        grade: f64,
        face: Vec<VertexId>,
        face_grade: f64,
    },
    #[error("missing face {face:?} of {simplex:?} (strict mode)")]
    MissingFace {
        simplex: Vec<VertexId>,
        face: Vec<VertexId>,
    },
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("distance matrix is not symmetric with zero diagonal: {0}")]
    NonSymmetricMatrix(String),
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Whether missing faces abort ingestion or are filled in automatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureMode {
    /// Every codimension-one face must be listed explicitly.
    #[default]
    Strict,
    /// Missing faces receive the minimum grade over their listed cofaces.
    AutoClose,
}

/// A filtered simplicial complex in canonical insertion order. Within one
/// grade, the dimension-then-lexicographic order is a convention of this
/// crate: greedy matching results at tied grades depend on it, so it is
/// fixed here rather than left to input order.
#[derive(Debug, Clone)]
pub struct Filtration {
    complex: SimplicialComplex,
    grades: Vec<f64>,
    levels: Vec<f64>,
    /// Number of simplices with grade <= levels[i]; a strictly increasing
    /// sequence of prefix lengths ending at the total count.
    level_ends: Vec<usize>,
}

impl Filtration {
    /// Builds a filtration from graded vertex lists. Input order is
    /// irrelevant; simplices are canonically reordered. Duplicate simplices
    /// and non-finite or negative grades are rejected, monotonicity is
    /// validated, and missing faces are handled per `mode`.
    pub fn from_graded_simplices(
        items: Vec<(f64, Vec<VertexId>)>,
        mode: ClosureMode,
    ) -> Result<Self, FiltrationError> {
        let mut graded: BTreeMap<Vec<VertexId>, f64> = BTreeMap::new();
        for (grade, mut vertices) in items {
            if !grade.is_finite() || grade < 0.0 {
                return Err(FiltrationError::Invalid(format!(
                    "grade {grade} is not a finite non-negative number"
                )));
            }
            vertices.sort_unstable();
            if vertices.windows(2).any(|w| w[0] == w[1]) {
                return Err(FiltrationError::Complex(ComplexError::DuplicateVertex(
                    vertices,
                )));
            }
            if graded.insert(vertices.clone(), grade).is_some() {
                return Err(FiltrationError::Invalid(format!(
                    "simplex {vertices:?} listed more than once"
                )));
            }
        }

        if mode == ClosureMode::AutoClose {
            // A missing face inherits the smallest grade among the listed
            // simplices containing it. Explicit grades are never adjusted;
            // an explicit face graded after a coface stays a NonMonotone
            // error below.
            let explicit: Vec<(Vec<VertexId>, f64)> =
                graded.iter().map(|(v, &g)| (v.clone(), g)).collect();
            for (vertices, grade) in &explicit {
                for subset in proper_subsets(vertices) {
                    if explicit.binary_search_by(|(v, _)| v.cmp(&subset)).is_ok() {
                        continue;
                    }
                    let entry = graded.entry(subset).or_insert(*grade);
                    if *entry > *grade {
                        *entry = *grade;
                    }
                }
            }
        }

        // Canonical order: grade, then dimension, then vertex list.
        let mut ordered: Vec<(Vec<VertexId>, f64)> = graded.into_iter().collect();
        ordered.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .expect("grades are finite")
                .then_with(|| a.0.len().cmp(&b.0.len()))
                .then_with(|| a.0.cmp(&b.0))
        });

        let mut complex = SimplicialComplex::new();
        let mut grades = Vec::with_capacity(ordered.len());
        for (vertices, grade) in &ordered {
            match complex.add_simplex(vertices) {
                Ok(id) => {
                    debug_assert_eq!(id, grades.len());
                    grades.push(*grade);
                }
                Err(ComplexError::MissingFace { simplex, face }) => {
                    // In canonical order a present face with a larger grade
                    // sorts after its coface, so it shows up as missing here.
                    let face_grade = ordered
                        .iter()
                        .find(|(v, _)| *v == face)
                        .map(|(_, g)| *g);
                    return Err(match face_grade {
                        Some(fg) => FiltrationError::NonMonotone {
                            simplex,
                            grade: *grade,
                            face,
                            face_grade: fg,
                        },
                        None => FiltrationError::MissingFace { simplex, face },
                    });
                }
                Err(e) => return Err(e.into()),
            }
        }

        let mut levels = Vec::new();
        let mut level_ends = Vec::new();
        for (i, &g) in grades.iter().enumerate() {
            match levels.last() {
                Some(&last) if last == g => *level_ends.last_mut().unwrap() = i + 1,
                _ => {
                    levels.push(g);
                    level_ends.push(i + 1);
                }
            }
        }

        Ok(Self {
            complex,
            grades,
            levels,
            level_ends,
        })
    }

    /// Parses the filtration file format.
    pub fn parse(text: &str, mode: ClosureMode) -> Result<Self, FiltrationError> {
        let mut items = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let grade_str = fields.next().expect("non-empty line has a field");
            let grade: f64 = grade_str.parse().map_err(|_| FiltrationError::Parse {
                line: lineno + 1,
                msg: format!("bad grade {grade_str:?}"),
            })?;
            let mut vertices = Vec::new();
            for field in fields {
                let v: VertexId = field.parse().map_err(|_| FiltrationError::Parse {
                    line: lineno + 1,
                    msg: format!("bad vertex {field:?}"),
                })?;
                vertices.push(v);
            }
            if vertices.is_empty() {
                return Err(FiltrationError::Parse {
                    line: lineno + 1,
                    msg: "simplex has no vertices".into(),
                });
            }
            items.push((grade, vertices));
        }
        Self::from_graded_simplices(items, mode)
    }

    /// Canonical file representation; `parse` of the result reproduces the
    /// filtration exactly.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (id, s) in self.complex.simplices() {
            write!(out, "{}", self.grades[id]).unwrap();
            for v in s.vertices() {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    pub fn grade(&self, id: SimplexId) -> f64 {
        self.grades[id]
    }

    pub fn grades(&self) -> &[f64] {
        &self.grades
    }

    /// The distinct grades, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Prefix length of the sublevel complex at `levels()[level]`.
    pub fn level_end(&self, level: usize) -> usize {
        self.level_ends[level]
    }

    /// The sublevel complex of all simplices with grade <= t, as a prefix
    /// view of this filtration.
    pub fn sublevel(&self, t: f64) -> Sublevel<'_> {
        let len = self.grades.partition_point(|&g| g <= t);
        Sublevel {
            filtration: self,
            len,
        }
    }

    pub fn sublevel_at(&self, level: usize) -> Sublevel<'_> {
        Sublevel {
            filtration: self,
            len: self.level_ends[level],
        }
    }
}

/// A sublevel complex, borrowing a prefix of a filtration. Ids coincide with
/// filtration ids, faces of members are members, and coface lists need only
/// be truncated at the prefix boundary.
#[derive(Debug, Clone, Copy)]
pub struct Sublevel<'a> {
    filtration: &'a Filtration,
    len: usize,
}

impl<'a> Sublevel<'a> {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for id in 0..self.len {
            let d = self.filtration.complex.dim_of(id);
            if d >= counts.len() {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    pub fn dim(&self) -> usize {
        self.counts_by_dim().len().saturating_sub(1)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts_by_dim()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn contains(&self, id: SimplexId) -> bool {
        id < self.len
    }

    /// Materializes the prefix as a standalone complex with identical ids.
    pub fn to_complex(&self) -> SimplicialComplex {
        let mut out = SimplicialComplex::new();
        for id in 0..self.len {
            let got = out
                .add_simplex(self.filtration.complex.simplex(id).vertices())
                .expect("prefix of a filtration is closed under faces");
            debug_assert_eq!(got, id);
        }
        out
    }
}

fn proper_subsets(vertices: &[VertexId]) -> Vec<Vec<VertexId>> {
    let n = vertices.len();
    let mut out = Vec::new();
    for mask in 1u32..((1 << n) - 1) {
        let subset: Vec<VertexId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| vertices[i])
            .collect();
        out.push(subset);
    }
    out
}

/// Joins every simplex of `complex` to a fresh apex vertex. The result
/// contains the input, the apex, and one new simplex per input simplex:
/// 2n + 1 simplices in total. Cones collapse to a point, which the test
/// suite checks for every complex in the corpus.
pub fn cone(complex: &SimplicialComplex) -> SimplicialComplex {
    let apex: VertexId = complex
        .simplices()
        .flat_map(|(_, s)| s.vertices().iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let mut out = SimplicialComplex::new();
    for (_, s) in complex.simplices() {
        out.add_simplex_closed(s.vertices())
            .expect("copying a valid complex");
    }
    out.add_simplex(&[apex]).expect("fresh apex vertex");
    for (_, s) in complex.simplices() {
        let mut vertices = s.vertices().to_vec();
        vertices.push(apex);
        out.add_simplex_closed(&vertices).expect("cone closure");
    }
    debug_assert_eq!(out.len(), 2 * complex.len() + 1);
    out
}

/// Point data for Vietoris-Rips construction: either coordinates or an
/// explicit distance matrix.
#[derive(Debug, Clone)]
pub enum PointCloud {
    Points(Vec<Vec<f64>>),
    Matrix(Vec<Vec<f64>>),
}

impl PointCloud {
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self, FiltrationError> {
        if points.is_empty() {
            return Err(FiltrationError::EmptyCloud);
        }
        let d = points[0].len();
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(FiltrationError::Invalid(format!(
                    "point {i} has {} coordinates, expected {d}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(FiltrationError::Invalid(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        Ok(Self::Points(points))
    }

    pub fn from_distance_matrix(matrix: Vec<Vec<f64>>) -> Result<Self, FiltrationError> {
        if matrix.is_empty() {
            return Err(FiltrationError::EmptyCloud);
        }
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(FiltrationError::NonSymmetricMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(FiltrationError::NonSymmetricMatrix(format!(
                    "diagonal entry ({i},{i}) is {}",
                    row[i]
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(FiltrationError::NonSymmetricMatrix(format!(
                        "entry ({i},{j}) is {d}"
                    )));
                }
                if d != matrix[j][i] {
                    return Err(FiltrationError::NonSymmetricMatrix(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(Self::Matrix(matrix))
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Points(p) => p.len(),
            Self::Matrix(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::Points(p) => p[i]
                .iter()
                .zip(&p[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            Self::Matrix(m) => m[i][j],
        }
    }
}

/// How Vietoris-Rips grades are assigned.
#[derive(Debug, Clone)]
pub enum RipsScale {
    /// Grade each simplex by its diameter (max pairwise vertex distance).
    AllDistances,
    /// Snap each simplex to the least listed threshold >= its diameter and
    /// drop simplices larger than the last threshold.
    Thresholds(Vec<f64>),
}

/// Builds the Vietoris-Rips filtration of a point cloud up to `max_dim`.
/// A simplex appears at its diameter, so the grading is monotone by
/// construction.
pub fn vietoris_rips(
    cloud: &PointCloud,
    max_dim: usize,
    scale: &RipsScale,
) -> Result<Filtration, FiltrationError> {
    if cloud.is_empty() {
        return Err(FiltrationError::EmptyCloud);
    }
    let thresholds = match scale {
        RipsScale::AllDistances => None,
        RipsScale::Thresholds(t) => {
            if t.is_empty() {
                return Err(FiltrationError::Invalid("empty threshold list".into()));
            }
            if t.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(FiltrationError::Invalid(
                    "thresholds must be finite and non-negative".into(),
                ));
            }
            let mut t = t.clone();
            t.sort_by(|a, b| a.partial_cmp(b).unwrap());
            t.dedup();
            Some(t)
        }
    };
    let cutoff = thresholds.as_ref().map(|t| *t.last().unwrap());
    let snap = |diameter: f64| -> Option<f64> {
        match &thresholds {
            None => Some(diameter),
            Some(t) => {
                let i = t.partition_point(|&x| x < diameter);
                t.get(i).copied()
            }
        }
    };

    let n = cloud.len();
    // Neighbor lists restricted to higher indices keep the enumeration
    // canonical and duplicate-free.
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, higher) in neighbors.iter_mut().enumerate() {
        for j in (i + 1)..n {
            let d = cloud.distance(i, j);
            if cutoff.is_none_or(|c| d <= c) {
                higher.push(j);
            }
        }
    }

    let mut items: Vec<(f64, Vec<VertexId>)> = Vec::new();
    for v in 0..n {
        items.push((snap(0.0).expect("zero is below any cutoff"), vec![v as VertexId]));
    }
    if max_dim >= 1 {
        let mut stack: Vec<(Vec<usize>, f64)> = Vec::new();
        for i in 0..n {
            stack.push((vec![i], 0.0));
            while let Some((simplex, diameter)) = stack.pop() {
                if simplex.len() == max_dim + 1 {
                    continue;
                }
                let &last = simplex.last().unwrap();
                'extend: for &k in &neighbors[last] {
                    let mut diam = diameter;
                    for &v in &simplex {
                        let d = cloud.distance(v, k);
                        if let Some(c) = cutoff {
                            if d > c {
                                continue 'extend;
                            }
                        }
                        if d > diam {
                            diam = d;
                        }
                    }
                    let mut next = simplex.clone();
                    next.push(k);
                    let grade = snap(diam).expect("diameter is below the cutoff");
                    items.push((grade, next.iter().map(|&v| v as VertexId).collect()));
                    stack.push((next, diam));
                }
            }
        }
    }

    Filtration::from_graded_simplices(items, ClosureMode::Strict)
}

/// The triangle list of an 8-vertex dunce hat: a disk whose boundary circle
/// is glued to itself twice forward and once backward, the classical
/// contractible but non-collapsible 2-complex.
const DUNCE_HAT_TRIANGLES: [[VertexId; 3]; 17] = [
    [0, 1, 3],
    [1, 2, 3],
    [0, 2, 4],
    [0, 1, 4],
    [1, 2, 5],
    [0, 2, 5],
    [0, 2, 6],
    [1, 2, 7],
    [0, 1, 7],
    [2, 3, 4],
    [1, 4, 5],
    [0, 5, 6],
    [2, 6, 7],
    [0, 3, 7],
    [3, 4, 5],
    [3, 5, 6],
    [3, 6, 7],
];

/// Builds the dunce hat complex (8 vertices, 24 edges, 17 triangles).
pub fn dunce_hat() -> SimplicialComplex {
    let mut c = SimplicialComplex::new();
    for t in DUNCE_HAT_TRIANGLES {
        c.add_simplex_closed(&t).expect("valid triangle list");
    }
    debug_assert_eq!(c.counts_by_dim(), &[8, 24, 17]);
    c
}

/// Coordinates of five points on the unit circle, used by the pentagon
/// catalog entry. Sides are about 1.176 apart, diagonals about 1.902, so
/// the thresholds 0.5 / 1.2 / 2.0 yield three stages: isolated vertices,
/// the pentagon cycle, and the full 4-simplex.
pub const PENTAGON_THRESHOLDS: [f64; 3] = [0.5, 1.2, 2.0];

pub fn pentagon_points() -> Vec<Vec<f64>> {
    (0..5)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
            vec![theta.cos(), theta.sin()]
        })
        .collect()
}

/// Named example filtrations.
///
/// * `point` - a single vertex.
/// * `circle` - three vertices and three edges at one level.
/// * `dunce-hat` - the dunce hat at one level.
/// * `dunce-hat-filtration` - vertex ⊂ dunce hat ⊂ cone over the dunce hat,
///   graded 0/1/2.
/// * `pentagon-rips` - the three-stage pentagon Rips filtration.
pub fn catalog(name: &str) -> Result<Filtration, FiltrationError> {
    match name {
        "point" => Filtration::from_graded_simplices(vec![(0.0, vec![0])], ClosureMode::Strict),
        "circle" => {
            let items = vec![
                (0.0, vec![0]),
                (0.0, vec![1]),
                (0.0, vec![2]),
                (0.0, vec![0, 1]),
                (0.0, vec![0, 2]),
                (0.0, vec![1, 2]),
            ];
            Filtration::from_graded_simplices(items, ClosureMode::Strict)
        }
        "dunce-hat" => {
            let complex = dunce_hat();
            let items = complex
                .simplices()
                .map(|(_, s)| (0.0, s.vertices().to_vec()))
                .collect();
            Filtration::from_graded_simplices(items, ClosureMode::Strict)
        }
        "dunce-hat-filtration" => {
            let hat = dunce_hat();
            let coned = cone(&hat);
            let apex = 8;
            let items = coned
                .simplices()
                .map(|(_, s)| {
                    let vertices = s.vertices().to_vec();
                    let grade = if vertices == [0] {
                        0.0
                    } else if vertices.contains(&apex) {
                        2.0
                    } else {
                        1.0
                    };
                    (grade, vertices)
                })
                .collect();
            Filtration::from_graded_simplices(items, ClosureMode::Strict)
        }
        "pentagon-rips" => {
            let cloud = PointCloud::from_points(pentagon_points())?;
            vietoris_rips(
                &cloud,
                4,
                &RipsScale::Thresholds(PENTAGON_THRESHOLDS.to_vec()),
            )
        }
        other => Err(FiltrationError::UnknownName(other.to_string())),
    }
}

/// The names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 5] = [
    "point",
    "circle",
    "dunce-hat",
    "dunce-hat-filtration",
    "pentagon-rips",
];
