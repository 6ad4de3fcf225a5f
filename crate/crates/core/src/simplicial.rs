//! Finite simplicial complexes with explicit Hasse-diagram incidence.
//!
//! A complex stores its simplices as sorted vertex lists in insertion order,
//! together with codimension-one face and coface lists (the Hasse diagram).
//! Faces are always inserted before their cofaces, so `SimplexId` order
//! refines the face poset. All matrix work is over the two-element field;
//! oriented integer boundaries are out of scope.

use std::collections::HashMap;

use thiserror::Error;

/// Vertex label. Complexes built by this crate use labels dense in
/// `0..num_vertices`; parsed input may be sparse and is accepted as-is.
pub type VertexId = u32;

/// Index of a simplex within its complex, in insertion order. Every face of
/// a simplex has a smaller id than the simplex itself.
pub type SimplexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex list {0:?} contains a duplicate vertex")]
    DuplicateVertex(Vec<VertexId>),
    #[error("missing codimension-one face {face:?} of {simplex:?}")]
    MissingFace {
        simplex: Vec<VertexId>,
        face: Vec<VertexId>,
    },
    #[error("dimension {k} out of range 1..={dim}")]
    DimensionOutOfRange { k: usize, dim: usize },
    #[error("invalid simplex id {0}")]
    InvalidId(SimplexId),
}

/// A simplex, canonicalized as a strictly increasing vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<VertexId>,
}

impl Simplex {
    /// Builds a simplex from a vertex list, sorting it; rejects duplicates.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(vertices));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The codimension-one faces in lexicographic order (dropping the last
    /// vertex first). A vertex has none.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.vertices.len();
        (0..n).rev().filter(move |_| n > 1).map(move |skip| {
            let vertices = self
                .vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            Simplex { vertices }
        })
    }
}

/// Boundary matrix over the two-element field, stored column-sparse.
/// Each column is the strictly increasing list of row indices holding a 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: Vec<Vec<usize>>,
}

impl F2Matrix {
    pub fn new(rows: usize, cols: Vec<Vec<usize>>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.windows(2).all(|w| w[0] < w[1]) && c.iter().all(|&r| r < rows)));
        Self { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.cols
    }
}

/// A finite simplicial complex. Mutable while it is being built, after which
/// it is treated as frozen: nothing mutates a complex behind `&self`, so
/// shared references are safe to use from any number of threads.
#[derive(Debug, Clone, Default)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    faces: Vec<Vec<SimplexId>>,
    cofaces: Vec<Vec<SimplexId>>,
    index: HashMap<Vec<VertexId>, SimplexId>,
    counts_by_dim: Vec<usize>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension; 0 for the empty complex.
    pub fn dim(&self) -> usize {
        self.counts_by_dim.len().saturating_sub(1)
    }

    /// Number of simplices in each dimension `0..=dim`.
    pub fn counts_by_dim(&self) -> &[usize] {
        &self.counts_by_dim
    }

    pub fn num_vertices(&self) -> usize {
        self.counts_by_dim.first().copied().unwrap_or(0)
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> impl Iterator<Item = (SimplexId, &Simplex)> {
        self.simplices.iter().enumerate()
    }

    pub fn dim_of(&self, id: SimplexId) -> usize {
        self.simplices[id].dim()
    }

    pub fn id_of(&self, vertices: &[VertexId]) -> Option<SimplexId> {
        self.index.get(vertices).copied()
    }

    /// Codimension-one faces of `id`, ascending. Empty for vertices.
    pub fn faces(&self, id: SimplexId) -> &[SimplexId] {
        &self.faces[id]
    }

    /// Codimension-one cofaces of `id`, ascending.
    pub fn cofaces(&self, id: SimplexId) -> &[SimplexId] {
        &self.cofaces[id]
    }

    /// Successors of `id` in the directed Hasse diagram, i.e. exactly its
    /// codimension-one faces.
    pub fn hasse_successors(&self, id: SimplexId) -> Result<&[SimplexId], ComplexError> {
        self.faces
            .get(id)
            .map(Vec::as_slice)
            .ok_or(ComplexError::InvalidId(id))
    }

    /// Adds a simplex in strict mode: every codimension-one face must already
    /// be present. Re-adding an existing simplex returns its id.
    pub fn add_simplex(&mut self, vertices: &[VertexId]) -> Result<SimplexId, ComplexError> {
        let simplex = Simplex::new(vertices.to_vec())?;
        if let Some(&id) = self.index.get(simplex.vertices()) {
            return Ok(id);
        }
        let mut face_ids = Vec::with_capacity(simplex.vertices().len());
        for face in simplex.facets() {
            match self.index.get(face.vertices()) {
                Some(&fid) => face_ids.push(fid),
                None => {
                    return Err(ComplexError::MissingFace {
                        simplex: simplex.vertices().to_vec(),
                        face: face.vertices().to_vec(),
                    })
                }
            }
        }
        face_ids.sort_unstable();
        Ok(self.push_simplex(simplex, face_ids))
    }

    /// Adds a simplex together with any missing faces (auto-closure).
    /// Returns the id of the simplex itself.
    pub fn add_simplex_closed(&mut self, vertices: &[VertexId]) -> Result<SimplexId, ComplexError> {
        let simplex = Simplex::new(vertices.to_vec())?;
        self.ensure_closed(simplex)
    }

    fn ensure_closed(&mut self, simplex: Simplex) -> Result<SimplexId, ComplexError> {
        if let Some(&id) = self.index.get(simplex.vertices()) {
            return Ok(id);
        }
        let mut face_ids = Vec::with_capacity(simplex.vertices().len());
        for face in simplex.facets().collect::<Vec<_>>() {
            face_ids.push(self.ensure_closed(face)?);
        }
        face_ids.sort_unstable();
        Ok(self.push_simplex(simplex, face_ids))
    }

    fn push_simplex(&mut self, simplex: Simplex, face_ids: Vec<SimplexId>) -> SimplexId {
        let id = self.simplices.len();
        let dim = simplex.dim();
        if dim >= self.counts_by_dim.len() {
            self.counts_by_dim.resize(dim + 1, 0);
        }
        self.counts_by_dim[dim] += 1;
        for &fid in &face_ids {
            self.cofaces[fid].push(id);
        }
        self.index.insert(simplex.vertices().to_vec(), id);
        self.simplices.push(simplex);
        self.faces.push(face_ids);
        self.cofaces.push(Vec::new());
        id
    }

    /// Alternating sum of simplex counts by dimension.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts_by_dim
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// The boundary operator from `k`-chains to `(k-1)`-chains over F2.
    /// Rows are indexed by the `(k-1)`-simplices and columns by the
    /// `k`-simplices, both in id order.
    pub fn boundary_matrix(&self, k: usize) -> Result<F2Matrix, ComplexError> {
        if k < 1 || k > self.dim() || self.is_empty() {
            return Err(ComplexError::DimensionOutOfRange { k, dim: self.dim() });
        }
        let mut row_of = HashMap::new();
        for (id, s) in self.simplices.iter().enumerate() {
            if s.dim() == k - 1 {
                let row = row_of.len();
                row_of.insert(id, row);
            }
        }
        let mut cols = Vec::new();
        for (id, s) in self.simplices.iter().enumerate() {
            if s.dim() == k {
                let mut col: Vec<usize> = self.faces[id].iter().map(|f| row_of[f]).collect();
                col.sort_unstable();
                cols.push(col);
            }
        }
        Ok(F2Matrix::new(row_of.len(), cols))
    }

    /// Whether the 1-skeleton is connected (true for the empty complex's
    /// vacuous case only when there is at most one vertex).
    pub fn is_connected(&self) -> bool {
        let vertex_ids: Vec<SimplexId> = self
            .simplices
            .iter()
            .enumerate()
            .filter(|(_, s)| s.dim() == 0)
            .map(|(id, _)| id)
            .collect();
        if vertex_ids.len() <= 1 {
            return true;
        }
        let mut dsu = DisjointSets::new(self.len());
        for (id, s) in self.simplices.iter().enumerate() {
            if s.dim() == 1 {
                dsu.union(self.faces[id][0], self.faces[id][1]);
            }
        }
        let root = dsu.find(vertex_ids[0]);
        vertex_ids.iter().all(|&v| dsu.find(v) == root)
    }
}

/// Plain union-find over simplex ids.
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the two elements were in different sets.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
