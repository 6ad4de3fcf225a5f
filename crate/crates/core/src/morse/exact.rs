//! Exact minimal Morse numbers by branch and bound.
//!
//! V-paths live inside a single (k-1, k) layer of the Hasse diagram, so a
//! matching is acyclic iff each layer is, and the layers interact only by
//! competing for shared simplices. The search branches over layers in
//! descending dimension, trying every admissible face before declaring a
//! simplex critical. The bottom (0,1) layer never needs branching: an
//! acyclic vertex-edge matching is exactly a rooted forest, so its optimum
//! on the leftover edges is |V| - #components, realized by any spanning
//! forest.
//!
//! Pruning uses the weak Morse inequalities (c_p >= b_p over F2), a
//! remaining-capacity bound for the edge layer, and the parity constraint
//! (the total critical count is congruent to the Euler characteristic).
//!
//! The reported per-dimension minima come from independent searches, one
//! per dimension; a single matching need not achieve all of them at once.

use crate::simplicial::{F2Matrix, SimplexId, SimplicialComplex};

use super::{CycleScratch, MorseError, MorseMatching};

/// Exact minimal Morse data: the minimum total number of critical
/// simplices, the per-dimension minima (independent searches), and one
/// matching achieving the minimum total.
#[derive(Debug, Clone)]
pub struct MinMorse {
    pub total: usize,
    pub per_dim: Vec<usize>,
    pub witness: MorseMatching,
}

/// Computes the exact minimum over all acyclic matchings of the total
/// critical count, plus the per-dimension minima. Refuses complexes larger
/// than `simplex_cap`.
pub fn exact_min_morse(
    complex: &SimplicialComplex,
    simplex_cap: usize,
) -> Result<MinMorse, MorseError> {
    if complex.is_empty() {
        return Err(MorseError::EmptyComplex);
    }
    if complex.len() > simplex_cap {
        return Err(MorseError::CapExceeded {
            size: complex.len(),
            cap: simplex_cap,
        });
    }
    let ctx = Context::new(complex);
    let (total, witness) = TotalSearch::run(&ctx);
    let mut per_dim = Vec::with_capacity(complex.dim() + 1);
    per_dim.push(ctx.num_components);
    for k in 1..=complex.dim() {
        per_dim.push(DimSearch::run(&ctx, k));
    }
    Ok(MinMorse {
        total,
        per_dim,
        witness,
    })
}

/// Static data shared by the searches.
struct Context<'a> {
    complex: &'a SimplicialComplex,
    betti: Vec<usize>,
    euler: i64,
    /// Vertex index (dense) per simplex id; usize::MAX for non-vertices.
    vertex_index: Vec<usize>,
    num_vertices: usize,
    /// Edge ids with their endpoint vertex indices.
    edges: Vec<(SimplexId, usize, usize)>,
    num_components: usize,
}

impl<'a> Context<'a> {
    fn new(complex: &'a SimplicialComplex) -> Self {
        let mut vertex_index = vec![usize::MAX; complex.len()];
        let mut num_vertices = 0;
        for (id, s) in complex.simplices() {
            if s.dim() == 0 {
                vertex_index[id] = num_vertices;
                num_vertices += 1;
            }
        }
        let edges: Vec<(SimplexId, usize, usize)> = complex
            .simplices()
            .filter(|(_, s)| s.dim() == 1)
            .map(|(id, _)| {
                let f = complex.faces(id);
                (id, vertex_index[f[0]], vertex_index[f[1]])
            })
            .collect();

        let mut uf = Forest::new(num_vertices);
        for &(_, a, b) in &edges {
            uf.union(a, b);
        }
        let num_components = num_vertices - uf.merges;

        Self {
            complex,
            betti: f2_betti(complex),
            euler: complex.euler_characteristic(),
            vertex_index,
            num_vertices,
            edges,
            num_components,
        }
    }

    /// Lifts a lower bound to the parity class of the Euler characteristic:
    /// the total critical count of any matching satisfies
    /// total - chi = 2 * (sum of odd-dimensional critical counts).
    fn parity_lift(&self, bound: usize) -> usize {
        if (bound as i64 - self.euler).rem_euclid(2) != 0 {
            bound + 1
        } else {
            bound
        }
    }
}

/// Minimizes the total critical count.
struct TotalSearch<'a> {
    ctx: &'a Context<'a>,
    /// Simplices of dimension >= 2 in branch order: descending dimension,
    /// ascending id within a dimension.
    uppers: Vec<SimplexId>,
    /// Entries at index >= i of dimension exactly 2 (static upper bound on
    /// how many more edges the (1,2) layer can consume).
    dim2_remaining: Vec<usize>,
    /// Sum of betti[2..=k] for the mid-layer floors.
    betti_prefix: Vec<usize>,
    partner: Vec<Option<SimplexId>>,
    crit: Vec<usize>,
    edges_unmatched: usize,
    scratch: CycleScratch,
    best_total: usize,
    best_partner: Vec<Option<SimplexId>>,
    floor_total: usize,
}

impl<'a> TotalSearch<'a> {
    fn run(ctx: &'a Context<'a>) -> (usize, MorseMatching) {
        let complex = ctx.complex;
        let dim = complex.dim();
        let mut uppers: Vec<SimplexId> = complex
            .simplices()
            .filter(|(_, s)| s.dim() >= 2)
            .map(|(id, _)| id)
            .collect();
        uppers.sort_by_key(|&id| (std::cmp::Reverse(complex.dim_of(id)), id));
        let mut dim2_remaining = vec![0usize; uppers.len() + 1];
        for i in (0..uppers.len()).rev() {
            dim2_remaining[i] =
                dim2_remaining[i + 1] + usize::from(complex.dim_of(uppers[i]) == 2);
        }
        let mut betti_prefix = vec![0usize; dim + 2];
        for k in 2..=dim {
            betti_prefix[k] = betti_prefix[k - 1] + ctx.betti[k];
        }
        let floor_total = ctx.parity_lift(ctx.betti.iter().sum());

        let mut search = TotalSearch {
            ctx,
            uppers,
            dim2_remaining,
            betti_prefix,
            partner: vec![None; complex.len()],
            crit: vec![0; dim + 1],
            edges_unmatched: ctx.edges.len(),
            scratch: CycleScratch::new(complex.len()),
            best_total: usize::MAX,
            best_partner: Vec::new(),
            floor_total,
        };
        search.branch(0);
        (
            search.best_total,
            MorseMatching::from_partner(search.best_partner),
        )
    }

    fn branch(&mut self, i: usize) {
        if self.best_total <= self.floor_total {
            return;
        }
        if i == self.uppers.len() {
            self.leaf();
            return;
        }
        let tau = self.uppers[i];
        if self.partner[tau].is_some() {
            self.branch(i + 1);
            return;
        }
        if self.lower_bound(i) >= self.best_total {
            return;
        }
        let complex = self.ctx.complex;
        let k = complex.dim_of(tau);
        for fi in 0..complex.faces(tau).len() {
            let sigma = complex.faces(tau)[fi];
            if self.partner[sigma].is_some() {
                continue;
            }
            if self
                .scratch
                .would_close_cycle(complex, &self.partner, sigma, tau)
            {
                continue;
            }
            self.partner[sigma] = Some(tau);
            self.partner[tau] = Some(sigma);
            if k == 2 {
                self.edges_unmatched -= 1;
            }
            self.branch(i + 1);
            self.partner[sigma] = None;
            self.partner[tau] = None;
            if k == 2 {
                self.edges_unmatched += 1;
            }
            if self.best_total <= self.floor_total {
                return;
            }
        }
        self.crit[k] += 1;
        self.branch(i + 1);
        self.crit[k] -= 1;
    }

    /// Valid optimistic completion of the current partial assignment.
    fn lower_bound(&self, i: usize) -> usize {
        let k = self.ctx.complex.dim_of(self.uppers[i]);
        let crit_hi: usize = self.crit[(k + 1)..].iter().sum();
        let cur = self.crit[k].max(self.ctx.betti[k]);
        let mid = self.betti_prefix[k - 1];
        let floor1 = if k == 2 {
            let capacity = self.dim2_remaining[i] + self.ctx.num_vertices - 1;
            self.ctx.betti[1]
                .max(self.edges_unmatched.saturating_sub(capacity))
        } else {
            self.ctx.betti[1]
        };
        let floor0 = self.ctx.betti[0];
        self.ctx
            .parity_lift(crit_hi + cur + mid + floor1 + floor0)
    }

    fn leaf(&mut self) {
        let mut uf = Forest::new(self.ctx.num_vertices);
        for &(eid, a, b) in &self.ctx.edges {
            if self.partner[eid].is_none() {
                uf.union(a, b);
            }
        }
        let c1 = self.edges_unmatched - uf.merges;
        let c0 = self.ctx.num_vertices - uf.merges;
        let total: usize = self.crit.iter().skip(2).sum::<usize>() + c1 + c0;
        if total < self.best_total {
            self.best_total = total;
            self.best_partner = self.partner.clone();
            self.apply_forest_witness();
        }
    }

    /// Matches each non-root vertex with its parent edge in a spanning
    /// forest of the unmatched edges, recorded into `best_partner`.
    fn apply_forest_witness(&mut self) {
        let v = self.ctx.num_vertices;
        let mut uf = Forest::new(v);
        let mut adjacency: Vec<Vec<(usize, SimplexId)>> = vec![Vec::new(); v];
        let mut vertex_id = vec![0 as SimplexId; v];
        for (id, &vi) in self.ctx.vertex_index.iter().enumerate() {
            if vi != usize::MAX {
                vertex_id[vi] = id;
            }
        }
        for &(eid, a, b) in &self.ctx.edges {
            if self.partner[eid].is_none() && uf.union(a, b) {
                adjacency[a].push((b, eid));
                adjacency[b].push((a, eid));
            }
        }
        let mut seen = vec![false; v];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..v {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                for &(y, eid) in &adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        self.best_partner[vertex_id[y]] = Some(eid);
                        self.best_partner[eid] = Some(vertex_id[y]);
                        queue.push_back(y);
                    }
                }
            }
        }
    }
}

/// Minimizes the critical count in one fixed dimension `k >= 1`. Only the
/// (k, k+1) and (k-1, k) layers matter; everything else stays critical,
/// which never hurts the objective.
struct DimSearch<'a> {
    ctx: &'a Context<'a>,
    k: usize,
    /// Phase 1: the (k+1)-simplices (may match a k-face or be skipped).
    /// Phase 2: the k-simplices (match a (k-1)-face or stay critical);
    /// for k == 1 phase 2 is replaced by the spanning-forest optimum.
    uppers: Vec<SimplexId>,
    phase1_len: usize,
    /// Phase-1 entries at index >= i; each can absorb at most one
    /// k-simplex, which bounds how far the objective can still drop.
    phase1_remaining: Vec<usize>,
    /// How many k-simplices the lower layer can absorb in total.
    down_capacity: usize,
    unmatched_k: usize,
    partner: Vec<Option<SimplexId>>,
    crit_k: usize,
    scratch: CycleScratch,
    best: usize,
}

impl<'a> DimSearch<'a> {
    fn run(ctx: &'a Context<'a>, k: usize) -> usize {
        let complex = ctx.complex;
        let mut uppers: Vec<SimplexId> = complex
            .simplices()
            .filter(|(_, s)| s.dim() == k + 1)
            .map(|(id, _)| id)
            .collect();
        let phase1_len = uppers.len();
        if k >= 2 {
            uppers.extend(
                complex
                    .simplices()
                    .filter(|(_, s)| s.dim() == k)
                    .map(|(id, _)| id),
            );
        }
        let mut phase1_remaining = vec![0usize; uppers.len() + 1];
        for i in (0..uppers.len()).rev() {
            phase1_remaining[i] = phase1_remaining[i + 1] + usize::from(i < phase1_len);
        }
        let counts = complex.counts_by_dim();
        let down_capacity = if k == 1 {
            ctx.num_vertices.saturating_sub(1)
        } else {
            counts[k - 1]
        };
        let mut search = DimSearch {
            ctx,
            k,
            uppers,
            phase1_len,
            phase1_remaining,
            down_capacity,
            unmatched_k: counts[k],
            partner: vec![None; complex.len()],
            crit_k: 0,
            scratch: CycleScratch::new(complex.len()),
            best: usize::MAX,
        };
        search.branch(0);
        search.best
    }

    fn lower_bound(&self, i: usize) -> usize {
        let capacity = self.phase1_remaining[i] + self.down_capacity;
        self.ctx.betti[self.k]
            .max(self.unmatched_k.saturating_sub(capacity))
            .max(self.crit_k)
    }

    fn branch(&mut self, i: usize) {
        if self.best <= self.ctx.betti[self.k] {
            return;
        }
        if i == self.uppers.len() {
            let value = if self.k == 1 {
                let mut uf = Forest::new(self.ctx.num_vertices);
                let mut unmatched = 0usize;
                for &(eid, a, b) in &self.ctx.edges {
                    if self.partner[eid].is_none() {
                        unmatched += 1;
                        uf.union(a, b);
                    }
                }
                unmatched - uf.merges
            } else {
                self.crit_k
            };
            self.best = self.best.min(value);
            return;
        }
        if self.lower_bound(i) >= self.best {
            return;
        }
        let tau = self.uppers[i];
        let complex = self.ctx.complex;
        if i < self.phase1_len {
            // A (k+1)-simplex: matching it removes one k-simplex from the
            // objective, but may obstruct other pairs, so skipping is a
            // branch too.
            for fi in 0..complex.faces(tau).len() {
                let sigma = complex.faces(tau)[fi];
                if self.partner[sigma].is_some() {
                    continue;
                }
                if self
                    .scratch
                    .would_close_cycle(complex, &self.partner, sigma, tau)
                {
                    continue;
                }
                self.partner[sigma] = Some(tau);
                self.partner[tau] = Some(sigma);
                self.unmatched_k -= 1;
                self.branch(i + 1);
                self.partner[sigma] = None;
                self.partner[tau] = None;
                self.unmatched_k += 1;
                if self.best <= self.ctx.betti[self.k] {
                    return;
                }
            }
            self.branch(i + 1);
        } else {
            if self.partner[tau].is_some() {
                self.branch(i + 1);
                return;
            }
            for fi in 0..complex.faces(tau).len() {
                let sigma = complex.faces(tau)[fi];
                if self.partner[sigma].is_some() {
                    continue;
                }
                if self
                    .scratch
                    .would_close_cycle(complex, &self.partner, sigma, tau)
                {
                    continue;
                }
                self.partner[sigma] = Some(tau);
                self.partner[tau] = Some(sigma);
                self.unmatched_k -= 1;
                self.branch(i + 1);
                self.partner[sigma] = None;
                self.partner[tau] = None;
                self.unmatched_k += 1;
                if self.best <= self.ctx.betti[self.k] {
                    return;
                }
            }
            self.crit_k += 1;
            self.branch(i + 1);
            self.crit_k -= 1;
        }
    }
}

/// Union-find tracking the number of successful merges.
struct Forest {
    parent: Vec<usize>,
    merges: usize,
}

impl Forest {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            merges: 0,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.merges += 1;
        true
    }
}

/// F2 Betti numbers via boundary-matrix ranks. Used only for search bounds;
/// the persistence pairing is computed and oracle-checked independently.
#[allow(clippy::needless_range_loop)]
fn f2_betti(complex: &SimplicialComplex) -> Vec<usize> {
    let dim = complex.dim();
    let counts = complex.counts_by_dim();
    let mut ranks = vec![0usize; dim + 2];
    for k in 1..=dim {
        ranks[k] = f2_rank(&complex.boundary_matrix(k).expect("k within range"));
    }
    (0..=dim)
        .map(|k| counts[k] - ranks[k] - ranks[k + 1])
        .collect()
}

fn f2_rank(matrix: &F2Matrix) -> usize {
    let mut pivot_col: Vec<Option<usize>> = vec![None; matrix.rows()];
    let mut reduced: Vec<Vec<usize>> = Vec::new();
    let mut rank = 0;
    for j in 0..matrix.num_cols() {
        let mut col = matrix.column(j).to_vec();
        while let Some(&low) = col.last() {
            match pivot_col[low] {
                Some(p) => col = xor_sorted(&col, &reduced[p]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_col[low] = Some(reduced.len());
            rank += 1;
        }
        reduced.push(col);
    }
    rank
}

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
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
