//! Shared test utilities: independent homology oracles and random-complex
//! generators. The rank computations here deliberately share no code with
//! the library's reduction algorithm; they are the yardstick it is measured
//! against.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use morseprof::{
    vietoris_rips, ClosureMode, Filtration, PointCloud, RipsScale, SimplexId,
    SimplicialComplex, VertexId,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rank of a 0/1 matrix over F2 by dense bitset elimination (row echelon).
/// Rows are u64-packed; nothing here touches the library's sparse columns.
pub fn f2_rank_dense(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut pivot_row = 0;
    for col in 0..(words * 64) {
        let (w, b) = (col / 64, col % 64);
        let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let pivot = rows[pivot_row].clone();
        for row in rows.iter_mut().skip(pivot_row + 1) {
            if row[w] >> b & 1 == 1 {
                for wi in 0..words {
                    row[wi] ^= pivot[wi];
                }
            }
        }
        pivot_row += 1;
        rank += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rank
}

/// Betti numbers of a complex over F2 using dense elimination on boundary
/// matrices assembled directly from the face lists.
#[allow(clippy::needless_range_loop)]
pub fn betti_oracle(complex: &SimplicialComplex) -> Vec<usize> {
    if complex.is_empty() {
        return vec![];
    }
    let dim = complex.dim();
    let counts = complex.counts_by_dim().to_vec();
    let mut ranks = vec![0usize; dim + 2];
    for k in 1..=dim {
        // Row index per (k-1)-simplex, column per k-simplex.
        let mut row_of = std::collections::HashMap::new();
        for (id, s) in complex.simplices() {
            if s.dim() == k - 1 {
                let next = row_of.len();
                row_of.insert(id, next);
            }
        }
        let words = row_of.len().div_ceil(64).max(1);
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for (id, s) in complex.simplices() {
            if s.dim() == k {
                let mut col = vec![0u64; words];
                for &f in complex.faces(id) {
                    let r = row_of[&f];
                    col[r / 64] |= 1 << (r % 64);
                }
                cols.push(col);
            }
        }
        // Rank is transpose-invariant; eliminate the columns as rows.
        ranks[k] = f2_rank_dense(cols);
    }
    (0..=dim)
        .map(|k| counts[k] - ranks[k] - ranks[k + 1])
        .collect()
}

/// Rank of the k-th boundary matrix modulo a prime, with the standard
/// alternating-sign incidence. Distinguishes spaces that F2 cannot, e.g.
/// a disk glued along a boundary word with net degree 3.
#[allow(clippy::needless_range_loop)]
pub fn modp_boundary_rank(complex: &SimplicialComplex, k: usize, p: i64) -> usize {
    let mut row_of = std::collections::HashMap::new();
    for (id, s) in complex.simplices() {
        if s.dim() == k - 1 {
            let next = row_of.len();
            row_of.insert(id, next);
        }
    }
    let mut matrix: Vec<Vec<i64>> = Vec::new();
    for (_, s) in complex.simplices() {
        if s.dim() == k {
            let mut col = vec![0i64; row_of.len()];
            for (j, _) in s.vertices().iter().enumerate() {
                let face: Vec<VertexId> = s
                    .vertices()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, &v)| v)
                    .collect();
                let fid = complex.id_of(&face).expect("closed complex");
                let sign = if j % 2 == 0 { 1 } else { p - 1 };
                col[row_of[&fid]] = (col[row_of[&fid]] + sign) % p;
            }
            matrix.push(col);
        }
    }
    // Gaussian elimination mod p on the column vectors treated as rows.
    let cols = row_of.len();
    let mut rank = 0;
    let mut pivot_row = 0;
    for c in 0..cols {
        let Some(found) = (pivot_row..matrix.len()).find(|&r| matrix[r][c] % p != 0) else {
            continue;
        };
        matrix.swap(pivot_row, found);
        let inv = modp_inverse(matrix[pivot_row][c], p);
        for r in 0..matrix.len() {
            if r != pivot_row && matrix[r][c] % p != 0 {
                let factor = (matrix[r][c] * inv) % p;
                for cc in 0..cols {
                    matrix[r][cc] =
                        ((matrix[r][cc] - factor * matrix[pivot_row][cc]) % p + p * p) % p;
                }
            }
        }
        pivot_row += 1;
        rank += 1;
        if pivot_row == matrix.len() {
            break;
        }
    }
    rank
}

fn modp_inverse(a: i64, p: i64) -> i64 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut result = 1i64;
    let mut base = a.rem_euclid(p);
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

pub fn random_point_cloud(rng: &mut ChaCha8Rng, n: usize) -> PointCloud {
    let points = (0..n)
        .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
        .collect();
    PointCloud::from_points(points).expect("generated points are valid")
}

pub fn random_rips_filtration(rng: &mut ChaCha8Rng, max_points: usize, max_dim: usize) -> Filtration {
    let n = rng.random_range(3..=max_points.max(3));
    let cloud = random_point_cloud(rng, n);
    vietoris_rips(&cloud, max_dim, &RipsScale::AllDistances).expect("valid cloud")
}

/// A random abstract filtration: a random collapsible complex with random
/// monotone integer grades.
pub fn random_abstract_filtration(rng: &mut ChaCha8Rng, max_size: usize) -> Filtration {
    let complex = random_collapsible_complex(rng, max_size);
    let mut grades: Vec<f64> = Vec::with_capacity(complex.len());
    for (id, _) in complex.simplices() {
        let floor = complex
            .faces(id)
            .iter()
            .map(|&f| grades[f])
            .fold(0.0f64, f64::max);
        grades.push(floor + f64::from(rng.random_range(0..2u32)));
    }
    let items = complex
        .simplices()
        .map(|(id, s)| (grades[id], s.vertices().to_vec()))
        .collect();
    Filtration::from_graded_simplices(items, ClosureMode::Strict).expect("monotone by construction")
}

/// Grows a collapsible complex from a vertex by random elementary
/// expansions. Always returns an odd simplex count <= max_size.
pub fn random_collapsible_complex(rng: &mut ChaCha8Rng, max_size: usize) -> SimplicialComplex {
    let mut complex = SimplicialComplex::new();
    complex.add_simplex(&[0]).unwrap();
    while complex.len() + 2 <= max_size {
        let candidates = expansion_candidates(&complex);
        if candidates.is_empty() {
            break;
        }
        let (sigma, tau) = candidates[rng.random_range(0..candidates.len())].clone();
        complex.add_simplex(&sigma).unwrap();
        complex.add_simplex(&tau).unwrap();
    }
    complex
}

/// All valid elementary expansions `(sigma, tau)`: `tau` is an absent
/// union of a present simplex and one vertex (present or fresh) whose only
/// absent proper subset is the codimension-one face `sigma`.
fn expansion_candidates(complex: &SimplicialComplex) -> Vec<(Vec<VertexId>, Vec<VertexId>)> {
    let mut vertices: Vec<VertexId> = complex
        .simplices()
        .filter(|(_, s)| s.dim() == 0)
        .map(|(_, s)| s.vertices()[0])
        .collect();
    let fresh = vertices.iter().max().map_or(0, |m| m + 1);
    vertices.push(fresh);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (_, s) in complex.simplices() {
        for &v in &vertices {
            if s.vertices().contains(&v) {
                continue;
            }
            let mut tau = s.vertices().to_vec();
            tau.push(v);
            tau.sort_unstable();
            if complex.id_of(&tau).is_some() || !seen.insert(tau.clone()) {
                continue;
            }
            let mut missing: Vec<Vec<VertexId>> = Vec::new();
            for mask in 1u32..((1 << tau.len()) - 1) {
                let subset: Vec<VertexId> = (0..tau.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| tau[i])
                    .collect();
                if complex.id_of(&subset).is_none() {
                    missing.push(subset);
                    if missing.len() > 1 {
                        break;
                    }
                }
            }
            if missing.len() == 1 && missing[0].len() == tau.len() - 1 {
                out.push((missing.remove(0), tau));
            }
        }
    }
    out
}

/// All free pairs of a complex (sigma with a unique proper coface).
pub fn free_pairs(complex: &SimplicialComplex) -> Vec<(SimplexId, SimplexId)> {
    let mut out = Vec::new();
    for (sigma, _) in complex.simplices() {
        let cofaces = complex.cofaces(sigma);
        if cofaces.len() == 1 && complex.cofaces(cofaces[0]).is_empty() {
            out.push((sigma, cofaces[0]));
        }
    }
    out
}

/// Removes one free pair, returning the collapsed complex (ids renumbered).
pub fn remove_free_pair(
    complex: &SimplicialComplex,
    sigma: SimplexId,
    tau: SimplexId,
) -> SimplicialComplex {
    let mut out = SimplicialComplex::new();
    for (id, s) in complex.simplices() {
        if id != sigma && id != tau {
            out.add_simplex(s.vertices()).expect("still closed");
        }
    }
    out
}

/// A deterministic batch of small complexes with assorted topology, used
/// by the collapsibility/minimal-Morse agreement checks.
pub fn assorted_small_complexes(rng: &mut ChaCha8Rng, count: usize) -> Vec<SimplicialComplex> {
    let mut out = Vec::new();
    // Fixed shapes first.
    let mut point = SimplicialComplex::new();
    point.add_simplex(&[0]).unwrap();
    out.push(point);
    let mut circle = SimplicialComplex::new();
    for e in [[0u32, 1], [1, 2], [0, 2]] {
        circle.add_simplex_closed(&e).unwrap();
    }
    out.push(circle);
    let mut sphere = SimplicialComplex::new();
    for t in [[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        sphere.add_simplex_closed(&t).unwrap();
    }
    out.push(sphere);
    let mut triangle = SimplicialComplex::new();
    triangle.add_simplex_closed(&[0, 1, 2]).unwrap();
    out.push(triangle);
    while out.len() < count {
        if rng.random_bool(0.5) {
            out.push(random_collapsible_complex(rng, 19));
        } else {
            // A random closure complex on few vertices; may or may not be
            // collapsible or even connected.
            let mut c = SimplicialComplex::new();
            c.add_simplex(&[0]).unwrap();
            let v = rng.random_range(3..6u32);
            for x in 0..v {
                c.add_simplex(&[x]).unwrap();
            }
            for _ in 0..rng.random_range(2..7) {
                let mut verts = Vec::new();
                let size = rng.random_range(2..=3usize);
                while verts.len() < size {
                    let x = rng.random_range(0..v);
                    if !verts.contains(&x) {
                        verts.push(x);
                    }
                }
                verts.sort_unstable();
                c.add_simplex_closed(&verts).unwrap();
                if c.len() > 17 {
                    break;
                }
            }
            out.push(c);
        }
    }
    out
}

// Dense bitset helpers for the persistent-rank oracle below.

fn bit_xor(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn highest_bit(a: &[u64]) -> Option<usize> {
    for (w, &word) in a.iter().enumerate().rev() {
        if word != 0 {
            return Some(w * 64 + (63 - word.leading_zeros() as usize));
        }
    }
    None
}

/// Rank of the span of bitset vectors.
fn span_rank(vectors: &[Vec<u64>]) -> usize {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        while let Some(h) = highest_bit(&v) {
            match basis.iter().find(|b| highest_bit(b) == Some(h)) {
                Some(b) => {
                    let b = b.clone();
                    bit_xor(&mut v, &b);
                }
                None => {
                    basis.push(v);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Brute-force rank of the inclusion-induced map on k-th homology from the
/// sublevel at grade `a` into the sublevel at grade `b`, computed from
/// scratch: a kernel basis of the k-th boundary on the smaller complex,
/// the (k+1)-boundary image on the larger one, and two span ranks. All
/// vectors are indexed by global simplex id.
pub fn persistent_betti_oracle(f: &Filtration, a: f64, b: f64, k: usize) -> usize {
    assert!(a <= b);
    let complex = f.complex();
    let words = complex.len().div_ceil(64).max(1);
    let sub_i = f.sublevel(a);
    let sub_j = f.sublevel(b);

    // Kernel of the k-th boundary over the sublevel at i, by column
    // reduction with combination tracking.
    let mut kernel: Vec<Vec<u64>> = Vec::new();
    {
        let mut pivot_of: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut reduced: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        for id in 0..sub_i.len() {
            if complex.dim_of(id) != k {
                continue;
            }
            let mut column = vec![0u64; words];
            for &face in complex.faces(id) {
                column[face / 64] ^= 1 << (face % 64);
            }
            let mut combination = vec![0u64; words];
            combination[id / 64] |= 1 << (id % 64);
            while let Some(h) = highest_bit(&column) {
                match pivot_of.get(&h) {
                    Some(&p) => {
                        let (col, comb) = reduced[p].clone();
                        bit_xor(&mut column, &col);
                        bit_xor(&mut combination, &comb);
                    }
                    None => {
                        pivot_of.insert(h, reduced.len());
                        break;
                    }
                }
            }
            if highest_bit(&column).is_none() {
                kernel.push(combination.clone());
            }
            reduced.push((column, combination));
        }
    }

    // Image of the (k+1)-boundary over the sublevel at j.
    let mut image: Vec<Vec<u64>> = Vec::new();
    for id in 0..sub_j.len() {
        if complex.dim_of(id) != k + 1 {
            continue;
        }
        let mut column = vec![0u64; words];
        for &face in complex.faces(id) {
            column[face / 64] ^= 1 << (face % 64);
        }
        image.push(column);
    }

    // dim(B_j ∩ Z_i) = dim B_j + dim Z_i - dim(B_j + Z_i), and the rank of
    // the induced map is dim Z_i - dim(B_j ∩ Z_i).
    let dim_image = span_rank(&image);
    let mut combined = image;
    combined.extend(kernel.iter().cloned());
    span_rank(&combined) - dim_image
}

/// Independent closed-V-path detector used by the brute-force enumerator:
/// walks every V-path in every layer by depth-first search over the raw
/// pair list, sharing no code with the library's checker.
pub fn has_closed_vpath(complex: &SimplicialComplex, pairs: &[(SimplexId, SimplexId)]) -> bool {
    let up: std::collections::HashMap<SimplexId, SimplexId> = pairs.iter().copied().collect();
    for &(start, _) in pairs {
        // Walk sigma -> tau -> sigma' != sigma, following matched pairs.
        let mut stack = vec![start];
        let mut visited = std::collections::HashSet::new();
        while let Some(sigma) = stack.pop() {
            let Some(&tau) = up.get(&sigma) else { continue };
            for &next in complex.faces(tau) {
                if next == sigma {
                    continue;
                }
                if next == start {
                    return true;
                }
                if up.contains_key(&next) && visited.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    false
}

/// Exhaustive minimal Morse data: enumerates every acyclic matching by
/// recursion over the Hasse edges. Only usable on tiny complexes.
pub fn brute_force_min_morse(complex: &SimplicialComplex) -> (usize, Vec<usize>) {
    let mut hasse_edges: Vec<(SimplexId, SimplexId)> = Vec::new();
    for (id, _) in complex.simplices() {
        for &f in complex.faces(id) {
            hasse_edges.push((f, id));
        }
    }
    let dim = complex.dim();
    let mut best_total = complex.len();
    let mut best_per_dim = vec![usize::MAX; dim + 1];

    fn recurse(
        complex: &SimplicialComplex,
        edges: &[(SimplexId, SimplexId)],
        index: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<(SimplexId, SimplexId)>,
        best_total: &mut usize,
        best_per_dim: &mut [usize],
    ) {
        if index == edges.len() {
            if has_closed_vpath(complex, chosen) {
                return;
            }
            let total = complex.len() - 2 * chosen.len();
            *best_total = (*best_total).min(total);
            let mut per_dim = vec![0usize; best_per_dim.len()];
            for (id, s) in complex.simplices() {
                if !used[id] {
                    per_dim[s.dim()] += 1;
                }
            }
            for (slot, value) in best_per_dim.iter_mut().zip(per_dim) {
                *slot = (*slot).min(value);
            }
            return;
        }
        let (sigma, tau) = edges[index];
        if !used[sigma] && !used[tau] {
            used[sigma] = true;
            used[tau] = true;
            chosen.push((sigma, tau));
            recurse(complex, edges, index + 1, used, chosen, best_total, best_per_dim);
            chosen.pop();
            used[sigma] = false;
            used[tau] = false;
        }
        recurse(complex, edges, index + 1, used, chosen, best_total, best_per_dim);
    }

    let mut used = vec![false; complex.len()];
    let mut chosen = Vec::new();
    recurse(
        complex,
        &hasse_edges,
        0,
        &mut used,
        &mut chosen,
        &mut best_total,
        &mut best_per_dim,
    );
    (best_total, best_per_dim)
}
