//! Structural invariants checked on generated inputs.

mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{
    betti_oracle, modp_boundary_rank, random_abstract_filtration, random_collapsible_complex,
    random_rips_filtration, rng,
};
use morseprof::{
    catalog, collapse_search, cone, dunce_hat, exact_min_morse, greedy_incremental, reduce,
    vietoris_rips, ClosureMode, Filtration, PointCloud, RipsScale, SimplicialComplex,
};

/// Exhaustive closure check: every subset of every stored simplex is stored.
fn assert_closed(complex: &SimplicialComplex) {
    for (_, s) in complex.simplices() {
        let vs = s.vertices();
        for mask in 1u32..(1 << vs.len()) {
            let subset: Vec<u32> = (0..vs.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| vs[i])
                .collect();
            assert!(
                complex.id_of(&subset).is_some(),
                "missing subset {subset:?} of {vs:?}"
            );
        }
    }
}

fn assert_hasse_consistent(complex: &SimplicialComplex) {
    for (id, s) in complex.simplices() {
        let expected_faces = if s.dim() == 0 { 0 } else { s.dim() + 1 };
        assert_eq!(complex.faces(id).len(), expected_faces);
        for &f in complex.faces(id) {
            assert!(f < id, "face id must precede coface id");
            assert_eq!(complex.dim_of(f) + 1, complex.dim_of(id));
            assert!(complex.cofaces(f).contains(&id));
        }
        for &cf in complex.cofaces(id) {
            assert!(complex.faces(cf).contains(&id));
        }
    }
}

fn assert_boundary_squares_to_zero(complex: &SimplicialComplex) {
    for k in 2..=complex.dim() {
        let lower = complex.boundary_matrix(k - 1).unwrap();
        let upper = complex.boundary_matrix(k).unwrap();
        for j in 0..upper.num_cols() {
            let mut acc = vec![0u8; lower.rows()];
            for &face_row in upper.column(j) {
                for &r in lower.column(face_row) {
                    acc[r] ^= 1;
                }
            }
            assert!(acc.iter().all(|&x| x == 0), "d(d(col {j})) != 0 at k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_invariants_hold_on_random_collapsibles(seed in any::<u64>()) {
        let complex = random_collapsible_complex(&mut rng(seed), 21);
        assert_closed(&complex);
        assert_hasse_consistent(&complex);
        if complex.dim() >= 2 {
            assert_boundary_squares_to_zero(&complex);
        }
    }

    #[test]
    fn rips_grades_equal_diameters(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(3..9usize);
        let cloud = common::random_point_cloud(&mut r, n);
        let f = vietoris_rips(&cloud, 3, &RipsScale::AllDistances).unwrap();
        for (id, s) in f.complex().simplices() {
            let vs = s.vertices();
            let mut diameter: f64 = 0.0;
            for a in 0..vs.len() {
                for b in (a + 1)..vs.len() {
                    diameter = diameter.max(cloud.distance(vs[a] as usize, vs[b] as usize));
                }
            }
            prop_assert_eq!(f.grade(id), diameter);
        }
        assert_hasse_consistent(f.complex());
    }

    #[test]
    fn parse_serialize_round_trip(seed in any::<u64>()) {
        let f = random_abstract_filtration(&mut rng(seed), 21);
        let text = f.to_file_string();
        let reparsed = Filtration::parse(&text, ClosureMode::Strict).unwrap();
        prop_assert_eq!(reparsed.to_file_string(), text);
        prop_assert_eq!(reparsed.grades(), f.grades());
    }

    #[test]
    fn sublevels_nest_and_match_euler(seed in any::<u64>()) {
        let f = random_rips_filtration(&mut rng(seed), 7, 2);
        let pairing = reduce(&f);
        let mut previous = 0;
        for i in 0..f.num_levels() {
            let sub = f.sublevel_at(i);
            prop_assert!(sub.len() >= previous);
            previous = sub.len();
            let betti = pairing.betti_at(f.levels()[i]);
            let alternating: i64 = betti
                .iter()
                .enumerate()
                .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            prop_assert_eq!(alternating, sub.euler_characteristic());
        }
    }

    #[test]
    fn persistent_betti_monotone_in_offset(seed in any::<u64>(), k in 0usize..3) {
        let f = random_rips_filtration(&mut rng(seed), 7, 2);
        let pairing = reduce(&f);
        let levels = f.levels().to_vec();
        for &i in &levels {
            let mut previous = usize::MAX;
            for &j in levels.iter().filter(|&&j| j >= i) {
                let value = pairing.persistent_betti(i, j - i, k);
                prop_assert!(value <= previous);
                previous = value;
            }
            prop_assert_eq!(pairing.persistent_betti(i, 0.0, k),
                pairing.betti_at(i).get(k).copied().unwrap_or(0));
        }
    }

    #[test]
    fn iso_windows_are_transitive(seed in any::<u64>()) {
        let f = random_abstract_filtration(&mut rng(seed), 17);
        let pairing = reduce(&f);
        let levels = f.levels();
        for a in 0..levels.len() {
            for b in a..levels.len() {
                for c in b..levels.len() {
                    if pairing.is_iso_window(levels[a], levels[c]) {
                        prop_assert!(pairing.is_iso_window(levels[a], levels[b]));
                        prop_assert!(pairing.is_iso_window(levels[b], levels[c]));
                    }
                }
            }
        }
    }

    #[test]
    fn greedy_never_beats_exact(seed in any::<u64>()) {
        let f = random_abstract_filtration(&mut rng(seed), 15);
        let greedy = greedy_incremental(&f);
        for i in 0..f.num_levels() {
            let sub = f.sublevel_at(i).to_complex();
            let exact = exact_min_morse(&sub, 25).unwrap();
            prop_assert!(greedy.per_level[i].total() >= exact.total);
        }
    }
}

#[test]
fn cones_in_the_corpus_are_collapsible() {
    let mut bases: Vec<SimplicialComplex> = vec![
        catalog("point").unwrap().complex().clone(),
        catalog("circle").unwrap().complex().clone(),
        dunce_hat(),
    ];
    let mut r = rng(7);
    for _ in 0..5 {
        bases.push(random_collapsible_complex(&mut r, 15));
    }
    let mut sphere = SimplicialComplex::new();
    for t in [[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        sphere.add_simplex_closed(&t).unwrap();
    }
    bases.push(sphere);
    for base in &bases {
        let coned = cone(base);
        assert_eq!(coned.len(), 2 * base.len() + 1);
        let cert = collapse_search(&coned, 10_000_000).unwrap();
        assert!(
            cert.is_collapsible(),
            "cone over a {}-simplex complex must collapse",
            base.len()
        );
    }
}

#[test]
fn dunce_hat_catalog_is_self_certifying() {
    let hat = dunce_hat();
    assert_eq!(hat.counts_by_dim(), &[8, 24, 17]);
    assert_eq!(hat.euler_characteristic(), 1);
    assert_eq!(betti_oracle(&hat), vec![1, 0, 0]);
    // Full mod-3 rank of the degree-2 boundary rules out the cyclic
    // boundary identification of net degree 3, which F2 homology cannot
    // see; together with the F2 data this pins the dunce hat.
    assert_eq!(modp_boundary_rank(&hat, 2, 3), 17);
    assert_eq!(modp_boundary_rank(&hat, 1, 3), 7);
    // Contractible but not collapsible, with minimal Morse number 3.
    let cert = collapse_search(&hat, 1_000_000).unwrap();
    assert!(!cert.is_collapsible());
    let exact = exact_min_morse(&hat, 64).unwrap();
    assert_eq!((exact.total, exact.per_dim.clone()), (3, vec![1, 1, 1]));
}

#[test]
fn pentagon_matches_its_construction() {
    let f = catalog("pentagon-rips").unwrap();
    // Grades snap to the three thresholds and every stage is as built:
    // isolated vertices, the cycle, the full simplex.
    assert_eq!(f.levels(), &[0.5, 1.2, 2.0]);
    let cloud = PointCloud::from_points(morseprof::filtration::pentagon_points()).unwrap();
    let side = cloud.distance(0, 1);
    let diagonal = cloud.distance(0, 2);
    assert!(side > 0.5 && side <= 1.2);
    assert!(diagonal > 1.2 && diagonal <= 2.0);
}

#[test]
fn vertex_labels_dense_in_generated_complexes() {
    let mut r = rng(11);
    for _ in 0..10 {
        let c = random_collapsible_complex(&mut r, 19);
        let mut labels: Vec<u32> = c
            .simplices()
            .filter(|(_, s)| s.dim() == 0)
            .map(|(_, s)| s.vertices()[0])
            .collect();
        labels.sort_unstable();
        let expected: Vec<u32> = (0..labels.len() as u32).collect();
        assert_eq!(labels, expected);
    }
}

#[test]
fn persistent_betti_matches_rank_oracle() {
    use common::persistent_betti_oracle;
    let mut cases = 0usize;
    let mut r = rng(21);
    let mut filtrations = vec![
        catalog("pentagon-rips").unwrap(),
        catalog("dunce-hat-filtration").unwrap(),
    ];
    for _ in 0..12 {
        filtrations.push(random_rips_filtration(&mut r, 7, 2));
        filtrations.push(random_abstract_filtration(&mut r, 17));
    }
    for f in &filtrations {
        let pairing = reduce(f);
        let levels = f.levels().to_vec();
        for i in 0..levels.len() {
            for j in i..levels.len() {
                for k in 0..=f.complex().dim().min(2) {
                    // The query grade is the float sum the implementation
                    // sees; the oracle must look at the same sublevel.
                    let offset = levels[j] - levels[i];
                    let grade = levels[i] + offset;
                    let expected = persistent_betti_oracle(f, levels[i], grade, k);
                    let actual = pairing.persistent_betti(levels[i], offset, k);
                    assert_eq!(
                        actual, expected,
                        "persistent betti mismatch: levels {i}->{j}, dim {k}"
                    );
                    cases += 1;
                }
            }
        }
    }
    assert!(cases > 100);
    // The pentagon cycle dies into the filled stage: rank 0 across it.
    let pentagon = catalog("pentagon-rips").unwrap();
    assert_eq!(persistent_betti_oracle(&pentagon, 1.2, 2.0, 1), 0);
}

#[test]
fn circle_boundary_matrix_has_rank_two() {
    let f = catalog("circle").unwrap();
    let d1 = f.complex().boundary_matrix(1).unwrap();
    // Brute-force elimination over the raw columns.
    let words = d1.rows().div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = (0..d1.num_cols())
        .map(|j| {
            let mut bits = vec![0u64; words];
            for &r in d1.column(j) {
                bits[r / 64] |= 1 << (r % 64);
            }
            bits
        })
        .collect();
    assert_eq!(common::f2_rank_dense(rows), 2);
}

#[test]
fn matching_dump_schema() {
    let f = catalog("circle").unwrap();
    let greedy = greedy_incremental(&f);
    let dump: serde_json::Value = serde_json::from_str(&greedy.matching.to_json()).unwrap();
    let pairs = dump["pairs"].as_array().unwrap();
    let critical = dump["critical"].as_array().unwrap();
    assert_eq!(pairs.len() * 2 + critical.len(), f.len());
    for pair in pairs {
        assert!(pair[0].as_u64().unwrap() < pair[1].as_u64().unwrap());
    }
}

#[test]
fn exact_search_agrees_with_blind_enumeration() {
    use common::brute_force_min_morse;
    let mut r = rng(33);
    let mut complexes = vec![];
    let mut triangle = SimplicialComplex::new();
    triangle.add_simplex_closed(&[0, 1, 2]).unwrap();
    complexes.push(triangle);
    complexes.push(catalog("circle").unwrap().complex().clone());
    let mut wedge = SimplicialComplex::new();
    for e in [[0u32, 1], [1, 2], [0, 2], [2, 3], [3, 4], [2, 4]] {
        wedge.add_simplex_closed(&e).unwrap();
    }
    complexes.push(wedge);
    for _ in 0..12 {
        complexes.push(random_collapsible_complex(&mut r, 11));
    }
    for complex in &complexes {
        if complex.len() > 13 {
            continue;
        }
        let (brute_total, brute_per_dim) = brute_force_min_morse(complex);
        let exact = exact_min_morse(complex, 25).unwrap();
        assert_eq!(exact.total, brute_total, "minimum total disagrees");
        assert_eq!(exact.per_dim, brute_per_dim, "per-dimension minima disagree");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn parser_never_panics(text in ".{0,200}") {
        let _ = Filtration::parse(&text, ClosureMode::Strict);
        let _ = Filtration::parse(&text, ClosureMode::AutoClose);
    }

    #[test]
    fn weak_morse_holds_on_abstract_filtrations(seed in any::<u64>()) {
        let f = random_abstract_filtration(&mut rng(seed), 21);
        let pairing = reduce(&f);
        let greedy = greedy_incremental(&f);
        for (i, &t) in f.levels().iter().enumerate() {
            let betti = pairing.betti_at(t);
            let counts = greedy.per_level[i].per_dim();
            for p in 0..betti.len() {
                prop_assert!(counts.get(p).copied().unwrap_or(0) >= betti[p]);
            }
        }
    }
}

#[test]
fn stable_windows_split_only_at_real_events() {
    // A whisker at level 1 pairs away instantly; the cycle closing at
    // level 2 is a real event, as is the fill at level 3.
    let text = "0 0\n0 1\n0 0 1\n1 2\n1 1 2\n2 0 2\n3 0 1 2\n";
    let f = Filtration::parse(text, ClosureMode::Strict).unwrap();
    let pairing = reduce(&f);
    assert_eq!(
        pairing.homology_stable_windows(),
        vec![(0.0, 1.0), (2.0, 2.0), (3.0, 3.0)]
    );
    assert!(pairing.is_iso_window(0.0, 1.0));
    assert!(!pairing.is_iso_window(1.0, 2.0));
}

#[test]
fn three_dimensional_rips_pipeline() {
    // Six points, max_dim 3: tetrahedra appear and every layer of the
    // pipeline has to cope with them.
    let mut r = rng(17);
    let cloud = common::random_point_cloud(&mut r, 6);
    let f = vietoris_rips(&cloud, 3, &RipsScale::AllDistances).unwrap();
    assert!(f.complex().dim() >= 3);
    let pairing = reduce(&f);
    let greedy = greedy_incremental(&f);
    for (i, &t) in f.levels().iter().enumerate() {
        assert_eq!(
            greedy.per_level[i].alternating_sum(),
            f.sublevel_at(i).euler_characteristic()
        );
        let betti = pairing.betti_at(t);
        let oracle = betti_oracle(&f.sublevel_at(i).to_complex());
        for k in 0..betti.len() {
            assert_eq!(betti[k], oracle.get(k).copied().unwrap_or(0));
        }
    }
    assert_eq!(
        morseprof::is_acyclic(f.complex(), &greedy.matching),
        Ok(true)
    );
    // The final complex is always the 3-truncated skeleton of the full
    // 5-simplex (no cutoff drops anything), whose Betti vector is
    // (1, 0, 0, 5). The weak Morse inequalities force M >= 6, and the
    // search realizes exactly that floor.
    assert_eq!(f.complex().counts_by_dim(), &[6, 15, 20, 15]);
    let exact = exact_min_morse(f.complex(), 64).unwrap();
    assert_eq!(exact.total, 6);
    assert_eq!(exact.per_dim, vec![1, 0, 0, 5]);
    assert!(greedy.per_level.last().unwrap().total() >= exact.total);
}

#[test]
fn collapse_invariance_with_brute_force_on_both_sides() {
    use common::{brute_force_min_morse, free_pairs, remove_free_pair};
    let mut r = rng(45);
    let mut checked = 0;
    while checked < 12 {
        let complex = random_collapsible_complex(&mut r, 11);
        let pairs = free_pairs(&complex);
        if complex.len() < 3 || pairs.is_empty() {
            continue;
        }
        let &(sigma, tau) = &pairs[r.random_range(0..pairs.len())];
        let collapsed = remove_free_pair(&complex, sigma, tau);
        let before = brute_force_min_morse(&complex);
        let after = brute_force_min_morse(&collapsed);
        assert_eq!(before.0, after.0);
        let dims = before.1.len().max(after.1.len());
        for k in 0..dims {
            assert_eq!(
                before.1.get(k).copied().unwrap_or(0),
                after.1.get(k).copied().unwrap_or(0)
            );
        }
        checked += 1;
    }
}
