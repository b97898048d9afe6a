use pagerank_games::graph::generate::{random_connected, random_tree};
use pagerank_games::graph::{
    check_swap_automorphism, components_after_removal, k_parameter, parse_graph, Graph,
};
use pagerank_games::pagerank::{
    pagerank_from_potentials, potentials_column, stationary_pagerank, DirectedView, GameConfig,
};
use pagerank_games::parametric::{
    fractional_max, group_value_table, improvement_test, knapsack_argmax, LinearFractionalProgram,
};
use pagerank_games::verify::{
    best_response_add_delete, best_response_deletion_general, best_response_deletion_tree,
    deletion_coefficients, Strategy as Play, VerifyOptions,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn connected(n: usize, p: f64, seed: u64) -> Graph {
    random_connected(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.0f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| connected(n, p, seed))
}

fn small_k_graph() -> impl Strategy<Value = Graph> {
    graph_strategy(7).prop_filter("k <= 3", |g| k_parameter(g).unwrap().k <= 3)
}

/// Kept subset encoded by one mask per group, as the coefficients see it.
fn masks_for(g: &Graph, v: usize, bits: u64) -> (Vec<usize>, Vec<usize>) {
    let d = components_after_removal(g, v).unwrap();
    let mut masks = Vec::new();
    let mut kept = Vec::new();
    let mut bit = 0;
    for comp in d.components.iter().filter(|c| !c.attachments.is_empty()) {
        let mut m = 0;
        for (s, &a) in comp.attachments.iter().enumerate() {
            if bits >> bit & 1 == 1 {
                m |= 1 << s;
                kept.push(a);
            }
            bit += 1;
        }
        masks.push(m);
    }
    kept.sort_unstable();
    (masks, kept)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(30)) {
        prop_assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn removal_partitions_vertices_and_neighbours(g in graph_strategy(30), pick in any::<usize>()) {
        let v = pick % g.n();
        let d = components_after_removal(&g, v).unwrap();
        let total: usize = d.components.iter().map(|c| c.vertices.len()).sum();
        prop_assert_eq!(total, g.n() - 1);
        let mut attached: Vec<usize> = d.components.iter().flat_map(|c| c.attachments.clone()).collect();
        attached.sort_unstable();
        prop_assert_eq!(attached, g.neighbors(v).to_vec());
        prop_assert!(d.components.iter().all(|c| !c.attachments.is_empty()));
    }

    #[test]
    fn forests_keep_k_one(n in 1usize..40, seed in any::<u64>(), cut in any::<usize>()) {
        let mut t = random_tree(n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(k_parameter(&t).unwrap().k, 1);
        if n >= 2 {
            let (u, v) = t.edges().nth(cut % (n - 1)).unwrap();
            t.remove_edge(u, v);
            prop_assert_eq!(k_parameter(&t).unwrap().k, 1);
        }
    }

    #[test]
    fn automorphism_check_survives_relabelling(
        m in 2usize..6,
        seed in any::<u64>(),
        shuffle in any::<u64>(),
    ) {
        // two copies of a graph joined by a perfect matching; swapping copies is an automorphism
        let h = connected(m, 0.5, seed);
        let mut g = Graph::new(2 * m);
        for (a, b) in h.edges() {
            g.add_edge(a, b).unwrap();
            g.add_edge(a + m, b + m).unwrap();
        }
        for a in 1..m {
            g.add_edge(a, a + m).unwrap();
        }
        let sigma: Vec<usize> = (0..2 * m).map(|i| (i + m) % (2 * m)).collect();
        prop_assert!(check_swap_automorphism(&g, &sigma, 0, m).unwrap());

        let mut perm: Vec<usize> = (0..2 * m).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let mut relabelled = Graph::new(2 * m);
        for (a, b) in g.edges() {
            relabelled.add_edge(perm[a], perm[b]).unwrap();
        }
        let mut sigma2 = vec![0; 2 * m];
        for i in 0..2 * m {
            sigma2[perm[i]] = perm[sigma[i]];
        }
        prop_assert!(check_swap_automorphism(&relabelled, &sigma2, perm[0], perm[m]).unwrap());
    }

    #[test]
    fn stationary_is_normalised_and_matches_potentials(
        g in graph_strategy(40),
        alpha in 0.01f64..0.95,
    ) {
        let d = DirectedView::from_graph(&g);
        let cfg = GameConfig::uniform(alpha, g.n()).unwrap();
        let pi = stationary_pagerank(&d, &cfg).unwrap();
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        for v in (0..g.n()).filter(|&v| g.degree(v) > 0) {
            let col = potentials_column(&d, v, alpha).unwrap();
            prop_assert!(col.phi.iter().all(|&x| (0.0..=1.0).contains(&x)));
            let x = pagerank_from_potentials(&d, v, &cfg, &col).unwrap();
            prop_assert!((x - pi[v]).abs() < 1e-9);
        }
    }

    #[test]
    fn neighbours_hold_the_largest_potential(g in graph_strategy(30), alpha in 0.01f64..0.95) {
        let d = DirectedView::from_graph(&g);
        for v in 0..g.n() {
            let phi = potentials_column(&d, v, alpha).unwrap().phi;
            let nb = g.neighbors(v).iter().map(|&u| phi[u]).fold(f64::MIN, f64::max);
            for u in g.non_neighbors(v) {
                prop_assert!(nb > phi[u]);
            }
        }
    }

    #[test]
    fn h_is_nonincreasing_and_changes_sign_at_the_optimum(
        lines in prop::collection::vec((0.0f64..1.0, 0.1f64..1.5), 1..=8),
        a0 in 0.0f64..0.5,
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = lines.into_iter().unzip();
        let p = LinearFractionalProgram::new(a0, a.clone(), 0.0, b.clone()).unwrap();
        let dim = p.dim();
        for l in 1..=dim {
            // brute-force h and δ* for weight l
            let h = |delta: f64| {
                (1usize..1 << dim)
                    .filter(|m| m.count_ones() as usize == l)
                    .map(|m| {
                        let s: Vec<usize> = (0..dim).filter(|&i| m >> i & 1 == 1).collect();
                        let (num, den) = p.parts(&s);
                        num - delta * den
                    })
                    .fold(f64::MIN, f64::max)
            };
            let star = (1usize..1 << dim)
                .filter(|m| m.count_ones() as usize == l)
                .map(|m| p.ratio(&(0..dim).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>()))
                .fold(f64::MIN, f64::max);
            let grid: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
            for w in grid.windows(2) {
                prop_assert!(h(w[1]) <= h(w[0]) + 1e-12);
            }
            for &delta in &grid {
                if h(delta) > 1e-12 {
                    prop_assert!(delta < star);
                }
                if h(delta) < -1e-12 {
                    prop_assert!(delta > star);
                }
            }
        }
        prop_assert!(fractional_max(&p).value > 0.0 || a0 + a.iter().sum::<f64>() == 0.0);
    }

    #[test]
    fn subset_coefficients_reconstruct_pagerank(g in small_k_graph(), pick in any::<usize>(), bits in any::<u64>()) {
        let v = pick % g.n();
        prop_assume!(g.degree(v) > 0);
        let cfg = GameConfig::uniform(0.15, g.n()).unwrap();
        let coeffs = deletion_coefficients(&g, v, &cfg).unwrap();
        // singletons are nonnegative and so is every partial sum (a numerator);
        // higher-order terms may be negative
        for group in &coeffs.groups {
            for mask in 1..group.a.len() {
                if mask.count_ones() == 1 {
                    prop_assert!(group.a[mask] >= -1e-12);
                }
                prop_assert!(group.parts(mask).0 >= -1e-12);
            }
        }
        let (masks, kept) = masks_for(&g, v, bits);
        prop_assume!(!kept.is_empty());
        let d = Play::deletion(v, kept.clone()).apply(&g);
        let phi = potentials_column(&d, v, cfg.alpha()).unwrap().phi;
        let num: f64 = cfg.alpha() * cfg.q().iter().zip(&phi).map(|(q, p)| q * p).sum::<f64>();
        let den = kept.len() as f64 - (1.0 - cfg.alpha()) * kept.iter().map(|&i| phi[i]).sum::<f64>();
        let (n2, d2) = coeffs.parts(&masks);
        prop_assert!((num - n2).abs() < 1e-9);
        prop_assert!((den - d2).abs() < 1e-9);
    }

    #[test]
    fn knapsack_and_threshold_agree_with_enumeration(g in small_k_graph(), pick in any::<usize>(), delta in 0.0f64..0.5) {
        let v = pick % g.n();
        prop_assume!(g.degree(v) > 0);
        let cfg = GameConfig::uniform(0.15, g.n()).unwrap();
        let coeffs = deletion_coefficients(&g, v, &cfg).unwrap();
        let table = group_value_table(&coeffs, delta);
        let total = coeffs.capacity();
        for l in 1..=total {
            let mut best = f64::MIN;
            for bits in 0u64..1 << total {
                if bits.count_ones() as usize != l {
                    continue;
                }
                let (masks, _) = masks_for(&g, v, bits);
                let (num, den) = coeffs.parts(&masks);
                best = best.max(num - delta * den);
            }
            let sol = knapsack_argmax(&table, l).unwrap();
            prop_assert!((coeffs.a0 + sol.value - best).abs() < 1e-10);
            let test = improvement_test(&coeffs, l, delta).unwrap();
            prop_assert_eq!(test.improves, best > 0.0);
        }
    }

    #[test]
    fn improving_strategies_replay(g in small_k_graph(), alpha in 0.01f64..0.9) {
        let cfg = GameConfig::uniform(alpha, g.n()).unwrap();
        let opts = VerifyOptions::default();
        for v in 0..g.n() {
            let del = best_response_deletion_general(&g, v, &cfg, &opts).unwrap();
            let add = best_response_add_delete(&g, v, &cfg, &opts).unwrap();
            // the add-delete strategy space contains every deletion
            prop_assert!(del.in_best_response || !add.in_best_response);
            prop_assert!(add.best_pi >= del.best_pi - 1e-12);
            for r in [&del, &add] {
                if let Some(s) = &r.improving {
                    let pi = stationary_pagerank(&s.apply(&g), &cfg).unwrap();
                    prop_assert!(pi[v] > r.current_pi + opts.tolerance);
                    prop_assert!((pi[v] - r.best_pi).abs() < 1e-9);
                }
            }
            if g.is_forest() {
                let tree = best_response_deletion_tree(&g, v, &cfg, &opts).unwrap();
                prop_assert_eq!(tree.in_best_response, del.in_best_response);
            }
        }
    }

    #[test]
    fn swapped_vertices_share_pagerank(m in 2usize..6, seed in any::<u64>()) {
        let h = connected(m, 0.5, seed);
        let mut g = Graph::new(2 * m);
        for (a, b) in h.edges() {
            g.add_edge(a, b).unwrap();
            g.add_edge(a + m, b + m).unwrap();
        }
        g.add_edge(m - 1, 2 * m - 1).unwrap();
        let sigma: Vec<usize> = (0..2 * m).map(|i| (i + m) % (2 * m)).collect();
        prop_assert!(check_swap_automorphism(&g, &sigma, 0, m).unwrap());
        let cfg = GameConfig::uniform(0.15, 2 * m).unwrap();
        let pi = stationary_pagerank(&DirectedView::from_graph(&g), &cfg).unwrap();
        for i in 0..m {
            prop_assert!((pi[i] - pi[i + m]).abs() < 1e-12);
        }
    }
}
