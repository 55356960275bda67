use proptest::prelude::*;
use storychart::export::wordcloud_layout;
use storychart::graph::raw_betweenness;
use storychart::{
    betweenness_centrality, export_graphml, load_document, louvain, modularity, parse_graphml,
    term_frequencies, trend_series, AnnotatedGraph, BetweennessMode, CooccurrenceGraph,
    FrequencyTable,
};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = CooccurrenceGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let labels = prop::collection::vec(("[A-Za-zÀ-ú&<>\"' ]{1,12}", 1u64..50), n);
        let edges = prop::collection::vec((0..n, 0..n, 1u64..20), 0..n * 2);
        (labels, edges).prop_map(|(labels, edges)| {
            let mut g = CooccurrenceGraph::with_nodes(labels);
            for (u, v, w) in edges {
                if u != v && g.weight(u, v) == 0 {
                    g.add_edge(u, v, w).unwrap();
                }
            }
            g
        })
    })
}

fn nonempty_graph(max_n: usize) -> impl Strategy<Value = CooccurrenceGraph> {
    graph_strategy(max_n).prop_filter("needs an edge", |g| g.total_weight() > 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graphml_round_trips(g in graph_strategy(12), annotate in any::<bool>()) {
        let mut annotated = AnnotatedGraph::new(g.clone());
        if annotate && g.total_weight() > 0 {
            annotated = annotated
                .with_centrality(betweenness_centrality(&g, BetweennessMode::Weighted))
                .unwrap()
                .with_communities(&louvain(&g).unwrap())
                .unwrap();
        }
        let bytes = export_graphml(&annotated);
        let parsed = parse_graphml(&bytes).unwrap();
        prop_assert_eq!(&parsed, &annotated);
        prop_assert_eq!(export_graphml(&parsed), bytes);
    }

    #[test]
    fn betweenness_is_normalized(g in graph_strategy(10)) {
        for mode in [BetweennessMode::Unweighted, BetweennessMode::Weighted] {
            for s in betweenness_centrality(&g, mode).scores {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s), "{} out of range", s);
            }
        }
    }

    #[test]
    fn modularity_is_bounded(g in nonempty_graph(10), seed in any::<u64>()) {
        let n = g.node_count();
        let mut rng = storychart::rng::SplitMix64::new(seed);
        let part: Vec<usize> = (0..n).map(|_| rng.next_index(n)).collect();
        let q = modularity(&g, &part).unwrap();
        prop_assert!((-0.5 - 1e-12..=1.0).contains(&q));
    }

    #[test]
    fn louvain_is_locally_optimal(g in nonempty_graph(12)) {
        let a = louvain(&g).unwrap();
        prop_assert!(a.pass_modularity.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        prop_assert_eq!(&louvain(&g).unwrap(), &a);
        let fresh = a.community_count();
        for v in 0..g.node_count() {
            let mut targets: Vec<usize> = g.neighbors(v).map(|(u, _)| a.membership[u]).collect();
            targets.push(fresh);
            for t in targets {
                let mut moved = a.membership.clone();
                moved[v] = t;
                let q = modularity(&g, &moved).unwrap();
                prop_assert!(q <= a.modularity_q + 1e-10, "moving {} to {} gives {} > {}", v, t, q, a.modularity_q);
            }
        }
    }

    #[test]
    fn wordcloud_boxes_are_disjoint(
        counts in prop::collection::btree_map("[a-zà-ú]{1,14}", 1usize..500, 1..80),
        seed in any::<u64>(),
    ) {
        let table = FrequencyTable { total_tokens: counts.values().sum(), entries: counts };
        let placed = wordcloud_layout(&table, 100, seed).unwrap();
        prop_assert_eq!(placed.len(), table.entries.len());
        for (i, a) in placed.iter().enumerate() {
            for b in &placed[i + 1..] {
                prop_assert!(!a.overlaps(b), "{} overlaps {}", a.term, b.term);
            }
        }
    }

    #[test]
    fn trends_conserve_counts(
        words in prop::collection::vec("(ana|rui|banco|o|de|crise|lisboa)", 1..300),
        segments in 1usize..12,
    ) {
        let text = words.join(" ");
        let doc = load_document(text.as_bytes(), segments.min(words.len())).unwrap();
        let table = term_frequencies(&doc, true, 1);
        let terms: Vec<&String> = table.entries.keys().collect();
        let series = trend_series(&doc, &terms).unwrap();
        for (i, t) in series.terms.iter().enumerate() {
            prop_assert_eq!(series.row_total(i), table.get(t));
        }
        let total: usize = table.entries.values().sum();
        prop_assert_eq!(total, words.len());
    }
}

/// On a tree every pair has exactly one path, so raw betweenness of v is the
/// number of pairs separated by removing v.
#[test]
fn tree_betweenness_counts_separated_pairs() {
    let mut rng = storychart::rng::SplitMix64::new(11);
    for _ in 0..100 {
        let n = 2 + rng.next_index(15);
        let edges: Vec<(usize, usize, u64)> = (1..n).map(|v| (rng.next_index(v), v, 1 + rng.next_u64() % 3)).collect();
        let g = CooccurrenceGraph::from_edges(n, &edges).unwrap();
        let raw = raw_betweenness(&g, BetweennessMode::Unweighted);
        for v in 0..n {
            // sizes of the components left when v is removed
            let mut seen = vec![false; n];
            seen[v] = true;
            let mut sizes = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let (mut stack, mut size) = (vec![start], 0);
                seen[start] = true;
                while let Some(u) = stack.pop() {
                    size += 1;
                    for (w, _) in g.neighbors(u) {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                sizes.push(size);
            }
            let total: usize = sizes.iter().sum();
            let separated: usize = sizes.iter().map(|s| s * (total - s)).sum::<usize>() / 2;
            assert_eq!(raw[v], separated as f64, "node {v}");
        }
    }
}
