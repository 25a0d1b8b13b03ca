mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use anchorlink::anchors::{build_anchor_map, build_eval_samples, build_title_map, AnchorMap, MapMode};
use anchorlink::eval::{pr_auc, sample_indices, split_inductive, split_transductive};
use anchorlink::graph::{personalized_pagerank, topk_subgraph, PprParams};
use anchorlink::predictors::{
    atilp_features, fit_deepwalk, fit_ols, score_deepwalk, score_lsa, DeepWalkParams, LsaScorer, Mode,
};
use anchorlink::synthetic::{synthetic_dataset, SyntheticParams};
use anchorlink::text::{cosine, SvdOptions};
use anchorlink::{Article, DocumentNetwork};
use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn articles(texts: &[&str]) -> Vec<Article> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| Article::new(i, format!("Doc {i}"), *t))
        .collect()
}

#[test]
fn ppr_on_fixed_graphs_matches_linear_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 1..=8 {
        let net = random_network(n, 0.3, &mut rng);
        for seed in 0..n {
            let got = personalized_pagerank(&net, seed, &PprParams::default()).unwrap();
            let want = dense_ppr(&net, seed, 0.85);
            let l1: f64 = got.scores.iter().zip(&want).map(|(a, b)| (a - b).abs()).sum();
            assert!(l1 < 1e-8, "n={n} seed={seed} l1={l1}");
        }
    }
}

#[test]
fn topk_on_ten_nodes_matches_oracle_ranking() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let net = random_network(10, 0.25, &mut rng);
    let titles: Vec<String> = (0..10).map(|i| format!("T{i:02}")).collect();
    let scores = personalized_pagerank(&net, 4, &PprParams::default()).unwrap();
    let sub = topk_subgraph(&net, &scores, &titles, 3).unwrap();
    let dense = dense_ppr(&net, 4, 0.85);
    let mut order: Vec<usize> = (0..10).collect();
    order.sort_by(|&a, &b| dense[b].total_cmp(&dense[a]).then(titles[a].cmp(&titles[b])));
    let mut want: Vec<usize> = order[..3].to_vec();
    want.sort_unstable();
    assert_eq!(sub.kept, want);
    for (s, e) in sub.network.edges() {
        assert!(net.has_edge(sub.kept[s], sub.kept[e.target]));
    }
}

#[test]
fn anchor_map_equals_edge_scan() {
    let mut net = DocumentNetwork::new(5);
    net.add_link(0, 1, "federal government").unwrap();
    net.add_link(2, 1, "the feds").unwrap();
    net.add_link(3, 4, "Federal Government").unwrap();
    net.add_link(4, 0, "capital").unwrap();
    let map = build_anchor_map(&net).unwrap();
    let mut want: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for s in 0..5 {
        for e in net.out_edges(s) {
            for a in &e.anchors {
                let key: Vec<String> = naive_tokens(a).into_iter().map(|t| t.0).collect();
                want.entry(key.join(" ")).or_default().insert(e.target);
            }
        }
    }
    let got: BTreeMap<String, BTreeSet<usize>> = map
        .entries()
        .map(|(p, t)| (p.to_string(), t.iter().copied().collect()))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn alias_collision_maps_to_both_articles() {
    let mut arts = articles(&["", "", ""]);
    arts[0].title = "Mercury (planet)".into();
    arts[0].aliases = vec!["Mercury".into()];
    arts[1].title = "Mercury (element)".into();
    arts[1].aliases = vec!["Mercury".into(), "Hg".into()];
    arts[2].title = "Venus".into();
    let map = build_title_map(&arts).unwrap();
    assert_eq!(map.targets("mercury"), Some(&[0, 1][..]));
    assert_eq!(map.targets("venus"), Some(&[2][..]));
}

#[test]
fn eval_samples_equal_enumeration() {
    let arts = articles(&[
        "The american civil war shaped the union.",
        "Lincoln led the Union during the war.",
        "The Confederacy lost the American Civil War.",
        "A war is a conflict.",
        "The union of workers met lincoln.",
    ]);
    let mut net = DocumentNetwork::new(5);
    net.add_link(0, 2, "american civil war").unwrap();
    net.add_link(0, 1, "union").unwrap();
    net.add_link(1, 3, "war").unwrap();
    net.add_link(2, 0, "Confederacy").unwrap();
    net.add_link(4, 1, "lincoln").unwrap();
    let map = build_anchor_map(&net).unwrap();
    let samples = build_eval_samples(&net, &map, &arts);

    let entries: Vec<(String, usize)> = net
        .edges()
        .flat_map(|(_, e)| e.anchors.iter().map(move |a| (a.clone(), e.target)))
        .collect();
    for (s, doc) in samples.iter().enumerate() {
        let cands = naive_scan(&entries, s, &arts[s].text);
        let want_pos: BTreeSet<usize> = cands.keys().copied().filter(|&t| net.has_edge(s, t)).collect();
        let want_neg: BTreeSet<usize> = cands.keys().copied().filter(|&t| !net.has_edge(s, t)).collect();
        let got_pos: BTreeSet<usize> = doc.positives.iter().map(|c| c.target).collect();
        let got_neg: BTreeSet<usize> = doc.negatives.iter().map(|c| c.target).collect();
        assert_eq!((got_pos, got_neg), (want_pos, want_neg), "doc {s}");
        for e in net.out_edges(s) {
            assert!(doc.positives.iter().any(|c| c.target == e.target), "recall-1 violated at ({s}, {})", e.target);
        }
    }
}

/// TF-IDF rows with raw counts and `ln(N / df)` computed independently.
fn oracle_tfidf(texts: &[&str]) -> Vec<Vec<f64>> {
    let docs: Vec<Vec<String>> = texts
        .iter()
        .map(|t| naive_tokens(t).into_iter().map(|x| x.0).collect())
        .collect();
    let vocab: BTreeSet<&String> = docs.iter().flatten().collect();
    let vocab: Vec<&String> = vocab.into_iter().collect();
    let n = docs.len() as f64;
    docs.iter()
        .map(|d| {
            vocab
                .iter()
                .map(|w| {
                    let tf = d.iter().filter(|x| x == w).count() as f64;
                    let df = docs.iter().filter(|d| d.contains(w)).count() as f64;
                    tf * (n / df).ln()
                })
                .collect()
        })
        .collect()
}

#[test]
fn lsa_scores_match_dense_oracle() {
    let texts = [
        "apple banana apple cherry",
        "banana cherry date",
        "eggplant fig grape fig",
        "grape apple eggplant",
    ];
    let a = oracle_tfidf(&texts);
    let (sigma, v) = dense_svd(&a);
    let arts = articles(&texts);
    for d in [2usize, 4] {
        if d < sigma.len() && (sigma[d - 1] - sigma[d]).abs() < 1e-6 {
            continue;
        }
        let emb: Vec<Vec<f64>> = a
            .iter()
            .map(|row| (0..d).map(|j| row.iter().zip(&v).map(|(x, vr)| x * vr[j]).sum()).collect())
            .collect();
        let lsa = LsaScorer::fit(&arts, None, d, 0, &SvdOptions::default()).unwrap();
        for s in 0..4 {
            for t in 0..4 {
                let want = (1.0 + cosine(&emb[s], &emb[t])) / 2.0;
                let got = score_lsa(&lsa, s, t);
                assert!((got - want).abs() < 1e-8, "d={d} ({s},{t}): {got} vs {want}");
            }
        }
        let anchor = "banana cherry";
        let vocab: BTreeSet<String> = texts.iter().flat_map(|t| naive_tokens(t)).map(|x| x.0).collect();
        let n = texts.len() as f64;
        let q: Vec<f64> = vocab
            .iter()
            .map(|w| {
                let tf = naive_tokens(anchor).iter().filter(|x| &x.0 == w).count() as f64;
                let df = texts.iter().filter(|t| naive_tokens(t).iter().any(|x| &x.0 == w)).count() as f64;
                tf * (n / df).ln()
            })
            .collect();
        let x_at: Vec<f64> = (0..d).map(|j| q.iter().zip(&v).map(|(x, vr)| x * vr[j]).sum()).collect();
        let got = atilp_features(&lsa, 0, 1, anchor);
        let want = [cosine(&x_at, &emb[0]), cosine(&x_at, &emb[1]), cosine(&emb[0], &emb[1])];
        for k in 0..3 {
            assert!((got[k] - want[k]).abs() < 1e-8, "d={d} s{}: {got:?} vs {want:?}", k + 1);
        }
    }
}

#[test]
fn ols_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x: Vec<Vec<f64>> = (0..10)
        .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 1.0])
        .collect();
    let y: Vec<f64> = (0..10).map(|i| f64::from(u8::from(i % 3 == 0))).collect();
    let got = fit_ols(&x, &y).unwrap();
    let want = normal_equations(&x, &y);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-9, "{got:?} vs {want:?}");
    }
}

#[test]
fn deepwalk_separates_bridged_cliques() {
    let mut net = DocumentNetwork::new(10);
    for c in [0usize, 5] {
        for i in c..c + 5 {
            for j in c..c + 5 {
                if i != j {
                    net.add_link(i, j, "x").unwrap();
                }
            }
        }
    }
    net.add_link(4, 5, "bridge").unwrap();
    let params = DeepWalkParams {
        walks_per_node: 40,
        walk_length: 20,
        window: 4,
        negatives: 5,
        dimension: 16,
        ..DeepWalkParams::default()
    };
    let model = fit_deepwalk(&net, &params, 3).unwrap();
    let clique = |v: usize| v / 5;
    let mut min_intra = f64::INFINITY;
    let mut max_inter = f64::NEG_INFINITY;
    for a in 0..10 {
        for b in 0..10 {
            if a == b {
                continue;
            }
            let s = score_deepwalk(&model, Mode::Transductive, a, b).unwrap();
            if clique(a) == clique(b) {
                min_intra = min_intra.min(s);
            } else {
                max_inter = max_inter.max(s);
            }
        }
    }
    assert!(min_intra > max_inter, "{min_intra} <= {max_inter}");
}

#[test]
fn transductive_hidden_set_matches_reference_sampler() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut net = DocumentNetwork::new(12);
    while net.edge_count() < 20 {
        let (s, t) = (rng.gen_range(0..12), rng.gen_range(0..12));
        if s != t {
            net.add_link(s, t, format!("w{t}")).unwrap();
        }
    }
    let arts = articles(&[""; 12]);
    let map = build_anchor_map(&net).unwrap();
    for seed in 0..10 {
        let split = split_transductive(&net, &map, &arts, 0.1, seed).unwrap();
        let edges = net.edge_pairs();
        let mut want: Vec<(usize, usize)> = reference_sample(edges.len(), 2, &mut ChaCha8Rng::seed_from_u64(seed))
            .into_iter()
            .map(|i| edges[i])
            .collect();
        want.sort_unstable();
        assert_eq!(split.hidden_edges, want);
        let dense = sample_indices(20, 7, &mut ChaCha8Rng::seed_from_u64(seed));
        assert_eq!(dense, reference_sample(20, 7, &mut ChaCha8Rng::seed_from_u64(seed)));
    }
}

#[test]
fn inductive_pairs_match_enumeration() {
    let words = ["alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "theta", "zeta", "iota"];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let texts: Vec<String> = (0..10)
        .map(|_| (0..12).map(|_| words[rng.gen_range(0..10)]).collect::<Vec<_>>().join(" "))
        .collect();
    let arts: Vec<Article> = texts.iter().enumerate().map(|(i, t)| Article::new(i, format!("N{i}"), t.as_str())).collect();
    let mut net = DocumentNetwork::new(10);
    for (s, text) in texts.iter().enumerate() {
        for tok in naive_tokens(text) {
            let t = words.iter().position(|w| *w == tok.0).unwrap();
            if t != s && rng.gen_bool(0.4) {
                net.add_link(s, t, words[t]).unwrap();
            }
        }
    }
    let map = build_anchor_map(&net).unwrap();
    let entries: Vec<(String, usize)> = net
        .edges()
        .flat_map(|(_, e)| e.anchors.iter().map(move |a| (a.clone(), e.target)))
        .collect();
    for seed in 0..5 {
        let split = split_inductive(&net, &map, &arts, 0.3, seed).unwrap();
        let hidden: HashSet<usize> = reference_sample(10, 3, &mut ChaCha8Rng::seed_from_u64(seed)).into_iter().collect();
        assert_eq!(split.hidden_nodes.iter().copied().collect::<HashSet<_>>(), hidden);
        let mut want = BTreeSet::new();
        for &s in &hidden {
            let cands = naive_scan(&entries, s, &texts[s]);
            for t in (0..10).filter(|t| !hidden.contains(t) && *t != s) {
                let label = net.has_edge(s, t);
                if label || cands.contains_key(&t) {
                    want.insert((s, t, label));
                }
            }
        }
        let got: BTreeSet<(usize, usize, bool)> = split.test_pairs.iter().map(|p| (p.source, p.target, p.label)).collect();
        assert_eq!(got, want, "seed {seed}");
        assert_eq!(split.test_pairs.len(), got.len());
    }
}

#[test]
fn transductive_negative_ratio_exceeds_inductive() {
    let (ds, _, _) = synthetic_dataset(&SyntheticParams::default()).unwrap();
    let map = build_anchor_map(&ds.network).unwrap();
    for seed in 0..3 {
        let t = split_transductive(&ds.network, &map, &ds.articles, 0.1, seed).unwrap();
        let i = split_inductive(&ds.network, &map, &ds.articles, 0.1, seed).unwrap();
        let ratio = |n: usize, p: usize| n as f64 / p as f64;
        assert!(ratio(t.negatives(), t.positives()) > ratio(i.negatives(), i.positives()));
    }
}

#[test]
fn politician_abstract_scan_against_naive() {
    let text = "Joseph Robinette Biden Jr. is an American politician who is the 46th president of the United States. \
                A member of the Democratic Party, he previously served as the 47th vice president.";
    let entries: Vec<(String, usize)> = vec![
        ("politician".into(), 1),
        ("president of the United States".into(), 2),
        ("United States".into(), 3),
        ("Democratic Party".into(), 4),
        ("vice president".into(), 5),
        ("president".into(), 6),
        ("Joe Biden".into(), 0),
    ];
    let map = AnchorMap::from_entries(MapMode::Anchor, 7, entries.iter().map(|(p, t)| (p.as_str(), *t))).unwrap();
    let got: ScanResult = map
        .scan_text(0, text)
        .into_iter()
        .map(|c| (c.target, c.matched.into_iter().map(|m| (m.pattern, m.span)).collect()))
        .collect();
    assert_eq!(got, naive_scan(&entries, 0, text));
    assert_eq!(got[&6].len(), 2);
}

proptest! {
    #[test]
    fn ap_matches_brute_force_curve(
        data in prop::collection::vec(((0u8..6), any::<bool>()), 1..40)
            .prop_filter("needs a positive", |v| v.iter().any(|x| x.1))
    ) {
        let scores: Vec<f64> = data.iter().map(|x| f64::from(x.0) / 5.0).collect();
        let labels: Vec<bool> = data.iter().map(|x| x.1).collect();
        let got = pr_auc(&scores, &labels).unwrap();
        prop_assert!((got - brute_force_ap(&scores, &labels)).abs() < 1e-9);
    }
}
