//! End-to-end library pipeline on synthetic planted instances.

use multiplex_core::similarity::DEFAULT_E_MAX;
use multiplex_core::{
    build_essentiality_network, build_rate_network, edge_frequency, generate, louvain,
    modularity, overlap_report, LayerWeightMap, MultiplexNetwork, PlantedSpec, SimilarityMetric,
};

fn layer_names(net: &MultiplexNetwork) -> Vec<String> {
    net.layers().iter().map(|l| l.name().to_string()).collect()
}

#[test]
fn noise_free_instance_recovers_exactly_at_default_clamp() {
    let spec = PlantedSpec {
        nodes: 40,
        layers: 4,
        communities: vec![20, 20],
        p_in: 1.0,
        p_out: 0.0,
        persistence: 1.0,
        seed: 7,
    };
    let (net, planted) = generate(&spec).unwrap();
    let names = layer_names(&net);
    let g = build_rate_network(&net, &names, SimilarityMetric::Jaccard, DEFAULT_E_MAX).unwrap();
    // every intra pair has constant nonzero similarity: the clamp-ceiling case
    assert!(g.edges().all(|(_, _, w)| w == 50.0f64.exp()));
    let detected = louvain(&g, 42).unwrap();
    assert_eq!(detected, planted);
    let report = overlap_report(&detected, &planted).unwrap();
    assert_eq!(report.mean_overlap, 1.0);
}

#[test]
fn noisy_instance_recovers_at_the_pinned_clamp() {
    // Regression anchor: with the exponent clamp pinned at 3 this instance
    // recovers the planted partition exactly (mean overlap 1.0); at the
    // default clamp of 50 the top-exponent pairs absorb the modularity null
    // model and recovery degrades, so the clamp is part of the frozen
    // configuration here.
    let spec = PlantedSpec {
        nodes: 40,
        layers: 4,
        communities: vec![20, 20],
        p_in: 0.6,
        p_out: 0.05,
        persistence: 1.0,
        seed: 42,
    };
    let (net, planted) = generate(&spec).unwrap();
    let names = layer_names(&net);
    let g = build_rate_network(&net, &names, SimilarityMetric::Jaccard, 3.0).unwrap();
    let detected = louvain(&g, 42).unwrap();
    let report = overlap_report(&detected, &planted).unwrap();
    assert!(
        report.mean_overlap >= 0.9,
        "mean overlap {}",
        report.mean_overlap
    );
    assert_eq!(report.mean_overlap, 1.0);
    assert_eq!(detected.community_count(), 2);
}

#[test]
fn full_chain_on_a_synthetic_instance_is_consistent() {
    // Reflections: layers 1..4; ground truth: the first structured layer
    // re-weighted, mirroring how the real dataset splits its layers.
    let spec = PlantedSpec {
        nodes: 30,
        layers: 5,
        communities: vec![15, 15],
        p_in: 0.8,
        p_out: 0.05,
        persistence: 1.0,
        seed: 11,
    };
    let (net, planted) = generate(&spec).unwrap();
    let names = layer_names(&net);
    let reflections = &names[1..];
    let g = build_rate_network(&net, reflections, SimilarityMetric::Jaccard, 3.0).unwrap();

    let mut weights = LayerWeightMap::new();
    weights.insert(names[0].clone(), 2.0);
    let es = build_essentiality_network(&net, &weights).unwrap();
    assert!(es.edge_count() > 0);

    let experiment = louvain(&g, 1).unwrap();
    let essentiality = louvain(&es, 1).unwrap();
    let q_ex = modularity(&g, &experiment).unwrap();
    assert!(q_ex > 0.0);

    let vs_planted = overlap_report(&experiment, &planted).unwrap();
    assert!(vs_planted.mean_overlap >= 0.9);
    let vs_detected = overlap_report(&experiment, &essentiality).unwrap();
    assert!(vs_detected.mean_overlap >= 0.9);

    let freq = edge_frequency(&es, &net, reflections).unwrap();
    assert_eq!(freq.rows.len(), es.edge_count());
    // dense structured layers: ground-truth edges appear in most reflections
    assert!(freq.mean_frequency > 1.0);
}

#[test]
fn rate_network_ignores_non_reflection_layers() {
    // Adding ground-truth layers to the input must not change the rate
    // network built from the reflection subset.
    let spec = PlantedSpec {
        nodes: 20,
        layers: 3,
        communities: vec![10, 10],
        p_in: 0.7,
        p_out: 0.1,
        persistence: 1.0,
        seed: 23,
    };
    let (net, _) = generate(&spec).unwrap();
    let full_text = net.to_edge_list_string();
    let reflections: Vec<String> = layer_names(&net)[..2].to_vec();

    let stripped_text: String = full_text
        .lines()
        .filter(|l| reflections.iter().any(|r| l.starts_with(&format!("{r}\t"))))
        .map(|l| format!("{l}\n"))
        .collect();
    let stripped = MultiplexNetwork::load_str(&stripped_text).unwrap();

    let g_full =
        build_rate_network(&net, &reflections, SimilarityMetric::Jaccard, DEFAULT_E_MAX).unwrap();
    let g_stripped =
        build_rate_network(&stripped, &reflections, SimilarityMetric::Jaccard, DEFAULT_E_MAX)
            .unwrap();

    let mut full_out = Vec::new();
    let mut stripped_out = Vec::new();
    g_full.write(&mut full_out, &[]).unwrap();
    g_stripped.write(&mut stripped_out, &[]).unwrap();
    assert_eq!(full_out, stripped_out);
}

#[test]
fn edge_list_round_trip_through_files() {
    let spec = PlantedSpec {
        nodes: 15,
        layers: 3,
        communities: vec![7, 8],
        p_in: 0.5,
        p_out: 0.1,
        persistence: 1.0,
        seed: 31,
    };
    let (net, _) = generate(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.tsv");
    net.save(&path).unwrap();
    let reloaded = MultiplexNetwork::load_path(&path).unwrap();
    assert_eq!(reloaded.to_edge_list_string(), net.to_edge_list_string());
    let stats: Vec<_> = net.layer_stats();
    assert_eq!(reloaded.layer_stats(), stats);
}
