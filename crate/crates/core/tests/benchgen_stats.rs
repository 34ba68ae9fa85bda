//! Statistical check of the citation degree distribution against the
//! configured power law, over several seeds.

use graphcot::benchgen::{generate_synthetic_graph, Domain, SynthConfig};

/// Theoretical CDF of P(k) proportional to k^-alpha on [1, cap], computed
/// here from scratch.
fn reference_cdf(alpha: f64, cap: usize) -> Vec<f64> {
    let weights: Vec<f64> = (1..=cap).map(|k| (k as f64).powf(-alpha)).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w / total;
            acc
        })
        .collect()
}

fn ks_statistic(samples: &[usize], cdf: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let mut worst: f64 = 0.0;
    for (i, cumulative) in cdf.iter().enumerate() {
        let k = i + 1;
        let empirical = sorted.partition_point(|s| *s <= k) as f64 / n;
        worst = worst.max((empirical - cumulative).abs());
    }
    worst
}

#[test]
fn citation_degrees_follow_the_configured_power_law() {
    let alpha = 2.5;
    let mut stats = Vec::new();
    for seed in 0..10u64 {
        let cfg = SynthConfig::sized(Domain::Academic, 1200, seed);
        let graph = generate_synthetic_graph(&cfg).unwrap();
        let degrees: Vec<usize> = graph
            .nodes_of_type("paper")
            .map(|n| n.neighbors.get("cited_by").map_or(0, Vec::len))
            .collect();
        assert!(degrees.len() > 500);
        let cap = 60.min(degrees.len() - 1);
        let ks = ks_statistic(&degrees, &reference_cdf(alpha, cap));
        assert!(ks < 0.08, "seed {seed}: KS statistic {ks}");
        stats.push(ks);
    }
    let mean = stats.iter().sum::<f64>() / stats.len() as f64;
    assert!(mean < 0.05, "mean KS {mean}");
}
