#pragma once

#include <cstdint>
#include <vector>

#include "pu/dataset.hpp"
#include "pu/metrics.hpp"

namespace pu {

// SCAR-mechanism generator: true positives and negatives draw features from
// class-specific Bernoulli rates; each true positive is labelled with
// probability label_frequency, independently of its features.
struct SynthConfig {
    std::size_t n_entities = 200;
    std::size_t n_features = 30;
    double positive_fraction = 0.2;  // (0, 1)
    double label_frequency = 0.5;    // c in (0, 1]
    double cluster_separation = 0.6; // per-feature activation-rate gap, [0, 1]
    double noise_rate = 0.0;         // per-cell flip probability
    std::uint64_t seed = 0;
};

struct SynthDataset {
    PUDataset pu_view;
    std::vector<int> true_labels; // per-entity ground truth
};

SynthDataset generate(const SynthConfig& cfg);

// Metrics against the hidden ground truth (threshold 0.5 for F1/G-Mean,
// raw scores for AUC).
MetricsTriple true_metrics(const SynthDataset& ds, const std::vector<double>& scores);

void write_truth(const SynthDataset& ds, const std::string& path);

} // namespace pu
