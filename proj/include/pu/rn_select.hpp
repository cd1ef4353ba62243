#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pu/similarity.hpp"

namespace pu {

struct RNParams {
    int k = 3;
    double t = 1.0; // minimum unlabelled fraction among the k neighbours, in [0.5, 1]
};

struct RNTraceEntry {
    std::uint32_t index = 0; // row index of the unlabelled query
    std::vector<std::uint32_t> neighbours; // its k neighbour row indices, best first
    double unlabelled_fraction = 0.0;
    bool nearest_unlabelled = false;
    bool tie_at_max = false; // another candidate tied the top similarity
    bool admitted = false;
};

struct RNResult {
    std::vector<std::uint32_t> reliable_negatives; // ascending row indices, subset of U
    std::vector<RNTraceEntry> trace;               // one entry per u in U, ascending
};

// Selects reliable negatives among U: u is admitted iff the unlabelled
// fraction among its k nearest neighbours (by similarity) is >= t and its
// single nearest neighbour is unlabelled. Ties in similarity are broken by
// position in the P-first-then-U ordering of the rows; u is never its own
// neighbour.
RNResult reliable_negatives(const std::vector<std::uint32_t>& P,
                            const std::vector<std::uint32_t>& U, const SimilarityMatrix& sim,
                            const RNParams& params);

// Top n_f features by raw MDI (ties by lower index), as the feature space
// for the similarity step. nullopt or n_f >= total -> all features.
FeatureSubset knn_feature_filter(const std::vector<double>& mdi_raw,
                                 std::optional<std::uint32_t> n_f, std::uint32_t total_features);

} // namespace pu
