#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pu/dataset.hpp"

namespace pu {

// Sorted set of feature indices to restrict similarity to; nullopt = all.
struct FeatureSubset {
    std::optional<std::vector<std::uint32_t>> indices;

    static FeatureSubset all() { return {}; }
    static FeatureSubset of(std::vector<std::uint32_t> idx);

    bool is_all() const { return !indices.has_value(); }
    std::string tag() const;
};

struct SimilarityMatrix {
    std::size_t n = 0;
    std::vector<double> values; // row-major n*n, symmetric
    std::string subset_tag;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

// Jaccard similarity of two sparse binary rows restricted to f.
// Both restricted rows empty -> 1.0; exactly one empty -> 0.0.
// Counts are integer so equal fractions compare exactly.
double jaccard(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
               const FeatureSubset& f, std::size_t n_cols);

SimilarityMatrix pairwise_matrix(const SparseBinaryMatrix& m, const FeatureSubset& f);

} // namespace pu
