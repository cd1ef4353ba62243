#include "pu/similarity.hpp"

#include <algorithm>

#include "pu/parallel.hpp"

namespace pu {

namespace {

std::size_t intersection_size(const std::vector<std::uint32_t>& a,
                              const std::vector<std::uint32_t>& b) {
    std::size_t count = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::vector<std::uint32_t> restrict_row(const std::vector<std::uint32_t>& row,
                                        const std::vector<std::uint32_t>& subset) {
    std::vector<std::uint32_t> out;
    std::set_intersection(row.begin(), row.end(), subset.begin(), subset.end(),
                          std::back_inserter(out));
    return out;
}

double jaccard_restricted(const std::vector<std::uint32_t>& a,
                          const std::vector<std::uint32_t>& b) {
    std::size_t inter = intersection_size(a, b);
    std::size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 1.0; // both supports empty
    return static_cast<double>(inter) / static_cast<double>(uni);
}

void validate_subset(const FeatureSubset& f, std::size_t n_cols) {
    if (f.is_all()) return;
    if (!f.indices->empty() && f.indices->back() >= n_cols)
        throw Error(ErrorCode::SubsetOutOfRange,
                    "feature index " + std::to_string(f.indices->back()) + " >= n_cols " +
                        std::to_string(n_cols));
}

} // namespace

FeatureSubset FeatureSubset::of(std::vector<std::uint32_t> idx) {
    if (idx.empty()) throw Error(ErrorCode::InvalidConfig, "feature subset must be non-empty");
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    FeatureSubset f;
    f.indices = std::move(idx);
    return f;
}

std::string FeatureSubset::tag() const {
    if (is_all()) return "all";
    // FNV-1a over the index list
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint32_t v : *indices) {
        for (int b = 0; b < 4; ++b) {
            h ^= (v >> (8 * b)) & 0xffu;
            h *= 1099511628211ULL;
        }
    }
    return "subset-" + std::to_string(indices->size()) + "-" + std::to_string(h);
}

double jaccard(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
               const FeatureSubset& f, std::size_t n_cols) {
    validate_subset(f, n_cols);
    if (f.is_all()) return jaccard_restricted(a, b);
    return jaccard_restricted(restrict_row(a, *f.indices), restrict_row(b, *f.indices));
}

SimilarityMatrix pairwise_matrix(const SparseBinaryMatrix& m, const FeatureSubset& f) {
    validate_subset(f, m.n_cols);
    std::size_t n = m.n_rows;

    const std::vector<std::vector<std::uint32_t>>* rows = &m.rows;
    std::vector<std::vector<std::uint32_t>> restricted;
    if (!f.is_all()) {
        restricted.resize(n);
        parallel_for(n, [&](std::size_t i) { restricted[i] = restrict_row(m.rows[i], *f.indices); });
        rows = &restricted;
    }

    SimilarityMatrix sim;
    sim.n = n;
    sim.subset_tag = f.tag();
    sim.values.assign(n * n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double v = jaccard_restricted((*rows)[i], (*rows)[j]);
            sim.values[i * n + j] = v;
            sim.values[j * n + i] = v;
        }
    });
    return sim;
}

} // namespace pu
