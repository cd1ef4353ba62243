#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pu/error.hpp"

namespace pu {

enum class PULabel : std::uint8_t { Positive, Unlabelled };

// Row-per-entity sparse binary feature storage. Per-row indices are
// strictly increasing and < n_cols.
struct SparseBinaryMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::vector<std::uint32_t>> rows;

    std::size_t active_count() const;
    bool get(std::size_t r, std::uint32_t c) const;

    // New matrix holding the given rows (in the given order).
    SparseBinaryMatrix submatrix(std::span<const std::uint32_t> row_indices) const;
};

struct PUDataset {
    std::vector<std::string> ids;
    std::vector<PULabel> labels;
    SparseBinaryMatrix features;
    std::vector<std::string> feature_names;

    std::size_t n_entities() const { return ids.size(); }
    std::size_t n_positives() const;

    // Sub-dataset restricted to the given rows, preserving their order.
    PUDataset subset(std::span<const std::uint32_t> row_indices) const;
};

struct DatasetStats {
    std::size_t n_features = 0;
    std::size_t n_entities = 0;
    std::size_t n_positives = 0;
    double sparsity_percent = 0.0;
};

enum class FileFormat { DenseCsv, SparseList };

PUDataset load_dataset(const std::string& path, FileFormat format);
void write_dataset(const PUDataset& ds, const std::string& path, FileFormat format);

// Detects SparseList via the "#sparse" header line, DenseCsv otherwise.
FileFormat detect_format(const std::string& path);

DatasetStats compute_stats(const PUDataset& ds);

// (P, U): row indices labelled Positive / Unlabelled, each ascending.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> partition_pu(const PUDataset& ds);

} // namespace pu
