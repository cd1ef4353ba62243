#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pu/dataset.hpp"

namespace pu {

enum class ModelKind : std::uint8_t { BalancedForest, BoostedTrees };

// Binary-feature split node: feature == 1 goes right. feature == -1 marks
// a leaf holding `value`.
struct TreeNode {
    std::int32_t feature = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict_dense(const std::uint8_t* row) const;
    double predict_sparse(const std::vector<std::uint32_t>& active) const;
};

// Row-major dense {0,1} matrix used for training; built from the sparse
// storage once per training call.
struct DenseMatrix {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<std::uint8_t> cells;

    std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * n_cols + c]; }
    const std::uint8_t* row(std::size_t r) const { return cells.data() + r * n_cols; }
};

DenseMatrix densify(const SparseBinaryMatrix& m, std::span<const std::uint32_t> row_indices);
DenseMatrix densify(const SparseBinaryMatrix& m);

struct ForestParams {
    int n_trees = 500;
    int max_depth = 0; // 0 = unlimited
    int min_samples_split = 2;
};

struct BoostParams {
    int n_stages = 200;
    int max_depth = 6;
    double learning_rate = 0.1;
    double positive_weight = 0.0; // 0 = n_neg / n_pos
};

struct FeatureImportances {
    std::vector<double> raw;        // per-feature MDI, averaged over trees
    std::vector<double> normalized; // 100 * raw / max(raw), all zero if max == 0
};

struct TrainedModel {
    ModelKind kind = ModelKind::BalancedForest;
    std::vector<DecisionTree> trees;
    double base_score = 0.0; // boosted log-odds prior
    std::size_t n_features = 0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    std::size_t bootstrap_size = 0; // forest: samples per tree (2 * minority)
    std::uint64_t seed = 0;
    std::vector<double> mdi_sum; // per-feature impurity decrease summed over trees
    std::vector<double> training_loss; // boosted: logistic loss after each stage

    double predict_proba_dense(const std::uint8_t* row, std::size_t row_len) const;
    double predict_proba(const std::vector<std::uint32_t>& active) const;
};

TrainedModel train_balanced_forest(const DenseMatrix& X, const std::vector<int>& y,
                                   const ForestParams& hp, std::uint64_t seed);

TrainedModel train_boosted(const DenseMatrix& X, const std::vector<int>& y, const BoostParams& hp,
                           std::uint64_t seed);

FeatureImportances mdi_importances(const TrainedModel& model);

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

} // namespace pu
