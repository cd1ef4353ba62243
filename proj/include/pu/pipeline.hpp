#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pu/dataset.hpp"
#include "pu/ensemble.hpp"
#include "pu/metrics.hpp"

namespace pu {

enum class Mode : std::uint8_t { Naive, PU };
enum class ClassifierKind : std::uint8_t { BalancedForest, BoostedTrees };
enum class InnerMetric : std::uint8_t { F1, AUC };

std::vector<std::pair<int, double>> default_pu_grid();
std::vector<std::uint64_t> default_seeds();

struct CVConfig {
    int outer_folds = 10;
    int inner_folds = 5;
    std::vector<std::pair<int, double>> pu_grid = default_pu_grid();
    std::optional<std::uint32_t> n_f; // nullopt = all when <= 2000 features, else 100
    ClassifierKind classifier = ClassifierKind::BalancedForest;
    ForestParams forest;
    BoostParams boost;
    std::vector<std::uint64_t> seeds = default_seeds();
    Mode mode = Mode::PU;
    InnerMetric inner_metric = InnerMetric::F1;
    bool stratified = true;
};

struct FoldPlan {
    std::vector<int> assignments; // per-entity fold index
    int n_folds = 0;
    bool stratified = true;

    std::vector<std::uint32_t> fold_indices(int fold) const;
    std::vector<std::uint32_t> complement_indices(int fold) const;
};

// Deterministic seeded shuffle, then positives and unlabelled distributed
// round-robin so per-fold positive counts differ from the mean by <= 1.
FoldPlan stratified_folds(const PUDataset& ds, int n, std::uint64_t seed, bool stratified = true);

struct FoldResult {
    MetricsTriple metrics;
    int chosen_k = 0;
    double chosen_t = 0.0;
    int rn_size = -1;          // -1 in naive mode
    bool naive_fallback = false; // RN came back empty, trained naive instead
    bool grid_used = false;
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::vector<FoldResult> folds;
    MetricsTriple mean;
    std::vector<double> oof_scores; // out-of-fold probability per entity
};

struct MetricsReport {
    std::size_t n_entities = 0;
    int outer_folds = 0;
    Mode mode = Mode::PU;
    std::vector<std::uint64_t> seeds;
    std::vector<SeedResult> per_seed;
    MetricsTriple mean;   // over per-seed means
    MetricsTriple stddev; // sample std over per-seed means
};

// One outer-fold training: naive mode trains once with U-as-negative; PU
// mode grid-searches (k, t) on inner folds, then runs the feature filter +
// reliable-negative selection on the full training split and retrains on
// P + RN with all original features. Only rows in train_idx are touched.
struct FoldModel {
    TrainedModel model;
    int chosen_k = 0;
    double chosen_t = 0.0;
    int rn_size = -1;
    bool naive_fallback = false;
    bool grid_used = false;
};

FoldModel train_fold(const PUDataset& ds, const std::vector<std::uint32_t>& train_idx,
                     const CVConfig& cfg, std::uint64_t seed, int outer_fold);

MetricsReport nested_cv(const PUDataset& ds, const CVConfig& cfg);

struct MetricComparison {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double mean_difference = 0.0; // a - b
    double p_value = 1.0;
};

struct ComparisonSummary {
    MetricComparison f1, g_mean, auc_roc;
};

// Paired two-tailed t-test over seed-level means; reports must share the
// seed list and fold plan shape.
ComparisonSummary compare_methods(const MetricsReport& a, const MetricsReport& b);

// Effective KNN feature-filter size under the documented default rule.
std::optional<std::uint32_t> effective_n_f(const CVConfig& cfg, std::size_t total_features);

} // namespace pu
