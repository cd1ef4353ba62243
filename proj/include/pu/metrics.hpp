#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pu {

struct MetricsTriple {
    double f1 = 0.0;
    double g_mean = 0.0;
    double auc_roc = 0.0;
};

struct ConfusionCounts {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// F1 of the positive class; 0 when the denominator vanishes.
double f1_positive(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// sqrt(sensitivity * specificity); each factor 0 when undefined.
double g_mean(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn);

// Mann-Whitney AUC: fraction of (pos, neg) pairs with score_pos > score_neg,
// ties counted 0.5. Throws SingleClassScores when one class is absent.
double auc_roc(const std::vector<std::pair<double, int>>& scored);

ConfusionCounts confusion_at_threshold(const std::vector<double>& scores,
                                       const std::vector<int>& labels, double threshold);

// F1 / G-Mean at threshold 0.5, AUC from raw scores. AUC falls back to 0.5
// when only one class is present.
MetricsTriple metrics_from_scores(const std::vector<double>& scores,
                                  const std::vector<int>& labels);

struct PairedTTest {
    double mean_difference = 0.0;
    double t_statistic = 0.0;
    double p_value = 1.0;
};

// Two-tailed paired t-test over matched samples a[i] - b[i].
PairedTTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

} // namespace pu
