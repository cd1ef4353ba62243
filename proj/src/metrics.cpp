#include "pu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "pu/error.hpp"

namespace pu {

double f1_positive(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    double denom = static_cast<double>(2 * tp + fp + fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(tp) / denom;
}

double g_mean(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
    double sens = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    double spec = (tn + fp) == 0 ? 0.0 : static_cast<double>(tn) / static_cast<double>(tn + fp);
    return std::sqrt(sens * spec);
}

double auc_roc(const std::vector<std::pair<double, int>>& scored) {
    std::size_t n = scored.size();
    std::size_t n_pos = 0;
    for (const auto& [score, label] : scored) n_pos += static_cast<std::size_t>(label != 0);
    std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw Error(ErrorCode::SingleClassScores, "AUC needs both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scored[a].first < scored[b].first; });

    // average ranks across ties, then the Mann-Whitney U statistic
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scored[order[j]].first == scored[order[i]].first) ++j;
        double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (scored[order[k]].second != 0) rank_sum_pos += avg_rank;
        i = j;
    }
    double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

ConfusionCounts confusion_at_threshold(const std::vector<double>& scores,
                                       const std::vector<int>& labels, double threshold) {
    if (scores.size() != labels.size())
        throw Error(ErrorCode::MismatchedLength, "scores and labels differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] >= threshold;
        bool truth = labels[i] != 0;
        if (pred && truth)
            ++c.tp;
        else if (pred && !truth)
            ++c.fp;
        else if (!pred && truth)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

MetricsTriple metrics_from_scores(const std::vector<double>& scores,
                                  const std::vector<int>& labels) {
    ConfusionCounts c = confusion_at_threshold(scores, labels, 0.5);
    MetricsTriple m;
    m.f1 = f1_positive(c.tp, c.fp, c.fn);
    m.g_mean = g_mean(c.tp, c.fp, c.fn, c.tn);
    bool has_pos = c.tp + c.fn > 0, has_neg = c.fp + c.tn > 0;
    if (has_pos && has_neg) {
        std::vector<std::pair<double, int>> scored(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) scored[i] = {scores[i], labels[i]};
        m.auc_roc = auc_roc(scored);
    } else {
        m.auc_roc = 0.5;
    }
    return m;
}

PairedTTest paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw Error(ErrorCode::MismatchedShapes, "paired t-test needs two equal samples, n >= 2");
    std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);

    PairedTTest result;
    result.mean_difference = mean;
    if (var <= 0.0) {
        // all differences identical: p = 1 when the shift is zero, else ~0
        result.t_statistic = mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        result.p_value = mean == 0.0 ? 1.0 : 0.0;
        return result;
    }
    result.t_statistic = mean / std::sqrt(var / static_cast<double>(n));
    boost::math::students_t dist(static_cast<double>(n - 1));
    result.p_value = 2.0 * boost::math::cdf(dist, -std::abs(result.t_statistic));
    return result;
}

} // namespace pu
