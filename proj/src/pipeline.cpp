#include "pu/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pu/parallel.hpp"
#include "pu/random.hpp"
#include "pu/rn_select.hpp"

namespace pu {

std::vector<std::pair<int, double>> default_pu_grid() {
    return {{3, 2.0 / 3.0}, {3, 1.0},       {5, 4.0 / 5.0}, {5, 1.0},
            {8, 6.0 / 8.0}, {8, 7.0 / 8.0}, {8, 1.0}};
}

std::vector<std::uint64_t> default_seeds() {
    return {14, 33, 39, 42, 727, 1312, 1337, 56709, 177013, 241543903};
}

std::vector<std::uint32_t> FoldPlan::fold_indices(int fold) const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

std::vector<std::uint32_t> FoldPlan::complement_indices(int fold) const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(static_cast<std::uint32_t>(i));
    return out;
}

FoldPlan stratified_folds(const PUDataset& ds, int n, std::uint64_t seed, bool stratified) {
    std::size_t n_entities = ds.n_entities();
    if (n < 1 || static_cast<std::size_t>(n) > n_entities)
        throw Error(ErrorCode::TooFewEntities,
                    std::to_string(n) + " folds for " + std::to_string(n_entities) + " entities");

    FoldPlan plan;
    plan.n_folds = n;
    plan.stratified = stratified;
    plan.assignments.assign(n_entities, 0);

    std::mt19937_64 rng = make_rng(derive_seed(seed, 0xF01Du));
    if (stratified) {
        auto [p, u] = partition_pu(ds);
        if (p.empty()) throw Error(ErrorCode::TooFewPositives, "no positive rows to stratify");
        std::shuffle(p.begin(), p.end(), rng);
        std::shuffle(u.begin(), u.end(), rng);
        // one continuous round-robin over positives then unlabelled: per-class
        // counts stay within 1 of each other and fold sizes stay balanced
        // (n = n_entities degenerates to leave-one-out)
        for (std::size_t i = 0; i < p.size(); ++i)
            plan.assignments[p[i]] = static_cast<int>(i % static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < u.size(); ++i)
            plan.assignments[u[i]] = static_cast<int>((p.size() + i) % static_cast<std::size_t>(n));
    } else {
        std::vector<std::uint32_t> order(n_entities);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 0; i < order.size(); ++i)
            plan.assignments[order[i]] = static_cast<int>(i % static_cast<std::size_t>(n));
    }
    return plan;
}

std::optional<std::uint32_t> effective_n_f(const CVConfig& cfg, std::size_t total_features) {
    if (cfg.n_f) return cfg.n_f;
    if (total_features <= 2000) return std::nullopt; // all
    return 100u;
}

namespace {

std::vector<int> naive_labels(const PUDataset& ds) {
    std::vector<int> y(ds.n_entities());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = ds.labels[i] == PULabel::Positive ? 1 : 0;
    return y;
}

TrainedModel train_classifier(const DenseMatrix& X, const std::vector<int>& y,
                              const CVConfig& cfg, std::uint64_t seed) {
    if (cfg.classifier == ClassifierKind::BalancedForest)
        return train_balanced_forest(X, y, cfg.forest, seed);
    return train_boosted(X, y, cfg.boost, seed);
}

struct PUTrainOutcome {
    TrainedModel model;
    int rn_size = 0;
    bool fallback = false;
};

// Step one + step two on one training split: naive model for the MDI
// feature filter, Jaccard KNN reliable negatives in the filtered space,
// then retraining on P + RN with all original features.
PUTrainOutcome pu_train_once(const PUDataset& sub, int k, double t, const CVConfig& cfg,
                             std::uint64_t seed) {
    DenseMatrix X = densify(sub.features);
    std::vector<int> y = naive_labels(sub);
    TrainedModel naive_model = train_classifier(X, y, cfg, derive_seed(seed, 1));

    FeatureSubset filter =
        knn_feature_filter(mdi_importances(naive_model).raw,
                           effective_n_f(cfg, sub.features.n_cols),
                           static_cast<std::uint32_t>(sub.features.n_cols));
    SimilarityMatrix sim = pairwise_matrix(sub.features, filter);

    auto [p, u] = partition_pu(sub);
    RNResult rn = reliable_negatives(p, u, sim, {k, t});

    PUTrainOutcome out;
    out.rn_size = static_cast<int>(rn.reliable_negatives.size());
    if (rn.reliable_negatives.empty()) {
        out.model = std::move(naive_model);
        out.fallback = true;
        return out;
    }

    std::vector<std::uint32_t> rows;
    rows.reserve(p.size() + rn.reliable_negatives.size());
    rows.insert(rows.end(), p.begin(), p.end());
    rows.insert(rows.end(), rn.reliable_negatives.begin(), rn.reliable_negatives.end());
    std::sort(rows.begin(), rows.end());

    DenseMatrix X2 = densify(sub.features, rows);
    std::vector<int> y2(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        y2[i] = sub.labels[rows[i]] == PULabel::Positive ? 1 : 0;
    out.model = train_classifier(X2, y2, cfg, derive_seed(seed, 2));
    return out;
}

double inner_score(const std::vector<double>& scores, const std::vector<int>& labels,
                   InnerMetric metric) {
    MetricsTriple m = metrics_from_scores(scores, labels);
    return metric == InnerMetric::F1 ? m.f1 : m.auc_roc;
}

} // namespace

FoldModel train_fold(const PUDataset& ds, const std::vector<std::uint32_t>& train_idx,
                     const CVConfig& cfg, std::uint64_t seed, int outer_fold) {
    PUDataset sub = ds.subset(train_idx);
    std::uint64_t fold_tag = static_cast<std::uint64_t>(outer_fold);

    FoldModel fm;
    if (cfg.mode == Mode::Naive) {
        DenseMatrix X = densify(sub.features);
        fm.model = train_classifier(X, naive_labels(sub), cfg,
                                    derive_seed(seed, 0xAAu, fold_tag));
        return fm;
    }

    if (cfg.pu_grid.empty()) throw Error(ErrorCode::GridEmpty, "pu_grid is empty in PU mode");

    // Inner grid search over (k, t)
    FoldPlan inner = stratified_folds(sub, cfg.inner_folds,
                                      derive_seed(seed, 0xBBu, fold_tag), cfg.stratified);
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best_combo = cfg.pu_grid.size();

    for (std::size_t c = 0; c < cfg.pu_grid.size(); ++c) {
        auto [k, t] = cfg.pu_grid[c];
        double total = 0.0;
        int folds_used = 0;
        bool feasible = true;
        for (int f = 0; f < cfg.inner_folds && feasible; ++f) {
            std::vector<std::uint32_t> learn_idx = inner.complement_indices(f);
            std::vector<std::uint32_t> val_idx = inner.fold_indices(f);
            if (val_idx.empty()) continue;
            PUDataset learn = sub.subset(learn_idx);
            try {
                PUTrainOutcome trained =
                    pu_train_once(learn, k, t, cfg, derive_seed(seed, fold_tag, c, f));
                std::vector<double> scores(val_idx.size());
                std::vector<int> labels(val_idx.size());
                for (std::size_t i = 0; i < val_idx.size(); ++i) {
                    scores[i] = trained.model.predict_proba(sub.features.rows[val_idx[i]]);
                    labels[i] = sub.labels[val_idx[i]] == PULabel::Positive ? 1 : 0;
                }
                total += inner_score(scores, labels, cfg.inner_metric);
                ++folds_used;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::KTooLarge || e.code() == ErrorCode::SingleClassInput ||
                    e.code() == ErrorCode::EmptyU)
                    feasible = false;
                else
                    throw;
            }
        }
        if (!feasible || folds_used == 0) continue;
        double mean = total / folds_used;
        if (mean > best_score) {
            best_score = mean;
            best_combo = c;
        }
    }
    if (best_combo == cfg.pu_grid.size())
        throw Error(ErrorCode::GridEmpty, "no feasible (k, t) combination for this fold");

    auto [k, t] = cfg.pu_grid[best_combo];
    PUTrainOutcome final_train = pu_train_once(sub, k, t, cfg, derive_seed(seed, 0xCCu, fold_tag));
    fm.model = std::move(final_train.model);
    fm.chosen_k = k;
    fm.chosen_t = t;
    fm.rn_size = final_train.rn_size;
    fm.naive_fallback = final_train.fallback;
    fm.grid_used = true;
    return fm;
}

namespace {

SeedResult run_seed(const PUDataset& ds, const CVConfig& cfg, std::uint64_t seed) {
    FoldPlan plan = stratified_folds(ds, cfg.outer_folds, seed, cfg.stratified);
    SeedResult result;
    result.seed = seed;
    result.folds.resize(static_cast<std::size_t>(cfg.outer_folds));
    result.oof_scores.assign(ds.n_entities(), 0.0);

    for (int f = 0; f < cfg.outer_folds; ++f) {
        std::vector<std::uint32_t> train_idx = plan.complement_indices(f);
        std::vector<std::uint32_t> test_idx = plan.fold_indices(f);
        FoldModel fm = train_fold(ds, train_idx, cfg, seed, f);

        std::vector<double> scores(test_idx.size());
        std::vector<int> labels(test_idx.size());
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            scores[i] = fm.model.predict_proba(ds.features.rows[test_idx[i]]);
            labels[i] = ds.labels[test_idx[i]] == PULabel::Positive ? 1 : 0;
            result.oof_scores[test_idx[i]] = scores[i];
        }

        FoldResult& fr = result.folds[static_cast<std::size_t>(f)];
        fr.metrics = metrics_from_scores(scores, labels);
        fr.chosen_k = fm.chosen_k;
        fr.chosen_t = fm.chosen_t;
        fr.rn_size = fm.rn_size;
        fr.naive_fallback = fm.naive_fallback;
        fr.grid_used = fm.grid_used;
    }

    double nf = static_cast<double>(result.folds.size());
    for (const FoldResult& fr : result.folds) {
        result.mean.f1 += fr.metrics.f1 / nf;
        result.mean.g_mean += fr.metrics.g_mean / nf;
        result.mean.auc_roc += fr.metrics.auc_roc / nf;
    }
    return result;
}

MetricsTriple mean_of(const std::vector<MetricsTriple>& v) {
    MetricsTriple m;
    double n = static_cast<double>(v.size());
    for (const auto& t : v) {
        m.f1 += t.f1 / n;
        m.g_mean += t.g_mean / n;
        m.auc_roc += t.auc_roc / n;
    }
    return m;
}

MetricsTriple std_of(const std::vector<MetricsTriple>& v, const MetricsTriple& mean) {
    MetricsTriple s;
    if (v.size() < 2) return s;
    double n = static_cast<double>(v.size() - 1);
    for (const auto& t : v) {
        s.f1 += (t.f1 - mean.f1) * (t.f1 - mean.f1) / n;
        s.g_mean += (t.g_mean - mean.g_mean) * (t.g_mean - mean.g_mean) / n;
        s.auc_roc += (t.auc_roc - mean.auc_roc) * (t.auc_roc - mean.auc_roc) / n;
    }
    s.f1 = std::sqrt(s.f1);
    s.g_mean = std::sqrt(s.g_mean);
    s.auc_roc = std::sqrt(s.auc_roc);
    return s;
}

} // namespace

MetricsReport nested_cv(const PUDataset& ds, const CVConfig& cfg) {
    if (cfg.outer_folds < 2 || cfg.inner_folds < 2)
        throw Error(ErrorCode::InvalidConfig, "outer and inner fold counts must be >= 2");
    if (cfg.seeds.empty()) throw Error(ErrorCode::InvalidConfig, "seed list is empty");
    if (cfg.mode == Mode::PU && cfg.pu_grid.empty())
        throw Error(ErrorCode::GridEmpty, "pu_grid is empty in PU mode");
    if (ds.n_positives() == 0 || ds.n_positives() == ds.n_entities())
        throw Error(ErrorCode::SingleClassInput, "dataset needs positive and unlabelled rows");

    MetricsReport report;
    report.n_entities = ds.n_entities();
    report.outer_folds = cfg.outer_folds;
    report.mode = cfg.mode;
    report.seeds = cfg.seeds;
    report.per_seed.resize(cfg.seeds.size());

    parallel_for(cfg.seeds.size(),
                 [&](std::size_t i) { report.per_seed[i] = run_seed(ds, cfg, cfg.seeds[i]); });

    std::vector<MetricsTriple> seed_means;
    seed_means.reserve(report.per_seed.size());
    for (const auto& s : report.per_seed) seed_means.push_back(s.mean);
    report.mean = mean_of(seed_means);
    report.stddev = std_of(seed_means, report.mean);
    return report;
}

ComparisonSummary compare_methods(const MetricsReport& a, const MetricsReport& b) {
    if (a.seeds != b.seeds || a.outer_folds != b.outer_folds || a.n_entities != b.n_entities)
        throw Error(ErrorCode::MismatchedShapes,
                    "reports differ in seeds, fold counts, or entity counts");

    auto compare_metric = [&](auto pick) {
        std::vector<double> va, vb;
        for (const auto& s : a.per_seed) va.push_back(pick(s.mean));
        for (const auto& s : b.per_seed) vb.push_back(pick(s.mean));
        PairedTTest tt = paired_t_test(va, vb);
        MetricComparison mc;
        mc.mean_a = std::accumulate(va.begin(), va.end(), 0.0) / static_cast<double>(va.size());
        mc.mean_b = std::accumulate(vb.begin(), vb.end(), 0.0) / static_cast<double>(vb.size());
        mc.mean_difference = tt.mean_difference;
        mc.p_value = tt.p_value;
        return mc;
    };

    ComparisonSummary summary;
    summary.f1 = compare_metric([](const MetricsTriple& m) { return m.f1; });
    summary.g_mean = compare_metric([](const MetricsTriple& m) { return m.g_mean; });
    summary.auc_roc = compare_metric([](const MetricsTriple& m) { return m.auc_roc; });
    return summary;
}

} // namespace pu
