#include "pu/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "pu/random.hpp"

namespace pu {

namespace {

void validate(const SynthConfig& cfg) {
    bool ok = cfg.n_entities >= 2 && cfg.n_features >= 1 && cfg.positive_fraction > 0.0 &&
              cfg.positive_fraction < 1.0 && cfg.label_frequency > 0.0 &&
              cfg.label_frequency <= 1.0 && cfg.cluster_separation >= 0.0 &&
              cfg.cluster_separation <= 1.0 && cfg.noise_rate >= 0.0 && cfg.noise_rate <= 1.0;
    if (!ok) throw Error(ErrorCode::InvalidConfig, "synth config out of range");
    if (static_cast<double>(cfg.n_entities) * cfg.positive_fraction * cfg.label_frequency < 1.0)
        throw Error(ErrorCode::InvalidConfig,
                    "expected labelled-positive count below 1; increase n, fraction, or c");
}

std::string entity_id(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "g%06zu", i);
    return buf;
}

} // namespace

SynthDataset generate(const SynthConfig& cfg) {
    validate(cfg);
    std::mt19937_64 feature_rng = make_rng(derive_seed(cfg.seed, 0xFEA7u));
    std::mt19937_64 label_rng = make_rng(derive_seed(cfg.seed, 0x1ABEu));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Per-feature activation rates; the first half carries the class signal.
    std::size_t n_informative = cfg.n_features / 2;
    if (n_informative == 0) n_informative = cfg.n_features;
    std::vector<double> rate_neg(cfg.n_features), rate_pos(cfg.n_features);
    for (std::size_t j = 0; j < cfg.n_features; ++j) {
        rate_neg[j] = 0.05 + 0.15 * unit(feature_rng);
        rate_pos[j] = j < n_informative ? std::min(1.0, rate_neg[j] + cfg.cluster_separation)
                                        : rate_neg[j];
    }

    std::size_t n_pos = static_cast<std::size_t>(
        std::llround(static_cast<double>(cfg.n_entities) * cfg.positive_fraction));
    if (n_pos < 1) n_pos = 1;
    if (n_pos >= cfg.n_entities) n_pos = cfg.n_entities - 1;

    std::vector<std::uint32_t> order(cfg.n_entities);
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), feature_rng);

    SynthDataset out;
    out.true_labels.assign(cfg.n_entities, 0);
    for (std::size_t i = 0; i < n_pos; ++i) out.true_labels[order[i]] = 1;

    PUDataset& ds = out.pu_view;
    ds.features.n_rows = cfg.n_entities;
    ds.features.n_cols = cfg.n_features;
    ds.features.rows.resize(cfg.n_entities);
    for (std::size_t j = 0; j < cfg.n_features; ++j) ds.feature_names.push_back("f" + std::to_string(j));

    for (std::size_t i = 0; i < cfg.n_entities; ++i) {
        ds.ids.push_back(entity_id(i));
        const std::vector<double>& rates = out.true_labels[i] ? rate_pos : rate_neg;
        std::vector<std::uint32_t>& row = ds.features.rows[i];
        for (std::size_t j = 0; j < cfg.n_features; ++j) {
            bool on = unit(feature_rng) < rates[j];
            if (cfg.noise_rate > 0.0 && unit(feature_rng) < cfg.noise_rate) on = !on;
            if (on) row.push_back(static_cast<std::uint32_t>(j));
        }
    }

    // SCAR labelling: independent of features given the true class
    ds.labels.assign(cfg.n_entities, PULabel::Unlabelled);
    bool any_labelled = false;
    for (std::size_t i = 0; i < cfg.n_entities; ++i) {
        if (out.true_labels[i] && unit(label_rng) < cfg.label_frequency) {
            ds.labels[i] = PULabel::Positive;
            any_labelled = true;
        }
    }
    if (!any_labelled) {
        // keep the dataset trainable; promote the lowest-index true positive
        for (std::size_t i = 0; i < cfg.n_entities; ++i) {
            if (out.true_labels[i]) {
                ds.labels[i] = PULabel::Positive;
                break;
            }
        }
    }
    return out;
}

MetricsTriple true_metrics(const SynthDataset& ds, const std::vector<double>& scores) {
    if (scores.size() != ds.true_labels.size())
        throw Error(ErrorCode::MismatchedLength,
                    "scores cover " + std::to_string(scores.size()) + " entities, expected " +
                        std::to_string(ds.true_labels.size()));
    return metrics_from_scores(scores, ds.true_labels);
}

void write_truth(const SynthDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << "id,true_label\n";
    for (std::size_t i = 0; i < ds.true_labels.size(); ++i)
        out << ds.pu_view.ids[i] << ',' << ds.true_labels[i] << '\n';
}

} // namespace pu
