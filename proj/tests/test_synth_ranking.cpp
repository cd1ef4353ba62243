#include <doctest.h>

#include <cmath>
#include <set>

#include "pu/ranking.hpp"
#include "pu/synth.hpp"

using namespace pu;

namespace {

CVConfig rank_config() {
    CVConfig cfg;
    cfg.pu_grid = {{2, 1.0}};
    cfg.forest = {15, 0, 2};
    cfg.seeds = {1, 2, 3};
    return cfg;
}

} // namespace

TEST_CASE("generator shape and determinism") {
    SynthConfig cfg;
    cfg.n_entities = 150;
    cfg.n_features = 20;
    cfg.seed = 42;
    SynthDataset a = generate(cfg);
    CHECK(a.pu_view.n_entities() == 150);
    CHECK(a.pu_view.features.n_cols == 20);
    CHECK(a.true_labels.size() == 150);
    SynthDataset b = generate(cfg);
    CHECK(a.pu_view.features.rows == b.pu_view.features.rows);
    CHECK(a.pu_view.labels == b.pu_view.labels);
    CHECK(a.true_labels == b.true_labels);
    cfg.seed = 43;
    SynthDataset c = generate(cfg);
    CHECK(a.pu_view.features.rows != c.pu_view.features.rows);
}

TEST_CASE("labelled entities are always true positives") {
    SynthConfig cfg;
    cfg.n_entities = 300;
    cfg.seed = 7;
    SynthDataset ds = generate(cfg);
    for (std::size_t i = 0; i < 300; ++i)
        if (ds.pu_view.labels[i] == PULabel::Positive) CHECK(ds.true_labels[i] == 1);
}

TEST_CASE("label frequency 1 labels every true positive") {
    SynthConfig cfg;
    cfg.n_entities = 200;
    cfg.label_frequency = 1.0;
    cfg.seed = 11;
    SynthDataset ds = generate(cfg);
    for (std::size_t i = 0; i < 200; ++i)
        CHECK((ds.pu_view.labels[i] == PULabel::Positive) == (ds.true_labels[i] == 1));
}

TEST_CASE("observed label frequency tracks c across seeds") {
    // pooled over seeds: ~3000 true positives at c = 0.4; a 6-sigma binomial
    // band around the mean is ~ +/- 0.054
    SynthConfig cfg;
    cfg.n_entities = 500;
    cfg.positive_fraction = 0.3;
    cfg.label_frequency = 0.4;
    std::size_t labelled = 0, true_pos = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        SynthDataset ds = generate(cfg);
        for (std::size_t i = 0; i < cfg.n_entities; ++i) {
            if (ds.true_labels[i] == 1) {
                ++true_pos;
                if (ds.pu_view.labels[i] == PULabel::Positive) ++labelled;
            }
        }
    }
    double freq = static_cast<double>(labelled) / static_cast<double>(true_pos);
    CHECK(freq == doctest::Approx(0.4).epsilon(0.15));
}

TEST_CASE("separation controls feature informativeness") {
    SynthConfig cfg;
    cfg.n_entities = 400;
    cfg.n_features = 40;
    cfg.cluster_separation = 0.7;
    cfg.seed = 3;
    SynthDataset strong = generate(cfg);
    // informative features (first half) fire much more often for positives
    std::size_t pos_active = 0, neg_active = 0, n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < 400; ++i) {
        std::size_t active_low = 0;
        for (auto c : strong.pu_view.features.rows[i])
            if (c < 20) ++active_low;
        if (strong.true_labels[i] == 1) {
            pos_active += active_low;
            ++n_pos;
        } else {
            neg_active += active_low;
            ++n_neg;
        }
    }
    double pos_rate = static_cast<double>(pos_active) / (20.0 * static_cast<double>(n_pos));
    double neg_rate = static_cast<double>(neg_active) / (20.0 * static_cast<double>(n_neg));
    CHECK(pos_rate > neg_rate + 0.4);

    cfg.cluster_separation = 0.0;
    SynthDataset null_signal = generate(cfg);
    pos_active = neg_active = n_pos = n_neg = 0;
    for (std::size_t i = 0; i < 400; ++i) {
        std::size_t active_low = 0;
        for (auto c : null_signal.pu_view.features.rows[i])
            if (c < 20) ++active_low;
        if (null_signal.true_labels[i] == 1) {
            pos_active += active_low;
            ++n_pos;
        } else {
            neg_active += active_low;
            ++n_neg;
        }
    }
    pos_rate = static_cast<double>(pos_active) / (20.0 * static_cast<double>(n_pos));
    neg_rate = static_cast<double>(neg_active) / (20.0 * static_cast<double>(n_neg));
    CHECK(std::abs(pos_rate - neg_rate) < 0.05);
}

TEST_CASE("generator input validation") {
    SynthConfig cfg;
    cfg.n_entities = 10;
    cfg.positive_fraction = 0.01; // expected labelled positives < 1
    CHECK_THROWS_AS(generate(cfg), Error);
    cfg.positive_fraction = 1.5;
    CHECK_THROWS_AS(generate(cfg), Error);
}

TEST_CASE("true_metrics") {
    SynthConfig cfg;
    cfg.n_entities = 100;
    cfg.seed = 19;
    SynthDataset ds = generate(cfg);
    SUBCASE("perfect scores") {
        std::vector<double> scores(100);
        for (std::size_t i = 0; i < 100; ++i) scores[i] = ds.true_labels[i] ? 0.9 : 0.1;
        MetricsTriple m = true_metrics(ds, scores);
        CHECK(m.f1 == 1.0);
        CHECK(m.g_mean == 1.0);
        CHECK(m.auc_roc == 1.0);
    }
    SUBCASE("inverted scores give AUC 0") {
        std::vector<double> scores(100);
        for (std::size_t i = 0; i < 100; ++i) scores[i] = ds.true_labels[i] ? 0.1 : 0.9;
        MetricsTriple m = true_metrics(ds, scores);
        CHECK(m.f1 == 0.0);
        CHECK(m.auc_roc == 0.0);
    }
    SUBCASE("length mismatch rejected") {
        CHECK_THROWS_AS(true_metrics(ds, std::vector<double>(5, 0.5)), Error);
    }
}

TEST_CASE("rank_candidates") {
    SynthConfig scfg;
    scfg.n_entities = 120;
    scfg.n_features = 20;
    scfg.seed = 23;
    SynthDataset synth = generate(scfg);
    const PUDataset& ds = synth.pu_view;

    CandidateRanking ranking = rank_candidates(ds, rank_config(), std::nullopt);

    SUBCASE("only unlabelled entities, sorted by mean descending") {
        std::set<std::string> positive_ids;
        std::size_t n_unl = 0;
        for (std::size_t i = 0; i < ds.n_entities(); ++i) {
            if (ds.labels[i] == PULabel::Positive)
                positive_ids.insert(ds.ids[i]);
            else
                ++n_unl;
        }
        CHECK(ranking.entries.size() == n_unl);
        for (std::size_t e = 0; e < ranking.entries.size(); ++e) {
            CHECK(positive_ids.count(ranking.entries[e].id) == 0);
            if (e > 0)
                CHECK(ranking.entries[e - 1].mean_probability >=
                      ranking.entries[e].mean_probability);
        }
    }
    SUBCASE("mean is the mean of per-seed probabilities") {
        for (const RankEntry& e : ranking.entries) {
            REQUIRE(e.per_seed.size() == 3);
            double sum = 0.0;
            for (double v : e.per_seed) {
                sum += v;
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            CHECK(e.mean_probability == doctest::Approx(sum / 3.0).epsilon(1e-12));
        }
    }
    SUBCASE("determinism and top-n truncation") {
        CandidateRanking again = rank_candidates(ds, rank_config(), std::nullopt);
        REQUIRE(again.entries.size() == ranking.entries.size());
        for (std::size_t e = 0; e < ranking.entries.size(); ++e) {
            CHECK(again.entries[e].id == ranking.entries[e].id);
            CHECK(again.entries[e].mean_probability == ranking.entries[e].mean_probability);
        }
        CandidateRanking top5 = rank_candidates(ds, rank_config(), 5u);
        REQUIRE(top5.entries.size() == 5);
        for (std::size_t e = 0; e < 5; ++e) CHECK(top5.entries[e].id == ranking.entries[e].id);
    }
    SUBCASE("top-n of zero rejected") {
        CHECK_THROWS_AS(rank_candidates(ds, rank_config(), 0u), Error);
    }
}

TEST_CASE("ranking with no unlabelled entities is empty") {
    SynthConfig scfg;
    scfg.n_entities = 60;
    scfg.label_frequency = 1.0;
    scfg.positive_fraction = 0.5;
    scfg.seed = 29;
    SynthDataset synth = generate(scfg);
    PUDataset all_pos;
    std::vector<std::uint32_t> keep;
    for (std::uint32_t i = 0; i < synth.pu_view.n_entities(); ++i)
        if (synth.pu_view.labels[i] == PULabel::Positive) keep.push_back(i);
    // build a positives-only dataset; unlabelled pool is empty
    all_pos = synth.pu_view.subset(keep);
    CandidateRanking ranking = rank_candidates(all_pos, rank_config(), std::nullopt);
    CHECK(ranking.entries.empty());
}
