#include "pu/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "pu/parallel.hpp"

namespace pu {

CandidateRanking rank_candidates(const PUDataset& ds, const CVConfig& cfg,
                                 std::optional<std::size_t> top_n) {
    if (top_n && *top_n == 0) throw Error(ErrorCode::TopNZero, "top_n must be >= 1");

    CandidateRanking ranking;
    ranking.seeds = cfg.seeds;

    auto [p, u] = partition_pu(ds);
    if (u.empty()) return ranking;

    std::vector<std::uint32_t> all_rows(ds.n_entities());
    std::iota(all_rows.begin(), all_rows.end(), 0u);

    // per-seed probability column for every unlabelled row
    std::vector<std::vector<double>> per_seed_scores(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), [&](std::size_t si) {
        FoldModel fm = train_fold(ds, all_rows, cfg, cfg.seeds[si], 0);
        std::vector<double>& scores = per_seed_scores[si];
        scores.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            scores[i] = fm.model.predict_proba(ds.features.rows[u[i]]);
    });

    ranking.entries.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        RankEntry& entry = ranking.entries[i];
        entry.id = ds.ids[u[i]];
        entry.per_seed.resize(cfg.seeds.size());
        double sum = 0.0;
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
            entry.per_seed[si] = per_seed_scores[si][i];
            sum += per_seed_scores[si][i];
        }
        entry.mean_probability = sum / static_cast<double>(cfg.seeds.size());
    }

    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const RankEntry& a, const RankEntry& b) {
                  if (a.mean_probability != b.mean_probability)
                      return a.mean_probability > b.mean_probability;
                  return a.id < b.id;
              });
    if (top_n && *top_n < ranking.entries.size()) ranking.entries.resize(*top_n);
    return ranking;
}

} // namespace pu
