#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pu/pipeline.hpp"

namespace pu {

struct RankEntry {
    std::string id;
    double mean_probability = 0.0;
    std::vector<double> per_seed; // aligned with the seed list
};

struct CandidateRanking {
    std::vector<RankEntry> entries; // mean probability descending, ties by id
    std::vector<std::uint64_t> seeds;
};

// Trains one model per seed on the full dataset (PU mode: filter -> RN ->
// retrain on P + RN), scores every unlabelled entity, and averages the
// probabilities across seeds. A fixed (k, t) is expressed as a one-point
// grid in cfg; a larger grid triggers per-seed grid selection.
// top_n: nullopt = all; 0 is rejected.
CandidateRanking rank_candidates(const PUDataset& ds, const CVConfig& cfg,
                                 std::optional<std::size_t> top_n);

} // namespace pu
