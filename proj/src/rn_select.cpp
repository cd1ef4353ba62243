#include "pu/rn_select.hpp"

#include <algorithm>
#include <numeric>

#include "pu/parallel.hpp"

namespace pu {

RNResult reliable_negatives(const std::vector<std::uint32_t>& P,
                            const std::vector<std::uint32_t>& U, const SimilarityMatrix& sim,
                            const RNParams& params) {
    std::size_t n = sim.n;
    if (U.empty()) throw Error(ErrorCode::EmptyU, "no unlabelled rows");
    if (P.size() + U.size() != n)
        throw Error(ErrorCode::InvalidConfig, "P and U must cover all similarity rows");
    if (params.k < 1 || static_cast<std::size_t>(params.k) > n - 1)
        throw Error(ErrorCode::KTooLarge,
                    "k=" + std::to_string(params.k) + " with |D|=" + std::to_string(n));
    if (params.t < 0.5 || params.t > 1.0)
        throw Error(ErrorCode::InvalidConfig, "t must be in [0.5, 1]");

    // D ordered P-first then U; ties in similarity resolve by this position.
    std::vector<std::uint32_t> p_sorted = P, u_sorted = U;
    std::sort(p_sorted.begin(), p_sorted.end());
    std::sort(u_sorted.begin(), u_sorted.end());
    std::vector<std::uint32_t> d_pos(n), d_order;
    d_order.reserve(n);
    std::vector<std::uint8_t> is_u(n, 0);
    for (std::uint32_t r : p_sorted) d_order.push_back(r);
    for (std::uint32_t r : u_sorted) {
        is_u[r] = 1;
        d_order.push_back(r);
    }
    for (std::size_t i = 0; i < n; ++i) d_pos[d_order[i]] = static_cast<std::uint32_t>(i);

    std::size_t k = static_cast<std::size_t>(params.k);
    RNResult result;
    result.trace.resize(u_sorted.size());

    parallel_for(u_sorted.size(), [&](std::size_t qi) {
        std::uint32_t u = u_sorted[qi];
        std::vector<std::uint32_t> cand;
        cand.reserve(n - 1);
        for (std::uint32_t r : d_order)
            if (r != u) cand.push_back(r);

        auto better = [&](std::uint32_t a, std::uint32_t b) {
            double sa = sim.at(u, a), sb = sim.at(u, b);
            if (sa != sb) return sa > sb;
            return d_pos[a] < d_pos[b];
        };
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(),
                          better);

        RNTraceEntry& entry = result.trace[qi];
        entry.index = u;
        entry.neighbours.assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
        std::size_t unlabelled = 0;
        for (std::uint32_t r : entry.neighbours) unlabelled += is_u[r];
        entry.unlabelled_fraction = static_cast<double>(unlabelled) / static_cast<double>(k);
        entry.nearest_unlabelled = is_u[cand[0]] != 0;

        double top_sim = sim.at(u, cand[0]);
        std::size_t at_max = 0;
        for (std::uint32_t r : cand)
            if (sim.at(u, r) == top_sim) ++at_max;
        entry.tie_at_max = at_max > 1;

        entry.admitted = entry.unlabelled_fraction >= params.t && entry.nearest_unlabelled;
    });

    for (const RNTraceEntry& entry : result.trace)
        if (entry.admitted) result.reliable_negatives.push_back(entry.index);
    return result;
}

FeatureSubset knn_feature_filter(const std::vector<double>& mdi_raw,
                                 std::optional<std::uint32_t> n_f, std::uint32_t total_features) {
    if (!n_f || *n_f >= total_features) return FeatureSubset::all();
    if (mdi_raw.size() != total_features)
        throw Error(ErrorCode::ModelWithoutImportances,
                    "model exposes " + std::to_string(mdi_raw.size()) + " importances, expected " +
                        std::to_string(total_features));
    if (*n_f == 0) throw Error(ErrorCode::InvalidConfig, "n_f must be >= 1");

    std::vector<std::uint32_t> order(total_features);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (mdi_raw[a] != mdi_raw[b]) return mdi_raw[a] > mdi_raw[b];
        return a < b;
    });
    order.resize(*n_f);
    return FeatureSubset::of(std::move(order));
}

} // namespace pu
