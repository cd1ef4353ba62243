#include <doctest.h>

#include <random>

#include "pu/similarity.hpp"
#include "test_util.hpp"

using namespace pu;

namespace {

// Independent slow path: materialize dense vectors and evaluate the
// intersection-over-union definition directly.
double naive_jaccard(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                     std::size_t n_cols) {
    std::vector<int> da(n_cols, 0), db(n_cols, 0);
    for (auto i : a) da[i] = 1;
    for (auto i : b) db[i] = 1;
    int inter = 0, uni = 0;
    for (std::size_t i = 0; i < n_cols; ++i) {
        inter += da[i] & db[i];
        uni += da[i] | db[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / uni;
}

} // namespace

TEST_CASE("jaccard basics") {
    FeatureSubset all = FeatureSubset::all();
    CHECK(jaccard({0, 1, 3}, {0, 3}, all, 4) == doctest::Approx(2.0 / 3.0));
    CHECK(jaccard({0, 1, 3}, {0, 1, 3}, all, 4) == 1.0);
    CHECK(jaccard({0, 1}, {2, 3}, all, 4) == 0.0);
    // D-SIM-1 conventions
    CHECK(jaccard({}, {}, all, 2) == 1.0);
    CHECK(jaccard({}, {0}, all, 2) == 0.0);
}

TEST_CASE("jaccard over a feature subset") {
    FeatureSubset f = FeatureSubset::of({0, 2});
    CHECK(jaccard({0, 1}, {0, 3}, f, 4) == 1.0);      // both restrict to {0}
    CHECK(jaccard({1}, {3}, f, 4) == 1.0);            // both restrict to empty
    CHECK(jaccard({0}, {2}, f, 4) == 0.0);            // disjoint after restriction
    CHECK_THROWS_AS(jaccard({0}, {1}, FeatureSubset::of({9}), 4), Error);
    CHECK_THROWS_AS(FeatureSubset::of({}), Error);
}

TEST_CASE("pairwise matrix worked example") {
    SparseBinaryMatrix m;
    m.n_rows = 3;
    m.n_cols = 3;
    m.rows = {{0, 1}, {0, 1, 2}, {2}};
    SimilarityMatrix sim = pairwise_matrix(m, FeatureSubset::all());
    CHECK(sim.at(0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(sim.at(0, 2) == 0.0);
    CHECK(sim.at(1, 2) == doctest::Approx(1.0 / 3.0));
    for (std::size_t i = 0; i < 3; ++i) CHECK(sim.at(i, i) == 1.0);
}

TEST_CASE("single-row matrix") {
    SparseBinaryMatrix m;
    m.n_rows = 1;
    m.n_cols = 2;
    m.rows = {{0}};
    SimilarityMatrix sim = pairwise_matrix(m, FeatureSubset::all());
    CHECK(sim.n == 1);
    CHECK(sim.at(0, 0) == 1.0);
}

TEST_CASE("pairwise matrix equals brute-force recomputation") {
    std::mt19937_64 rng(11);
    PUDataset ds = testutil::random_dataset(rng, 20, 10);
    SimilarityMatrix sim = pairwise_matrix(ds.features, FeatureSubset::all());
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            double expected = naive_jaccard(ds.features.rows[i], ds.features.rows[j], 10);
            CHECK(sim.at(i, j) == expected);
            CHECK(sim.at(i, j) == sim.at(j, i));
            CHECK(sim.at(i, j) >= 0.0);
            CHECK(sim.at(i, j) <= 1.0);
        }
    }
}

TEST_CASE("subset computation equals materialized-column computation") {
    std::mt19937_64 rng(13);
    PUDataset ds = testutil::random_dataset(rng, 15, 12);
    std::vector<std::uint32_t> keep = {1, 4, 5, 9, 11};
    SimilarityMatrix restricted = pairwise_matrix(ds.features, FeatureSubset::of(keep));

    // materialize a matrix holding only the kept columns, re-indexed
    SparseBinaryMatrix small;
    small.n_rows = ds.features.n_rows;
    small.n_cols = keep.size();
    small.rows.resize(small.n_rows);
    for (std::size_t r = 0; r < small.n_rows; ++r)
        for (std::size_t k = 0; k < keep.size(); ++k)
            if (ds.features.get(r, keep[k])) small.rows[r].push_back(static_cast<std::uint32_t>(k));
    SimilarityMatrix direct = pairwise_matrix(small, FeatureSubset::all());

    for (std::size_t i = 0; i < small.n_rows; ++i)
        for (std::size_t j = 0; j < small.n_rows; ++j)
            CHECK(restricted.at(i, j) == direct.at(i, j));
}

TEST_CASE("memoization transparency: repeated computation is identical") {
    std::mt19937_64 rng(17);
    PUDataset ds = testutil::random_dataset(rng, 25, 8);
    SimilarityMatrix a = pairwise_matrix(ds.features, FeatureSubset::all());
    SimilarityMatrix b = pairwise_matrix(ds.features, FeatureSubset::all());
    CHECK(a.values == b.values);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j)
            CHECK(a.at(i, j) ==
                  jaccard(ds.features.rows[i], ds.features.rows[j], FeatureSubset::all(), 8));
}
