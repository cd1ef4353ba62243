#include <doctest.h>

#include <random>

#include "pu/ensemble.hpp"
#include "pu/parallel.hpp"

using namespace pu;

namespace {

// feature 0 fully determines the class; remaining features are noise
DenseMatrix separable_matrix(std::vector<int>& y, std::size_t n, std::size_t n_cols,
                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DenseMatrix X;
    X.n_rows = n;
    X.n_cols = n_cols;
    X.cells.assign(n * n_cols, 0);
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(i % 3 == 0);
        X.cells[i * n_cols] = static_cast<std::uint8_t>(y[i]);
        for (std::size_t c = 1; c < n_cols; ++c)
            X.cells[i * n_cols + c] = static_cast<std::uint8_t>(rng() % 2);
    }
    return X;
}

} // namespace

TEST_CASE("forest learns separable data") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 90, 5, 1);
    TrainedModel model = train_balanced_forest(X, y, {50, 0, 2}, 42);
    for (std::size_t i = 0; i < X.n_rows; ++i) {
        double p = model.predict_proba_dense(X.row(i), X.n_cols);
        CHECK((p >= 0.5) == (y[i] == 1));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("balanced bootstrap draws 2 * minority samples") {
    DenseMatrix X;
    X.n_rows = 100;
    X.n_cols = 3;
    X.cells.assign(300, 0);
    std::vector<int> y(100, 0);
    for (int i = 0; i < 5; ++i) {
        y[i] = 1;
        X.cells[static_cast<std::size_t>(i) * 3] = 1;
    }
    TrainedModel model = train_balanced_forest(X, y, {10, 0, 2}, 7);
    CHECK(model.bootstrap_size == 10); // 5 + 5
    CHECK(model.n_pos == 5);
    CHECK(model.n_neg == 95);
}

TEST_CASE("fixed seed reproduces the forest tree-by-tree") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 60, 6, 2);
    TrainedModel a = train_balanced_forest(X, y, {20, 0, 2}, 99);
    set_worker_count(1);
    TrainedModel b = train_balanced_forest(X, y, {20, 0, 2}, 99);
    set_worker_count(8);
    TrainedModel c = train_balanced_forest(X, y, {20, 0, 2}, 99);
    set_worker_count(0);
    CHECK(serialize_model(a) == serialize_model(b));
    CHECK(serialize_model(a) == serialize_model(c));
    TrainedModel d = train_balanced_forest(X, y, {20, 0, 2}, 100);
    CHECK(serialize_model(a) != serialize_model(d));
}

TEST_CASE("forest probability is the mean of per-tree leaf values") {
    TrainedModel model;
    model.kind = ModelKind::BalancedForest;
    model.n_features = 1;
    DecisionTree t1, t2;
    t1.nodes.push_back({-1, -1, -1, 0.2});
    t2.nodes.push_back({-1, -1, -1, 0.6});
    model.trees = {t1, t2};
    std::uint8_t row[1] = {0};
    CHECK(model.predict_proba_dense(row, 1) == doctest::Approx(0.4));
}

TEST_CASE("single-class input rejected") {
    DenseMatrix X;
    X.n_rows = 4;
    X.n_cols = 2;
    X.cells.assign(8, 0);
    std::vector<int> y(4, 1);
    CHECK_THROWS_AS(train_balanced_forest(X, y, {5, 0, 2}, 1), Error);
    CHECK_THROWS_AS(train_boosted(X, y, {}, 1), Error);
}

TEST_CASE("boosting with 0 stages predicts the base rate") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 30, 3, 3);
    std::size_t n_pos = 0;
    for (int v : y) n_pos += static_cast<std::size_t>(v);
    double base = static_cast<double>(n_pos) / 30.0;
    TrainedModel model = train_boosted(X, y, {0, 6, 0.1, 0.0}, 5);
    for (std::size_t i = 0; i < X.n_rows; ++i)
        CHECK(model.predict_proba_dense(X.row(i), X.n_cols) == doctest::Approx(base));
}

TEST_CASE("boosting fits separable data and loss is non-increasing") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 60, 4, 4);
    TrainedModel model = train_boosted(X, y, {15, 3, 0.3, 0.0}, 8);
    for (std::size_t i = 0; i < X.n_rows; ++i)
        CHECK((model.predict_proba_dense(X.row(i), X.n_cols) >= 0.5) == (y[i] == 1));
    REQUIRE(model.training_loss.size() == 16);
    for (std::size_t s = 1; s < model.training_loss.size(); ++s)
        CHECK(model.training_loss[s] <= model.training_loss[s - 1] + 1e-9);
}

TEST_CASE("non-positive learning rate rejected") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 20, 3, 6);
    CHECK_THROWS_AS(train_boosted(X, y, {10, 3, 0.0, 0.0}, 1), Error);
}

TEST_CASE("MDI importances") {
    SUBCASE("single feature gets normalized importance 100") {
        DenseMatrix X;
        X.n_rows = 20;
        X.n_cols = 1;
        X.cells.resize(20);
        std::vector<int> y(20);
        for (int i = 0; i < 20; ++i) {
            y[static_cast<std::size_t>(i)] = i % 2;
            X.cells[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i % 2);
        }
        TrainedModel model = train_balanced_forest(X, y, {10, 0, 2}, 3);
        FeatureImportances imp = mdi_importances(model);
        CHECK(imp.normalized[0] == doctest::Approx(100.0));
    }
    SUBCASE("informative feature dominates, absent feature scores 0") {
        std::vector<int> y;
        DenseMatrix X = separable_matrix(y, 80, 2, 9);
        // make feature 1 constant so it can never split
        for (std::size_t i = 0; i < X.n_rows; ++i) X.cells[i * 2 + 1] = 0;
        TrainedModel model = train_balanced_forest(X, y, {30, 0, 2}, 4);
        FeatureImportances imp = mdi_importances(model);
        CHECK(imp.raw[0] > imp.raw[1]);
        CHECK(imp.raw[1] == 0.0);
        for (double v : imp.raw) CHECK(v >= 0.0);
    }
}

TEST_CASE("model serialization round-trip") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 40, 4, 10);
    for (bool boosted : {false, true}) {
        TrainedModel model = boosted ? train_boosted(X, y, {5, 3, 0.2, 0.0}, 11)
                                     : train_balanced_forest(X, y, {8, 0, 2}, 11);
        TrainedModel back = deserialize_model(serialize_model(model));
        CHECK(serialize_model(back) == serialize_model(model));
        for (std::size_t i = 0; i < X.n_rows; ++i)
            CHECK(back.predict_proba_dense(X.row(i), X.n_cols) ==
                  model.predict_proba_dense(X.row(i), X.n_cols));
    }
}

TEST_CASE("dimension mismatch rejected at prediction") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 20, 3, 12);
    TrainedModel model = train_balanced_forest(X, y, {5, 0, 2}, 13);
    std::uint8_t row[2] = {0, 1};
    CHECK_THROWS_AS(model.predict_proba_dense(row, 2), Error);
    CHECK_THROWS_AS(model.predict_proba({7}), Error);
}

TEST_CASE("sparse and dense prediction agree") {
    std::vector<int> y;
    DenseMatrix X = separable_matrix(y, 30, 5, 14);
    TrainedModel model = train_balanced_forest(X, y, {15, 0, 2}, 15);
    for (std::size_t i = 0; i < X.n_rows; ++i) {
        std::vector<std::uint32_t> active;
        for (std::uint32_t c = 0; c < 5; ++c)
            if (X.at(i, c)) active.push_back(c);
        CHECK(model.predict_proba(active) == model.predict_proba_dense(X.row(i), X.n_cols));
    }
}
