#include "pu/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pu/parallel.hpp"
#include "pu/random.hpp"

namespace pu {

namespace {

double gini(double n_pos, double n_total) {
    if (n_total <= 0.0) return 0.0;
    double q = n_pos / n_total;
    return 2.0 * q * (1.0 - q);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_two_classes(const std::vector<int>& y) {
    bool has_pos = false, has_neg = false;
    for (int v : y) (v ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw Error(ErrorCode::SingleClassInput, "training labels contain a single class");
}

// Classification tree on binary features; Gini criterion; leaf value is the
// positive-class fraction of samples at the leaf.
class ClassTreeBuilder {
public:
    ClassTreeBuilder(const DenseMatrix& X, const std::vector<int>& y, int max_depth,
                     int min_samples_split, std::size_t mtry, std::mt19937_64& rng,
                     std::vector<double>& importance, double root_size)
        : X_(X), y_(y), max_depth_(max_depth), min_split_(min_samples_split), mtry_(mtry),
          rng_(rng), importance_(importance), root_size_(root_size),
          feature_pool_(X.n_cols) {
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0u);
    }

    DecisionTree build(std::vector<std::uint32_t> samples) {
        DecisionTree tree;
        grow(tree, std::move(samples), 0);
        return tree;
    }

private:
    std::int32_t grow(DecisionTree& tree, std::vector<std::uint32_t> samples, int depth) {
        std::size_t n = samples.size();
        std::size_t n_pos = 0;
        for (std::uint32_t s : samples) n_pos += static_cast<std::size_t>(y_[s]);

        std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({});
        double frac = static_cast<double>(n_pos) / static_cast<double>(n);

        bool stop = n_pos == 0 || n_pos == n || n < static_cast<std::size_t>(min_split_) ||
                    (max_depth_ > 0 && depth >= max_depth_);
        if (stop) {
            tree.nodes[id].value = frac;
            return id;
        }

        double parent_gini = gini(static_cast<double>(n_pos), static_cast<double>(n));
        double best_gain = 0.0;
        std::int32_t best_feature = -1;
        std::size_t best_n1 = 0;

        // mtry candidate features without replacement
        for (std::size_t i = 0; i < mtry_; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, feature_pool_.size() - 1);
            std::swap(feature_pool_[i], feature_pool_[pick(rng_)]);
            std::uint32_t f = feature_pool_[i];

            std::size_t n1 = 0, pos1 = 0;
            for (std::uint32_t s : samples) {
                if (X_.at(s, f)) {
                    ++n1;
                    pos1 += static_cast<std::size_t>(y_[s]);
                }
            }
            if (n1 == 0 || n1 == n) continue;
            std::size_t n0 = n - n1, pos0 = n_pos - pos1;
            double child = (static_cast<double>(n0) * gini(static_cast<double>(pos0),
                                                           static_cast<double>(n0)) +
                            static_cast<double>(n1) * gini(static_cast<double>(pos1),
                                                           static_cast<double>(n1))) /
                           static_cast<double>(n);
            double gain = parent_gini - child;
            if (gain > best_gain + 1e-15) {
                best_gain = gain;
                best_feature = static_cast<std::int32_t>(f);
                best_n1 = n1;
            }
        }

        if (best_feature < 0 || best_gain <= 0.0) {
            tree.nodes[id].value = frac;
            return id;
        }

        importance_[static_cast<std::size_t>(best_feature)] +=
            (static_cast<double>(n) / root_size_) * best_gain;

        std::vector<std::uint32_t> left, right;
        left.reserve(n - best_n1);
        right.reserve(best_n1);
        for (std::uint32_t s : samples) {
            if (X_.at(s, static_cast<std::uint32_t>(best_feature)))
                right.push_back(s);
            else
                left.push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        std::int32_t l = grow(tree, std::move(left), depth + 1);
        std::int32_t r = grow(tree, std::move(right), depth + 1);
        tree.nodes[id].feature = best_feature;
        tree.nodes[id].left = l;
        tree.nodes[id].right = r;
        return id;
    }

    const DenseMatrix& X_;
    const std::vector<int>& y_;
    int max_depth_;
    int min_split_;
    std::size_t mtry_;
    std::mt19937_64& rng_;
    std::vector<double>& importance_;
    double root_size_;
    std::vector<std::uint32_t> feature_pool_;
};

// Weighted regression tree on the boosting residuals; SSE criterion; leaf
// holds a Newton step sum(w*g) / sum(w*h).
class RegTreeBuilder {
public:
    RegTreeBuilder(const DenseMatrix& X, const std::vector<double>& grad,
                   const std::vector<double>& hess, const std::vector<double>& w, int max_depth,
                   std::vector<double>& importance, double root_weight)
        : X_(X), g_(grad), h_(hess), w_(w), max_depth_(max_depth), importance_(importance),
          root_weight_(root_weight) {}

    DecisionTree build(std::vector<std::uint32_t> samples) {
        DecisionTree tree;
        grow(tree, std::move(samples), 0);
        return tree;
    }

private:
    std::int32_t grow(DecisionTree& tree, std::vector<std::uint32_t> samples, int depth) {
        double sw = 0.0, swg = 0.0, swg2 = 0.0, swh = 0.0;
        for (std::uint32_t s : samples) {
            sw += w_[s];
            swg += w_[s] * g_[s];
            swg2 += w_[s] * g_[s] * g_[s];
            swh += w_[s] * h_[s];
        }

        std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back({});
        double leaf = swg / (swh + 1e-12);

        if (samples.size() < 2 || (max_depth_ > 0 && depth >= max_depth_)) {
            tree.nodes[id].value = leaf;
            return id;
        }

        double sse_parent = swg2 - swg * swg / sw;
        double best_gain = 1e-12;
        std::int32_t best_feature = -1;

        for (std::size_t f = 0; f < X_.n_cols; ++f) {
            double sw1 = 0.0, swg1 = 0.0, swg21 = 0.0;
            std::size_t n1 = 0;
            for (std::uint32_t s : samples) {
                if (X_.at(s, f)) {
                    ++n1;
                    sw1 += w_[s];
                    swg1 += w_[s] * g_[s];
                    swg21 += w_[s] * g_[s] * g_[s];
                }
            }
            if (n1 == 0 || n1 == samples.size()) continue;
            double sw0 = sw - sw1, swg0 = swg - swg1, swg20 = swg2 - swg21;
            double sse = (swg21 - swg1 * swg1 / sw1) + (swg20 - swg0 * swg0 / sw0);
            double gain = sse_parent - sse;
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = static_cast<std::int32_t>(f);
            }
        }

        if (best_feature < 0) {
            tree.nodes[id].value = leaf;
            return id;
        }

        importance_[static_cast<std::size_t>(best_feature)] += best_gain / root_weight_;

        std::vector<std::uint32_t> left, right;
        for (std::uint32_t s : samples) {
            if (X_.at(s, static_cast<std::uint32_t>(best_feature)))
                right.push_back(s);
            else
                left.push_back(s);
        }
        samples.clear();
        samples.shrink_to_fit();

        std::int32_t l = grow(tree, std::move(left), depth + 1);
        std::int32_t r = grow(tree, std::move(right), depth + 1);
        tree.nodes[id].feature = best_feature;
        tree.nodes[id].left = l;
        tree.nodes[id].right = r;
        return id;
    }

    const DenseMatrix& X_;
    const std::vector<double>& g_;
    const std::vector<double>& h_;
    const std::vector<double>& w_;
    int max_depth_;
    std::vector<double>& importance_;
    double root_weight_;
};

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

double DecisionTree::predict_dense(const std::uint8_t* row) const {
    std::int32_t id = 0;
    while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        id = row[static_cast<std::size_t>(n.feature)] ? n.right : n.left;
    }
    return nodes[static_cast<std::size_t>(id)].value;
}

double DecisionTree::predict_sparse(const std::vector<std::uint32_t>& active) const {
    std::int32_t id = 0;
    while (nodes[static_cast<std::size_t>(id)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        bool on = std::binary_search(active.begin(), active.end(),
                                     static_cast<std::uint32_t>(n.feature));
        id = on ? n.right : n.left;
    }
    return nodes[static_cast<std::size_t>(id)].value;
}

DenseMatrix densify(const SparseBinaryMatrix& m, std::span<const std::uint32_t> row_indices) {
    DenseMatrix out;
    out.n_rows = row_indices.size();
    out.n_cols = m.n_cols;
    out.cells.assign(out.n_rows * out.n_cols, 0);
    for (std::size_t r = 0; r < row_indices.size(); ++r)
        for (std::uint32_t c : m.rows[row_indices[r]]) out.cells[r * out.n_cols + c] = 1;
    return out;
}

DenseMatrix densify(const SparseBinaryMatrix& m) {
    std::vector<std::uint32_t> all(m.n_rows);
    std::iota(all.begin(), all.end(), 0u);
    return densify(m, all);
}

double TrainedModel::predict_proba_dense(const std::uint8_t* row, std::size_t row_len) const {
    if (row_len != n_features)
        throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(row_len) +
                                                      " features, model expects " +
                                                      std::to_string(n_features));
    if (kind == ModelKind::BalancedForest) {
        double sum = 0.0;
        for (const auto& tree : trees) sum += tree.predict_dense(row);
        return trees.empty() ? 0.0 : sum / static_cast<double>(trees.size());
    }
    double f = base_score;
    for (const auto& tree : trees) f += tree.predict_dense(row);
    return sigmoid(f);
}

double TrainedModel::predict_proba(const std::vector<std::uint32_t>& active) const {
    if (!active.empty() && active.back() >= n_features)
        throw Error(ErrorCode::DimensionMismatch,
                    "active feature " + std::to_string(active.back()) + " out of range");
    if (kind == ModelKind::BalancedForest) {
        double sum = 0.0;
        for (const auto& tree : trees) sum += tree.predict_sparse(active);
        return trees.empty() ? 0.0 : sum / static_cast<double>(trees.size());
    }
    double f = base_score;
    for (const auto& tree : trees) f += tree.predict_sparse(active);
    return sigmoid(f);
}

TrainedModel train_balanced_forest(const DenseMatrix& X, const std::vector<int>& y,
                                   const ForestParams& hp, std::uint64_t seed) {
    if (X.n_rows != y.size())
        throw Error(ErrorCode::DimensionMismatch, "X rows and y length differ");
    check_two_classes(y);
    if (hp.n_trees < 1) throw Error(ErrorCode::InvalidConfig, "n_trees must be >= 1");

    std::vector<std::uint32_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < y.size(); ++i)
        (y[i] ? pos_idx : neg_idx).push_back(static_cast<std::uint32_t>(i));

    const std::vector<std::uint32_t>& minority = pos_idx.size() <= neg_idx.size() ? pos_idx : neg_idx;
    const std::vector<std::uint32_t>& majority = pos_idx.size() <= neg_idx.size() ? neg_idx : pos_idx;
    std::size_t m = minority.size();

    std::size_t mtry = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(X.n_cols))));
    if (mtry < 1) mtry = 1;
    if (mtry > X.n_cols) mtry = X.n_cols;

    TrainedModel model;
    model.kind = ModelKind::BalancedForest;
    model.n_features = X.n_cols;
    model.n_pos = pos_idx.size();
    model.n_neg = neg_idx.size();
    model.bootstrap_size = 2 * m;
    model.seed = seed;
    model.trees.resize(static_cast<std::size_t>(hp.n_trees));

    std::size_t n_trees = static_cast<std::size_t>(hp.n_trees);
    std::vector<std::vector<double>> per_tree_importance(n_trees);

    parallel_for(n_trees, [&](std::size_t t) {
        std::mt19937_64 rng = make_rng(derive_seed(seed, 0xF0u, t));
        std::vector<std::uint32_t> samples;
        samples.reserve(2 * m);
        std::uniform_int_distribution<std::size_t> dmin(0, minority.size() - 1);
        std::uniform_int_distribution<std::size_t> dmaj(0, majority.size() - 1);
        for (std::size_t i = 0; i < m; ++i) samples.push_back(minority[dmin(rng)]);
        for (std::size_t i = 0; i < m; ++i) samples.push_back(majority[dmaj(rng)]);

        per_tree_importance[t].assign(X.n_cols, 0.0);
        ClassTreeBuilder builder(X, y, hp.max_depth, hp.min_samples_split, mtry, rng,
                                 per_tree_importance[t], static_cast<double>(samples.size()));
        model.trees[t] = builder.build(std::move(samples));
    });

    model.mdi_sum.assign(X.n_cols, 0.0);
    for (std::size_t t = 0; t < n_trees; ++t)
        for (std::size_t f = 0; f < X.n_cols; ++f) model.mdi_sum[f] += per_tree_importance[t][f];
    return model;
}

TrainedModel train_boosted(const DenseMatrix& X, const std::vector<int>& y, const BoostParams& hp,
                           std::uint64_t seed) {
    if (X.n_rows != y.size())
        throw Error(ErrorCode::DimensionMismatch, "X rows and y length differ");
    check_two_classes(y);
    if (hp.learning_rate <= 0.0)
        throw Error(ErrorCode::NonPositiveLearningRate,
                    "learning rate must be > 0, got " + std::to_string(hp.learning_rate));
    if (hp.n_stages < 0) throw Error(ErrorCode::InvalidConfig, "n_stages must be >= 0");

    std::size_t n = y.size();
    std::size_t n_pos = 0;
    for (int v : y) n_pos += static_cast<std::size_t>(v);
    std::size_t n_neg = n - n_pos;

    double pos_w = hp.positive_weight > 0.0
                       ? hp.positive_weight
                       : static_cast<double>(n_neg) / static_cast<double>(n_pos);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = y[i] ? pos_w : 1.0;
    double root_weight = 0.0;
    for (double v : w) root_weight += v;

    double p = static_cast<double>(n_pos) / static_cast<double>(n);

    TrainedModel model;
    model.kind = ModelKind::BoostedTrees;
    model.n_features = X.n_cols;
    model.n_pos = n_pos;
    model.n_neg = n_neg;
    model.seed = seed;
    model.base_score = std::log(p / (1.0 - p));
    model.mdi_sum.assign(X.n_cols, 0.0);

    std::vector<double> f(n, model.base_score);
    std::vector<double> grad(n), hess(n);
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);

    auto loss = [&] {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double pi = sigmoid(f[i]);
            total -= w[i] * (y[i] ? std::log(std::max(pi, 1e-15))
                                  : std::log(std::max(1.0 - pi, 1e-15)));
        }
        return total / root_weight;
    };
    model.training_loss.push_back(loss());

    for (int stage = 0; stage < hp.n_stages; ++stage) {
        for (std::size_t i = 0; i < n; ++i) {
            double pi = sigmoid(f[i]);
            grad[i] = static_cast<double>(y[i]) - pi;
            hess[i] = std::max(pi * (1.0 - pi), 1e-12);
        }
        RegTreeBuilder builder(X, grad, hess, w, hp.max_depth, model.mdi_sum, root_weight);
        DecisionTree tree = builder.build(all);
        for (auto& node : tree.nodes)
            if (node.feature < 0) node.value *= hp.learning_rate;
        for (std::size_t i = 0; i < n; ++i) f[i] += tree.predict_dense(X.row(i));
        model.trees.push_back(std::move(tree));
        model.training_loss.push_back(loss());
    }
    return model;
}

FeatureImportances mdi_importances(const TrainedModel& model) {
    FeatureImportances imp;
    double n_trees = model.kind == ModelKind::BalancedForest
                         ? static_cast<double>(model.trees.size())
                         : std::max<double>(1.0, static_cast<double>(model.trees.size()));
    imp.raw.resize(model.mdi_sum.size());
    for (std::size_t i = 0; i < imp.raw.size(); ++i) imp.raw[i] = model.mdi_sum[i] / n_trees;
    double max = imp.raw.empty() ? 0.0 : *std::max_element(imp.raw.begin(), imp.raw.end());
    imp.normalized.assign(imp.raw.size(), 0.0);
    if (max > 0.0)
        for (std::size_t i = 0; i < imp.raw.size(); ++i)
            imp.normalized[i] = 100.0 * imp.raw[i] / max;
    return imp;
}

std::string serialize_model(const TrainedModel& model) {
    std::string out = "PUMODEL v1\n";
    out += "kind ";
    out += model.kind == ModelKind::BalancedForest ? "forest" : "boosted";
    out += "\nn_features " + std::to_string(model.n_features);
    out += "\nn_pos " + std::to_string(model.n_pos);
    out += "\nn_neg " + std::to_string(model.n_neg);
    out += "\nbootstrap_size " + std::to_string(model.bootstrap_size);
    out += "\nseed " + std::to_string(model.seed);
    out += "\nbase_score ";
    append_double(out, model.base_score);
    out += "\nmdi " + std::to_string(model.mdi_sum.size());
    for (double v : model.mdi_sum) {
        out += ' ';
        append_double(out, v);
    }
    out += "\ntrees " + std::to_string(model.trees.size()) + "\n";
    for (const auto& tree : model.trees) {
        out += "tree " + std::to_string(tree.nodes.size()) + "\n";
        for (const auto& node : tree.nodes) {
            out += std::to_string(node.feature) + " " + std::to_string(node.left) + " " +
                   std::to_string(node.right) + " ";
            append_double(out, node.value);
            out += "\n";
        }
    }
    return out;
}

TrainedModel deserialize_model(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    auto expect = [&](const char* token) {
        in >> word;
        if (word != token) throw Error(ErrorCode::MalformedRow, "bad model file near '" + word + "'");
    };
    expect("PUMODEL");
    expect("v1");
    TrainedModel model;
    expect("kind");
    in >> word;
    model.kind = word == "forest" ? ModelKind::BalancedForest : ModelKind::BoostedTrees;
    expect("n_features");
    in >> model.n_features;
    expect("n_pos");
    in >> model.n_pos;
    expect("n_neg");
    in >> model.n_neg;
    expect("bootstrap_size");
    in >> model.bootstrap_size;
    expect("seed");
    in >> model.seed;
    expect("base_score");
    in >> model.base_score;
    expect("mdi");
    std::size_t n_mdi = 0;
    in >> n_mdi;
    model.mdi_sum.resize(n_mdi);
    for (double& v : model.mdi_sum) in >> v;
    expect("trees");
    std::size_t n_trees = 0;
    in >> n_trees;
    model.trees.resize(n_trees);
    for (auto& tree : model.trees) {
        expect("tree");
        std::size_t n_nodes = 0;
        in >> n_nodes;
        tree.nodes.resize(n_nodes);
        for (auto& node : tree.nodes) in >> node.feature >> node.left >> node.right >> node.value;
    }
    if (!in) throw Error(ErrorCode::MalformedRow, "truncated model file");
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << serialize_model(model);
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

} // namespace pu
