#include "pu/report_io.hpp"

#include <fstream>
#include <sstream>

namespace pu {

using nlohmann::json;

json stats_to_json(const DatasetStats& stats) {
    return json{{"n_features", stats.n_features},
                {"n_entities", stats.n_entities},
                {"n_positives", stats.n_positives},
                {"sparsity_percent", stats.sparsity_percent}};
}

std::string mode_name(Mode mode) { return mode == Mode::Naive ? "naive" : "pu"; }

std::string classifier_name(ClassifierKind kind) {
    return kind == ClassifierKind::BalancedForest ? "brf" : "gbt";
}

namespace {

json triple_to_json(const MetricsTriple& m) {
    return json{{"f1", m.f1}, {"g_mean", m.g_mean}, {"auc_roc", m.auc_roc}};
}

MetricsTriple triple_from_json(const json& j) {
    return {j.at("f1").get<double>(), j.at("g_mean").get<double>(),
            j.at("auc_roc").get<double>()};
}

} // namespace

json report_to_json(const MetricsReport& report) {
    json per_seed = json::array();
    for (const SeedResult& s : report.per_seed) {
        json folds = json::array();
        for (const FoldResult& f : s.folds) {
            folds.push_back(json{{"metrics", triple_to_json(f.metrics)},
                                 {"chosen_k", f.chosen_k},
                                 {"chosen_t", f.chosen_t},
                                 {"rn_size", f.rn_size},
                                 {"naive_fallback", f.naive_fallback},
                                 {"grid_used", f.grid_used}});
        }
        per_seed.push_back(json{{"seed", s.seed},
                                {"mean", triple_to_json(s.mean)},
                                {"folds", std::move(folds)},
                                {"oof_scores", s.oof_scores}});
    }
    return json{{"n_entities", report.n_entities},
                {"outer_folds", report.outer_folds},
                {"mode", mode_name(report.mode)},
                {"seeds", report.seeds},
                {"per_seed", std::move(per_seed)},
                {"mean", triple_to_json(report.mean)},
                {"std", triple_to_json(report.stddev)}};
}

MetricsReport report_from_json(const json& j) {
    MetricsReport report;
    report.n_entities = j.at("n_entities").get<std::size_t>();
    report.outer_folds = j.at("outer_folds").get<int>();
    report.mode = j.at("mode").get<std::string>() == "naive" ? Mode::Naive : Mode::PU;
    report.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    for (const json& sj : j.at("per_seed")) {
        SeedResult s;
        s.seed = sj.at("seed").get<std::uint64_t>();
        s.mean = triple_from_json(sj.at("mean"));
        s.oof_scores = sj.at("oof_scores").get<std::vector<double>>();
        for (const json& fj : sj.at("folds")) {
            FoldResult f;
            f.metrics = triple_from_json(fj.at("metrics"));
            f.chosen_k = fj.at("chosen_k").get<int>();
            f.chosen_t = fj.at("chosen_t").get<double>();
            f.rn_size = fj.at("rn_size").get<int>();
            f.naive_fallback = fj.at("naive_fallback").get<bool>();
            f.grid_used = fj.at("grid_used").get<bool>();
            s.folds.push_back(std::move(f));
        }
        report.per_seed.push_back(std::move(s));
    }
    report.mean = triple_from_json(j.at("mean"));
    report.stddev = triple_from_json(j.at("std"));
    return report;
}

json comparison_to_json(const ComparisonSummary& summary) {
    auto mc = [](const MetricComparison& m) {
        return json{{"mean_a", m.mean_a},
                    {"mean_b", m.mean_b},
                    {"mean_difference", m.mean_difference},
                    {"p_value", m.p_value}};
    };
    return json{{"f1", mc(summary.f1)}, {"g_mean", mc(summary.g_mean)},
                {"auc_roc", mc(summary.auc_roc)}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace pu
