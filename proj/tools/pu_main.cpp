// pu: PU-learning gene prioritization toolkit CLI.
// Subcommands: stats | rn | eval | rank | synth | compare.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pu/dataset.hpp"
#include "pu/ensemble.hpp"
#include "pu/parallel.hpp"
#include "pu/pipeline.hpp"
#include "pu/ranking.hpp"
#include "pu/report_io.hpp"
#include "pu/rn_select.hpp"
#include "pu/synth.hpp"

using nlohmann::json;

namespace {

struct FormatOpt {
    std::string value = "auto";
};

pu::PUDataset load_with_format(const std::string& path, const std::string& format) {
    pu::FileFormat fmt;
    if (format == "dense")
        fmt = pu::FileFormat::DenseCsv;
    else if (format == "sparse")
        fmt = pu::FileFormat::SparseList;
    else
        fmt = pu::detect_format(path);
    return pu::load_dataset(path, fmt);
}

double parse_fraction(const std::string& s) {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

std::vector<std::pair<int, double>> parse_grid(const std::string& spec) {
    std::vector<std::pair<int, double>> grid;
    std::size_t start = 0;
    while (start < spec.size()) {
        std::size_t comma = spec.find(',', start);
        std::string item = spec.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw pu::Error(pu::ErrorCode::UsageError, "grid item '" + item + "' is not k:t");
        grid.emplace_back(std::stoi(item.substr(0, colon)), parse_fraction(item.substr(colon + 1)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (grid.empty()) throw pu::Error(pu::ErrorCode::UsageError, "empty grid");
    return grid;
}

json grid_to_json(const std::vector<std::pair<int, double>>& grid) {
    json out = json::array();
    for (const auto& [k, t] : grid) out.push_back(json{{"k", k}, {"t", t}});
    return out;
}

// Shared classifier/CV flags for eval and rank.
struct TrainOpts {
    std::string mode = "pu";
    std::string classifier = "brf";
    std::string grid_spec;
    std::vector<std::uint64_t> seeds;
    int outer = 10;
    int inner = 5;
    int trees = 500;
    int max_depth = 0;
    int min_split = 2;
    int stages = 200;
    int boost_depth = 6;
    double lr = 0.1;
    double pos_weight = 0.0;
    std::int64_t n_f = -1; // -1 = auto
    std::string inner_metric = "f1";
    bool no_stratify = false;

    void attach(CLI::App* cmd, bool with_folds) {
        cmd->add_option("--mode", mode, "naive or pu")->check(CLI::IsMember({"naive", "pu"}));
        cmd->add_option("--classifier", classifier, "brf or gbt")
            ->check(CLI::IsMember({"brf", "gbt"}));
        cmd->add_option("--grid", grid_spec, "PU grid as k:t,k:t,... (t accepts a/b)");
        cmd->add_option("--seeds", seeds, "random seeds")->delimiter(',');
        if (with_folds) {
            cmd->add_option("--outer", outer, "outer folds");
            cmd->add_option("--inner", inner, "inner folds");
        }
        cmd->add_option("--trees", trees, "forest size");
        cmd->add_option("--max-depth", max_depth, "forest depth limit (0 = unlimited)");
        cmd->add_option("--min-split", min_split, "min samples to split");
        cmd->add_option("--stages", stages, "boosting stages");
        cmd->add_option("--boost-depth", boost_depth, "boosting tree depth");
        cmd->add_option("--lr", lr, "boosting learning rate");
        cmd->add_option("--pos-weight", pos_weight, "boosting positive weight (0 = n_neg/n_pos)");
        cmd->add_option("--n-f", n_f, "KNN feature-filter size (-1 = auto)");
        cmd->add_option("--inner-metric", inner_metric, "inner selection metric")
            ->check(CLI::IsMember({"f1", "auc"}));
        cmd->add_flag("--no-stratify", no_stratify, "disable stratified folds");
    }

    pu::CVConfig to_config() const {
        pu::CVConfig cfg;
        cfg.mode = mode == "naive" ? pu::Mode::Naive : pu::Mode::PU;
        cfg.classifier = classifier == "gbt" ? pu::ClassifierKind::BoostedTrees
                                             : pu::ClassifierKind::BalancedForest;
        if (!grid_spec.empty()) cfg.pu_grid = parse_grid(grid_spec);
        if (!seeds.empty()) cfg.seeds = seeds;
        cfg.outer_folds = outer;
        cfg.inner_folds = inner;
        cfg.forest = {trees, max_depth, min_split};
        cfg.boost = {stages, boost_depth, lr, pos_weight};
        if (n_f >= 0) cfg.n_f = static_cast<std::uint32_t>(n_f);
        cfg.inner_metric = inner_metric == "auc" ? pu::InnerMetric::AUC : pu::InnerMetric::F1;
        cfg.stratified = !no_stratify;
        return cfg;
    }

    json manifest(const std::string& command, const std::string& dataset,
                  const pu::CVConfig& cfg) const {
        return json{{"command", command},
                    {"dataset", dataset},
                    {"mode", pu::mode_name(cfg.mode)},
                    {"classifier", pu::classifier_name(cfg.classifier)},
                    {"outer_folds", cfg.outer_folds},
                    {"inner_folds", cfg.inner_folds},
                    {"pu_grid", grid_to_json(cfg.pu_grid)},
                    {"seeds", cfg.seeds},
                    {"n_f", cfg.n_f ? json(*cfg.n_f) : json("auto")},
                    {"inner_metric", cfg.inner_metric == pu::InnerMetric::AUC ? "auc" : "f1"},
                    {"stratified", cfg.stratified},
                    {"forest", json{{"n_trees", cfg.forest.n_trees},
                                    {"max_depth", cfg.forest.max_depth},
                                    {"min_samples_split", cfg.forest.min_samples_split}}},
                    {"boost", json{{"n_stages", cfg.boost.n_stages},
                                   {"max_depth", cfg.boost.max_depth},
                                   {"learning_rate", cfg.boost.learning_rate},
                                   {"positive_weight", cfg.boost.positive_weight}}}};
    }
};

void emit(const json& payload, const std::string& out_path) {
    std::string text = payload.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        pu::write_text_file(out_path, text);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int run(int argc, char** argv) {
    CLI::App app{"PU-learning gene prioritization toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; CLI flags override");
    int workers = 0;
    app.add_option("--workers", workers, "worker threads (default: PU_WORKERS env or hardware)");

    // --- stats ---
    auto* stats_cmd = app.add_subcommand("stats", "dataset statistics as JSON");
    std::string stats_path, stats_out;
    FormatOpt stats_fmt;
    stats_cmd->add_option("dataset", stats_path, "dataset file")->required();
    stats_cmd->add_option("--format", stats_fmt.value, "auto|dense|sparse")
        ->check(CLI::IsMember({"auto", "dense", "sparse"}));
    stats_cmd->add_option("--out", stats_out, "write JSON here instead of stdout");

    // --- rn ---
    auto* rn_cmd = app.add_subcommand("rn", "reliable-negative selection");
    std::string rn_path, rn_trace, rn_out;
    FormatOpt rn_fmt;
    int rn_k = 3;
    std::string rn_t = "1";
    std::int64_t rn_nf = -1;
    std::string rn_classifier = "brf";
    int rn_trees = 100;
    std::uint64_t rn_seed = 42;
    rn_cmd->add_option("dataset", rn_path, "dataset file")->required();
    rn_cmd->add_option("--k", rn_k, "neighbour count")->required();
    rn_cmd->add_option("--t", rn_t, "threshold in [0.5,1], accepts a/b")->required();
    rn_cmd->add_option("--n-f", rn_nf, "feature-filter size (-1 = all features)");
    rn_cmd->add_option("--classifier", rn_classifier, "filter model: brf or gbt")
        ->check(CLI::IsMember({"brf", "gbt"}));
    rn_cmd->add_option("--trees", rn_trees, "filter model forest size");
    rn_cmd->add_option("--seed", rn_seed, "filter model seed");
    rn_cmd->add_option("--trace", rn_trace, "per-entity trace CSV path");
    rn_cmd->add_option("--format", rn_fmt.value, "auto|dense|sparse")
        ->check(CLI::IsMember({"auto", "dense", "sparse"}));
    rn_cmd->add_option("--out", rn_out, "write JSON here instead of stdout");

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "nested cross-validation report");
    std::string eval_path, eval_out;
    FormatOpt eval_fmt;
    TrainOpts eval_opts;
    eval_cmd->add_option("dataset", eval_path, "dataset file")->required();
    eval_opts.attach(eval_cmd, true);
    eval_cmd->add_option("--format", eval_fmt.value, "auto|dense|sparse")
        ->check(CLI::IsMember({"auto", "dense", "sparse"}));
    eval_cmd->add_option("--out", eval_out, "report JSON path (default stdout)");

    // --- rank ---
    auto* rank_cmd = app.add_subcommand("rank", "candidate ranking CSV");
    std::string rank_path, rank_out = "ranking.csv";
    FormatOpt rank_fmt;
    TrainOpts rank_opts;
    int rank_k = 0;
    std::string rank_t;
    std::int64_t rank_top = -1;
    rank_cmd->add_option("dataset", rank_path, "dataset file")->required();
    rank_opts.attach(rank_cmd, false);
    rank_cmd->add_option("--k", rank_k, "fixed neighbour count (with --t)");
    rank_cmd->add_option("--t", rank_t, "fixed threshold (with --k)");
    rank_cmd->add_option("--top", rank_top, "keep top N candidates (-1 = all)");
    rank_cmd->add_option("--format", rank_fmt.value, "auto|dense|sparse")
        ->check(CLI::IsMember({"auto", "dense", "sparse"}));
    rank_cmd->add_option("--out", rank_out, "ranking CSV path");

    // --- synth ---
    auto* synth_cmd = app.add_subcommand("synth", "synthetic SCAR benchmark dataset");
    pu::SynthConfig synth_cfg;
    std::string synth_out = "synth.csv", synth_truth, synth_format = "dense";
    synth_cmd->add_option("--n", synth_cfg.n_entities, "entity count");
    synth_cmd->add_option("--features", synth_cfg.n_features, "feature count");
    synth_cmd->add_option("--pos-frac", synth_cfg.positive_fraction, "true positive fraction");
    synth_cmd->add_option("--c", synth_cfg.label_frequency, "label frequency");
    synth_cmd->add_option("--sep", synth_cfg.cluster_separation, "class activation-rate gap");
    synth_cmd->add_option("--noise", synth_cfg.noise_rate, "per-cell flip probability");
    synth_cmd->add_option("--seed", synth_cfg.seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "dataset CSV path");
    synth_cmd->add_option("--truth", synth_truth, "ground-truth CSV path (withheld from training)");
    synth_cmd->add_option("--format", synth_format, "dense|sparse")
        ->check(CLI::IsMember({"dense", "sparse"}));

    // --- compare ---
    auto* compare_cmd = app.add_subcommand("compare", "paired t-test between two eval reports");
    std::string cmp_a, cmp_b, cmp_out;
    compare_cmd->add_option("report_a", cmp_a, "first report JSON")->required();
    compare_cmd->add_option("report_b", cmp_b, "second report JSON")->required();
    compare_cmd->add_option("--out", cmp_out, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);
    if (workers > 0) pu::set_worker_count(workers);

    if (*stats_cmd) {
        pu::PUDataset ds = load_with_format(stats_path, stats_fmt.value);
        json out{{"manifest",
                  json{{"command", "stats"}, {"dataset", stats_path}, {"format", stats_fmt.value}}},
                 {"stats", pu::stats_to_json(pu::compute_stats(ds))}};
        emit(out, stats_out);
        return 0;
    }

    if (*rn_cmd) {
        pu::PUDataset ds = load_with_format(rn_path, rn_fmt.value);
        double t = parse_fraction(rn_t);
        pu::FeatureSubset filter = pu::FeatureSubset::all();
        if (rn_nf >= 0 && static_cast<std::size_t>(rn_nf) < ds.features.n_cols) {
            pu::DenseMatrix X = pu::densify(ds.features);
            std::vector<int> y(ds.n_entities());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = ds.labels[i] == pu::PULabel::Positive ? 1 : 0;
            pu::TrainedModel filter_model =
                rn_classifier == "gbt"
                    ? pu::train_boosted(X, y, {}, rn_seed)
                    : pu::train_balanced_forest(X, y, {rn_trees, 0, 2}, rn_seed);
            filter = pu::knn_feature_filter(pu::mdi_importances(filter_model).raw,
                                            static_cast<std::uint32_t>(rn_nf),
                                            static_cast<std::uint32_t>(ds.features.n_cols));
        }
        pu::SimilarityMatrix sim = pu::pairwise_matrix(ds.features, filter);
        auto [p, u] = pu::partition_pu(ds);
        pu::RNResult rn = pu::reliable_negatives(p, u, sim, {rn_k, t});

        if (!rn_trace.empty()) {
            std::string csv = "id,neighbour_ids,unlabelled_fraction,nearest_label,admitted\n";
            for (const pu::RNTraceEntry& e : rn.trace) {
                csv += ds.ids[e.index] + ",";
                for (std::size_t i = 0; i < e.neighbours.size(); ++i)
                    csv += (i ? ";" : "") + ds.ids[e.neighbours[i]];
                csv += "," + format_double(e.unlabelled_fraction);
                csv += std::string(",") + (e.nearest_unlabelled ? "U" : "P");
                csv += std::string(",") + (e.admitted ? "1" : "0") + "\n";
            }
            pu::write_text_file(rn_trace, csv);
        }

        std::vector<std::string> rn_ids;
        for (std::uint32_t r : rn.reliable_negatives) rn_ids.push_back(ds.ids[r]);
        json out{{"manifest", json{{"command", "rn"},
                                   {"dataset", rn_path},
                                   {"k", rn_k},
                                   {"t", t},
                                   {"n_f", rn_nf < 0 ? json("all") : json(rn_nf)},
                                   {"seed", rn_seed}}},
                 {"reliable_negatives", rn_ids}};
        emit(out, rn_out);
        return 0;
    }

    if (*eval_cmd) {
        pu::PUDataset ds = load_with_format(eval_path, eval_fmt.value);
        pu::CVConfig cfg = eval_opts.to_config();
        pu::MetricsReport report = pu::nested_cv(ds, cfg);
        json out{{"manifest", eval_opts.manifest("eval", eval_path, cfg)},
                 {"report", pu::report_to_json(report)}};
        emit(out, eval_out);
        return 0;
    }

    if (*rank_cmd) {
        pu::PUDataset ds = load_with_format(rank_path, rank_fmt.value);
        pu::CVConfig cfg = rank_opts.to_config();
        if (rank_k > 0 && !rank_t.empty())
            cfg.pu_grid = {{rank_k, parse_fraction(rank_t)}};
        std::optional<std::size_t> top;
        if (rank_top >= 0) top = static_cast<std::size_t>(rank_top);
        pu::CandidateRanking ranking = pu::rank_candidates(ds, cfg, top);

        std::string csv = "rank,id,mean_probability";
        for (std::uint64_t s : ranking.seeds) csv += ",p_seed_" + std::to_string(s);
        csv += "\n";
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            const pu::RankEntry& e = ranking.entries[i];
            csv += std::to_string(i + 1) + "," + e.id + "," + format_double(e.mean_probability);
            for (double v : e.per_seed) csv += "," + format_double(v);
            csv += "\n";
        }
        pu::write_text_file(rank_out, csv);
        json manifest = rank_opts.manifest("rank", rank_path, cfg);
        manifest["top"] = rank_top < 0 ? json("all") : json(rank_top);
        manifest["out"] = rank_out;
        pu::write_text_file(rank_out + ".manifest.json",
                            json{{"manifest", manifest}}.dump(2) + "\n");
        return 0;
    }

    if (*synth_cmd) {
        pu::SynthDataset synth = pu::generate(synth_cfg);
        pu::write_dataset(synth.pu_view, synth_out,
                          synth_format == "sparse" ? pu::FileFormat::SparseList
                                                   : pu::FileFormat::DenseCsv);
        if (!synth_truth.empty()) pu::write_truth(synth, synth_truth);
        json manifest{{"command", "synth"},
                      {"n", synth_cfg.n_entities},
                      {"features", synth_cfg.n_features},
                      {"pos_frac", synth_cfg.positive_fraction},
                      {"c", synth_cfg.label_frequency},
                      {"sep", synth_cfg.cluster_separation},
                      {"noise", synth_cfg.noise_rate},
                      {"seed", synth_cfg.seed},
                      {"out", synth_out},
                      {"truth", synth_truth}};
        pu::write_text_file(synth_out + ".manifest.json",
                            json{{"manifest", manifest}}.dump(2) + "\n");
        return 0;
    }

    if (*compare_cmd) {
        json ja = json::parse(pu::read_text_file(cmp_a));
        json jb = json::parse(pu::read_text_file(cmp_b));
        pu::MetricsReport ra = pu::report_from_json(ja.at("report"));
        pu::MetricsReport rb = pu::report_from_json(jb.at("report"));
        pu::ComparisonSummary summary = pu::compare_methods(ra, rb);
        json out{{"manifest", json{{"command", "compare"}, {"report_a", cmp_a}, {"report_b", cmp_b}}},
                 {"comparison", pu::comparison_to_json(summary)}};
        emit(out, cmp_out);
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const pu::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
