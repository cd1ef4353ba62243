#pragma once

#include <string>

#include <json.hpp>

#include "pu/dataset.hpp"
#include "pu/pipeline.hpp"
#include "pu/ranking.hpp"

namespace pu {

nlohmann::json stats_to_json(const DatasetStats& stats);
nlohmann::json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);
nlohmann::json comparison_to_json(const ComparisonSummary& summary);

std::string mode_name(Mode mode);
std::string classifier_name(ClassifierKind kind);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace pu
