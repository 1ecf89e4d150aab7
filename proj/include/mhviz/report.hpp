#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mhviz/inference.hpp"
#include "mhviz/measures.hpp"
#include "mhviz/simulation.hpp"
#include "mhviz/table.hpp"
#include "mhviz/viz_svg.hpp"

namespace mhviz {

inline constexpr int kSchemaVersion = 1;

// Machine-readable result of `mhviz analyze`. Keys are lowerCamelCase.
struct AnalysisReport {
    int schema_version = kSchemaVersion;
    std::size_t dimension = 0;
    std::optional<std::int64_t> n;  // empty for probability input
    std::string input_kind;          // "counts" or "probabilities"
    Estimator estimator;             // used for the point measures
    double delta = 0.0;
    std::vector<LevelSummary> marginal;
    std::vector<SubMeasure> subs;
    double gamma_total = 0.0;
    std::map<double, double> phi;
    double psi = 0.0;
    std::pair<double, double> tau;
    std::optional<InferenceResult> inference;
    std::vector<std::string> warnings;
};

AnalysisReport make_report(const MarginalSummary& s, const MeasureReport& m);

nlohmann::json to_json(const AnalysisReport& r);
AnalysisReport analysis_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const InferenceResult& r);
nlohmann::json to_json(const SimulationResult& r);

// {"schemaVersion", "scenario": {...}, "results": [...]}; the worker count is deliberately absent.
nlohmann::json simulation_document(const SimulationScenario& base, const std::vector<SimulationResult>& results);

// Missing keys keep their defaults: canvasPx, pointMaxRadius, fontSize, red, blue, dash.
VizStyle style_from_json(const nlohmann::json& j);

}  // namespace mhviz
