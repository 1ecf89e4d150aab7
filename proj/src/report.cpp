#include "mhviz/report.hpp"

#include <cmath>

#include "mhviz/errors.hpp"

namespace mhviz {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

json estimator_json(const Estimator& e) {
    json j{{"kind", e.name()}};
    if (e.kind == Estimator::Kind::BayesSmoothed) j["alpha"] = e.alpha;
    return j;
}

Estimator estimator_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "sample") return Estimator::sample();
    if (kind == "bayes") return Estimator::bayes(j.at("alpha").get<double>());
    if (kind == "given") return Estimator::given();
    throw InputError(InputError::Kind::BadArgument, "unknown estimator kind: " + kind);
}

Direction direction_from_string(const std::string& s) {
    if (s == "improving") return Direction::Improving;
    if (s == "deteriorating") return Direction::Deteriorating;
    throw InputError(InputError::Kind::BadArgument, "unknown direction: " + s);
}

InferenceResult inference_from_json(const json& j) {
    InferenceResult r;
    r.estimate = j.at("estimate").get<double>();
    r.se = read_optional(j, "se");
    if (j.contains("ci") && !j.at("ci").is_null()) {
        r.ci_low = j.at("ci").at(0).get<double>();
        r.ci_high = j.at("ci").at(1).get<double>();
    }
    r.level = j.at("level").get<double>();
    r.n = j.at("n").get<std::int64_t>();
    r.estimator_used = estimator_from_json(j.at("estimatorUsed"));
    r.degenerate_warning = j.at("degenerateWarning").get<bool>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

}  // namespace

AnalysisReport make_report(const MarginalSummary& s, const MeasureReport& m) {
    AnalysisReport r;
    r.dimension = s.dim;
    r.estimator = m.estimator;
    r.delta = s.delta;
    r.marginal = s.levels;
    r.subs = m.subs;
    r.gamma_total = m.gamma_total;
    r.phi = m.phi;
    r.psi = m.psi;
    r.tau = m.tau;
    return r;
}

json to_json(const InferenceResult& r) {
    json j;
    j["estimate"] = r.estimate;
    j["se"] = optional_number(r.se);
    j["ci"] = (r.ci_low && r.ci_high) ? json::array({*r.ci_low, *r.ci_high}) : json(nullptr);
    j["level"] = r.level;
    j["n"] = r.n;
    j["estimatorUsed"] = estimator_json(r.estimator_used);
    j["degenerateWarning"] = r.degenerate_warning;
    j["warnings"] = r.warnings;
    return j;
}

json to_json(const AnalysisReport& r) {
    json j;
    j["schemaVersion"] = r.schema_version;
    j["input"] = {{"dimension", r.dimension}, {"n", r.n ? json(*r.n) : json(nullptr)}, {"kind", r.input_kind}};
    j["estimator"] = estimator_json(r.estimator);
    j["delta"] = r.delta;

    json marginal = json::array();
    for (const auto& l : r.marginal) {
        marginal.push_back({{"level", l.level},
                            {"f1", l.f1},
                            {"f2", l.f2},
                            {"g1", l.g1},
                            {"g2", l.g2},
                            {"gc1", optional_number(l.gc1)},
                            {"gc2", optional_number(l.gc2)},
                            {"weight", l.weight}});
    }
    j["marginalSummary"] = marginal;

    json subs = json::array();
    for (const auto& m : r.subs) {
        subs.push_back({{"level", m.level},
                        {"gc1", m.gc1},
                        {"gc2", m.gc2},
                        {"weight", m.weight},
                        {"gamma", m.gamma},
                        {"direction", to_string(m.direction)}});
    }
    j["subMeasures"] = subs;
    j["gammaTotal"] = r.gamma_total;

    json phi = json::array();
    for (const auto& [lambda, value] : r.phi) phi.push_back({{"lambda", lambda}, {"value", value}});
    j["phi"] = phi;
    j["psi"] = r.psi;
    j["tau"] = json::array({r.tau.first, r.tau.second});
    j["inference"] = r.inference ? to_json(*r.inference) : json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

AnalysisReport analysis_report_from_json(const json& j) {
    AnalysisReport r;
    r.schema_version = j.at("schemaVersion").get<int>();
    if (r.schema_version != kSchemaVersion) {
        throw InputError(InputError::Kind::BadArgument, "unsupported schemaVersion " + std::to_string(r.schema_version));
    }
    const json& input = j.at("input");
    r.dimension = input.at("dimension").get<std::size_t>();
    if (!input.at("n").is_null()) r.n = input.at("n").get<std::int64_t>();
    r.input_kind = input.at("kind").get<std::string>();
    r.estimator = estimator_from_json(j.at("estimator"));
    r.delta = j.at("delta").get<double>();

    for (const auto& e : j.at("marginalSummary")) {
        LevelSummary l;
        l.level = e.at("level").get<std::size_t>();
        l.f1 = e.at("f1").get<double>();
        l.f2 = e.at("f2").get<double>();
        l.g1 = e.at("g1").get<double>();
        l.g2 = e.at("g2").get<double>();
        l.gc1 = read_optional(e, "gc1");
        l.gc2 = read_optional(e, "gc2");
        l.weight = e.at("weight").get<double>();
        r.marginal.push_back(l);
    }
    const double half = std::sqrt(0.5);
    for (const auto& e : j.at("subMeasures")) {
        SubMeasure m;
        m.level = e.at("level").get<std::size_t>();
        m.gc1 = e.at("gc1").get<double>();
        m.gc2 = e.at("gc2").get<double>();
        m.weight = e.at("weight").get<double>();
        m.gamma = e.at("gamma").get<double>();
        m.upsilon1 = std::sqrt(m.gc1) - half;
        m.upsilon2 = std::sqrt(m.gc2) - half;
        m.direction = direction_from_string(e.at("direction").get<std::string>());
        r.subs.push_back(m);
    }
    r.gamma_total = j.at("gammaTotal").get<double>();
    for (const auto& e : j.at("phi")) r.phi[e.at("lambda").get<double>()] = e.at("value").get<double>();
    r.psi = j.at("psi").get<double>();
    r.tau = {j.at("tau").at(0).get<double>(), j.at("tau").at(1).get<double>()};
    if (!j.at("inference").is_null()) r.inference = inference_from_json(j.at("inference"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

json to_json(const SimulationResult& r) {
    return {{"d", r.d},
            {"n", r.n},
            {"trueGamma", r.true_gamma},
            {"coverage", r.coverage},
            {"meanEstimate", r.mean_estimate},
            {"trials", r.trials},
            {"failedTrials", r.failed_trials},
            {"covered", r.covered}};
}

json simulation_document(const SimulationScenario& base, const std::vector<SimulationResult>& results) {
    json j;
    j["schemaVersion"] = kSchemaVersion;
    j["scenario"] = {{"rho", base.rho},
                     {"cutoffs", base.cutoffs},
                     {"trials", base.trials},
                     {"seed", base.seed},
                     {"ciLevel", base.ci_level}};
    json rows = json::array();
    for (const auto& r : results) rows.push_back(to_json(r));
    j["results"] = rows;
    return j;
}

VizStyle style_from_json(const json& j) {
    if (!j.is_object()) throw InputError(InputError::Kind::BadArgument, "style must be a JSON object");
    VizStyle s;
    s.canvas_px = j.value("canvasPx", s.canvas_px);
    s.point_max_radius = j.value("pointMaxRadius", s.point_max_radius);
    s.font_size = j.value("fontSize", s.font_size);
    s.red = j.value("red", s.red);
    s.blue = j.value("blue", s.blue);
    s.dash = j.value("dash", s.dash);
    return s;
}

}  // namespace mhviz
