#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mhviz/errors.hpp"
#include "mhviz/report.hpp"

using namespace mhviz;
using mhviz::test::load_table;
using nlohmann::json;

namespace {

AnalysisReport report_for(const SquareTable& t) {
    const ProbTable p = to_probabilities(t);
    const MarginalSummary s = marginal_summary(p);
    const std::vector<double> lambdas{-0.5, 1.0};
    AnalysisReport r = make_report(s, measure_report(s, lambdas));
    r.n = t.total();
    r.input_kind = "counts";
    r.inference = confidence_interval(t);
    return r;
}

}  // namespace

TEST_CASE("analysis report keys") {
    const json j = to_json(report_for(load_table("table1a.csv")));
    CHECK(j.at("schemaVersion") == 1);
    CHECK(j.at("input").at("dimension") == 5);
    CHECK(j.at("input").at("n") == 166);
    CHECK(j.at("input").at("kind") == "counts");
    CHECK(j.at("estimator").at("kind") == "sample");
    CHECK_FALSE(j.at("estimator").contains("alpha"));
    CHECK(j.at("marginalSummary").size() == 4);
    CHECK(j.at("subMeasures").size() == 4);
    CHECK(j.at("subMeasures").at(3).at("direction") == "deteriorating");
    CHECK(j.at("phi").size() == 3);
    CHECK(j.at("phi").at(0).at("lambda") == -0.5);
    CHECK(j.at("tau").size() == 2);
    CHECK(j.at("inference").at("ci").size() == 2);
    CHECK(j.at("inference").at("estimatorUsed").at("kind") == "sample");
    CHECK(std::abs(j.at("gammaTotal").get<double>() - 0.308) <= 0.001);
}

TEST_CASE("analysis report round-trips") {
    for (const char* name : {"table1a.csv", "table4b.csv", "table6c.csv"}) {
        CAPTURE(name);
        const AnalysisReport a = report_for(load_table(name));
        const AnalysisReport b = analysis_report_from_json(json::parse(to_json(a).dump()));
        CHECK(b.dimension == a.dimension);
        CHECK(b.n == a.n);
        CHECK(b.estimator == a.estimator);
        CHECK(std::abs(b.gamma_total - a.gamma_total) <= 1e-12);
        CHECK(std::abs(b.psi - a.psi) <= 1e-12);
        CHECK(std::abs(b.delta - a.delta) <= 1e-12);
        REQUIRE(b.subs.size() == a.subs.size());
        for (std::size_t i = 0; i < a.subs.size(); ++i) {
            CHECK(std::abs(b.subs[i].gamma - a.subs[i].gamma) <= 1e-12);
            CHECK(b.subs[i].direction == a.subs[i].direction);
        }
        REQUIRE(b.phi.size() == a.phi.size());
        for (const auto& [lambda, value] : a.phi) CHECK(std::abs(b.phi.at(lambda) - value) <= 1e-12);
        REQUIRE(b.inference);
        CHECK(std::abs(*b.inference->se - *a.inference->se) <= 1e-12);
        CHECK(std::abs(*b.inference->ci_low - *a.inference->ci_low) <= 1e-12);
    }
}

TEST_CASE("degenerate inference serializes nulls") {
    const json j = to_json(report_for(load_table("table4a.csv")));
    CHECK(j.at("inference").at("se").is_null());
    CHECK(j.at("inference").at("ci").is_null());
    CHECK(j.at("inference").at("degenerateWarning") == true);
    const AnalysisReport back = analysis_report_from_json(j);
    CHECK_FALSE(back.inference->se);
}

TEST_CASE("unknown schema versions are rejected") {
    json j = to_json(report_for(load_table("table4b.csv")));
    j["schemaVersion"] = 2;
    CHECK_THROWS_AS(analysis_report_from_json(j), InputError);
}

TEST_CASE("simulation document") {
    SimulationScenario base;
    base.trials = 10;
    SimulationResult r;
    r.d = 0.5;
    r.n = 36;
    r.trials = 10;
    r.failed_trials = 1;
    r.covered = 8;
    const json doc = simulation_document(base, {r});
    CHECK(doc.at("schemaVersion") == 1);
    CHECK(doc.at("scenario").at("trials") == 10);
    CHECK(doc.at("scenario").at("seed") == kDefaultSeed);
    CHECK(doc.at("scenario").at("cutoffs").size() == 5);
    CHECK_FALSE(doc.at("scenario").contains("workers"));
    const json& res = doc.at("results").at(0);
    for (const char* key : {"d", "n", "trueGamma", "coverage", "meanEstimate", "trials", "failedTrials", "covered"})
        CHECK(res.contains(key));
    CHECK(res.at("failedTrials") == 1);
}

TEST_CASE("style from json") {
    const VizStyle s = style_from_json(json::parse(R"({"canvasPx": 800, "red": "#ff0000"})"));
    CHECK(s.canvas_px == 800.0);
    CHECK(s.red == "#ff0000");
    CHECK(s.blue == VizStyle{}.blue);
    CHECK(s.dash == VizStyle{}.dash);
    CHECK_THROWS(style_from_json(json::parse(R"({"canvasPx": "wide"})")));
}
