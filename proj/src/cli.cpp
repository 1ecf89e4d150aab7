#include "mhviz/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mhviz/errors.hpp"
#include "mhviz/inference.hpp"
#include "mhviz/measures.hpp"
#include "mhviz/report.hpp"
#include "mhviz/simulation.hpp"
#include "mhviz/table.hpp"
#include "mhviz/viz_svg.hpp"

namespace mhviz::cli {

namespace {

class IoError : public Error {
public:
    using Error::Error;
};

struct AnalyzeArgs {
    std::string table;
    std::vector<double> lambdas;
    double ci = 0.95;
    std::string estimator = "auto";
    double alpha = kDefaultAlpha;
    bool clip = false;
    bool probs = false;
    std::string out;
};

struct VizArgs {
    std::string table;
    std::string out;
    std::string estimator = "auto";
    double alpha = kDefaultAlpha;
    std::string style;
    bool probs = false;
};

struct SimulateArgs {
    std::string d = "0";
    std::string n = "3600";
    double rho = kDefaultRho;
    std::string cutoffs = "-1.2,-0.6,0,0.6,1.2";
    std::int64_t trials = kDefaultTrials;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
    double ci = 0.95;
    std::string out;
};

struct TrueValueArgs {
    double d = 0.0;
    double rho = kDefaultRho;
    std::string cutoffs = "-1.2,-0.6,0,0.6,1.2";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return buf.str();
}

void write_output(const std::string& path, const std::string& body, std::ostream& out) {
    if (path.empty()) {
        out << body;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot write " + path);
    file << body;
    file.flush();
    if (!file) throw IoError("cannot write " + path);
}

double parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw InputError(InputError::Kind::BadArgument, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        values.push_back(parse_double(std::string_view(text).substr(start, comma == std::string::npos ? comma : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

std::vector<std::int64_t> parse_sizes(const std::string& text) {
    std::vector<std::int64_t> sizes;
    for (double v : parse_list(text)) {
        if (v < 1.0 || v != std::floor(v) || v > 1e12) {
            throw InputError(InputError::Kind::BadArgument, "sample sizes must be positive integers");
        }
        sizes.push_back(static_cast<std::int64_t>(v));
    }
    return sizes;
}

EstimatorChoice estimator_choice(const std::string& name) {
    if (name == "sample") return EstimatorChoice::Sample;
    if (name == "bayes") return EstimatorChoice::Bayes;
    return EstimatorChoice::Auto;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MH_METRICS_SEED"); env != nullptr && *env != '\0') {
        std::uint64_t v = 0;
        const std::string_view s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw InputError(InputError::Kind::BadArgument, "MH_METRICS_SEED is not an unsigned integer");
        }
        return v;
    }
    return kDefaultSeed;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
    const std::string text = read_file(a.table);
    const EstimatorChoice choice = estimator_choice(a.estimator);
    if (!(a.ci > 0.0 && a.ci < 1.0)) throw InputError(InputError::Kind::BadArgument, "--ci must lie in (0, 1)");

    std::optional<SquareTable> counts;
    std::optional<ProbTable> probs;
    if (a.probs) {
        probs = parse_prob_table(text);
    } else {
        counts = parse_table(text);
        probs = choice == EstimatorChoice::Bayes ? bayes_smooth(*counts, a.alpha) : to_probabilities(*counts);
    }

    const MarginalSummary summary = marginal_summary(*probs);
    AnalysisReport report = make_report(summary, measure_report(summary, a.lambdas));
    report.input_kind = counts ? "counts" : "probabilities";
    if (counts) {
        report.n = counts->total();
        CiOptions options;
        options.level = a.ci;
        options.estimator = choice;
        options.alpha = a.alpha;
        options.clip = a.clip;
        try {
            report.inference = confidence_interval(*counts, options);
        } catch (const BoundaryGc& e) {
            InferenceResult r;
            r.estimate = report.gamma_total;
            r.level = a.ci;
            r.n = counts->total();
            r.estimator_used = probs->source();
            r.warnings.emplace_back(e.what());
            report.inference = r;
        }
    } else {
        report.warnings.emplace_back("probability input has no sample size; inference skipped");
    }
    write_output(a.out, to_json(report).dump(2) + "\n", out);
    return kExitOk;
}

int cmd_viz(const VizArgs& a, std::ostream& err) {
    const std::string text = read_file(a.table);
    VizStyle style;
    if (!a.style.empty()) {
        try {
            style = style_from_json(nlohmann::json::parse(read_file(a.style)));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(InputError::Kind::BadArgument, std::string("bad style file: ") + e.what());
        }
    }
    std::optional<ProbTable> probs;
    if (a.probs) {
        probs = parse_prob_table(text);
    } else {
        const SquareTable t = parse_table(text);
        probs = a.estimator == "bayes" ? bayes_smooth(t, a.alpha) : to_probabilities(t);
    }
    const MarginalSummary summary = marginal_summary(*probs);
    const auto subs = sub_measures(summary);
    for (const auto& l : summary.levels) {
        if (!l.defined()) err << "warning: level " << l.level << " has G1 + G2 = 0; drawn as n/a\n";
    }
    write_output(a.out, render_svg(build_viz_spec(summary, subs, style)), err);
    return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    SimulationScenario base;
    base.rho = a.rho;
    base.cutoffs = parse_list(a.cutoffs);
    base.trials = a.trials;
    base.seed = resolve_seed(a.seed);
    base.ci_level = a.ci;
    const std::vector<double> ds = parse_grid(a.d);
    const std::vector<std::int64_t> ns = parse_sizes(a.n);
    base.validate();

    std::vector<SimulationResult> results;
    for (double d : ds) {
        for (std::int64_t n : ns) {
            SimulationScenario s = base;
            s.d = d;
            s.n = n;
            results.push_back(run_coverage(s, a.workers));
            err << "d=" << d << " n=" << n << " done\n";
        }
    }
    write_output(a.out, simulation_document(base, results).dump(2) + "\n", out);
    return kExitOk;
}

int cmd_truevalue(const TrueValueArgs& a, std::ostream& out) {
    const std::vector<double> cutoffs = parse_list(a.cutoffs);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f\n", true_measure(a.d, a.rho, cutoffs));
    out << buf;
    return kExitOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text);

    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(parse_double(std::string_view(text).substr(start, colon == std::string::npos ? colon : colon - start)));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) throw InputError(InputError::Kind::BadArgument, "range must be start:stop:step");
    const double first = parts[0];
    const double last = parts[1];
    const double step = parts[2];
    if (!(step > 0.0) || last < first) throw InputError(InputError::Kind::BadArgument, "range needs step > 0 and stop >= start");

    const double span = (last - first) / step;
    if (span > 1e6) throw InputError(InputError::Kind::BadArgument, "range has too many points");
    auto count = static_cast<std::int64_t>(std::floor(span + 1e-9));
    std::vector<double> values;
    for (std::int64_t k = 0; k <= count; ++k) values.push_back(first + static_cast<double>(k) * step);
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Measures, intervals and plots for departure from marginal homogeneity in square ordinal tables",
                 "mhviz"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Measures and confidence interval as a JSON report");
    analyze->add_option("table", analyze_args.table, "CSV table")->required();
    analyze->add_option("--lambda", analyze_args.lambdas, "Extra power-divergence lambdas for Phi");
    analyze->add_option("--ci", analyze_args.ci, "Confidence level")->capture_default_str();
    analyze->add_option("--estimator", analyze_args.estimator, "auto | sample | bayes")
        ->check(CLI::IsMember({"auto", "sample", "bayes"}))
        ->capture_default_str();
    analyze->add_option("--alpha", analyze_args.alpha, "Dirichlet parameter for Bayes smoothing")->capture_default_str();
    analyze->add_flag("--clip-ci", analyze_args.clip, "Clip interval bounds to [0, 1]");
    analyze->add_flag("--probs", analyze_args.probs, "Table holds probabilities instead of counts");
    analyze->add_option("--out", analyze_args.out, "Write the report here instead of stdout");

    VizArgs viz_args;
    auto* viz = app.add_subcommand("viz", "Render the sub-measure figure as SVG");
    viz->add_option("table", viz_args.table, "CSV table")->required();
    viz->add_option("-o,--out", viz_args.out, "Output SVG path")->required();
    viz->add_option("--estimator", viz_args.estimator, "auto | sample | bayes")
        ->check(CLI::IsMember({"auto", "sample", "bayes"}))
        ->capture_default_str();
    viz->add_option("--alpha", viz_args.alpha, "Dirichlet parameter for Bayes smoothing")->capture_default_str();
    viz->add_option("--style", viz_args.style, "JSON style overrides");
    viz->add_flag("--probs", viz_args.probs, "Table holds probabilities instead of counts");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage of the Wald interval");
    simulate->add_option("--d", sim_args.d, "Mean of Z2: list a,b,c or range start:stop:step")->capture_default_str();
    simulate->add_option("--n", sim_args.n, "Sample sizes, comma separated")->capture_default_str();
    simulate->add_option("--rho", sim_args.rho, "Correlation of Z1 and Z2")->capture_default_str();
    simulate->add_option("--cutoffs", sim_args.cutoffs, "Increasing cut points")->capture_default_str();
    simulate->add_option("--trials", sim_args.trials, "Trials per scenario")->capture_default_str();
    simulate->add_option("--seed", sim_args.seed, "RNG seed (default: $MH_METRICS_SEED, then built-in)");
    simulate->add_option("--workers", sim_args.workers, "Worker threads")->capture_default_str();
    simulate->add_option("--ci", sim_args.ci, "Confidence level")->capture_default_str();
    simulate->add_option("--out", sim_args.out, "Write results here instead of stdout");

    TrueValueArgs tv_args;
    auto* truevalue = app.add_subcommand("truevalue", "True Gamma of a discretized bivariate normal");
    truevalue->add_option("--d", tv_args.d, "Mean of Z2")->capture_default_str();
    truevalue->add_option("--rho", tv_args.rho, "Correlation")->capture_default_str();
    truevalue->add_option("--cutoffs", tv_args.cutoffs, "Increasing cut points")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_args, out);
        if (*viz) return cmd_viz(viz_args, err);
        if (*simulate) return cmd_simulate(sim_args, out, err);
        if (*truevalue) return cmd_truevalue(tv_args, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const MeasureUndefined& e) {
        err << e.what() << "\n";
        return kExitUndefined;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUndefined;
    }
    return kExitInput;
}

}  // namespace mhviz::cli
