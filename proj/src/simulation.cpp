#include "mhviz/simulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "mhviz/errors.hpp"
#include "mhviz/inference.hpp"
#include "mhviz/measures.hpp"
#include "mhviz/normal.hpp"

namespace mhviz {

namespace {

constexpr std::size_t kGaussPoints = 20;
constexpr double kPanelWidth = 0.25;
constexpr double kTailCut = 12.0;

struct GaussRule {
    std::array<double, kGaussPoints> nodes{};
    std::array<double, kGaussPoints> weights{};
};

// Gauss-Legendre on [-1, 1]; roots of P_n by Newton iteration.
GaussRule make_gauss_rule() {
    GaussRule rule;
    constexpr std::size_t n = kGaussPoints;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            deriv = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / deriv;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_rule();
    return rule;
}

// Phi(hi) - Phi(lo) without cancellation in the upper tail.
double normal_band(double lo, double hi) {
    if (lo >= 0.0) return normal_cdf(-lo) - normal_cdf(-hi);
    return normal_cdf(hi) - normal_cdf(lo);
}

struct TrialOutcome {
    bool failed = true;
    bool covered = false;
    double estimate = 0.0;
};

TrialOutcome run_trial(const SimulationScenario& s, const ProbTable& truth, double true_gamma, std::uint64_t trial) {
    SplitMix64 rng = trial_stream(s.seed, trial);
    const auto counts = sample_multinomial(truth.cells(), s.n, rng);
    const std::size_t r = truth.dim();
    std::vector<std::vector<std::int64_t>> rows(r, std::vector<std::int64_t>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) rows[i][j] = counts[i * r + j];

    TrialOutcome out;
    try {
        CiOptions options;
        options.level = s.ci_level;
        const InferenceResult ci = confidence_interval(SquareTable(rows), options);
        if (!ci.ci_low || !ci.ci_high) return out;
        out.failed = false;
        out.estimate = ci.estimate;
        out.covered = *ci.ci_low <= true_gamma && true_gamma <= *ci.ci_high;
    } catch (const MeasureUndefined&) {
    }
    return out;
}

}  // namespace

SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) noexcept {
    return SplitMix64(SplitMix64::mix(seed ^ SplitMix64::mix(trial + 0x632be59bd9b4e019ULL)));
}

std::vector<std::int64_t> sample_multinomial(std::span<const double> probs, std::int64_t n, SplitMix64& rng) {
    std::vector<double> cumulative(probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        cumulative[k] = acc;
    }
    std::vector<std::int64_t> counts(probs.size(), 0);
    if (probs.empty()) return counts;
    for (std::int64_t draw = 0; draw < n; ++draw) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            // u rounded up to acc; take the last cell with positive mass
            do --it;
            while (it != cumulative.begin() && probs[static_cast<std::size_t>(it - cumulative.begin())] == 0.0);
        }
        ++counts[static_cast<std::size_t>(it - cumulative.begin())];
    }
    return counts;
}

void SimulationScenario::validate() const {
    if (!(std::abs(rho) < 1.0)) throw InputError(InputError::Kind::BadArgument, "correlation must satisfy |rho| < 1");
    if (!std::isfinite(d)) throw InputError(InputError::Kind::BadArgument, "d must be finite");
    if (cutoffs.empty()) throw InputError(InputError::Kind::BadArgument, "at least one cutoff is required");
    for (std::size_t k = 0; k < cutoffs.size(); ++k) {
        if (!std::isfinite(cutoffs[k]) || (k > 0 && !(cutoffs[k] > cutoffs[k - 1]))) {
            throw InputError(InputError::Kind::BadArgument, "cutoffs must be finite and strictly increasing");
        }
    }
    if (n < 1) throw InputError(InputError::Kind::BadArgument, "sample size must be at least 1");
    if (trials < 1) throw InputError(InputError::Kind::BadArgument, "trials must be at least 1");
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw InputError(InputError::Kind::BadArgument, "confidence level must lie in (0, 1)");
}

double bivariate_normal_rectangle(double x_lo, double x_hi, double y_lo, double y_hi, double mean2, double rho) {
    if (!(std::abs(rho) < 1.0)) throw InputError(InputError::Kind::BadArgument, "correlation must satisfy |rho| < 1");
    const double a = std::max(x_lo, -kTailCut);
    const double b = std::min(x_hi, kTailCut);
    if (!(b > a)) return 0.0;

    // Z2 | Z1 = x ~ N(mean2 + rho x, 1 - rho^2)
    const double s = std::sqrt(1.0 - rho * rho);
    const GaussRule& rule = gauss_rule();
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / kPanelWidth));
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double mid = a + (static_cast<double>(k) + 0.5) * width;
        double panel = 0.0;
        for (std::size_t q = 0; q < kGaussPoints; ++q) {
            const double x = mid + 0.5 * width * rule.nodes[q];
            const double shift = mean2 + rho * x;
            panel += rule.weights[q] * normal_pdf(x) * normal_band((y_lo - shift) / s, (y_hi - shift) / s);
        }
        total += 0.5 * width * panel;
    }
    return total;
}

ProbTable cell_probs_bivariate_normal(double d, double rho, std::span<const double> cutoffs) {
    SimulationScenario check;
    check.d = d;
    check.rho = rho;
    check.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    check.validate();

    const std::size_t r = cutoffs.size() + 1;
    std::vector<double> edges;
    edges.push_back(-std::numeric_limits<double>::infinity());
    edges.insert(edges.end(), cutoffs.begin(), cutoffs.end());
    edges.push_back(std::numeric_limits<double>::infinity());

    std::vector<double> probs(r * r);
    double sum = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            probs[i * r + j] = bivariate_normal_rectangle(edges[i], edges[i + 1], edges[j], edges[j + 1], d, rho);
            sum += probs[i * r + j];
        }
    }
    if (std::abs(sum - 1.0) > 1e-10) throw Error("bivariate normal quadrature lost mass");
    for (double& p : probs) p /= sum;
    return ProbTable(r, std::move(probs), Estimator::given());
}

double true_measure(double d, double rho, std::span<const double> cutoffs) {
    return measure_gamma(marginal_summary(cell_probs_bivariate_normal(d, rho, cutoffs))).gamma_total;
}

SimulationResult run_coverage(const SimulationScenario& s, unsigned workers) {
    s.validate();
    const ProbTable truth = cell_probs_bivariate_normal(s.d, s.rho, s.cutoffs);
    const double true_gamma = measure_gamma(marginal_summary(truth)).gamma_total;

    const auto trials = static_cast<std::size_t>(s.trials);
    std::vector<TrialOutcome> outcomes(trials);
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::min<std::size_t>(trials, 256)));

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t t = w; t < trials; t += workers) outcomes[t] = run_trial(s, truth, true_gamma, t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    SimulationResult result;
    result.d = s.d;
    result.n = s.n;
    result.true_gamma = true_gamma;
    result.trials = s.trials;
    double estimate_sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.failed) {
            ++result.failed_trials;
            continue;
        }
        estimate_sum += o.estimate;
        if (o.covered) ++result.covered;
    }
    const std::int64_t valid = result.trials - result.failed_trials;
    if (valid > 0) {
        result.coverage = static_cast<double>(result.covered) / static_cast<double>(valid);
        result.mean_estimate = estimate_sum / static_cast<double>(valid);
    }
    return result;
}

}  // namespace mhviz
