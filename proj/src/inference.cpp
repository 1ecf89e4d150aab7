#include "mhviz/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mhviz/errors.hpp"
#include "mhviz/measures.hpp"
#include "mhviz/normal.hpp"

namespace mhviz {

namespace {

bool on_boundary(const LevelSummary& l) { return *l.gc1 == 0.0 || *l.gc2 == 0.0; }

void require_interior(const MarginalSummary& s) {
    s.require_defined();
    for (const auto& l : s.levels) {
        if (on_boundary(l)) {
            throw BoundaryGc("Gc at level " + std::to_string(l.level) +
                             " is 0 or 1; the variance needs Bayes smoothing");
        }
    }
}

// Gamma on an unnormalized grid. Deliberately independent of marginal_summary/measure_gamma.
double gamma_of_grid(std::size_t r, const std::vector<double>& grid) {
    std::vector<double> block(r - 1, 0.0);
    std::vector<double> upper(r - 1, 0.0);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t l = 0; l < r; ++l) {
            if (k == l) continue;
            // cell (k, l) sits in the G1 block (k < l) or G2 block (k > l) for cuts min..max-1
            const std::size_t lo = std::min(k, l);
            const std::size_t hi = std::max(k, l);
            for (std::size_t cut = lo; cut < hi; ++cut) {
                block[cut] += grid[k * r + l];
                if (k < l) upper[cut] += grid[k * r + l];
            }
        }
    }
    double delta = 0.0;
    for (double b : block) delta += b;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r; ++i) {
        const std::array<double, 2> g{upper[i] / block[i], (block[i] - upper[i]) / block[i]};
        const std::array<double, 2> half{0.5, 0.5};
        total += block[i] / delta * kMatusitaNormalizer * matusita_distance(g, half);
    }
    return total;
}

}  // namespace

double VarianceBreakdown::reassemble(const ProbTable& p) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t l = 0; l < dim; ++l) {
            if (k == l) continue;
            const double d = derivative(k, l);
            sum += p(k, l) * d * d;
        }
    }
    return sum;
}

VarianceBreakdown asymptotic_variance(const ProbTable& p) {
    const MarginalSummary s = marginal_summary(p);
    require_interior(s);
    const double gamma = measure_gamma(s).gamma_total;
    const std::size_t r = p.dim();
    const double half = std::sqrt(0.5);

    VarianceBreakdown out;
    out.dim = r;
    for (const auto& l : s.levels) {
        const double gc1 = *l.gc1;
        const double gc2 = *l.gc2;
        const double u1 = std::sqrt(gc1) - half;
        const double u2 = std::sqrt(gc2) - half;
        LevelTerms t;
        t.level = l.level;
        t.c = u1 * u1 + u2 * u2;
        if (t.c < kDegeneracyTolerance) {
            throw DegenerateAtMH("C_" + std::to_string(l.level) +
                                 " is below tolerance: the table is at marginal homogeneity for that level");
        }
        const double scale = 1.0 / (2.0 * std::sqrt(t.c));
        t.a = scale * (2.0 * t.c + u1 * gc2 / std::sqrt(gc1) - u2 * std::sqrt(gc2));
        t.b = scale * (2.0 * t.c - u1 * std::sqrt(gc1) + u2 * gc1 / std::sqrt(gc2));
        out.per_level.push_back(t);
    }

    out.per_cell.assign(r * r, 0.0);
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t l = k + 1; l < r; ++l) {
            // cell (k, l) enters the level-i blocks for 0-based k < i <= l
            double sum_a = 0.0;
            double sum_b = 0.0;
            for (std::size_t i = k + 1; i <= l; ++i) {
                sum_a += out.per_level[i - 1].a;
                sum_b += out.per_level[i - 1].b;
            }
            const double shift = static_cast<double>(l - k) / s.delta * gamma;
            out.per_cell[k * r + l] = kMatusitaNormalizer * sum_a / s.delta - shift;
            out.per_cell[l * r + k] = kMatusitaNormalizer * sum_b / s.delta - shift;
        }
    }

    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t l = k + 1; l < r; ++l) {
            const double dkl = out.per_cell[k * r + l];
            const double dlk = out.per_cell[l * r + k];
            out.sigma2 += p(k, l) * dkl * dkl + p(l, k) * dlk * dlk;
        }
    }
    return out;
}

double variance_oracle_fd(const ProbTable& p, double h) {
    if (!(h >= 1e-13 && h <= 1e-2)) throw InputError(InputError::Kind::BadArgument, "finite-difference step out of range");
    const MarginalSummary s = marginal_summary(p);
    require_interior(s);
    for (const auto& l : s.levels) {
        const double u1 = std::sqrt(*l.gc1) - std::sqrt(0.5);
        const double u2 = std::sqrt(*l.gc2) - std::sqrt(0.5);
        if (u1 * u1 + u2 * u2 < kDegeneracyTolerance) throw DegenerateAtMH("finite differences at an MH kink");
    }

    const std::size_t r = p.dim();
    std::vector<double> grid(p.cells().begin(), p.cells().end());
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        const double saved = grid[c];
        grid[c] = saved + h;
        const double up = gamma_of_grid(r, grid);
        grid[c] = saved - h;
        const double down = gamma_of_grid(r, grid);
        grid[c] = saved;
        const double d = (up - down) / (2.0 * h);
        mean += saved * d;
        second += saved * d * d;
    }
    return second - mean * mean;
}

InferenceResult confidence_interval(const ProbTable& p, std::int64_t n, double level, bool clip) {
    if (!(level > 0.0 && level < 1.0)) throw InputError(InputError::Kind::BadArgument, "confidence level must lie in (0, 1)");
    if (n < 1) throw InputError(InputError::Kind::BadArgument, "sample size must be positive");

    const MarginalSummary s = marginal_summary(p);
    InferenceResult out;
    out.estimate = measure_gamma(s).gamma_total;
    out.level = level;
    out.n = n;
    out.estimator_used = p.source();

    try {
        const VarianceBreakdown v = asymptotic_variance(p);
        const double se = std::sqrt(v.sigma2 / static_cast<double>(n));
        const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
        out.se = se;
        double lo = out.estimate - z * se;
        double hi = out.estimate + z * se;
        if (clip) {
            lo = std::clamp(lo, 0.0, 1.0);
            hi = std::clamp(hi, 0.0, 1.0);
        }
        out.ci_low = lo;
        out.ci_high = hi;
    } catch (const DegenerateAtMH& e) {
        out.degenerate_warning = true;
        out.warnings.emplace_back(e.what());
    }
    return out;
}

InferenceResult confidence_interval(const SquareTable& t, const CiOptions& options) {
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw InputError(InputError::Kind::BadArgument, "confidence level must lie in (0, 1)");
    }
    switch (options.estimator) {
        case EstimatorChoice::Sample:
            return confidence_interval(to_probabilities(t), t.total(), options.level, options.clip);
        case EstimatorChoice::Bayes:
            return confidence_interval(bayes_smooth(t, options.alpha), t.total(), options.level, options.clip);
        case EstimatorChoice::Auto: break;
    }

    ProbTable sample = to_probabilities(t);
    const MarginalSummary s = marginal_summary(sample);
    s.require_defined();
    const bool boundary = std::any_of(s.levels.begin(), s.levels.end(), on_boundary);
    if (!boundary) return confidence_interval(sample, t.total(), options.level, options.clip);

    InferenceResult out = confidence_interval(bayes_smooth(t, options.alpha), t.total(), options.level, options.clip);
    out.warnings.insert(out.warnings.begin(), "sample Gc on {0, 1}; Bayes-smoothed estimator used");
    return out;
}

}  // namespace mhviz
