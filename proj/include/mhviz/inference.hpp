#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mhviz/table.hpp"

namespace mhviz {

// Below this, C_i is treated as exact MH and the delta method is refused.
inline constexpr double kDegeneracyTolerance = 1e-14;

struct LevelTerms {
    std::size_t level = 0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Delta-method variance of sqrt(n) (Gamma_hat - Gamma) under full multinomial sampling.
struct VarianceBreakdown {
    std::size_t dim = 0;
    double sigma2 = 0.0;
    std::vector<double> per_cell;  // r x r row-major; D_kl off the diagonal, 0 on it
    std::vector<LevelTerms> per_level;

    double derivative(std::size_t k, std::size_t l) const { return per_cell[k * dim + l]; }
    // sum over off-diagonal cells of p_kl * D_kl^2, recomputed from per_cell.
    double reassemble(const ProbTable& p) const;
};

// Throws MeasureUndefined, BoundaryGc (some Gc in {0, 1}) or DegenerateAtMH (some C_i < 1e-14).
VarianceBreakdown asymptotic_variance(const ProbTable& p);

// Independent check: central differences of Gamma over every cell, then the multinomial quadratic form
// sum p d^2 - (sum p d)^2. Same preconditions as asymptotic_variance; h must be in [1e-13, 1e-2].
double variance_oracle_fd(const ProbTable& p, double h = 1e-6);

enum class EstimatorChoice { Auto, Sample, Bayes };

struct CiOptions {
    double level = 0.95;
    EstimatorChoice estimator = EstimatorChoice::Auto;
    double alpha = kDefaultAlpha;
    bool clip = false;  // clamp the bounds to [0, 1]
};

struct InferenceResult {
    double estimate = 0.0;
    std::optional<double> se;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    double level = 0.95;
    std::int64_t n = 0;
    Estimator estimator_used;
    bool degenerate_warning = false;
    std::vector<std::string> warnings;
};

// Wald interval Gamma_hat +- z * sigma_hat / sqrt(n). Auto uses sample proportions and switches to
// Bayes smoothing when some level has Gc in {0, 1}. Estimate and variance share one ProbTable.
// Throws MeasureUndefined; DegenerateAtMH is reported through degenerate_warning with the interval omitted.
InferenceResult confidence_interval(const SquareTable& t, const CiOptions& options = {});

// Same, for an already estimated table and a known sample size.
InferenceResult confidence_interval(const ProbTable& p, std::int64_t n, double level = 0.95, bool clip = false);

}  // namespace mhviz
