#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mhviz/table.hpp"

namespace mhviz {

// sqrt((2 + sqrt 2) / 2): scales the Matusita distance to (1/2, 1/2) onto [0, 1].
inline const double kMatusitaNormalizer = std::sqrt((2.0 + std::sqrt(2.0)) / 2.0);

// Improving iff gc1 >= gc2 (ties count as improving).
enum class Direction { Improving, Deteriorating };

const char* to_string(Direction d) noexcept;

struct SubMeasure {
    std::size_t level = 0;
    double gc1 = 0.0;
    double gc2 = 0.0;
    double weight = 0.0;
    double gamma = 0.0;
    double upsilon1 = 0.0;  // sqrt(gc1) - sqrt(1/2)
    double upsilon2 = 0.0;
    Direction direction = Direction::Improving;
};

struct MeasureReport {
    double gamma_total = 0.0;
    std::vector<SubMeasure> subs;
    std::map<double, double> phi;  // lambda -> Phi^(lambda); always contains 0
    double psi = 0.0;
    std::pair<double, double> tau;  // (Phi^(0), Psi)
    Estimator estimator;
};

// Which argument order the power divergence takes against (1/2, 1/2).
enum class DivergenceDirection {
    ToUniform,    // I({gc1, gc2}; {1/2, 1/2})
    FromUniform,  // I({1/2, 1/2}; {gc1, gc2})
};

// sqrt(sum_k (sqrt u_k - sqrt v_k)^2). Sizes must match.
double matusita_distance(std::span<const double> u, std::span<const double> v);

// Normalized Matusita distance from (gc1, gc2) to (1/2, 1/2).
// Throws InputError unless gc1, gc2 >= 0 and gc1 + gc2 = 1 within 1e-9.
double sub_measure_gamma(double gc1, double gc2);

// Cressie-Read power divergence I^(lambda)(u; v) for lambda > -1, with 0 log 0 = 0 and 0 * 0^lambda = 0.
// lambda within 1e-8 of 0 or -1/2 uses the closed limit forms.
double power_divergence(std::span<const double> u, std::span<const double> v, double lambda);

double power_divergence(double gc1, double gc2, double lambda,
                        DivergenceDirection direction = DivergenceDirection::ToUniform);

// One entry per level; empty where g1 + g2 = 0.
std::vector<std::optional<SubMeasure>> sub_measures(const MarginalSummary& s);

// Gamma and subs populated. Throws MeasureUndefined.
MeasureReport measure_gamma(const MarginalSummary& s);

double measure_phi(const MarginalSummary& s, double lambda);
double measure_psi(const MarginalSummary& s);
std::pair<double, double> measure_tau(const MarginalSummary& s);

// Everything: Gamma, subs, Phi for lambda = 0 plus each extra lambda, Psi, tau.
MeasureReport measure_report(const MarginalSummary& s, std::span<const double> lambdas = {});

}  // namespace mhviz
