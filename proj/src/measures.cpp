#include "mhviz/measures.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <string>

#include "mhviz/errors.hpp"

namespace mhviz {

namespace {

constexpr double kLimitTolerance = 1e-8;

void require_lambda(double lambda) {
    if (!(lambda > -1.0) || !std::isfinite(lambda)) {
        throw InputError(InputError::Kind::BadArgument, "power-divergence lambda must be > -1");
    }
}

// u * ((u / v)^lambda - 1), with the 0 * 0^lambda = 0 convention.
double power_term(double u, double v, double lambda) {
    if (u == 0.0) return 0.0;
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    return u * (std::pow(u / v, lambda) - 1.0);
}

double phi_normalizer(double lambda) {
    if (std::abs(lambda) < kLimitTolerance) return 1.0 / std::numbers::ln2;
    return lambda * (lambda + 1.0) / (std::exp2(lambda) - 1.0);
}

}  // namespace

const char* to_string(Direction d) noexcept {
    return d == Direction::Improving ? "improving" : "deteriorating";
}

double matusita_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw InputError(InputError::Kind::BadArgument, "distributions differ in size");
    double sum = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double diff = std::sqrt(u[k]) - std::sqrt(v[k]);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double sub_measure_gamma(double gc1, double gc2) {
    if (!(gc1 >= 0.0) || !(gc2 >= 0.0) || std::abs(gc1 + gc2 - 1.0) > 1e-9) {
        throw InputError(InputError::Kind::BadArgument, "sub-measure needs a two-point distribution");
    }
    if (std::abs(gc1 - 0.5) <= 1e-12) return 0.0;
    const double half = std::sqrt(0.5);
    const double u1 = std::sqrt(gc1) - half;
    const double u2 = std::sqrt(gc2) - half;
    const double g = kMatusitaNormalizer * std::sqrt(u1 * u1 + u2 * u2);
    // Only rounding can push past 1.
    return std::min(g, 1.0);
}

double power_divergence(std::span<const double> u, std::span<const double> v, double lambda) {
    require_lambda(lambda);
    if (u.size() != v.size()) throw InputError(InputError::Kind::BadArgument, "distributions differ in size");

    if (std::abs(lambda) < kLimitTolerance) {
        double sum = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            if (u[k] == 0.0) continue;
            if (v[k] == 0.0) return std::numeric_limits<double>::infinity();
            sum += u[k] * std::log(u[k] / v[k]);
        }
        return sum;
    }
    if (std::abs(lambda + 0.5) < kLimitTolerance) {
        double affinity = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) affinity += std::sqrt(u[k] * v[k]);
        return 4.0 * (1.0 - affinity);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) sum += power_term(u[k], v[k], lambda);
    return sum / (lambda * (lambda + 1.0));
}

double power_divergence(double gc1, double gc2, double lambda, DivergenceDirection direction) {
    if (!(gc1 >= 0.0) || !(gc2 >= 0.0) || std::abs(gc1 + gc2 - 1.0) > 1e-9) {
        throw InputError(InputError::Kind::BadArgument, "power divergence needs a two-point distribution");
    }
    const std::array<double, 2> g{gc1, gc2};
    const std::array<double, 2> half{0.5, 0.5};
    return direction == DivergenceDirection::ToUniform ? power_divergence(g, half, lambda)
                                                       : power_divergence(half, g, lambda);
}

std::vector<std::optional<SubMeasure>> sub_measures(const MarginalSummary& s) {
    std::vector<std::optional<SubMeasure>> out;
    out.reserve(s.levels.size());
    const double half = std::sqrt(0.5);
    for (const auto& l : s.levels) {
        if (!l.defined()) {
            out.emplace_back();
            continue;
        }
        SubMeasure m;
        m.level = l.level;
        m.gc1 = *l.gc1;
        m.gc2 = *l.gc2;
        m.weight = l.weight;
        m.upsilon1 = std::sqrt(m.gc1) - half;
        m.upsilon2 = std::sqrt(m.gc2) - half;
        m.gamma = sub_measure_gamma(m.gc1, m.gc2);
        m.direction = m.gc1 >= m.gc2 ? Direction::Improving : Direction::Deteriorating;
        out.push_back(m);
    }
    return out;
}

MeasureReport measure_gamma(const MarginalSummary& s) {
    s.require_defined();
    MeasureReport report;
    report.estimator = s.source;
    for (auto& m : sub_measures(s)) {
        report.gamma_total += m->weight * m->gamma;
        report.subs.push_back(*m);
    }
    report.gamma_total = std::clamp(report.gamma_total, 0.0, 1.0);
    return report;
}

double measure_phi(const MarginalSummary& s, double lambda) {
    require_lambda(lambda);
    s.require_defined();
    double sum = 0.0;
    for (const auto& l : s.levels) sum += l.weight * power_divergence(*l.gc1, *l.gc2, lambda);
    return std::clamp(phi_normalizer(lambda) * sum, 0.0, 1.0);
}

double measure_psi(const MarginalSummary& s) {
    s.require_defined();
    double sum = 0.0;
    for (const auto& l : s.levels) {
        const double theta = std::acos(std::clamp(l.g1 / std::hypot(l.g1, l.g2), -1.0, 1.0));
        sum += l.weight * (theta - std::numbers::pi / 4.0);
    }
    return std::clamp(4.0 / std::numbers::pi * sum, -1.0, 1.0);
}

std::pair<double, double> measure_tau(const MarginalSummary& s) {
    return {measure_phi(s, 0.0), measure_psi(s)};
}

MeasureReport measure_report(const MarginalSummary& s, std::span<const double> lambdas) {
    MeasureReport report = measure_gamma(s);
    report.phi[0.0] = measure_phi(s, 0.0);
    for (double lambda : lambdas) report.phi[lambda] = measure_phi(s, lambda);
    report.psi = measure_psi(s);
    report.tau = {report.phi.at(0.0), report.psi};
    return report;
}

}  // namespace mhviz
