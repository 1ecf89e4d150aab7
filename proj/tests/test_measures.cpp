#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "mhviz/errors.hpp"
#include "mhviz/measures.hpp"

using namespace mhviz;
using mhviz::test::load_table;
using mhviz::test::read_fixture;

namespace {

double round3(double v) { return std::floor(v * 1000.0 + 0.5) / 1000.0; }

MarginalSummary summary_of(const SquareTable& t) { return marginal_summary(to_probabilities(t)); }

MarginalSummary summary_of(const std::string& fixture) { return summary_of(load_table(fixture)); }

// Matusita sub-measure straight from its definition.
double gamma_by_hand(double gc1, double gc2) {
    const double u1 = std::sqrt(gc1) - std::sqrt(0.5);
    const double u2 = std::sqrt(gc2) - std::sqrt(0.5);
    return std::sqrt((2.0 + std::sqrt(2.0)) / 2.0 * (u1 * u1 + u2 * u2));
}

}  // namespace

TEST_CASE("sub_measure_gamma reference values") {
    CHECK(round3(sub_measure_gamma(1.0, 0.0)) == doctest::Approx(1.000));
    CHECK(sub_measure_gamma(1.0, 0.0) <= 1.0);
    CHECK(sub_measure_gamma(0.5, 0.5) == 0.0);
    CHECK(round3(sub_measure_gamma(0.25, 0.75)) == doctest::Approx(0.341));
    CHECK(sub_measure_gamma(0.75, 0.25) == doctest::Approx(sub_measure_gamma(0.25, 0.75)).epsilon(1e-15));
    CHECK(sub_measure_gamma(0.25, 0.75) == doctest::Approx(gamma_by_hand(0.25, 0.75)).epsilon(1e-14));
}

TEST_CASE("sub_measure_gamma rejects non-distributions") {
    CHECK_THROWS_AS(sub_measure_gamma(0.6, 0.6), InputError);
    CHECK_THROWS_AS(sub_measure_gamma(-0.1, 1.1), InputError);
    CHECK_NOTHROW(sub_measure_gamma(0.3, 0.7 + 5e-10));
}

TEST_CASE("sub-measure is zero exactly at one half") {
    CHECK(sub_measure_gamma(0.5 + 5e-13, 0.5 - 5e-13) == 0.0);
    CHECK(sub_measure_gamma(0.5 + 1e-9, 0.5 - 1e-9) > 0.0);
}

TEST_CASE("power_divergence reference values") {
    CHECK(round3(power_divergence(0.25, 0.75, 0.0)) == doctest::Approx(0.131));
    CHECK(round3(power_divergence(0.25, 0.75, 0.0, DivergenceDirection::FromUniform)) == doctest::Approx(0.144));
    for (double lambda : {-0.9, -0.5, 0.0, 2.0 / 3.0, 1.0, 3.0}) {
        CHECK(power_divergence(0.5, 0.5, lambda) == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(power_divergence(0.3, 0.7, -1.0), InputError);
    CHECK_THROWS_AS(power_divergence(0.3, 0.7, -2.0), InputError);
}

TEST_CASE("power_divergence limit forms are continuous") {
    for (double gc1 : {0.0, 0.1, 0.37, 0.9, 1.0}) {
        const double gc2 = 1.0 - gc1;
        CHECK(power_divergence(gc1, gc2, 1e-6) == doctest::Approx(power_divergence(gc1, gc2, 0.0)).epsilon(1e-5));
        CHECK(power_divergence(gc1, gc2, -0.5 + 1e-6) ==
              doctest::Approx(power_divergence(gc1, gc2, -0.5)).epsilon(1e-5));
        // I^(-1/2) is twice the squared Matusita distance
        const std::array<double, 2> u{gc1, gc2};
        const std::array<double, 2> half{0.5, 0.5};
        const double d = matusita_distance(u, half);
        CHECK(power_divergence(gc1, gc2, -0.5) == doctest::Approx(2.0 * d * d).epsilon(1e-12));
    }
    // 0 log 0 = 0
    CHECK(power_divergence(1.0, 0.0, 0.0) == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("measure_gamma on artificial data") {
    CHECK(measure_gamma(summary_of("table4a.csv")).gamma_total == 0.0);
    for (const char* f : {"table4b.csv", "table6a.csv", "table6b.csv", "table6c.csv", "table6d.csv"}) {
        CAPTURE(f);
        CHECK(measure_gamma(summary_of(f)).gamma_total == doctest::Approx(0.341).epsilon(0.001 / 0.341));
    }
}

TEST_CASE("measure_gamma on Table 2 matches a brute-force weighted sum") {
    const MeasureReport m = measure_gamma(marginal_summary(parse_prob_table(read_fixture("table2_probs.csv"))));
    // sizes 10/64, 16/64, 12/64, 16/64, 10/64 with (Gc1, Gc2) = (1,0), (3/4,1/4), (1/2,1/2), (1/4,3/4), (0,1)
    const double expected = 10.0 / 64.0 * gamma_by_hand(1.0, 0.0) + 16.0 / 64.0 * gamma_by_hand(0.75, 0.25) +
                            12.0 / 64.0 * gamma_by_hand(0.5, 0.5) + 16.0 / 64.0 * gamma_by_hand(0.25, 0.75) +
                            10.0 / 64.0 * gamma_by_hand(0.0, 1.0);
    CHECK(m.gamma_total == doctest::Approx(expected).epsilon(1e-13));
    CHECK(round3(m.gamma_total) == doctest::Approx(0.483));

    double reassembled = 0.0;
    for (const auto& s : m.subs) reassembled += s.weight * s.gamma;
    CHECK(std::abs(reassembled - m.gamma_total) <= 1e-12);
}

TEST_CASE("measure_gamma fails on undefined levels") {
    CHECK_THROWS_WITH_AS(measure_gamma(summary_of("diag_only.csv")), "measure undefined: Δ = 0", MeasureUndefined);
    CHECK_THROWS_AS(measure_gamma(summary_of(parse_table("3,0,0\n0,2,1\n0,4,1"))), MeasureUndefined);
    CHECK_THROWS_AS(measure_phi(summary_of("diag_only.csv"), 0.0), MeasureUndefined);
    CHECK_THROWS_AS(measure_psi(summary_of("diag_only.csv")), MeasureUndefined);
}

TEST_CASE("Phi baseline") {
    CHECK(measure_phi(summary_of("table4a.csv"), 0.0) == 0.0);
    const double kl = 0.25 * std::log(0.25 / 0.5) + 0.75 * std::log(0.75 / 0.5);
    CHECK(measure_phi(summary_of("table4b.csv"), 0.0) == doctest::Approx(kl / std::numbers::ln2).epsilon(1e-13));
    CHECK(round3(measure_phi(summary_of("table4b.csv"), 0.0)) == doctest::Approx(0.189));

    const MarginalSummary upper = summary_of(parse_table("1,2,3,4\n0,1,5,6\n0,0,1,7\n0,0,0,1"));
    for (double lambda : {-0.5, 0.0, 1.0, 2.5}) {
        CHECK(measure_phi(upper, lambda) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(measure_phi(upper, -1.0), InputError);
}

TEST_CASE("Psi baseline") {
    const MarginalSummary lower = summary_of(parse_table("1,0,0\n2,1,0\n3,4,1"));
    CHECK(measure_psi(lower) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(measure_psi(summary_of(parse_table("4,1,2\n1,5,3\n2,3,6"))) == doctest::Approx(0.0));
    const double expected = 4.0 / std::numbers::pi * (std::acos(1.0 / std::sqrt(10.0)) - std::numbers::pi / 4.0);
    CHECK(measure_psi(summary_of("table4b.csv")) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(round3(measure_psi(summary_of("table4b.csv"))) == doctest::Approx(0.590));
}

TEST_CASE("tau pairs Phi(0) with Psi") {
    auto t = measure_tau(summary_of("table4a.csv"));
    CHECK(t.first == 0.0);
    CHECK(t.second == doctest::Approx(0.0).epsilon(1e-15));

    t = measure_tau(summary_of(parse_table("1,2,3\n0,1,5\n0,0,1")));
    CHECK(t.first == doctest::Approx(1.0));
    CHECK(t.second == doctest::Approx(-1.0));

    t = measure_tau(summary_of("table4b.csv"));
    CHECK(round3(t.first) == doctest::Approx(0.189));
    CHECK(round3(t.second) == doctest::Approx(0.590));

    const MeasureReport full = measure_report(summary_of("table4b.csv"), std::vector<double>{1.0});
    CHECK(full.tau.first == full.phi.at(0.0));
    CHECK(full.tau.second == full.psi);
    CHECK(full.phi.size() == 2);
}

TEST_CASE("direction ties count as improving") {
    const MeasureReport m = measure_gamma(summary_of("table4a.csv"));
    for (const auto& s : m.subs) CHECK(s.direction == Direction::Improving);
    const MeasureReport b = measure_gamma(summary_of("table4b.csv"));
    for (const auto& s : b.subs) CHECK(s.direction == Direction::Deteriorating);
}

TEST_CASE("Matusita distance postulates") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int failures = 0;
    for (int k = 0; k < 10000; ++k) {
        const double a = unit(rng);
        const double b = unit(rng);
        const double c = k % 17 == 0 ? a : unit(rng);
        const std::array<double, 2> u{a, 1.0 - a};
        const std::array<double, 2> v{b, 1.0 - b};
        const std::array<double, 2> w{c, 1.0 - c};
        const double uv = matusita_distance(u, v);
        const double vu = matusita_distance(v, u);
        const double uw = matusita_distance(u, w);
        const double vw = matusita_distance(v, w);
        if (uv < 0.0 || uv != vu || uw > uv + vw + 1e-12) ++failures;
        if ((uw == 0.0) != (a == c)) ++failures;
        if (matusita_distance(u, u) != 0.0) ++failures;
        // gamma is the normalized distance to (1/2, 1/2)
        const std::array<double, 2> half{0.5, 0.5};
        if (std::abs(sub_measure_gamma(a, 1.0 - a) - kMatusitaNormalizer * matusita_distance(u, half)) > 1e-12) {
            ++failures;
        }
    }
    CHECK(failures == 0);
    CHECK(kMatusitaNormalizer * kMatusitaNormalizer == doctest::Approx((2.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-15));
}

TEST_CASE("KL is direction dependent, Matusita is not") {
    const double forward = power_divergence(0.25, 0.75, 0.0, DivergenceDirection::ToUniform);
    const double backward = power_divergence(0.25, 0.75, 0.0, DivergenceDirection::FromUniform);
    CHECK(std::abs(forward - backward) > 1e-3);
    const std::array<double, 2> g{0.25, 0.75};
    const std::array<double, 2> half{0.5, 0.5};
    CHECK(matusita_distance(g, half) == matusita_distance(half, g));
}

TEST_CASE("measure properties on random tables") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t r = 2 + trial % 6;
        const SquareTable t = test::random_table(rng, r, trial % 3 == 0 ? 0 : 1, 40);
        const MarginalSummary s = summary_of(t);
        if (!s.all_defined()) continue;
        const MeasureReport m = measure_report(s, std::vector<double>{-0.5, 1.0, 2.0});

        CHECK(m.gamma_total >= 0.0);
        CHECK(m.gamma_total <= 1.0);
        CHECK(m.psi >= -1.0);
        CHECK(m.psi <= 1.0);
        for (const auto& [lambda, phi] : m.phi) {
            CHECK(phi >= 0.0);
            CHECK(phi <= 1.0);
        }
        for (const auto& sub : m.subs) {
            CHECK(sub.gamma >= 0.0);
            CHECK(sub.gamma <= 1.0);
        }

        // scale invariance
        const MeasureReport scaled = measure_report(summary_of(t.scaled(3 + trial % 5)), std::vector<double>{-0.5, 1.0, 2.0});
        CHECK(std::abs(scaled.gamma_total - m.gamma_total) <= 1e-12);
        CHECK(std::abs(scaled.psi - m.psi) <= 1e-12);
        CHECK(std::abs(scaled.phi.at(1.0) - m.phi.at(1.0)) <= 1e-12);

        // diagonal invariance
        std::vector<std::vector<std::int64_t>> rows(r, std::vector<std::int64_t>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) rows[i][j] = i == j ? t(i, j) + 13 * static_cast<std::int64_t>(i + 1) : t(i, j);
        const MeasureReport diag = measure_report(summary_of(SquareTable(rows)), std::vector<double>{-0.5, 1.0, 2.0});
        CHECK(std::abs(diag.gamma_total - m.gamma_total) <= 1e-12);
        CHECK(std::abs(diag.psi - m.psi) <= 1e-12);
        CHECK(std::abs(diag.tau.first - m.tau.first) <= 1e-12);
        for (std::size_t k = 0; k < m.subs.size(); ++k) CHECK(std::abs(diag.subs[k].gamma - m.subs[k].gamma) <= 1e-12);

        // transpose: Gamma and Phi symmetric, Psi antisymmetric
        const MeasureReport tr = measure_report(summary_of(t.transposed()), std::vector<double>{-0.5, 1.0, 2.0});
        CHECK(std::abs(tr.gamma_total - m.gamma_total) <= 1e-12);
        CHECK(std::abs(tr.psi + m.psi) <= 1e-12);
        for (const auto& [lambda, phi] : m.phi) CHECK(std::abs(tr.phi.at(lambda) - phi) <= 1e-12);
    }
}

TEST_CASE("maximal departure gives Gamma = 1") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 2 + trial % 5;
        // at every cut only one off-diagonal block carries mass: mix upper-only and lower-only bands
        std::vector<std::vector<std::int64_t>> rows(r, std::vector<std::int64_t>(r, 0));
        std::uniform_int_distribution<std::int64_t> cell(1, 9);
        const bool upper = trial % 2 == 0;
        for (std::size_t i = 0; i < r; ++i) {
            rows[i][i] = cell(rng);
            for (std::size_t j = 0; j < r; ++j)
                if ((upper && j > i) || (!upper && j < i)) rows[i][j] = cell(rng);
        }
        const MeasureReport m = measure_report(summary_of(SquareTable(rows)));
        CHECK(m.gamma_total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.phi.at(0.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(m.psi) == doctest::Approx(1.0).epsilon(1e-12));
    }
}
