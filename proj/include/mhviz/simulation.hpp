#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mhviz/table.hpp"

namespace mhviz {

inline const std::vector<double> kDefaultCutoffs{-1.2, -0.6, 0.0, 0.6, 1.2};
inline constexpr double kDefaultRho = 0.2;
inline constexpr std::int64_t kDefaultTrials = 10000;
inline constexpr std::uint64_t kDefaultSeed = 20240101;

// SplitMix64; satisfies UniformRandomBitGenerator. Output is fully specified, so streams are portable.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Independent stream for one trial; depends only on (seed, trial).
SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) noexcept;

// Counts of n draws over cells with the given probabilities (inverse CDF per draw).
std::vector<std::int64_t> sample_multinomial(std::span<const double> probs, std::int64_t n, SplitMix64& rng);

struct SimulationScenario {
    double d = 0.0;  // mean of Z2; Z1 has mean 0
    double rho = kDefaultRho;
    std::vector<double> cutoffs = kDefaultCutoffs;
    std::int64_t n = 3600;
    std::int64_t trials = kDefaultTrials;
    std::uint64_t seed = kDefaultSeed;
    double ci_level = 0.95;

    // Throws InputError on unordered cutoffs, |rho| >= 1, n < 1 or trials < 1.
    void validate() const;
};

struct SimulationResult {
    double d = 0.0;
    std::int64_t n = 0;
    double true_gamma = 0.0;
    double coverage = 0.0;  // covered / (trials - failed_trials); 0 when every trial failed
    double mean_estimate = 0.0;
    std::int64_t trials = 0;
    std::int64_t failed_trials = 0;  // interval undefined (measure undefined or degenerate)
    std::int64_t covered = 0;
};

// Pr(x_lo < Z1 <= x_hi, y_lo < Z2 <= y_hi) for unit-variance normals with means (0, mean2) and correlation rho.
// Limits may be infinite.
double bivariate_normal_rectangle(double x_lo, double x_hi, double y_lo, double y_hi, double mean2, double rho);

// Cell probabilities of (Z1, Z2) discretized by the cutoffs; r = cutoffs.size() + 1.
ProbTable cell_probs_bivariate_normal(double d, double rho, std::span<const double> cutoffs);

double true_measure(double d, double rho, std::span<const double> cutoffs);

// Results do not depend on workers.
SimulationResult run_coverage(const SimulationScenario& s, unsigned workers = 1);

}  // namespace mhviz
