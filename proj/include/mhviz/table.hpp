#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mhviz {

inline constexpr double kProbTolerance = 1e-12;
inline constexpr double kDefaultAlpha = 0.0001;

// r x r observed counts, row-major. Rows index X, columns index Y.
class SquareTable {
public:
    // Throws InputError if rows are not square, r < 2, any cell is negative, or n = 0.
    explicit SquareTable(const std::vector<std::vector<std::int64_t>>& rows);

    std::size_t dim() const noexcept { return dim_; }
    std::int64_t total() const noexcept { return total_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return counts_[i * dim_ + j]; }
    std::span<const std::int64_t> cells() const noexcept { return counts_; }

    SquareTable transposed() const;
    SquareTable scaled(std::int64_t factor) const;

private:
    std::size_t dim_ = 0;
    std::int64_t total_ = 0;
    std::vector<std::int64_t> counts_;
};

// How a ProbTable was estimated.
struct Estimator {
    enum class Kind { SampleProportion, BayesSmoothed, Given };

    Kind kind = Kind::SampleProportion;
    double alpha = 0.0;

    static Estimator sample() { return {Kind::SampleProportion, 0.0}; }
    static Estimator bayes(double a) { return {Kind::BayesSmoothed, a}; }
    static Estimator given() { return {Kind::Given, 0.0}; }

    std::string name() const;
    friend bool operator==(const Estimator&, const Estimator&) = default;
};

// r x r cell probabilities summing to one.
class ProbTable {
public:
    // Throws InputError unless square, r >= 2, every cell >= 0 and |sum - 1| <= 1e-12.
    ProbTable(std::size_t dim, std::vector<double> probs, Estimator source);

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return probs_[i * dim_ + j]; }
    std::span<const double> cells() const noexcept { return probs_; }
    const Estimator& source() const noexcept { return source_; }

    ProbTable transposed() const;

private:
    std::size_t dim_ = 0;
    std::vector<double> probs_;
    Estimator source_;
};

// Quantities for cut point i (1-based): X <= i versus X >= i + 1.
struct LevelSummary {
    std::size_t level = 0;
    double f1 = 0.0;  // Pr(X <= i)
    double f2 = 0.0;  // Pr(Y <= i)
    double g1 = 0.0;  // Pr(X <= i, Y >= i+1)
    double g2 = 0.0;  // Pr(X >= i+1, Y <= i)
    std::optional<double> gc1;  // g1 / (g1 + g2), empty when g1 + g2 = 0
    std::optional<double> gc2;
    double weight = 0.0;  // (g1 + g2) / delta, 0 when delta = 0

    bool defined() const noexcept { return gc1.has_value(); }
};

struct MarginalSummary {
    std::size_t dim = 0;
    std::vector<LevelSummary> levels;  // r - 1 entries
    double delta = 0.0;
    std::vector<double> row_marginals;
    std::vector<double> col_marginals;
    Estimator source;

    bool all_defined() const noexcept;
    // Throws MeasureUndefined if delta = 0 or some level has g1 + g2 = 0.
    void require_defined() const;
};

// CSV of non-negative integers. An optional first row with a non-numeric field is treated as a header.
SquareTable parse_table(std::string_view text);

// CSV of non-negative reals summing to 1 within 1e-6; renormalized exactly. Source is Estimator::given().
ProbTable parse_prob_table(std::string_view text);

ProbTable to_probabilities(const SquareTable& t);

// Dirichlet posterior mean (n_ij + alpha) / (n + r^2 alpha).
ProbTable bayes_smooth(const SquareTable& t, double alpha = kDefaultAlpha);

MarginalSummary marginal_summary(const ProbTable& p);

}  // namespace mhviz
