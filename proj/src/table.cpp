#include "mhviz/table.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "mhviz/errors.hpp"

namespace mhviz {

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::vector<std::string_view>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = trim(text.substr(pos, eol - pos));
        if (!line.empty()) {
            std::vector<std::string_view> fields;
            std::size_t start = 0;
            while (true) {
                std::size_t comma = line.find(',', start);
                fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            rows.push_back(std::move(fields));
        }
        pos = eol + 1;
    }
    return rows;
}

bool parses_as_number(std::string_view field) {
    double v = 0.0;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    return ec == std::errc() && ptr == field.data() + field.size();
}

// Drops a header row and checks the grid is square with r >= 2.
std::vector<std::vector<std::string_view>> body_rows(std::string_view text) {
    auto rows = split_csv(text);
    if (!rows.empty()) {
        bool header = false;
        for (auto f : rows.front()) header = header || !parses_as_number(f);
        if (header) rows.erase(rows.begin());
    }
    if (rows.empty()) throw InputError(InputError::Kind::Empty, "empty table");
    for (const auto& row : rows) {
        if (row.size() != rows.size()) {
            throw InputError(InputError::Kind::NonSquare,
                             "table is not square: " + std::to_string(rows.size()) + " rows but a row has " +
                                 std::to_string(row.size()) + " columns");
        }
    }
    if (rows.size() < 2) throw InputError(InputError::Kind::TooSmall, "table dimension must be at least 2");
    return rows;
}

std::int64_t parse_count(std::string_view field) {
    std::string_view digits = field;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) {
        if (v < 0) throw InputError(InputError::Kind::NegativeCell, "negative cell count: " + std::string(field));
        return v;
    }
    if (parses_as_number(field)) {
        throw InputError(InputError::Kind::NonInteger, "cell count is not an integer: " + std::string(field));
    }
    throw InputError(InputError::Kind::NonNumeric, "cell is not numeric: " + std::string(field));
}

double parse_prob(std::string_view field) {
    std::string_view s = field;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw InputError(InputError::Kind::NonNumeric, "cell is not numeric: " + std::string(field));
    }
    if (v < 0.0) throw InputError(InputError::Kind::NegativeCell, "negative cell probability: " + std::string(field));
    return v;
}

}  // namespace

SquareTable::SquareTable(const std::vector<std::vector<std::int64_t>>& rows) {
    if (rows.empty()) throw InputError(InputError::Kind::Empty, "empty table");
    dim_ = rows.size();
    for (const auto& row : rows) {
        if (row.size() != dim_) throw InputError(InputError::Kind::NonSquare, "table is not square");
    }
    if (dim_ < 2) throw InputError(InputError::Kind::TooSmall, "table dimension must be at least 2");
    counts_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        for (auto c : row) {
            if (c < 0) throw InputError(InputError::Kind::NegativeCell, "negative cell count");
            counts_.push_back(c);
            total_ += c;
        }
    }
    if (total_ < 1) throw InputError(InputError::Kind::Empty, "table total is zero");
}

SquareTable SquareTable::transposed() const {
    std::vector<std::vector<std::int64_t>> rows(dim_, std::vector<std::int64_t>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) rows[j][i] = (*this)(i, j);
    return SquareTable(rows);
}

SquareTable SquareTable::scaled(std::int64_t factor) const {
    if (factor < 1) throw InputError(InputError::Kind::BadArgument, "scale factor must be positive");
    std::vector<std::vector<std::int64_t>> rows(dim_, std::vector<std::int64_t>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) rows[i][j] = (*this)(i, j) * factor;
    return SquareTable(rows);
}

std::string Estimator::name() const {
    switch (kind) {
        case Kind::SampleProportion: return "sample";
        case Kind::BayesSmoothed: return "bayes";
        case Kind::Given: return "given";
    }
    return "unknown";
}

ProbTable::ProbTable(std::size_t dim, std::vector<double> probs, Estimator source)
    : dim_(dim), probs_(std::move(probs)), source_(source) {
    if (dim_ < 2) throw InputError(InputError::Kind::TooSmall, "table dimension must be at least 2");
    if (probs_.size() != dim_ * dim_) throw InputError(InputError::Kind::NonSquare, "probability grid is not square");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw InputError(InputError::Kind::BadProbabilities, "cell probability must be finite and non-negative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
        throw InputError(InputError::Kind::BadProbabilities, "cell probabilities do not sum to one");
    }
}

ProbTable ProbTable::transposed() const {
    std::vector<double> t(probs_.size());
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) t[j * dim_ + i] = (*this)(i, j);
    return ProbTable(dim_, std::move(t), source_);
}

bool MarginalSummary::all_defined() const noexcept {
    if (!(delta > 0.0)) return false;
    for (const auto& l : levels)
        if (!l.defined()) return false;
    return true;
}

void MarginalSummary::require_defined() const {
    if (!(delta > 0.0)) throw MeasureUndefined("Δ = 0");
    for (const auto& l : levels) {
        if (!l.defined()) throw MeasureUndefined("G1 + G2 = 0 at level " + std::to_string(l.level));
    }
}

SquareTable parse_table(std::string_view text) {
    auto rows = body_rows(text);
    std::vector<std::vector<std::int64_t>> counts;
    counts.reserve(rows.size());
    for (const auto& row : rows) {
        auto& out = counts.emplace_back();
        for (auto f : row) out.push_back(parse_count(f));
    }
    return SquareTable(counts);
}

ProbTable parse_prob_table(std::string_view text) {
    auto rows = body_rows(text);
    std::vector<double> probs;
    for (const auto& row : rows)
        for (auto f : row) probs.push_back(parse_prob(f));
    double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-6) {
        throw InputError(InputError::Kind::BadProbabilities, "cell probabilities must sum to 1 (got " + std::to_string(sum) + ")");
    }
    for (double& p : probs) p /= sum;
    return ProbTable(rows.size(), std::move(probs), Estimator::given());
}

ProbTable to_probabilities(const SquareTable& t) {
    const double n = static_cast<double>(t.total());
    std::vector<double> probs;
    probs.reserve(t.cells().size());
    for (auto c : t.cells()) probs.push_back(static_cast<double>(c) / n);
    return ProbTable(t.dim(), std::move(probs), Estimator::sample());
}

ProbTable bayes_smooth(const SquareTable& t, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InputError(InputError::Kind::BadArgument, "Dirichlet parameter alpha must be positive");
    }
    const double r = static_cast<double>(t.dim());
    const double denom = static_cast<double>(t.total()) + r * r * alpha;
    std::vector<double> probs;
    probs.reserve(t.cells().size());
    for (auto c : t.cells()) probs.push_back((static_cast<double>(c) + alpha) / denom);
    return ProbTable(t.dim(), std::move(probs), Estimator::bayes(alpha));
}

MarginalSummary marginal_summary(const ProbTable& p) {
    const std::size_t r = p.dim();
    MarginalSummary s;
    s.dim = r;
    s.source = p.source();
    s.row_marginals.assign(r, 0.0);
    s.col_marginals.assign(r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            s.row_marginals[i] += p(i, j);
            s.col_marginals[j] += p(i, j);
        }
    }

    double f1 = 0.0;
    double f2 = 0.0;
    for (std::size_t cut = 1; cut < r; ++cut) {
        LevelSummary l;
        l.level = cut;
        f1 += s.row_marginals[cut - 1];
        f2 += s.col_marginals[cut - 1];
        l.f1 = f1;
        l.f2 = f2;
        for (std::size_t row = 0; row < cut; ++row)
            for (std::size_t col = cut; col < r; ++col) l.g1 += p(row, col);
        for (std::size_t row = cut; row < r; ++row)
            for (std::size_t col = 0; col < cut; ++col) l.g2 += p(row, col);
        const double block = l.g1 + l.g2;
        if (block > 0.0) {
            l.gc1 = l.g1 / block;
            l.gc2 = l.g2 / block;
        }
        s.delta += block;
        s.levels.push_back(l);
    }
    if (s.delta > 0.0) {
        for (auto& l : s.levels) l.weight = (l.g1 + l.g2) / s.delta;
    }
    return s;
}

}  // namespace mhviz
