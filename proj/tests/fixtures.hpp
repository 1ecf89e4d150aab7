#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mhviz/table.hpp"

namespace mhviz::test {

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(MHVIZ_TEST_DATA) + "/" + name, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline SquareTable load_table(const std::string& name) { return parse_table(read_fixture(name)); }

// Random counts in [lo, hi]; lo >= 1 keeps every level away from Gc in {0, 1}.
inline SquareTable random_table(std::mt19937_64& rng, std::size_t r, std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> cell(lo, hi);
    std::vector<std::vector<std::int64_t>> rows(r, std::vector<std::int64_t>(r));
    for (auto& row : rows)
        for (auto& c : row) c = cell(rng);
    return SquareTable(rows);
}

inline ProbTable random_probs(std::mt19937_64& rng, std::size_t r) {
    std::uniform_real_distribution<double> cell(0.05, 1.0);
    std::vector<double> p(r * r);
    double sum = 0.0;
    for (double& v : p) sum += (v = cell(rng));
    for (double& v : p) v /= sum;
    return ProbTable(r, std::move(p), Estimator::given());
}

inline SquareTable from_rows(std::vector<std::vector<std::int64_t>> rows) { return SquareTable(rows); }

}  // namespace mhviz::test
