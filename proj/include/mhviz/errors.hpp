#pragma once

#include <stdexcept>
#include <string>

namespace mhviz {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or invalid table input.
class InputError : public Error {
public:
    enum class Kind { NonSquare, NegativeCell, NonInteger, NonNumeric, Empty, TooSmall, BadProbabilities, BadArgument };

    InputError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Delta = 0, or a level with G1 + G2 = 0.
class MeasureUndefined : public Error {
public:
    explicit MeasureUndefined(const std::string& what) : Error("measure undefined: " + what) {}
};

// Some C_i is below the degeneracy tolerance; the delta method is invalid at the MH kink.
class DegenerateAtMH : public Error {
public:
    explicit DegenerateAtMH(const std::string& what) : Error(what) {}
};

// Some conditional probability sits on {0, 1}; A_i or B_i would divide by zero.
class BoundaryGc : public Error {
public:
    explicit BoundaryGc(const std::string& what) : Error(what) {}
};

}  // namespace mhviz
