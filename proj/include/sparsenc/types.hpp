// Shared scalar/matrix aliases, error types, and numeric conventions.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sparsenc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative rank tolerance: singular values (and QR diagonals) at or below
// kRankTol times the largest one are treated as zero.
inline constexpr double kRankTol = 1e-10;

// Entries with magnitude at or below this count as zero for sparsity stats.
inline constexpr double kSparsityTol = 1e-12;

// Input that cannot be parsed or fails validation (exit code 1 at the CLI).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parse failure in a matrix file; line is 1-based.
class ParseError : public InputError {
public:
    ParseError(const std::string& msg, long line)
        : InputError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Numerical failure (exit code 2 at the CLI).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A factor matrix turned out numerically rank deficient; index identifies the
// offending column.
class RankDeficiencyError : public NumericalError {
public:
    RankDeficiencyError(const std::string& msg, int index)
        : NumericalError(msg + " (column " + std::to_string(index) + ")"), index_(index) {}
    int index() const { return index_; }

private:
    int index_;
};

// A column selection collapsed to nothing usable (e.g. all selected columns
// are zero, or fewer independent columns remain than factors requested).
class DegenerateSelectionError : public NumericalError {
public:
    explicit DegenerateSelectionError(const std::string& msg) : NumericalError(msg) {}
};

inline void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace sparsenc
