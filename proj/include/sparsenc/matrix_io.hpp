// Matrix file I/O: headerless CSV and MatrixMarket (array and coordinate,
// general and symmetric, real or integer fields). Writers emit 17
// significant digits so values round-trip exactly.
#pragma once

#include <string>

#include "sparsenc/types.hpp"

namespace sparsenc {

enum class MatrixFormat { Auto, Csv, MatrixMarket };

// Format detection for Auto: .mtx/.mm extensions and a %%MatrixMarket first
// line mean MatrixMarket; anything else is CSV.
Matrix load_matrix(const std::string& path, MatrixFormat format = MatrixFormat::Auto);

// Parses from an in-memory string (name only labels error messages).
Matrix parse_matrix(const std::string& text, MatrixFormat format, const std::string& name = "");

void save_matrix(const std::string& path, const Matrix& m,
                 MatrixFormat format = MatrixFormat::Auto);

std::string format_matrix(const Matrix& m, MatrixFormat format);

}  // namespace sparsenc
