// Truncated power iteration for sparse components of a PSD matrix, with
// projection deflation between components. Comparison baseline for the
// selection-based encoders.
#pragma once

#include <cstdint>

#include "sparsenc/encoder.hpp"
#include "sparsenc/types.hpp"

namespace sparsenc {

struct TPowerOptions {
    int max_iters = 1000;
    double tol = 1e-8;  // direction-change threshold
};

struct TPowerResult {
    Vector v;                // unit vector, at most r nonzeros
    bool degenerate = false;  // matrix was zero; v fell back to e_1
    int iterations = 0;
};

// Keeps the r largest-magnitude entries (ties to the smallest index), zeroing
// the rest.
Vector truncate_to_top_r(const Vector& v, int r);

// Truncated power iteration on symmetric PSD A from a seeded Gaussian start:
// v <- normalize(truncate_to_top_r(A v, r)) until the support is fixed and
// the direction change drops below tol, or max_iters is reached.
TPowerResult tpower(const Matrix& a, int r, std::uint64_t seed,
                    const TPowerOptions& opts = {});

// Projection deflation (I - h h^T) A (I - h h^T); h must be a unit vector.
// The result is symmetrized exactly and stays PSD when A is PSD.
Matrix deflate(const Matrix& a, const Vector& h);

// k rounds of tpower + deflate; column j uses seed derive_seed(seed, j), so
// k=1 reproduces a single tpower call.
SparseEncoder sparse_components_deflation(const Matrix& a, int k, int r, std::uint64_t seed,
                                          const TPowerOptions& opts = {});

}  // namespace sparsenc
