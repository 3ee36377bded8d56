// Column subset selection: greedy scan, randomized leverage + adaptive
// sampling, and the best rank-k approximation restricted to a column span.
// Column indices are 0-based and strictly increasing; all tie-breaks pick the
// smallest index.
#pragma once

#include <cstdint>
#include <vector>

#include "sparsenc/matrix_ops.hpp"
#include "sparsenc/types.hpp"

namespace sparsenc {

struct ColumnSelection {
    std::vector<int> indices;  // strictly increasing, within [0, source_cols)
    int source_cols = 0;

    ColumnSelection() = default;
    ColumnSelection(std::vector<int> idx, int cols);
    int size() const { return static_cast<int>(indices.size()); }
};

enum class SelectionKind { Greedy, Randomized };

struct SelectionStrategy {
    SelectionKind kind = SelectionKind::Randomized;
    std::uint64_t seed = 0;
    int trials = 1;  // best-of trials for the randomized kind
};

// X restricted to the selected columns, i.e. X * materialize_sampling(sel).
Matrix select_columns(const Matrix& x, const ColumnSelection& sel);

// The d x r sampling matrix with (sel.indices[j], j) = 1.
Matrix materialize_sampling(const ColumnSelection& sel);

// Drops later columns that are numerically dependent on earlier ones (their
// orthogonal residual falls at or below kRankTol times the largest selected
// column norm). The span of the selected columns is unchanged.
ColumnSelection reduce_selection(const Matrix& x, const ColumnSelection& sel);

// Best rank-k approximation of X with columns constrained to span(X * Omega),
// computed as Q (Q^T X)_k. Dependent selected columns are dropped first;
// throws DegenerateSelectionError if fewer than k independent columns remain.
Matrix best_rank_k_in_span(const Matrix& x, const ColumnSelection& sel, int k);

// ||X - best_rank_k_in_span(X, sel, k)||_F^2 without forming the residual.
double span_restricted_loss(const Matrix& x, const ColumnSelection& sel, int k);

// Grows a selection one column at a time, each step taking the column that
// minimizes ||X - X_{C,min(k,|C|)}||_F^2 after joining.
ColumnSelection select_columns_greedy(const Matrix& x, int k, int r);

// Orthonormal d x k' basis approximating the top-k right singular subspace
// (k' < k only when rank(X) < k). Gaussian sketch of width k+10 with
// max(4, ceil(4*log2(1/eps))) power iterations.
Matrix approx_top_right_singular(const Matrix& x, int k, double eps, std::uint64_t seed);

// Extends sel by up to s columns sampled without replacement with probability
// proportional to squared residual column norms ||(X - C C^+ X)_j||^2.
// Returns sel unchanged when every residual column is zero; stops early when
// the residual mass runs out.
ColumnSelection adaptive_sample(const Matrix& x, const ColumnSelection& sel, int s,
                                std::uint64_t seed);

// Three-step randomized selection: approximate right singular subspace,
// leverage-score sampling of min(5k, r) columns, then adaptive sampling for
// the remainder. Always returns exactly r distinct indices.
ColumnSelection select_columns_randomized(const Matrix& x, int k, int r, std::uint64_t seed);

// Best of `trials` randomized selections by span-restricted loss; trial t
// runs with derive_seed(seed, t), so trials=1 reproduces
// select_columns_randomized(x, k, r, seed).
ColumnSelection boost_best_of(const Matrix& x, int k, int r, int trials, std::uint64_t seed);

}  // namespace sparsenc
