// Loss and variance metrics measured against the PCA optimum, plus sparsity
// counters and a closed-form sanity check on the all-ones matrix.
#pragma once

#include <vector>

#include "sparsenc/types.hpp"

namespace sparsenc {

// ||X - X H (XH)^+ X||_F^2 / ||X - X_k||_F^2 with k = H's column count.
// When the PCA floor is zero: 1 if the numerator is within 1e-12 * ||X||_F^2,
// +infinity otherwise.
double normalized_information_loss(const Matrix& x, const Matrix& h, int k);

// ||X H H^+||_F^2 / ||X_k||_F^2, at most 1 for any H with k columns.
double symmetric_explained_variance(const Matrix& x, const Matrix& h, int k);

struct VarianceConversion {
    double explained = 0.0;   // ||X H H^T||_F^2 (H orthonormal, so H^+ = H^T)
    double bound = 0.0;       // ||X_k||_F^2 - epsilon * ||X - X_k||_F^2
    double weak_bound = 0.0;  // (1 - (rho - k)/k * epsilon) * ||X_k||_F^2
    double epsilon = 0.0;     // relative excess loss of H over the PCA floor
    bool holds = false;       // explained >= bound - 1e-8 * scale
};

// Converts the loss guarantee into explained-variance form: with epsilon
// read off from ||X - X H H^T||_F^2 = (1 + epsilon) ||X - X_k||_F^2, checks
// ||X H H^T||_F^2 >= ||X_k||_F^2 - epsilon ||X - X_k||_F^2 and the weaker
// rank-dependent form. Requires H with orthonormal columns. When
// ||X - X_k||_F^2 = 0 no finite epsilon exists; both bounds are set to
// explained and holds is true, the comparison being vacuous.
VarianceConversion variance_conversion_check(const Matrix& x, const Matrix& h, int k);

// Rows of H carrying any entry above the sparsity threshold.
int combined_sparsity(const Matrix& h);

// Mean nonzero count per column.
double avg_column_sparsity(const Matrix& h);

// For the all-ones n x d matrix, the best r-sparse unit direction attains
// v^T A^T A v / ||A||_2^2 = r/d exactly (uniform weights on any r columns).
// Returns the maximum ratio over uniform-weight and seeded random r-sparse
// unit vectors.
double allones_sanity(int n, int d, int r);

}  // namespace sparsenc
