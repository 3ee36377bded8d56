// Dense factorizations with pinned numeric conventions: singular values at or
// below kRankTol * sigma_1 are dropped, and each right singular vector's
// largest-magnitude entry is made non-negative (ties to the smallest index),
// flipping the paired left vector in tandem.
#pragma once

#include "sparsenc/types.hpp"

namespace sparsenc {

struct SvdFactors {
    Matrix U;         // n x rank, orthonormal columns
    Vector sigma;     // rank, strictly positive, non-increasing
    Matrix V;         // d x rank, orthonormal columns
    int rank = 0;
};

struct QrFactors {
    Matrix Q;  // n x r, orthonormal columns
    Matrix R;  // r x r, upper triangular, positive diagonal
};

// Thin SVD truncated at the numeric rank.
SvdFactors svd(const Matrix& a);

// U_k diag(sigma_k) V_k^T from precomputed factors; k >= rank reproduces the
// full reconstruction.
Matrix truncate_rank(const SvdFactors& f, int k);

// Best rank-k approximation of a dense matrix.
Matrix truncate_rank(const Matrix& a, int k);

// Thin QR with R_ii > 0. Throws RankDeficiencyError when some |R_ii| falls at
// or below kRankTol times the largest diagonal magnitude.
QrFactors qr_thin(const Matrix& c);

// Moore-Penrose pseudo-inverse via SVD with the global rank tolerance.
Matrix pseudo_inverse(const Matrix& a);

// Largest singular value.
double spectral_norm(const Matrix& a);

// Orthonormal basis of the column space (empty 0-column matrix for rank 0).
Matrix orthonormal_range(const Matrix& a);

// Sum of the squared singular values beyond the k-th: ||A - A_k||_F^2,
// computed from the spectrum rather than by forming the residual.
double tail_energy(const SvdFactors& f, int k);

}  // namespace sparsenc
