// Sparse linear encoders built from column selections. The encoder H is a
// d x k matrix whose nonzero rows are confined to selected columns; pairing
// it with the least-squares decoder G = (XH)^+ X reconstructs X H G with
// information loss ||X - X H (XH)^+ X||_F^2 at most the loss of the best
// rank-k approximation inside the selected column span.
#pragma once

#include <cstdint>
#include <vector>

#include "sparsenc/column_select.hpp"
#include "sparsenc/report.hpp"
#include "sparsenc/types.hpp"

namespace sparsenc {

struct SparseEncoder {
    enum class Mode { Batch, Iterative };

    Matrix H;                               // d x k
    std::vector<std::vector<int>> support;  // per column: rows allowed nonzero
    std::vector<int> budgets;               // per column: sparsity budget r_j
    Mode mode = Mode::Batch;

    int factors() const { return static_cast<int>(H.cols()); }
};

struct Decoder {
    Matrix G;  // k x d
};

struct EncoderBuild {
    SparseEncoder encoder;
    Decoder decoder;
    int reduced_cardinality = 0;  // independent selected columns kept
    bool rank_clamped = false;    // fewer than k factors came out
};

struct EncodeResult {
    SparseEncoder encoder;
    Decoder decoder;
    LossReport report;
};

// Blackbox construction: QR-factor the selected columns, truncate Q^T X to
// rank k, and rotate back through R^{-1}. H has orthonormal columns supported
// on the (reduced) selection; X H G equals the best rank-k approximation
// within the selected span.
EncoderBuild encoder_from_columns(const Matrix& x, const ColumnSelection& sel, int k);

// ||X - X H (XH)^+ X||_F^2, the reconstruction error under the best linear
// decoder for H. XH = 0 degenerates to ||X||_F^2.
double information_loss(const Matrix& x, const Matrix& h);
double information_loss(const Matrix& x, const SparseEncoder& enc);

// G = (XH)^+ X, the loss-minimizing decoder.
Decoder optimal_decoder(const Matrix& x, const Matrix& h);

// Z = X H.
Matrix encode(const Matrix& x, const Matrix& h);

// X H (XH)^+ X, the reconstruction under the best linear decoder.
Matrix reconstruct(const Matrix& x, const Matrix& h);

// Orthonormalizes the columns of H without growing the union of supports;
// dependent columns are dropped. The result satisfies batch invariants with
// every column supported on the combined support.
SparseEncoder orthonormalize(const SparseEncoder& enc);

// Sparsity budgets r_j = 5 + ceil(5 j / eps) for j = 1..k.
std::vector<int> adaptive_schedule(int k, double eps);

// One-shot encoder with k factors sharing one support of size at most r.
EncodeResult batch_encoder(const Matrix& x, int k, int r, const SelectionStrategy& strategy);

// k rounds of rank-1 batch encoding against the refreshed residual
// X - X H (XH)^+ X; column j uses budget schedule[j] (clamped to d). Stops
// early when the residual is numerically zero.
EncodeResult iterative_encoder(const Matrix& x, int k, const std::vector<int>& schedule,
                               const SelectionStrategy& strategy);

}  // namespace sparsenc
