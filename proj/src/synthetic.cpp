#include "sparsenc/synthetic.hpp"

#include <cmath>

#include "sparsenc/matrix_ops.hpp"
#include "sparsenc/rng.hpp"

namespace sparsenc {

namespace {

Matrix seeded_orthonormal(int rows, int cols, SeededRng& rng) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.gaussian();
    return qr_thin(g).Q;
}

}  // namespace

Matrix generate_synthetic(SyntheticKind kind, int n, int d, std::uint64_t seed,
                          const SyntheticParams& params) {
    if (n < 1 || d < 1) throw std::invalid_argument("generate_synthetic: empty shape");
    if (kind == SyntheticKind::AllOnes) return Matrix::Ones(n, d);

    const int rho = std::min(n, d);
    Vector sigma(rho);
    switch (kind) {
        case SyntheticKind::PowerLaw:
            if (params.decay < 0.0)
                throw std::invalid_argument("generate_synthetic: decay must be non-negative");
            for (int i = 0; i < rho; ++i) sigma(i) = std::pow(static_cast<double>(i + 1),
                                                              -params.decay);
            break;
        case SyntheticKind::Spiked:
            if (params.spikes < 1 || params.spikes > rho)
                throw std::invalid_argument("generate_synthetic: spikes out of range");
            if (params.spike <= 0.0 || params.noise < 0.0 || params.noise > params.spike)
                throw std::invalid_argument("generate_synthetic: bad spike/noise levels");
            for (int i = 0; i < rho; ++i) sigma(i) = i < params.spikes ? params.spike
                                                                       : params.noise;
            break;
        case SyntheticKind::Flat:
            sigma.setOnes();
            break;
        default:
            throw std::invalid_argument("generate_synthetic: unknown kind");
    }

    SeededRng rng(seed);
    Matrix u = seeded_orthonormal(n, rho, rng);
    Matrix v = seeded_orthonormal(d, rho, rng);
    return u * sigma.asDiagonal() * v.transpose();
}

}  // namespace sparsenc
