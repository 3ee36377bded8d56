// Seeded synthetic matrices with controlled spectra: the singular values are
// prescribed and the singular bases are drawn from seeded Gaussians.
#pragma once

#include <cstdint>

#include "sparsenc/types.hpp"

namespace sparsenc {

enum class SyntheticKind { PowerLaw, Spiked, Flat, AllOnes };

struct SyntheticParams {
    double decay = 1.0;  // power-law: sigma_i = i^-decay
    int spikes = 1;      // spiked: count of large singular values
    double spike = 10.0;
    double noise = 0.1;  // spiked: floor for the remaining singular values
};

Matrix generate_synthetic(SyntheticKind kind, int n, int d, std::uint64_t seed,
                          const SyntheticParams& params = {});

}  // namespace sparsenc
