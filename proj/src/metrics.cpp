#include "sparsenc/metrics.hpp"

#include <cmath>

#include "sparsenc/encoder.hpp"
#include "sparsenc/matrix_ops.hpp"
#include "sparsenc/rng.hpp"

namespace sparsenc {

namespace {

void validate_pair(const Matrix& x, const Matrix& h, int k, const char* what) {
    require_finite(x, what);
    require_finite(h, what);
    if (h.rows() != x.cols())
        throw std::invalid_argument(std::string(what) + ": encoder rows must match data columns");
    if (k != h.cols())
        throw std::invalid_argument(std::string(what) + ": k must equal the encoder column count");
}

}  // namespace

double normalized_information_loss(const Matrix& x, const Matrix& h, int k) {
    validate_pair(x, h, k, "normalized_information_loss");
    double loss = information_loss(x, h);
    double pca = tail_energy(svd(x), k);
    if (pca > 0.0) return loss / pca;
    return loss <= 1e-12 * x.squaredNorm() ? 1.0 : std::numeric_limits<double>::infinity();
}

double symmetric_explained_variance(const Matrix& x, const Matrix& h, int k) {
    validate_pair(x, h, k, "symmetric_explained_variance");
    SvdFactors f = svd(x);
    double head = x.squaredNorm() - tail_energy(f, k);
    double num = (x * h * pseudo_inverse(h)).squaredNorm();
    if (head > 0.0) return num / head;
    return 1.0;
}

VarianceConversion variance_conversion_check(const Matrix& x, const Matrix& h, int k) {
    validate_pair(x, h, k, "variance_conversion_check");
    Matrix gram = h.transpose() * h;
    if ((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("variance_conversion_check: H must have orthonormal columns");

    SvdFactors f = svd(x);
    double energy = x.squaredNorm();
    double pca = tail_energy(f, k);
    double head = energy - pca;

    double sym_loss = (x - x * h * h.transpose()).squaredNorm();
    VarianceConversion out;
    out.explained = (x * h * h.transpose()).squaredNorm();
    if (pca <= 0.0) {
        // rank(x) <= k: no finite loss ratio exists, the comparison is vacuous
        out.epsilon = 0.0;
        out.bound = out.explained;
        out.weak_bound = out.explained;
        out.holds = true;
        return out;
    }
    out.epsilon = sym_loss / pca - 1.0;
    out.bound = head - out.epsilon * pca;
    double rho_over = f.rank > k ? static_cast<double>(f.rank - k) / k : 0.0;
    out.weak_bound = (1.0 - rho_over * out.epsilon) * head;
    out.holds = out.explained >= out.bound - 1e-8 * std::max(1.0, energy);
    return out;
}

int combined_sparsity(const Matrix& h) {
    int rows = 0;
    for (int i = 0; i < h.rows(); ++i)
        if (h.cols() > 0 && h.row(i).cwiseAbs().maxCoeff() > kSparsityTol) ++rows;
    return rows;
}

double avg_column_sparsity(const Matrix& h) {
    if (h.cols() == 0) return 0.0;
    int total = 0;
    for (int j = 0; j < h.cols(); ++j)
        for (int i = 0; i < h.rows(); ++i)
            if (std::abs(h(i, j)) > kSparsityTol) ++total;
    return static_cast<double>(total) / h.cols();
}

double allones_sanity(int n, int d, int r) {
    if (n < 1 || d < 1) throw std::invalid_argument("allones_sanity: empty shape");
    if (r < 1 || r > d) throw std::invalid_argument("allones_sanity: r out of range");

    Matrix a = Matrix::Ones(n, d);
    double denom = spectral_norm(a);
    denom *= denom;

    // v^T A^T A v = n (sum of v's entries)^2 for the all-ones matrix.
    auto ratio = [&](const Vector& v) {
        double s = v.sum();
        return static_cast<double>(n) * s * s / denom;
    };

    double best = 0.0;
    // Uniform weights over a sliding window of r columns attain the optimum.
    for (int start = 0; start + r <= d; ++start) {
        Vector v = Vector::Zero(d);
        for (int i = 0; i < r; ++i) v(start + i) = 1.0 / std::sqrt(static_cast<double>(r));
        best = std::max(best, ratio(v));
    }
    // Random r-sparse unit vectors stay below the uniform-weight optimum.
    SeededRng rng(0x5eedu);
    for (int t = 0; t < 1000; ++t) {
        Vector v = Vector::Zero(d);
        std::vector<int> perm(d);
        for (int i = 0; i < d; ++i) perm[i] = i;
        for (int i = 0; i < r; ++i) {
            int j = i + static_cast<int>(rng.below(d - i));
            std::swap(perm[i], perm[j]);
        }
        double nrm2 = 0.0;
        for (int i = 0; i < r; ++i) {
            double g = rng.gaussian();
            v(perm[i]) = g;
            nrm2 += g * g;
        }
        if (nrm2 == 0.0) continue;
        v /= std::sqrt(nrm2);
        best = std::max(best, ratio(v));
    }
    return best;
}

}  // namespace sparsenc
