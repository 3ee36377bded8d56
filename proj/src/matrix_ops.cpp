#include "sparsenc/matrix_ops.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace sparsenc {

namespace {

// Flip signs so every right singular vector's largest-magnitude entry is
// non-negative; ties go to the smallest index. Left vectors flip in tandem to
// keep U diag(sigma) V^T intact.
void fix_signs(Matrix& u, Matrix& v) {
    for (int i = 0; i < v.cols(); ++i) {
        int argmax = 0;
        double best = -1.0;
        for (int j = 0; j < v.rows(); ++j) {
            double mag = std::abs(v(j, i));
            if (mag > best) {
                best = mag;
                argmax = j;
            }
        }
        if (v(argmax, i) < 0.0) {
            v.col(i) = -v.col(i);
            u.col(i) = -u.col(i);
        }
    }
}

}  // namespace

SvdFactors svd(const Matrix& a) {
    require_finite(a, "svd");
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");

    Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) throw NumericalError("svd: decomposition failed to converge");

    const Vector& all = dec.singularValues();
    double cutoff = all.size() > 0 ? kRankTol * all(0) : 0.0;
    int rank = 0;
    while (rank < all.size() && all(rank) > cutoff) ++rank;

    SvdFactors f;
    f.U = dec.matrixU().leftCols(rank);
    f.sigma = all.head(rank);
    f.V = dec.matrixV().leftCols(rank);
    f.rank = rank;
    fix_signs(f.U, f.V);
    return f;
}

Matrix truncate_rank(const SvdFactors& f, int k) {
    if (k <= 0) throw std::invalid_argument("truncate_rank: k must be positive");
    int kk = std::min<int>(k, f.rank);
    if (kk == 0) return Matrix::Zero(f.U.rows(), f.V.rows());
    return f.U.leftCols(kk) * f.sigma.head(kk).asDiagonal() * f.V.leftCols(kk).transpose();
}

Matrix truncate_rank(const Matrix& a, int k) {
    if (k <= 0) throw std::invalid_argument("truncate_rank: k must be positive");
    return truncate_rank(svd(a), k);
}

QrFactors qr_thin(const Matrix& c) {
    require_finite(c, "qr_thin");
    if (c.rows() == 0 || c.cols() == 0) throw std::invalid_argument("qr_thin: empty matrix");
    if (c.cols() > c.rows()) throw std::invalid_argument("qr_thin: more columns than rows");

    Eigen::HouseholderQR<Matrix> dec(c);
    const int r = static_cast<int>(c.cols());
    Matrix q = dec.householderQ() * Matrix::Identity(c.rows(), r);
    Matrix rr = dec.matrixQR().topRows(r).triangularView<Eigen::Upper>();

    double scale = 0.0;
    for (int i = 0; i < r; ++i) scale = std::max(scale, std::abs(rr(i, i)));
    for (int i = 0; i < r; ++i) {
        if (std::abs(rr(i, i)) <= kRankTol * scale)
            throw RankDeficiencyError("qr_thin: numerically rank-deficient input", i);
        if (rr(i, i) < 0.0) {
            rr.row(i) = -rr.row(i);
            q.col(i) = -q.col(i);
        }
    }
    return {std::move(q), std::move(rr)};
}

Matrix pseudo_inverse(const Matrix& a) {
    require_finite(a, "pseudo_inverse");
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("pseudo_inverse: empty matrix");
    SvdFactors f = svd(a);
    if (f.rank == 0) return Matrix::Zero(a.cols(), a.rows());
    return f.V * f.sigma.cwiseInverse().asDiagonal() * f.U.transpose();
}

double spectral_norm(const Matrix& a) {
    SvdFactors f = svd(a);
    return f.rank > 0 ? f.sigma(0) : 0.0;
}

Matrix orthonormal_range(const Matrix& a) {
    SvdFactors f = svd(a);
    return f.U;
}

double tail_energy(const SvdFactors& f, int k) {
    if (k < 0) throw std::invalid_argument("tail_energy: k must be non-negative");
    double sum = 0.0;
    for (int i = k; i < f.rank; ++i) sum += f.sigma(i) * f.sigma(i);
    return sum;
}

}  // namespace sparsenc
