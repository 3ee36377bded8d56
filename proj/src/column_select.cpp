#include "sparsenc/column_select.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sparsenc/rng.hpp"

namespace sparsenc {

namespace {

void validate_indices(const std::vector<int>& idx, int cols) {
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= cols)
            throw std::invalid_argument("ColumnSelection: index out of range");
        if (i > 0 && idx[i] <= idx[i - 1])
            throw std::invalid_argument("ColumnSelection: indices must be strictly increasing");
    }
}

double squared_col_norm(const Matrix& x, int j) { return x.col(j).squaredNorm(); }

double max_col_norm(const Matrix& x) {
    double best = 0.0;
    for (int j = 0; j < x.cols(); ++j) best = std::max(best, x.col(j).norm());
    return best;
}

// Singular values only; rank tolerance is applied by the caller where needed.
Vector singular_values(const Matrix& m) {
    Eigen::BDCSVD<Matrix> dec(m);
    return dec.singularValues();
}

// Sum of the squared top-kk singular values.
double head_energy(const Vector& sv, int kk) {
    double s = 0.0;
    for (int i = 0; i < std::min<int>(kk, sv.size()); ++i) s += sv(i) * sv(i);
    return s;
}

// Draws one index from the categorical distribution given by weights
// restricted to eligible indices. Walks in ascending index order; assumes
// total > 0.
int draw_categorical(SeededRng& rng, const std::vector<double>& weight,
                     const std::vector<char>& eligible, double total) {
    double u = rng.uniform() * total;
    double cum = 0.0;
    int last = -1;
    for (size_t j = 0; j < weight.size(); ++j) {
        if (!eligible[j] || weight[j] <= 0.0) continue;
        cum += weight[j];
        last = static_cast<int>(j);
        if (cum > u) return last;
    }
    return last;  // rounding pushed u past the final cumulative sum
}

}  // namespace

ColumnSelection::ColumnSelection(std::vector<int> idx, int cols)
    : indices(std::move(idx)), source_cols(cols) {
    if (cols <= 0) throw std::invalid_argument("ColumnSelection: source_cols must be positive");
    validate_indices(indices, cols);
}

Matrix select_columns(const Matrix& x, const ColumnSelection& sel) {
    if (sel.source_cols != x.cols())
        throw std::invalid_argument("select_columns: selection built for a different width");
    Matrix c(x.rows(), sel.size());
    for (int j = 0; j < sel.size(); ++j) c.col(j) = x.col(sel.indices[j]);
    return c;
}

Matrix materialize_sampling(const ColumnSelection& sel) {
    Matrix omega = Matrix::Zero(sel.source_cols, sel.size());
    for (int j = 0; j < sel.size(); ++j) omega(sel.indices[j], j) = 1.0;
    return omega;
}

ColumnSelection reduce_selection(const Matrix& x, const ColumnSelection& sel) {
    if (sel.source_cols != x.cols())
        throw std::invalid_argument("reduce_selection: selection built for a different width");
    Matrix c = select_columns(x, sel);
    double scale = max_col_norm(c);

    std::vector<int> keep;
    Matrix q(x.rows(), 0);
    for (int j = 0; j < sel.size(); ++j) {
        Vector f = c.col(j);
        // Two orthogonalization passes keep the basis numerically orthonormal.
        if (q.cols() > 0) {
            f -= q * (q.transpose() * f);
            f -= q * (q.transpose() * f);
        }
        double rn = f.norm();
        if (rn <= kRankTol * scale) continue;
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = f / rn;
        keep.push_back(sel.indices[j]);
    }

    ColumnSelection out;
    out.indices = std::move(keep);
    out.source_cols = sel.source_cols;
    return out;
}

Matrix best_rank_k_in_span(const Matrix& x, const ColumnSelection& sel, int k) {
    require_finite(x, "best_rank_k_in_span");
    if (k < 1) throw std::invalid_argument("best_rank_k_in_span: k must be positive");
    if (k > sel.size())
        throw std::invalid_argument("best_rank_k_in_span: k exceeds selection cardinality");

    ColumnSelection red = reduce_selection(x, sel);
    if (red.size() < k)
        throw DegenerateSelectionError(
            "best_rank_k_in_span: fewer independent selected columns than k");

    QrFactors qr = qr_thin(select_columns(x, red));
    Matrix b = qr.Q.transpose() * x;
    return qr.Q * truncate_rank(b, k);
}

double span_restricted_loss(const Matrix& x, const ColumnSelection& sel, int k) {
    if (k < 1) throw std::invalid_argument("span_restricted_loss: k must be positive");
    ColumnSelection red = reduce_selection(x, sel);
    if (red.size() == 0) return x.squaredNorm();
    int kk = std::min(k, red.size());
    QrFactors qr = qr_thin(select_columns(x, red));
    Matrix b = qr.Q.transpose() * x;
    return (x - qr.Q * truncate_rank(b, kk)).squaredNorm();
}

ColumnSelection select_columns_greedy(const Matrix& x, int k, int r) {
    require_finite(x, "select_columns_greedy");
    const int d = static_cast<int>(x.cols());
    if (k < 1) throw std::invalid_argument("select_columns_greedy: k must be positive");
    if (r < k) throw std::invalid_argument("select_columns_greedy: r must be at least k");
    if (r > d) throw std::invalid_argument("select_columns_greedy: r exceeds column count");

    const double total_energy = x.squaredNorm();
    const double dep_tol = kRankTol * max_col_norm(x);

    std::vector<char> selected(d, 0);
    std::vector<int> picked;
    Matrix q(x.rows(), 0);  // orthonormal basis of the selected span
    Matrix b(0, d);         // q^T x, grown a row per independent pick

    for (int step = 0; step < r; ++step) {
        // Loss if no new direction were added, used for dependent candidates.
        double stale_loss =
            b.rows() > 0
                ? total_energy - head_energy(singular_values(b), std::min<int>(k, b.rows()))
                : total_energy;

        int best_j = -1;
        double best_loss = std::numeric_limits<double>::infinity();
        for (int j = 0; j < d; ++j) {
            if (selected[j]) continue;
            Vector f = x.col(j);
            if (q.cols() > 0) {
                f -= q * (q.transpose() * f);
                f -= q * (q.transpose() * f);
            }
            double rn = f.norm();
            double loss;
            if (rn <= dep_tol) {
                loss = stale_loss;
            } else {
                Matrix m(b.rows() + 1, d);
                m.topRows(b.rows()) = b;
                m.row(b.rows()) = (f / rn).transpose() * x;
                loss = total_energy -
                       head_energy(singular_values(m), std::min<int>(k, b.rows() + 1));
            }
            if (loss < best_loss) {
                best_loss = loss;
                best_j = j;
            }
        }

        selected[best_j] = 1;
        picked.push_back(best_j);
        Vector f = x.col(best_j);
        if (q.cols() > 0) {
            f -= q * (q.transpose() * f);
            f -= q * (q.transpose() * f);
        }
        double rn = f.norm();
        if (rn > dep_tol) {
            q.conservativeResize(Eigen::NoChange, q.cols() + 1);
            q.col(q.cols() - 1) = f / rn;
            b.conservativeResize(b.rows() + 1, Eigen::NoChange);
            b.row(b.rows() - 1) = q.col(q.cols() - 1).transpose() * x;
        }
    }

    std::sort(picked.begin(), picked.end());
    return ColumnSelection(std::move(picked), d);
}

Matrix approx_top_right_singular(const Matrix& x, int k, double eps, std::uint64_t seed) {
    require_finite(x, "approx_top_right_singular");
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    if (k < 1 || k > d) throw std::invalid_argument("approx_top_right_singular: bad k");
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("approx_top_right_singular: eps must be in (0, 1]");

    const int width = std::min(k + 10, d);
    const int iters = std::max(4, static_cast<int>(std::ceil(4.0 * std::log2(1.0 / eps))));

    SeededRng rng(seed);
    Matrix g(n, width);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < width; ++j) g(i, j) = rng.gaussian();

    // Subspace iteration with orthonormalization between applications.
    Matrix q = orthonormal_range(x.transpose() * g);
    for (int t = 0; t < iters; ++t) {
        Matrix z = orthonormal_range(x * q);
        q = orthonormal_range(x.transpose() * z);
    }
    if (q.cols() == 0) return Matrix(d, 0);  // x is numerically zero

    // Rotate the sketch basis onto the top-k directions of X within it.
    SvdFactors f = svd(x * q);
    int kk = std::min(k, f.rank);
    return q * f.V.leftCols(kk);
}

ColumnSelection adaptive_sample(const Matrix& x, const ColumnSelection& sel, int s,
                                std::uint64_t seed) {
    require_finite(x, "adaptive_sample");
    if (sel.size() == 0) throw std::invalid_argument("adaptive_sample: empty selection");
    if (sel.source_cols != x.cols())
        throw std::invalid_argument("adaptive_sample: selection built for a different width");
    if (s < 0) throw std::invalid_argument("adaptive_sample: s must be non-negative");
    const int d = static_cast<int>(x.cols());

    std::vector<char> chosen(d, 0);
    for (int j : sel.indices) chosen[j] = 1;

    Matrix q = orthonormal_range(select_columns(x, sel));
    Matrix resid = x - q * (q.transpose() * x);

    const double zero_tol = kRankTol * x.norm();
    std::vector<double> mass(d, 0.0);
    std::vector<char> eligible(d, 0);
    double total = 0.0;
    for (int j = 0; j < d; ++j) {
        if (chosen[j]) continue;
        double m = squared_col_norm(resid, j);
        if (std::sqrt(m) <= zero_tol) continue;
        mass[j] = m;
        eligible[j] = 1;
        total += m;
    }

    SeededRng rng(seed);
    std::vector<int> out = sel.indices;
    for (int t = 0; t < s && total > 0.0; ++t) {
        int j = draw_categorical(rng, mass, eligible, total);
        if (j < 0) break;
        out.push_back(j);
        eligible[j] = 0;
        total -= mass[j];
        if (total <= 0.0) break;
    }

    std::sort(out.begin(), out.end());
    return ColumnSelection(std::move(out), d);
}

ColumnSelection select_columns_randomized(const Matrix& x, int k, int r, std::uint64_t seed) {
    require_finite(x, "select_columns_randomized");
    const int d = static_cast<int>(x.cols());
    if (k < 1) throw std::invalid_argument("select_columns_randomized: k must be positive");
    if (r < k) throw std::invalid_argument("select_columns_randomized: r must be at least k");
    if (r > d) throw std::invalid_argument("select_columns_randomized: r exceeds column count");

    Matrix v = approx_top_right_singular(x, k, 0.5, derive_seed(seed, 0));

    std::vector<double> score(d, 0.0);
    double score_sum = 0.0;
    for (int j = 0; j < d; ++j) {
        score[j] = v.cols() > 0 ? v.row(j).squaredNorm() : 1.0;
        score_sum += score[j];
    }

    // Replacement order for duplicate draws: by descending score, ties to the
    // smallest index.
    std::vector<int> by_score(d);
    std::iota(by_score.begin(), by_score.end(), 0);
    std::stable_sort(by_score.begin(), by_score.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    const int initial = std::min(5 * k, r);
    std::vector<char> chosen(d, 0);
    std::vector<int> picked;
    std::vector<char> all_eligible(d, 1);
    SeededRng rng(derive_seed(seed, 1));
    for (int t = 0; t < initial; ++t) {
        int j = draw_categorical(rng, score, all_eligible, score_sum);
        if (j < 0 || chosen[j]) {
            j = -1;
            for (int cand : by_score) {
                if (!chosen[cand]) {
                    j = cand;
                    break;
                }
            }
        }
        chosen[j] = 1;
        picked.push_back(j);
    }

    std::sort(picked.begin(), picked.end());
    ColumnSelection sel(std::move(picked), d);

    if (sel.size() < r) sel = adaptive_sample(x, sel, r - sel.size(), derive_seed(seed, 2));

    // Residual mass can run out before r columns are reached (the loss is
    // already at its floor); pad with the smallest unselected indices so the
    // cardinality contract holds.
    if (sel.size() < r) {
        std::vector<char> in(d, 0);
        for (int j : sel.indices) in[j] = 1;
        std::vector<int> idx = sel.indices;
        for (int j = 0; j < d && static_cast<int>(idx.size()) < r; ++j)
            if (!in[j]) idx.push_back(j);
        std::sort(idx.begin(), idx.end());
        sel = ColumnSelection(std::move(idx), d);
    }
    return sel;
}

ColumnSelection boost_best_of(const Matrix& x, int k, int r, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("boost_best_of: trials must be positive");
    ColumnSelection best;
    double best_loss = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        ColumnSelection sel = select_columns_randomized(x, k, r, derive_seed(seed, t));
        double loss = span_restricted_loss(x, sel, k);
        if (loss < best_loss) {
            best_loss = loss;
            best = sel;
        }
    }
    return best;
}

}  // namespace sparsenc
