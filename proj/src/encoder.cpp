#include "sparsenc/encoder.hpp"

#include <chrono>
#include <cmath>

#include "sparsenc/rng.hpp"

namespace sparsenc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int nnz_count(const Eigen::Ref<const Vector>& v) {
    int c = 0;
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > kSparsityTol) ++c;
    return c;
}

void fill_sparsity_stats(LossReport& rep, const Matrix& h) {
    rep.per_column_sparsity.clear();
    int total = 0;
    for (int j = 0; j < h.cols(); ++j) {
        int c = nnz_count(h.col(j));
        rep.per_column_sparsity.push_back(c);
        total += c;
    }
    int combined = 0;
    for (int i = 0; i < h.rows(); ++i)
        if (h.row(i).cwiseAbs().maxCoeff() > kSparsityTol) ++combined;
    rep.combined_sparsity = combined;
    rep.avg_column_sparsity = h.cols() > 0 ? static_cast<double>(total) / h.cols() : 0.0;
}

// Normalized loss with the spec'd degenerate rule for a zero PCA floor.
double normalize_loss(double loss, double pca, double total_energy) {
    if (pca > 0.0) return loss / pca;
    return loss <= 1e-12 * total_energy ? 1.0 : std::numeric_limits<double>::infinity();
}

double explained_variance_ratio(const Matrix& x, const Matrix& h, double head) {
    if (h.cols() == 0) return head > 0.0 ? 0.0 : 1.0;
    Matrix proj = x * h * pseudo_inverse(h);
    double num = proj.squaredNorm();
    if (head > 0.0) return num / head;
    return 1.0;
}

ColumnSelection run_selection(const Matrix& x, int k, int r, const SelectionStrategy& strategy) {
    if (strategy.kind == SelectionKind::Greedy) return select_columns_greedy(x, k, r);
    return boost_best_of(x, k, r, strategy.trials, strategy.seed);
}

}  // namespace

EncoderBuild encoder_from_columns(const Matrix& x, const ColumnSelection& sel, int k) {
    require_finite(x, "encoder_from_columns");
    if (sel.size() == 0) throw std::invalid_argument("encoder_from_columns: empty selection");
    if (sel.source_cols != x.cols())
        throw std::invalid_argument("encoder_from_columns: selection built for a different width");
    if (k < 1) throw std::invalid_argument("encoder_from_columns: k must be positive");
    if (k > sel.size())
        throw std::invalid_argument("encoder_from_columns: k exceeds selection cardinality");

    ColumnSelection red = reduce_selection(x, sel);
    if (red.size() == 0)
        throw DegenerateSelectionError("encoder_from_columns: selected columns are all zero");
    int k1 = std::min(k, red.size());

    QrFactors qr = qr_thin(select_columns(x, red));
    Matrix bk = truncate_rank(qr.Q.transpose() * x, k1);
    Matrix m = qr.R.triangularView<Eigen::Upper>().solve(bk);

    SvdFactors fm = svd(m);
    int k2 = std::min(k1, fm.rank);
    if (k2 == 0)
        throw DegenerateSelectionError("encoder_from_columns: projected data has rank zero");

    EncoderBuild out;
    out.encoder.H = Matrix::Zero(x.cols(), k2);
    for (int i = 0; i < red.size(); ++i) out.encoder.H.row(red.indices[i]) = fm.U.row(i).head(k2);
    out.encoder.support.assign(k2, red.indices);
    out.encoder.budgets.assign(k2, red.size());
    out.encoder.mode = SparseEncoder::Mode::Batch;
    out.decoder.G = fm.sigma.head(k2).asDiagonal() * fm.V.leftCols(k2).transpose();
    out.reduced_cardinality = red.size();
    out.rank_clamped = k2 < k;
    return out;
}

double information_loss(const Matrix& x, const Matrix& h) {
    require_finite(x, "information_loss");
    require_finite(h, "information_loss");
    if (h.rows() != x.cols())
        throw std::invalid_argument("information_loss: encoder rows must match data columns");
    Matrix basis = orthonormal_range(x * h);
    if (basis.cols() == 0) return x.squaredNorm();
    return (x - basis * (basis.transpose() * x)).squaredNorm();
}

double information_loss(const Matrix& x, const SparseEncoder& enc) {
    return information_loss(x, enc.H);
}

Decoder optimal_decoder(const Matrix& x, const Matrix& h) {
    require_finite(x, "optimal_decoder");
    require_finite(h, "optimal_decoder");
    if (h.rows() != x.cols())
        throw std::invalid_argument("optimal_decoder: encoder rows must match data columns");
    return Decoder{pseudo_inverse(x * h) * x};
}

Matrix encode(const Matrix& x, const Matrix& h) {
    if (h.rows() != x.cols())
        throw std::invalid_argument("encode: encoder rows must match data columns");
    return x * h;
}

Matrix reconstruct(const Matrix& x, const Matrix& h) {
    if (h.rows() != x.cols())
        throw std::invalid_argument("reconstruct: encoder rows must match data columns");
    Matrix basis = orthonormal_range(x * h);
    if (basis.cols() == 0) return Matrix::Zero(x.rows(), x.cols());
    return basis * (basis.transpose() * x);
}

SparseEncoder orthonormalize(const SparseEncoder& enc) {
    if (enc.H.cols() == 0) throw std::invalid_argument("orthonormalize: empty encoder");

    std::vector<int> rows;
    for (int i = 0; i < enc.H.rows(); ++i)
        if (enc.H.row(i).cwiseAbs().maxCoeff() > kSparsityTol) rows.push_back(i);
    if (rows.empty()) throw DegenerateSelectionError("orthonormalize: encoder is zero");

    Matrix packed(rows.size(), enc.H.cols());
    for (size_t i = 0; i < rows.size(); ++i) packed.row(i) = enc.H.row(rows[i]);

    // sequential Gram-Schmidt keeps an already orthonormal input unchanged,
    // unlike an SVD basis which is free to rotate
    const double scale = packed.colwise().norm().maxCoeff();
    Matrix q(packed.rows(), packed.cols());
    int kept = 0;
    for (int j = 0; j < packed.cols(); ++j) {
        Vector v = packed.col(j);
        for (int pass = 0; pass < 2; ++pass)
            if (kept > 0) v -= q.leftCols(kept) * (q.leftCols(kept).transpose() * v);
        double n = v.norm();
        if (n <= kRankTol * scale) continue;  // dependent column dropped
        q.col(kept++) = v / n;
    }
    q.conservativeResize(Eigen::NoChange, kept);

    SparseEncoder out;
    out.H = Matrix::Zero(enc.H.rows(), q.cols());
    for (size_t i = 0; i < rows.size(); ++i) out.H.row(rows[i]) = q.row(i);
    out.support.assign(q.cols(), rows);
    out.budgets.assign(q.cols(), static_cast<int>(rows.size()));
    out.mode = SparseEncoder::Mode::Batch;
    return out;
}

std::vector<int> adaptive_schedule(int k, double eps) {
    if (k < 1) throw std::invalid_argument("adaptive_schedule: k must be positive");
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("adaptive_schedule: eps must be in (0, 1]");
    std::vector<int> sched;
    for (int j = 1; j <= k; ++j)
        sched.push_back(5 + static_cast<int>(std::ceil(5.0 * j / eps)));
    return sched;
}

EncodeResult batch_encoder(const Matrix& x, int k, int r, const SelectionStrategy& strategy) {
    require_finite(x, "batch_encoder");
    const int d = static_cast<int>(x.cols());
    if (k < 1) throw std::invalid_argument("batch_encoder: k must be positive");
    if (r < k) throw std::invalid_argument("batch_encoder: r must be at least k");
    if (r > d) throw std::invalid_argument("batch_encoder: r exceeds column count");

    auto t0 = std::chrono::steady_clock::now();
    SvdFactors fx = svd(x);
    int k_eff = std::min(k, fx.rank);
    if (k_eff == 0) throw DegenerateSelectionError("batch_encoder: data matrix is zero");

    ColumnSelection sel = run_selection(x, k_eff, r, strategy);
    double select_s = seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    EncoderBuild build = encoder_from_columns(x, sel, k_eff);
    double encode_s = seconds_since(t1);

    const int k_used = build.encoder.factors();
    LossReport rep;
    rep.algorithm = "batch";
    rep.strategy = strategy.kind == SelectionKind::Greedy ? "greedy" : "randomized";
    rep.rows = static_cast<int>(x.rows());
    rep.cols = d;
    rep.k_requested = k;
    rep.k_effective = k_used;
    rep.sparsity_mode = "fixed";
    rep.r = r;
    rep.seed = strategy.seed;
    rep.trials = strategy.trials;
    rep.info_loss = information_loss(x, build.encoder.H);
    rep.pca_loss = tail_energy(fx, k_used);
    rep.info_loss_normalized = normalize_loss(rep.info_loss, rep.pca_loss, x.squaredNorm());
    double head = x.squaredNorm() - tail_energy(fx, k_used);
    rep.sym_explained_variance = explained_variance_ratio(x, build.encoder.H, head);
    if (r > 5 * k_used)
        rep.bound_factor = 1.0 + 5.0 * k_used / static_cast<double>(r - 5 * k_used);
    fill_sparsity_stats(rep, build.encoder.H);
    rep.selected_columns = sel.indices;
    rep.reduced_cardinality = build.reduced_cardinality;
    rep.rank_clamped = k_used < k;
    rep.select_seconds = select_s;
    rep.encode_seconds = encode_s;
    rep.total_seconds = seconds_since(t0);
    return EncodeResult{std::move(build.encoder), std::move(build.decoder), std::move(rep)};
}

EncodeResult iterative_encoder(const Matrix& x, int k, const std::vector<int>& schedule,
                               const SelectionStrategy& strategy) {
    require_finite(x, "iterative_encoder");
    const int d = static_cast<int>(x.cols());
    if (k < 1) throw std::invalid_argument("iterative_encoder: k must be positive");
    if (static_cast<int>(schedule.size()) != k)
        throw std::invalid_argument("iterative_encoder: schedule length must equal k");
    for (int ri : schedule)
        if (ri < 2) throw std::invalid_argument("iterative_encoder: every budget must exceed 1");

    auto t0 = std::chrono::steady_clock::now();
    const double x_energy = x.squaredNorm();
    const double zero_tol = kRankTol * x.norm();

    LossReport rep;
    rep.algorithm = "iterative";
    rep.strategy = strategy.kind == SelectionKind::Greedy ? "greedy" : "randomized";
    rep.rows = static_cast<int>(x.rows());
    rep.cols = d;
    rep.k_requested = k;
    rep.sparsity_mode = "schedule";
    rep.seed = strategy.seed;
    rep.trials = strategy.trials;

    SparseEncoder enc;
    enc.H = Matrix(d, 0);
    enc.mode = SparseEncoder::Mode::Iterative;

    Matrix delta = x;
    double select_s = 0.0;
    double encode_s = 0.0;
    for (int step = 0; step < k; ++step) {
        if (delta.norm() <= zero_tol) {
            rep.early_stop = true;
            break;
        }
        int ri = std::min(schedule[step], d);
        rep.schedule.push_back(ri);
        rep.per_step_delta.push_back(ri > 5 ? 5.0 / (ri - 5)
                                            : std::numeric_limits<double>::quiet_NaN());

        SelectionStrategy step_strategy = strategy;
        step_strategy.seed = derive_seed(strategy.seed, static_cast<std::uint64_t>(step));

        auto ts = std::chrono::steady_clock::now();
        ColumnSelection sel = run_selection(delta, 1, ri, step_strategy);
        select_s += seconds_since(ts);

        auto te = std::chrono::steady_clock::now();
        EncoderBuild build = encoder_from_columns(delta, sel, 1);
        enc.H.conservativeResize(Eigen::NoChange, enc.H.cols() + 1);
        enc.H.col(enc.H.cols() - 1) = build.encoder.H.col(0);
        enc.support.push_back(build.encoder.support[0]);
        enc.budgets.push_back(ri);

        delta = x - reconstruct(x, enc.H);
        rep.per_step_loss.push_back(delta.squaredNorm());
        encode_s += seconds_since(te);
    }

    if (enc.factors() == 0)
        throw DegenerateSelectionError("iterative_encoder: data matrix is zero");

    SvdFactors fx = svd(x);
    const int k_used = enc.factors();
    rep.k_effective = k_used;
    rep.info_loss = rep.per_step_loss.back();
    rep.pca_loss = tail_energy(fx, k_used);
    rep.info_loss_normalized = normalize_loss(rep.info_loss, rep.pca_loss, x_energy);
    double head = x_energy - tail_energy(fx, k_used);
    rep.sym_explained_variance = explained_variance_ratio(x, enc.H, head);
    fill_sparsity_stats(rep, enc.H);
    rep.reduced_cardinality = k_used;
    rep.rank_clamped = k_used < k && !rep.early_stop;
    rep.select_seconds = select_s;
    rep.encode_seconds = encode_s;
    rep.total_seconds = seconds_since(t0);

    Decoder dec = optimal_decoder(x, enc.H);
    return EncodeResult{std::move(enc), std::move(dec), std::move(rep)};
}

}  // namespace sparsenc
