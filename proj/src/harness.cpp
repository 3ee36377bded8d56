#include "sparsenc/harness.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "sparsenc/baselines.hpp"
#include "sparsenc/encoder.hpp"
#include "sparsenc/matrix_ops.hpp"
#include "sparsenc/metrics.hpp"
#include "sparsenc/rng.hpp"

namespace sparsenc {

namespace {

using json = nlohmann::ordered_json;

ExperimentOutput run_tpower_deflation(const Matrix& x, const ExperimentConfig& config) {
    if (config.sparsity_mode != SparsityMode::Fixed)
        throw std::invalid_argument("tpower-deflation needs a fixed sparsity budget");
    SparseEncoder enc = sparse_components_deflation(x, config.k, config.r, config.seed);

    SvdFactors fx = svd(x);
    LossReport rep;
    rep.algorithm = "tpower-deflation";
    rep.strategy = "none";
    rep.rows = static_cast<int>(x.rows());
    rep.cols = static_cast<int>(x.cols());
    rep.k_requested = config.k;
    rep.k_effective = enc.factors();
    rep.sparsity_mode = "fixed";
    rep.r = config.r;
    rep.seed = config.seed;
    rep.trials = config.trials;
    rep.info_loss = information_loss(x, enc.H);
    rep.pca_loss = tail_energy(fx, enc.factors());
    rep.info_loss_normalized =
        rep.pca_loss > 0.0
            ? rep.info_loss / rep.pca_loss
            : (rep.info_loss <= 1e-12 * x.squaredNorm()
                   ? 1.0
                   : std::numeric_limits<double>::infinity());
    double head = x.squaredNorm() - rep.pca_loss;
    rep.sym_explained_variance =
        head > 0.0 ? (x * enc.H * pseudo_inverse(enc.H)).squaredNorm() / head : 1.0;
    rep.per_column_sparsity.clear();
    for (int j = 0; j < enc.H.cols(); ++j) {
        int c = 0;
        for (int i = 0; i < enc.H.rows(); ++i)
            if (std::abs(enc.H(i, j)) > kSparsityTol) ++c;
        rep.per_column_sparsity.push_back(c);
    }
    rep.combined_sparsity = combined_sparsity(enc.H);
    rep.avg_column_sparsity = avg_column_sparsity(enc.H);
    rep.reduced_cardinality = 0;
    return ExperimentOutput{std::move(enc), std::move(rep)};
}

}  // namespace

ExperimentOutput run_experiment_full(const Matrix& x, const ExperimentConfig& config) {
    require_finite(x, "run_experiment");
    if (config.k < 1) throw std::invalid_argument("run_experiment: k must be positive");
    if (config.trials < 1) throw std::invalid_argument("run_experiment: trials must be positive");

    SelectionStrategy strategy;
    strategy.kind = config.strategy;
    strategy.seed = config.seed;
    strategy.trials = config.trials;

    switch (config.algorithm) {
        case Algorithm::Batch: {
            if (config.sparsity_mode != SparsityMode::Fixed)
                throw std::invalid_argument("batch needs a fixed sparsity budget");
            EncodeResult res = batch_encoder(x, config.k, config.r, strategy);
            return ExperimentOutput{std::move(res.encoder), std::move(res.report)};
        }
        case Algorithm::Iterative: {
            std::vector<int> sched;
            double eps = std::numeric_limits<double>::quiet_NaN();
            if (config.sparsity_mode == SparsityMode::Schedule) {
                sched = config.schedule;
            } else if (config.sparsity_mode == SparsityMode::Eps) {
                sched = adaptive_schedule(config.k, config.eps);
                eps = config.eps;
            } else {
                // A fixed budget repeats for every round.
                sched.assign(config.k, config.r);
            }
            EncodeResult res = iterative_encoder(x, config.k, sched, strategy);
            if (!std::isnan(eps)) {
                res.report.sparsity_mode = "eps";
                res.report.eps = eps;
            }
            return ExperimentOutput{std::move(res.encoder), std::move(res.report)};
        }
        case Algorithm::TPowerDeflation:
            return run_tpower_deflation(x, config);
    }
    throw std::invalid_argument("run_experiment: unknown algorithm");
}

LossReport run_experiment(const Matrix& x, const ExperimentConfig& config) {
    return run_experiment_full(x, config).report;
}

SweepResult run_sweep(const Matrix& x, const ExperimentConfig& base, const SweepSpec& spec) {
    if (spec.k_values.empty()) throw std::invalid_argument("run_sweep: empty k grid");
    bool has_r = !spec.r_values.empty();
    bool has_eps = !spec.eps_values.empty();
    if (has_r == has_eps)
        throw std::invalid_argument("run_sweep: exactly one of r/eps grids must be given");
    if (spec.repetitions < 1) throw std::invalid_argument("run_sweep: repetitions must be positive");

    const int sparsity_count = has_r ? static_cast<int>(spec.r_values.size())
                                     : static_cast<int>(spec.eps_values.size());
    SweepResult out;
    int grid = 0;
    for (int k : spec.k_values) {
        for (int si = 0; si < sparsity_count; ++si, ++grid) {
            for (int t = 0; t < spec.repetitions; ++t) {
                SweepRow row;
                row.grid_index = grid;
                row.k = k;
                row.rep = t;
                row.seed = derive_seed(base.seed,
                                       static_cast<std::uint64_t>(grid) * spec.repetitions + t);

                ExperimentConfig cfg = base;
                cfg.k = k;
                cfg.seed = row.seed;
                if (has_r) {
                    cfg.sparsity_mode = SparsityMode::Fixed;
                    cfg.r = spec.r_values[si];
                    row.sparsity_value = spec.r_values[si];
                } else {
                    cfg.sparsity_mode = SparsityMode::Eps;
                    cfg.eps = spec.eps_values[si];
                    row.sparsity_value = spec.eps_values[si];
                }

                try {
                    row.report = run_experiment(x, cfg);
                    row.ok = true;
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                }
                out.rows.push_back(std::move(row));
            }
        }
    }
    return out;
}

namespace {

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string sweep_to_csv(const SweepResult& res) {
    std::string out =
        "grid_index,k,sparsity_mode,sparsity_value,rep,seed,algorithm,strategy,status,"
        "info_loss,pca_loss,info_loss_normalized,sym_explained_variance,bound_factor,"
        "combined_sparsity,avg_column_sparsity,error\n";
    for (const auto& row : res.rows) {
        out += std::to_string(row.grid_index) + ',' + std::to_string(row.k) + ',';
        if (row.ok)
            out += row.report.sparsity_mode;
        out += ',' + num17(row.sparsity_value) + ',' + std::to_string(row.rep) + ',' +
               std::to_string(row.seed) + ',';
        if (row.ok) {
            const LossReport& r = row.report;
            out += r.algorithm + ',' + r.strategy + ",ok,";
            out += num17(r.info_loss) + ',' + num17(r.pca_loss) + ',';
            out += std::isinf(r.info_loss_normalized) ? "infinity"
                                                      : num17(r.info_loss_normalized);
            out += ',' + num17(r.sym_explained_variance) + ',';
            if (r.bound_factor.has_value()) out += num17(*r.bound_factor);
            out += ',' + std::to_string(r.combined_sparsity) + ',' +
                   num17(r.avg_column_sparsity) + ",\n";
        } else {
            std::string msg = row.error;
            for (char& c : msg)
                if (c == ',' || c == '\n') c = ';';
            out += ",,failed,,,,,,,," + msg + "\n";
        }
    }
    return out;
}

std::string sweep_to_json(const SweepResult& res) {
    json doc;
    json runs = json::array();
    struct Acc {
        int grid = 0;
        int k = 0;
        double sparsity = 0.0;
        int ok = 0;
        int failed = 0;
        double loss_norm = 0.0;
        double sym = 0.0;
        double avg_sparsity = 0.0;
    };
    std::vector<Acc> acc;

    for (const auto& row : res.rows) {
        json r;
        r["grid_index"] = row.grid_index;
        r["k"] = row.k;
        r["sparsity_value"] = row.sparsity_value;
        r["rep"] = row.rep;
        r["seed"] = row.seed;
        r["status"] = row.ok ? "ok" : "failed";
        if (row.ok)
            r["report"] = json::parse(report_to_json(row.report));
        else
            r["error"] = row.error;
        runs.push_back(std::move(r));

        if (static_cast<int>(acc.size()) <= row.grid_index) {
            acc.resize(row.grid_index + 1);
            acc[row.grid_index].grid = row.grid_index;
            acc[row.grid_index].k = row.k;
            acc[row.grid_index].sparsity = row.sparsity_value;
        }
        Acc& a = acc[row.grid_index];
        if (row.ok && std::isfinite(row.report.info_loss_normalized)) {
            a.ok += 1;
            a.loss_norm += row.report.info_loss_normalized;
            a.sym += row.report.sym_explained_variance;
            a.avg_sparsity += row.report.avg_column_sparsity;
        } else if (!row.ok) {
            a.failed += 1;
        }
    }

    json summary = json::array();
    for (const auto& a : acc) {
        json s;
        s["grid_index"] = a.grid;
        s["k"] = a.k;
        s["sparsity_value"] = a.sparsity;
        s["successes"] = a.ok;
        s["failures"] = a.failed;
        if (a.ok > 0) {
            s["mean_info_loss_normalized"] = a.loss_norm / a.ok;
            s["mean_sym_explained_variance"] = a.sym / a.ok;
            s["mean_avg_column_sparsity"] = a.avg_sparsity / a.ok;
        }
        summary.push_back(std::move(s));
    }

    doc["runs"] = std::move(runs);
    doc["summary"] = std::move(summary);
    return doc.dump(2);
}

const std::vector<DatasetInfo>& dataset_manifest() {
    static const std::vector<DatasetInfo> manifest = {
        {"pitprops", 13, 13},
        {"colon", 500, 500},
        {"lymphoma", 500, 500},
    };
    return manifest;
}

void validate_dataset(const std::string& name, const Matrix& x) {
    for (const auto& info : dataset_manifest()) {
        if (info.name != name) continue;
        if (x.rows() != info.rows || x.cols() != info.cols)
            throw InputError("dataset '" + name + "' expects " + std::to_string(info.rows) + "x" +
                             std::to_string(info.cols) + ", got " + std::to_string(x.rows()) +
                             "x" + std::to_string(x.cols()));
        return;
    }
    std::string known;
    for (const auto& info : dataset_manifest()) known += (known.empty() ? "" : ", ") + info.name;
    throw InputError("unknown dataset '" + name + "' (known: " + known + ")");
}

}  // namespace sparsenc
