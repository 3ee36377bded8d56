// Command-line harness: generate synthetic matrices, build encoders, sweep
// parameter grids, and measure metrics for a supplied encoder. Exit codes:
// 0 success, 1 input error, 2 numerical error.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sparsenc/encoder.hpp"
#include "sparsenc/harness.hpp"
#include "sparsenc/matrix_io.hpp"
#include "sparsenc/metrics.hpp"
#include "sparsenc/synthetic.hpp"

namespace {

using sparsenc::Matrix;
using json = nlohmann::ordered_json;

void write_output(const std::string& path, const std::string& content) {
    if (path == "-" || path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sparsenc::InputError("cannot write '" + path + "'");
    out << content;
    if (!out) throw sparsenc::InputError("write failed for '" + path + "'");
}

sparsenc::MatrixFormat parse_format(const std::string& s) {
    if (s == "auto") return sparsenc::MatrixFormat::Auto;
    if (s == "csv") return sparsenc::MatrixFormat::Csv;
    if (s == "mm" || s == "matrix-market") return sparsenc::MatrixFormat::MatrixMarket;
    throw sparsenc::InputError("unknown format '" + s + "'");
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
        try {
            size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw sparsenc::InputError(std::string(what) + ": bad integer '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw sparsenc::InputError(std::string(what) + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw sparsenc::InputError(std::string(what) + ": bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw sparsenc::InputError(std::string(what) + ": empty list");
    return out;
}

struct GenArgs {
    std::string kind = "power-law";
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    double decay = 1.0;
    int spikes = 1;
    double spike = 10.0;
    double noise = 0.1;
    std::string out;
    std::string format = "auto";
};

struct EncodeArgs {
    std::string input;
    std::string format = "auto";
    std::string dataset;
    std::string algorithm = "batch";
    std::string strategy = "greedy";
    int k = 1;
    int r = 0;
    std::string schedule;
    double eps = 0.0;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string save_encoder;
    bool timings = false;
};

struct SweepArgs {
    std::string input;
    std::string format = "auto";
    std::string dataset;
    std::string algorithm = "batch";
    std::string strategy = "greedy";
    std::string k_grid;
    std::string r_grid;
    std::string eps_grid;
    int reps = 25;
    int trials = 1;
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string csv_out;
};

struct MetricsArgs {
    std::string input;
    std::string format = "auto";
    std::string encoder;
    std::string encoder_format = "auto";
    int k = 0;
    std::string out = "-";
};

sparsenc::Algorithm parse_algorithm(const std::string& s) {
    if (s == "batch") return sparsenc::Algorithm::Batch;
    if (s == "iterative") return sparsenc::Algorithm::Iterative;
    if (s == "tpower") return sparsenc::Algorithm::TPowerDeflation;
    throw sparsenc::InputError("unknown algorithm '" + s + "'");
}

sparsenc::SelectionKind parse_strategy(const std::string& s) {
    if (s == "greedy") return sparsenc::SelectionKind::Greedy;
    if (s == "randomized") return sparsenc::SelectionKind::Randomized;
    throw sparsenc::InputError("unknown strategy '" + s + "'");
}

void run_gen(const GenArgs& a) {
    sparsenc::SyntheticKind kind;
    if (a.kind == "power-law")
        kind = sparsenc::SyntheticKind::PowerLaw;
    else if (a.kind == "spiked")
        kind = sparsenc::SyntheticKind::Spiked;
    else if (a.kind == "flat")
        kind = sparsenc::SyntheticKind::Flat;
    else if (a.kind == "all-ones")
        kind = sparsenc::SyntheticKind::AllOnes;
    else
        throw sparsenc::InputError("unknown kind '" + a.kind + "'");

    sparsenc::SyntheticParams params;
    params.decay = a.decay;
    params.spikes = a.spikes;
    params.spike = a.spike;
    params.noise = a.noise;
    Matrix m = sparsenc::generate_synthetic(kind, a.rows, a.cols, a.seed, params);

    sparsenc::MatrixFormat fmt = parse_format(a.format);
    if (a.out == "-")
        write_output(a.out, sparsenc::format_matrix(
                                m, fmt == sparsenc::MatrixFormat::Auto
                                       ? sparsenc::MatrixFormat::Csv
                                       : fmt));
    else
        sparsenc::save_matrix(a.out, m, fmt);
}

sparsenc::ExperimentConfig build_config(const std::string& algorithm, const std::string& strategy,
                                        int k, int r, const std::string& schedule, double eps,
                                        int trials, std::uint64_t seed) {
    sparsenc::ExperimentConfig cfg;
    cfg.algorithm = parse_algorithm(algorithm);
    cfg.strategy = parse_strategy(strategy);
    cfg.k = k;
    cfg.trials = trials;
    cfg.seed = seed;
    if (!schedule.empty()) {
        cfg.sparsity_mode = sparsenc::SparsityMode::Schedule;
        cfg.schedule = parse_int_list(schedule, "--schedule");
    } else if (eps > 0.0) {
        cfg.sparsity_mode = sparsenc::SparsityMode::Eps;
        cfg.eps = eps;
    } else {
        cfg.sparsity_mode = sparsenc::SparsityMode::Fixed;
        cfg.r = r;
    }
    return cfg;
}

void run_encode(const EncodeArgs& a) {
    if (a.r <= 0 && a.schedule.empty() && a.eps <= 0.0)
        throw sparsenc::InputError("one of --r, --schedule, --eps is required");
    Matrix x = sparsenc::load_matrix(a.input, parse_format(a.format));
    if (!a.dataset.empty()) sparsenc::validate_dataset(a.dataset, x);

    sparsenc::ExperimentConfig cfg =
        build_config(a.algorithm, a.strategy, a.k, a.r, a.schedule, a.eps, a.trials, a.seed);
    sparsenc::ExperimentOutput res = sparsenc::run_experiment_full(x, cfg);
    write_output(a.out, sparsenc::reports_to_json({res.report}, a.timings));
    if (!a.save_encoder.empty())
        sparsenc::save_matrix(a.save_encoder, res.encoder.H, sparsenc::MatrixFormat::Csv);
}

void run_sweep_cmd(const SweepArgs& a) {
    Matrix x = sparsenc::load_matrix(a.input, parse_format(a.format));
    if (!a.dataset.empty()) sparsenc::validate_dataset(a.dataset, x);

    sparsenc::ExperimentConfig base =
        build_config(a.algorithm, a.strategy, 1, 0, "", 0.0, a.trials, a.seed);
    sparsenc::SweepSpec spec;
    spec.k_values = parse_int_list(a.k_grid, "--k-grid");
    if (!a.r_grid.empty()) spec.r_values = parse_int_list(a.r_grid, "--r-grid");
    if (!a.eps_grid.empty()) spec.eps_values = parse_double_list(a.eps_grid, "--eps-grid");
    spec.repetitions = a.reps;

    sparsenc::SweepResult res = sparsenc::run_sweep(x, base, spec);
    write_output(a.out, sparsenc::sweep_to_json(res));
    if (!a.csv_out.empty()) write_output(a.csv_out, sparsenc::sweep_to_csv(res));
}

void run_metrics(const MetricsArgs& a) {
    Matrix x = sparsenc::load_matrix(a.input, parse_format(a.format));
    Matrix h = sparsenc::load_matrix(a.encoder, parse_format(a.encoder_format));
    int k = a.k > 0 ? a.k : static_cast<int>(h.cols());

    json doc;
    doc["rows"] = x.rows();
    doc["cols"] = x.cols();
    doc["k"] = k;
    doc["info_loss"] = sparsenc::information_loss(x, h);
    doc["pca_loss"] = sparsenc::tail_energy(sparsenc::svd(x), k);
    double norm = sparsenc::normalized_information_loss(x, h, k);
    if (std::isinf(norm))
        doc["info_loss_normalized"] = "infinity";
    else
        doc["info_loss_normalized"] = norm;
    doc["sym_explained_variance"] = sparsenc::symmetric_explained_variance(x, h, k);
    json percol = json::array();
    for (int j = 0; j < h.cols(); ++j) {
        int c = 0;
        for (int i = 0; i < h.rows(); ++i)
            if (std::abs(h(i, j)) > sparsenc::kSparsityTol) ++c;
        percol.push_back(c);
    }
    doc["per_column_sparsity"] = std::move(percol);
    doc["combined_sparsity"] = sparsenc::combined_sparsity(h);
    doc["avg_column_sparsity"] = sparsenc::avg_column_sparsity(h);
    try {
        sparsenc::VarianceConversion vc = sparsenc::variance_conversion_check(x, h, k);
        doc["variance_conversion"] = {{"explained", vc.explained},
                                      {"bound", vc.bound},
                                      {"weak_bound", vc.weak_bound},
                                      {"epsilon", vc.epsilon},
                                      {"holds", vc.holds}};
    } catch (const std::invalid_argument&) {
        doc["variance_conversion"] = "not applicable (encoder is not orthonormal)";
    }
    write_output(a.out, doc.dump(2));
}

// the error record takes the report's place on the output channel
void emit_error(const std::string& out, const std::string& type, const std::string& message) {
    json doc;
    doc["error"] = {{"type", type}, {"message", message}};
    try {
        if (out.empty() || out == "-")
            std::cout << doc.dump(2) << std::endl;
        else
            write_output(out, doc.dump(2));
    } catch (const std::exception&) {
        std::cerr << doc.dump(2) << std::endl;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse linear encoders via column subset selection"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic matrix");
    cmd_gen->add_option("--kind", gen.kind, "power-law|spiked|flat|all-ones");
    cmd_gen->add_option("--rows", gen.rows, "row count")->required();
    cmd_gen->add_option("--cols", gen.cols, "column count")->required();
    cmd_gen->add_option("--seed", gen.seed, "rng seed")->envname("SPARSENC_SEED");
    cmd_gen->add_option("--decay", gen.decay, "power-law decay exponent");
    cmd_gen->add_option("--spikes", gen.spikes, "spiked: large singular value count");
    cmd_gen->add_option("--spike", gen.spike, "spiked: large singular value");
    cmd_gen->add_option("--noise", gen.noise, "spiked: noise floor");
    cmd_gen->add_option("--out", gen.out, "output path or -")->required();
    cmd_gen->add_option("--format", gen.format, "auto|csv|mm");

    EncodeArgs enc;
    auto* cmd_enc = app.add_subcommand("encode", "build a sparse encoder and report losses");
    cmd_enc->add_option("--input", enc.input, "matrix file")->required();
    cmd_enc->add_option("--format", enc.format, "auto|csv|mm");
    cmd_enc->add_option("--dataset", enc.dataset, "validate shape against a known dataset");
    cmd_enc->add_option("--algorithm", enc.algorithm, "batch|iterative|tpower");
    cmd_enc->add_option("--strategy", enc.strategy, "greedy|randomized");
    cmd_enc->add_option("--k", enc.k, "number of factors")->required();
    auto* opt_r = cmd_enc->add_option("--r", enc.r, "fixed sparsity budget");
    auto* opt_sched = cmd_enc->add_option("--schedule", enc.schedule, "per-step budgets, comma-separated");
    auto* opt_eps = cmd_enc->add_option("--eps", enc.eps, "accuracy knob deriving the budget schedule");
    opt_r->excludes(opt_sched)->excludes(opt_eps);
    opt_sched->excludes(opt_eps);
    cmd_enc->add_option("--trials", enc.trials, "randomized selection restarts");
    cmd_enc->add_option("--seed", enc.seed, "rng seed")->envname("SPARSENC_SEED");
    cmd_enc->add_option("--out", enc.out, "report path or -");
    cmd_enc->add_option("--save-encoder", enc.save_encoder, "write H as CSV");
    cmd_enc->add_flag("--timings", enc.timings, "include wall-clock timings in the report");

    SweepArgs swp;
    auto* cmd_swp = app.add_subcommand("sweep", "run a (k, sparsity) grid with repetitions");
    cmd_swp->add_option("--input", swp.input, "matrix file")->required();
    cmd_swp->add_option("--format", swp.format, "auto|csv|mm");
    cmd_swp->add_option("--dataset", swp.dataset, "validate shape against a known dataset");
    cmd_swp->add_option("--algorithm", swp.algorithm, "batch|iterative|tpower");
    cmd_swp->add_option("--strategy", swp.strategy, "greedy|randomized");
    cmd_swp->add_option("--k-grid", swp.k_grid, "k values, comma-separated")->required();
    auto* opt_rg = cmd_swp->add_option("--r-grid", swp.r_grid, "r values, comma-separated");
    auto* opt_eg = cmd_swp->add_option("--eps-grid", swp.eps_grid, "eps values, comma-separated");
    opt_rg->excludes(opt_eg);
    cmd_swp->add_option("--reps", swp.reps, "repetitions per grid point");
    cmd_swp->add_option("--trials", swp.trials, "randomized selection restarts");
    cmd_swp->add_option("--seed", swp.seed, "base rng seed")->envname("SPARSENC_SEED");
    cmd_swp->add_option("--out", swp.out, "JSON output path or -");
    cmd_swp->add_option("--csv-out", swp.csv_out, "long-format CSV output path");

    MetricsArgs met;
    auto* cmd_met = app.add_subcommand("metrics", "measure losses for a supplied encoder");
    cmd_met->add_option("--input", met.input, "matrix file")->required();
    cmd_met->add_option("--format", met.format, "auto|csv|mm");
    cmd_met->add_option("--encoder", met.encoder, "encoder matrix file (d x k)")->required();
    cmd_met->add_option("--encoder-format", met.encoder_format, "auto|csv|mm");
    cmd_met->add_option("--k", met.k, "rank for the PCA floor (default: encoder columns)");
    cmd_met->add_option("--out", met.out, "JSON output path or -");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    std::string out_hint = "-";
    if (cmd_enc->parsed()) out_hint = enc.out;
    if (cmd_swp->parsed()) out_hint = swp.out;
    if (cmd_met->parsed()) out_hint = met.out;

    try {
        if (cmd_gen->parsed()) run_gen(gen);
        if (cmd_enc->parsed()) run_encode(enc);
        if (cmd_swp->parsed()) run_sweep_cmd(swp);
        if (cmd_met->parsed()) run_metrics(met);
        return 0;
    } catch (const sparsenc::NumericalError& e) {
        emit_error(out_hint, "numerical", e.what());
        return 2;
    } catch (const sparsenc::InputError& e) {
        emit_error(out_hint, "input", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        emit_error(out_hint, "input", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error(out_hint, "numerical", e.what());
        return 2;
    }
}
