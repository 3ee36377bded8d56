// Run report: losses, sparsity statistics, and configuration echo for one
// encoder construction. Serialization uses shortest round-trip decimals;
// timing fields are emitted only on request so default output stays
// byte-identical across runs.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sparsenc {

struct LossReport {
    std::string algorithm;  // "batch" | "iterative" | "tpower-deflation"
    std::string strategy;   // "greedy" | "randomized" | "none"
    int rows = 0;
    int cols = 0;
    int k_requested = 0;
    int k_effective = 0;

    std::string sparsity_mode;  // "fixed" | "schedule" | "eps"
    int r = 0;                  // fixed mode
    std::vector<int> schedule;  // schedule/eps modes, after clamping to d
    double eps = std::numeric_limits<double>::quiet_NaN();

    std::uint64_t seed = 0;
    int trials = 1;

    double info_loss = 0.0;
    double pca_loss = 0.0;
    double info_loss_normalized = 0.0;  // +inf when the PCA floor is zero but loss is not
    double sym_explained_variance = 0.0;
    std::optional<double> bound_factor;  // set only when r > 5k

    std::vector<int> per_column_sparsity;
    int combined_sparsity = 0;
    double avg_column_sparsity = 0.0;

    std::vector<int> selected_columns;  // batch: the selection fed to the encoder
    int reduced_cardinality = 0;        // independent columns kept after reduction
    bool rank_clamped = false;          // fewer factors than requested
    bool early_stop = false;            // iterative: residual hit zero early

    std::vector<double> per_step_loss;   // iterative: loss after each prefix
    std::vector<double> per_step_delta;  // iterative: 5/(r_i - 5); NaN when r_i <= 5

    double select_seconds = 0.0;
    double encode_seconds = 0.0;
    double total_seconds = 0.0;
};

// One report as a JSON object (string form).
std::string report_to_json(const LossReport& rep, bool include_timings = false);

// Reports wrapped as {"runs": [...]}; the standard output document.
std::string reports_to_json(const std::vector<LossReport>& reps, bool include_timings = false);

// Inverse of report_to_json; numeric fields round-trip bit-for-bit.
LossReport report_from_json(const std::string& text);

// Parses {"runs": [...]}.
std::vector<LossReport> reports_from_json(const std::string& text);

}  // namespace sparsenc
