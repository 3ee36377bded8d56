// Experiment orchestration: single runs, grid sweeps with per-point seed
// derivation, and validation of user-supplied dataset files against the
// expected-dimensions manifest.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsenc/column_select.hpp"
#include "sparsenc/encoder.hpp"
#include "sparsenc/report.hpp"
#include "sparsenc/types.hpp"

namespace sparsenc {

enum class Algorithm { Batch, Iterative, TPowerDeflation };
enum class SparsityMode { Fixed, Schedule, Eps };

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Batch;
    SelectionKind strategy = SelectionKind::Randomized;
    int k = 1;
    SparsityMode sparsity_mode = SparsityMode::Fixed;  // exactly one spec applies
    int r = 0;
    std::vector<int> schedule;
    double eps = 0.0;
    int trials = 1;
    std::uint64_t seed = 0;
};

struct ExperimentOutput {
    SparseEncoder encoder;
    LossReport report;
};

// Dispatches one experiment on x. tpower-deflation requires x symmetric and
// a fixed sparsity budget.
ExperimentOutput run_experiment_full(const Matrix& x, const ExperimentConfig& config);

// Report-only convenience wrapper.
LossReport run_experiment(const Matrix& x, const ExperimentConfig& config);

struct SweepSpec {
    std::vector<int> k_values;        // non-empty
    std::vector<int> r_values;        // exactly one of r_values/eps_values non-empty
    std::vector<double> eps_values;
    int repetitions = 25;
};

struct SweepRow {
    int grid_index = 0;
    int k = 0;
    double sparsity_value = 0.0;  // r (fixed) or eps
    int rep = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  // set when !ok
    LossReport report;  // valid when ok
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ordered by grid index, then repetition
};

// Runs every (k, sparsity) grid point `repetitions` times. Point (g, t) runs
// with seed derive_seed(base_seed, g*repetitions + t), so a single-point
// single-repetition sweep reproduces run_experiment with the base seed.
// Failed points are recorded and the sweep continues.
SweepResult run_sweep(const Matrix& x, const ExperimentConfig& base, const SweepSpec& spec);

// Long-format CSV, one row per (grid point, repetition); column order is
// fixed and documented in the README.
std::string sweep_to_csv(const SweepResult& res);

// {"runs": [...], "summary": [...]} with per-grid-point means over the
// successful repetitions.
std::string sweep_to_json(const SweepResult& res);

struct DatasetInfo {
    std::string name;
    int rows = 0;
    int cols = 0;
};

// Built-in expected-dimensions manifest for user-supplied dataset files.
const std::vector<DatasetInfo>& dataset_manifest();

// Throws InputError when the name is unknown or the shape disagrees with the
// manifest.
void validate_dataset(const std::string& name, const Matrix& x);

}  // namespace sparsenc
