// Acceptance gate: one test case per shipping criterion, each printing a
// single pass/fail line with the measured margin. Tolerances are pinned
// here, not configurable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sparsenc/baselines.hpp"
#include "sparsenc/column_select.hpp"
#include "sparsenc/encoder.hpp"
#include "sparsenc/harness.hpp"
#include "sparsenc/matrix_io.hpp"
#include "sparsenc/matrix_ops.hpp"
#include "sparsenc/metrics.hpp"
#include "sparsenc/report.hpp"
#include "sparsenc/rng.hpp"
#include "sparsenc/synthetic.hpp"
#include "sparsenc/types.hpp"
#include "test_util.hpp"

using namespace sparsenc;
using testutil::random_matrix;

namespace {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start_)
          .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report_line(int criterion, bool ok, const std::string& detail) {
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL")
            << " (" << detail << ")" << std::endl;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

int column_nnz(const Matrix& h, int j) {
  int nnz = 0;
  for (int i = 0; i < h.rows(); ++i)
    if (std::abs(h(i, j)) > kSparsityTol) ++nnz;
  return nnz;
}

}  // namespace

TEST_CASE("criterion 1: blackbox loss equality") {
  Stopwatch watch;
  SeededRng rng(0xC1);
  double max_dev = 0.0;
  double max_decoder_dev = 0.0;
  bool ok = true;
  for (int t = 0; t < 200; ++t) {
    int n = 8 + static_cast<int>(rng.below(53));
    int d = 8 + static_cast<int>(rng.below(53));
    int k = 1 + static_cast<int>(rng.below(5));
    int rmax = std::min(12, d);
    int r = k + static_cast<int>(rng.below(rmax - k + 1));
    Matrix x = random_matrix(rng, n, d);
    SelectionStrategy strategy;
    strategy.kind = (t % 2 == 0) ? SelectionKind::Greedy : SelectionKind::Randomized;
    strategy.seed = 10000 + t;
    EncodeResult res = batch_encoder(x, k, r, strategy);
    double scale = x.squaredNorm();
    double oracle = testutil::span_loss_oracle(x, res.report.selected_columns,
                                               res.report.k_effective);
    double dev = std::abs(res.report.info_loss - oracle) / scale;
    max_dev = std::max(max_dev, dev);
    double via_pair = (x - x * res.encoder.H * res.decoder.G).squaredNorm();
    double ddev = std::abs(via_pair - res.report.info_loss) / scale;
    max_decoder_dev = std::max(max_decoder_dev, ddev);
    if (dev > 1e-6 || ddev > 1e-6) ok = false;
  }
  double elapsed = watch.seconds();
  if (elapsed >= 30.0) ok = false;
  report_line(1, ok,
              "200 instances, max relative loss deviation " + fmt(max_dev) +
                  ", max decoder deviation " + fmt(max_decoder_dev) + ", " +
                  fmt(elapsed) + " s, limit 30 s");
  CHECK(ok);
}

TEST_CASE("criterion 2: batch expectation bound on power-law spectra") {
  Stopwatch watch;
  const int k = 3, r = 30;
  double sum = 0.0;
  int within_markov = 0;
  SyntheticParams params;
  params.decay = 1.0;
  for (int s = 0; s < 25; ++s) {
    Matrix x = generate_synthetic(SyntheticKind::PowerLaw, 50, 30, 1000 + s, params);
    SelectionStrategy strategy;
    strategy.kind = SelectionKind::Randomized;
    strategy.seed = static_cast<std::uint64_t>(s);
    EncodeResult res = batch_encoder(x, k, r, strategy);
    double ratio = res.report.info_loss_normalized;
    sum += ratio;
    if (ratio <= 2.5) ++within_markov;
  }
  double mean = sum / 25.0;
  double elapsed = watch.seconds();
  bool ok = mean <= 2.0 && within_markov >= 24 && elapsed < 60.0;
  report_line(2, ok,
              "mean normalized loss " + fmt(mean) + " vs bound 2.0, " +
                  std::to_string(within_markov) + "/25 within 2.5, " +
                  fmt(elapsed) + " s, limit 60 s");
  CHECK(ok);
}

TEST_CASE("criterion 3: iterative prefix bound") {
  Stopwatch watch;
  const int k = 4;
  const double eps = 0.5;
  std::vector<int> schedule = adaptive_schedule(k, eps);  // 15, 25, 35, 45
  for (int& b : schedule) b = std::min(b, 25);
  std::vector<double> lhs(k, 0.0), rhs(k, 0.0);
  SeededRng rng(0xC3);
  bool ran_ok = true;
  for (int s = 0; s < 25; ++s) {
    Matrix x = random_matrix(rng, 40, 25);
    SelectionStrategy strategy;
    strategy.kind = SelectionKind::Randomized;
    strategy.seed = static_cast<std::uint64_t>(s);
    EncodeResult res = iterative_encoder(x, k, schedule, strategy);
    if (static_cast<int>(res.report.per_step_loss.size()) != k) {
      ran_ok = false;
      break;
    }
    Eigen::JacobiSVD<Matrix> svd(x);
    const auto& sigma = svd.singularValues();
    for (int l = 1; l <= k; ++l) {
      double tail = 0.0;
      for (int i = l; i < sigma.size(); ++i) tail += sigma(i) * sigma(i);
      double mid = 0.0;
      for (int i = 1; i < l; ++i) mid += sigma(i) * sigma(i);
      lhs[l - 1] += res.report.per_step_loss[l - 1];
      rhs[l - 1] += std::pow(std::exp(1.0) * l, eps) * tail +
                    eps * std::pow(static_cast<double>(l), 1.0 + eps) * mid;
    }
  }
  bool ok = ran_ok;
  std::string margins;
  for (int l = 0; l < k; ++l) {
    if (lhs[l] > rhs[l] * 1.02) ok = false;
    if (!margins.empty()) margins += " ";
    margins += fmt(lhs[l] / rhs[l]);
  }
  double elapsed = watch.seconds();
  if (elapsed >= 120.0) ok = false;
  report_line(3, ok,
              "mean loss over mean bound per prefix: " + margins +
                  " (each must be <= 1.02), " + fmt(elapsed) + " s, limit 120 s");
  CHECK(ok);
}

TEST_CASE("criterion 4: exhaustive oracle on small instances") {
  Stopwatch watch;
  SeededRng rng(0xC4);
  int greedy_within = 0;
  bool never_below = true;
  for (int t = 0; t < 50; ++t) {
    int n = 4 + static_cast<int>(rng.below(5));
    int d = 4 + static_cast<int>(rng.below(5));
    int k = 1 + static_cast<int>(rng.below(2));
    int rmax = std::min(4, d);
    int r = k + static_cast<int>(rng.below(rmax - k + 1));
    Matrix x = random_matrix(rng, n, d);
    double opt = testutil::exhaustive_opt(x, k, r);

    ColumnSelection greedy = select_columns_greedy(x, k, r);
    double greedy_loss = span_restricted_loss(x, greedy, k);
    if (greedy_loss < opt - 1e-8) never_below = false;
    if (greedy_loss <= 1.5 * opt + 1e-12) ++greedy_within;

    ColumnSelection rnd = select_columns_randomized(x, k, r, 300 + t);
    if (span_restricted_loss(x, rnd, k) < opt - 1e-8) never_below = false;
    ColumnSelection boosted = boost_best_of(x, k, r, 3, 300 + t);
    if (span_restricted_loss(x, boosted, k) < opt - 1e-8) never_below = false;
  }
  double elapsed = watch.seconds();
  bool ok = greedy_within >= 45 && never_below && elapsed < 60.0;
  report_line(4, ok,
              "greedy within 1.5x of OPT on " + std::to_string(greedy_within) +
                  "/50, no strategy below OPT: " +
                  (never_below ? "true" : "false") + ", " + fmt(elapsed) +
                  " s, limit 60 s");
  CHECK(ok);
}

TEST_CASE("criterion 5: sparsity contracts") {
  SeededRng rng(0xC5);
  int violations = 0;
  auto check_batch = [&](const EncodeResult& res, int r) {
    std::vector<int> nz;
    for (int i = 0; i < res.encoder.H.rows(); ++i)
      if (res.encoder.H.row(i).cwiseAbs().maxCoeff() > kSparsityTol)
        nz.push_back(i);
    if (static_cast<int>(nz.size()) > r) ++violations;
    for (int j = 0; j < res.encoder.H.cols(); ++j) {
      if (column_nnz(res.encoder.H, j) > res.encoder.budgets[j]) ++violations;
      // every nonzero row must be on the shared support
      for (int i : nz) {
        bool on = false;
        for (int allowed : res.encoder.support[j])
          if (allowed == i) on = true;
        if (!on && std::abs(res.encoder.H(i, j)) > kSparsityTol) ++violations;
      }
    }
  };
  for (int t = 0; t < 10; ++t) {
    Matrix x = random_matrix(rng, 12 + t, 10);
    SelectionStrategy strategy;
    strategy.kind = (t % 2 == 0) ? SelectionKind::Greedy : SelectionKind::Randomized;
    strategy.seed = 40 + t;
    check_batch(batch_encoder(x, 2, 4, strategy), 4);
    check_batch(batch_encoder(x, 3, 7, strategy), 7);

    std::vector<int> schedule = {2, 3, 4};
    EncodeResult iter = iterative_encoder(x, 3, schedule, strategy);
    for (int j = 0; j < iter.encoder.H.cols(); ++j)
      if (column_nnz(iter.encoder.H, j) > schedule[j]) ++violations;

    Matrix a = testutil::random_psd(rng, 8);
    SparseEncoder base = sparse_components_deflation(a, 3, 2, 50 + t);
    for (int j = 0; j < base.H.cols(); ++j)
      if (column_nnz(base.H, j) > 2) ++violations;
  }
  bool ok = violations == 0;
  report_line(5, ok,
              std::to_string(violations) +
                  " violations across batch, iterative, and deflation runs");
  CHECK(ok);
}

TEST_CASE("criterion 6: variance conversion and energy split") {
  SeededRng rng(0xC6);
  int conversion_failures = 0;
  int pythagoras_failures = 0;
  for (int t = 0; t < 500; ++t) {
    int n = 3 + static_cast<int>(rng.below(10));
    int d = 2 + static_cast<int>(rng.below(9));
    int k = 1 + static_cast<int>(rng.below(std::min(d, 3)));
    Matrix x = random_matrix(rng, n, d);
    Matrix h = testutil::random_orthonormal(rng, d, k);
    VarianceConversion vc = variance_conversion_check(x, h, k);
    if (!vc.holds) ++conversion_failures;
    Matrix proj = x * h * h.transpose();
    double split =
        std::abs(x.squaredNorm() - (x - proj).squaredNorm() - proj.squaredNorm());
    if (split > 1e-8 * std::max(1.0, x.squaredNorm())) ++pythagoras_failures;
  }
  bool ok = conversion_failures == 0 && pythagoras_failures == 0;
  report_line(6, ok,
              "500 pairs, " + std::to_string(conversion_failures) +
                  " conversion failures, " + std::to_string(pythagoras_failures) +
                  " energy split failures");
  CHECK(ok);
}

TEST_CASE("criterion 7: all-ones sanity value") {
  double value = allones_sanity(5, 10, 3);
  bool ok = std::abs(value - 0.3) <= 1e-9;
  report_line(7, ok, "allones_sanity(5, 10, 3) = " + fmt(value) +
                         ", expected 0.3 within 1e-9");
  CHECK(ok);
}

TEST_CASE("criterion 8: PitProps figure reproduction (conditional)") {
  std::string path;
  if (const char* env = std::getenv("SPARSENC_PITPROPS")) path = env;
  if (path.empty()) {
    for (const char* candidate :
         {"datasets/pitprops.csv", "../datasets/pitprops.csv"}) {
      std::ifstream probe(candidate);
      if (probe.good()) {
        path = candidate;
        break;
      }
    }
  }
  if (path.empty()) {
    std::cout << "criterion 8: SKIP (PitProps correlation matrix not "
                 "provided; set SPARSENC_PITPROPS or add datasets/pitprops.csv)"
              << std::endl;
    CHECK(true);
    return;
  }
  Matrix x = load_matrix(path);
  validate_dataset("pitprops", x);
  const int k = 2;
  bool decreasing = true;
  bool sparsity_ok = true;
  int better = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (int r = 3; r <= 10; ++r) {
    SelectionStrategy strategy;
    strategy.kind = SelectionKind::Greedy;
    EncodeResult res = batch_encoder(x, k, r, strategy);
    if (res.report.combined_sparsity > r) sparsity_ok = false;
    double normalized = res.report.info_loss_normalized;
    if (normalized >= prev) decreasing = false;
    prev = normalized;
    SparseEncoder base = sparse_components_deflation(x, k, r, 7);
    if (res.report.info_loss < information_loss(x, base.H)) ++better;
  }
  bool ok = decreasing && sparsity_ok && better >= 6;
  report_line(8, ok,
              "loss strictly decreasing over r in {3..10}: " +
                  std::string(decreasing ? "true" : "false") +
                  ", sparsity within budget: " +
                  std::string(sparsity_ok ? "true" : "false") +
                  ", better than deflation on " + std::to_string(better) +
                  "/8 points");
  CHECK(ok);
}

TEST_CASE("criterion 9: byte-identical replays") {
  Matrix x = generate_synthetic(SyntheticKind::PowerLaw, 20, 15, 77);
  ExperimentConfig base;
  base.algorithm = Algorithm::Batch;
  base.strategy = SelectionKind::Randomized;
  base.seed = 5;
  base.trials = 2;
  SweepSpec spec;
  spec.k_values = {1, 2};
  spec.r_values = {4, 6};
  spec.repetitions = 2;
  std::string json_first, csv_first;
  bool ok = true;
  for (int replay = 0; replay < 3; ++replay) {
    SweepResult res = run_sweep(x, base, spec);
    std::string json = sweep_to_json(res);
    std::string csv = sweep_to_csv(res);
    if (replay == 0) {
      json_first = json;
      csv_first = csv;
    } else if (json != json_first || csv != csv_first) {
      ok = false;
    }
  }
  report_line(9, ok, "3 sweep replays over a 4-point grid, 2 repetitions each");
  CHECK(ok);
}
