#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sparsenc/column_select.hpp"
#include "sparsenc/matrix_ops.hpp"
#include "sparsenc/rng.hpp"
#include "sparsenc/types.hpp"
#include "test_util.hpp"

using namespace sparsenc;
using testutil::random_matrix;
using testutil::span_loss_oracle;

TEST_SUITE("column_select") {

TEST_CASE("materialize_sampling places unit columns at the selected indices") {
  Matrix m = materialize_sampling(ColumnSelection({0, 2}, 3));
  CHECK((m.col(0) - Vector::Unit(3, 0)).norm() == 0.0);
  CHECK((m.col(1) - Vector::Unit(3, 2)).norm() == 0.0);

  Matrix full = materialize_sampling(ColumnSelection({0, 1}, 2));
  CHECK((full - Matrix::Identity(2, 2)).norm() == 0.0);

  Matrix omega = materialize_sampling(ColumnSelection({1, 3}, 5));
  CHECK((omega.transpose() * omega - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("select_columns extracts exactly the selected columns") {
  SeededRng rng(21);
  Matrix x = random_matrix(rng, 4, 5);
  ColumnSelection sel({1, 4}, 5);
  Matrix c = select_columns(x, sel);
  CHECK((c.col(0) - x.col(1)).norm() == 0.0);
  CHECK((c.col(1) - x.col(4)).norm() == 0.0);
  CHECK((c - x * materialize_sampling(sel)).norm() == 0.0);
}

TEST_CASE("selection indices must be strictly increasing and in range") {
  CHECK_THROWS_AS(ColumnSelection({2, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(ColumnSelection({0, 0}, 3), std::invalid_argument);
  CHECK_THROWS_AS(ColumnSelection({0, 3}, 3), std::invalid_argument);
  CHECK_THROWS_AS(ColumnSelection({-1}, 3), std::invalid_argument);
}

TEST_CASE("reduce_selection drops numerically dependent columns, keeping the span") {
  SeededRng rng(22);
  Matrix x(5, 4);
  x.col(0) = testutil::random_matrix(rng, 5, 1);
  x.col(1) = testutil::random_matrix(rng, 5, 1);
  x.col(2) = x.col(0);                    // duplicate
  x.col(3) = x.col(0) - 2.0 * x.col(1);   // dependent combination
  ColumnSelection red = reduce_selection(x, ColumnSelection({0, 1, 2, 3}, 4));
  CHECK(red.indices == std::vector<int>{0, 1});
}

TEST_CASE("best_rank_k_in_span with every column and full rank returns X") {
  SeededRng rng(23);
  Matrix x = random_matrix(rng, 5, 4);
  ColumnSelection sel({0, 1, 2, 3}, 4);
  Matrix y = best_rank_k_in_span(x, sel, 4);
  CHECK((x - y).norm() <= 1e-10);
}

TEST_CASE("best_rank_k_in_span on the identity keeps the selected axes") {
  Matrix x = Matrix::Identity(3, 3);
  Matrix y = best_rank_k_in_span(x, ColumnSelection({1, 2}, 3), 2);
  Matrix expect = Matrix::Zero(3, 3);
  expect(1, 1) = 1.0;
  expect(2, 2) = 1.0;
  CHECK((y - expect).norm() <= 1e-12);
  CHECK(span_restricted_loss(x, ColumnSelection({1, 2}, 3), 2) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("best_rank_k_in_span matches a dense projection oracle") {
  SeededRng rng(24);
  for (int t = 0; t < 25; ++t) {
    Matrix x = random_matrix(rng, 5, 4);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        ColumnSelection sel({a, b}, 4);
        double got = span_restricted_loss(x, sel, 1);
        double expect = span_loss_oracle(x, {a, b}, 1);
        CHECK(got == doctest::Approx(expect).epsilon(1e-9));
        Matrix y = best_rank_k_in_span(x, sel, 1);
        CHECK((x - y).squaredNorm() == doctest::Approx(expect).epsilon(1e-9));
      }
  }
}

TEST_CASE("no random rank-k matrix inside the span beats best_rank_k_in_span") {
  SeededRng rng(25);
  Matrix x = random_matrix(rng, 6, 8);
  ColumnSelection sel({0, 2, 5, 7}, 8);
  const int k = 2;
  double loss = span_restricted_loss(x, sel, k);
  Matrix c = select_columns(x, sel);
  for (int t = 0; t < 1000; ++t) {
    Matrix y = c * random_matrix(rng, 4, k) * random_matrix(rng, k, 8);
    CHECK((x - y).squaredNorm() >= loss - 1e-8);
  }
}

TEST_CASE("best_rank_k_in_span needs k independent selected columns") {
  Matrix x = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(best_rank_k_in_span(x, ColumnSelection({0, 1}, 3), 1),
                  DegenerateSelectionError);
  Matrix r1(3, 3);  // rank 1: every column is a multiple of the same vector
  r1.col(0) = Vector::LinSpaced(3, 1.0, 3.0);
  r1.col(1) = 2.0 * r1.col(0);
  r1.col(2) = -r1.col(0);
  CHECK_THROWS_AS(best_rank_k_in_span(r1, ColumnSelection({0, 1, 2}, 3), 2),
                  DegenerateSelectionError);
}

TEST_CASE("greedy on a diagonal matrix takes the largest axes in index order") {
  Matrix x = Vector::LinSpaced(3, 3.0, 1.0).asDiagonal();
  ColumnSelection sel = select_columns_greedy(x, 2, 2);
  CHECK(sel.indices == std::vector<int>{0, 1});
}

TEST_CASE("greedy breaks ties toward the smallest index") {
  Matrix x = Matrix::Identity(2, 2);
  ColumnSelection sel = select_columns_greedy(x, 1, 1);
  CHECK(sel.indices == std::vector<int>{0});
}

TEST_CASE("greedy is near the exhaustive optimum and never below it") {
  SeededRng rng(26);
  int within = 0;
  for (int t = 0; t < 10; ++t) {
    Matrix x = random_matrix(rng, 6, 6);
    ColumnSelection sel = select_columns_greedy(x, 2, 3);
    double greedy_loss = span_restricted_loss(x, sel, 2);
    double opt = testutil::exhaustive_opt(x, 2, 3);
    CHECK(greedy_loss >= opt - 1e-8);
    if (greedy_loss <= 1.5 * opt) ++within;
  }
  CHECK(within >= 9);
}

TEST_CASE("approximate right singular basis is exact on a rank-k matrix") {
  SeededRng rng(27);
  Matrix x = random_matrix(rng, 6, 2) * random_matrix(rng, 2, 5);
  Matrix v = approx_top_right_singular(x, 2, 0.9, 5);
  CHECK(v.cols() == 2);
  CHECK((x - x * v * v.transpose()).norm() <= 1e-8);
}

TEST_CASE("approximate right singular basis converges with a spectral gap") {
  Vector d(4);
  d << 3.0, 2.0, 1.0, 1e-6;
  Matrix x = d.asDiagonal();
  Matrix v = approx_top_right_singular(x, 2, 0.01, 9);
  REQUIRE(v.cols() == 2);
  Matrix p = v * v.transpose();
  CHECK((p * Vector::Unit(4, 0) - Vector::Unit(4, 0)).norm() <= 1e-6);
  CHECK((p * Vector::Unit(4, 1) - Vector::Unit(4, 1)).norm() <= 1e-6);
}

TEST_CASE("approximate right singular basis stays within 1.5x of the exact tail") {
  SeededRng rng(28);
  int good = 0;
  for (int s = 0; s < 10; ++s) {
    Matrix x = random_matrix(rng, 50, 30);
    Matrix v = approx_top_right_singular(x, 5, 0.5, 1000 + s);
    double approx = (x - x * v * v.transpose()).squaredNorm();
    double exact = testutil::exact_tail_energy(x, 5);
    if (approx <= 1.5 * exact) ++good;
  }
  CHECK(good >= 9);
}

TEST_CASE("adaptive sampling takes the only column with residual mass") {
  Matrix x = Matrix::Identity(2, 2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    ColumnSelection out = adaptive_sample(x, ColumnSelection({0}, 2), 1, s);
    CHECK(out.indices == std::vector<int>{0, 1});
  }
}

TEST_CASE("adaptive sampling returns the selection unchanged on zero residual") {
  SeededRng rng(29);
  Matrix x(4, 3);
  x.col(0) = random_matrix(rng, 4, 1);
  x.col(1) = 2.0 * x.col(0);
  x.col(2) = -0.5 * x.col(0);
  ColumnSelection out = adaptive_sample(x, ColumnSelection({0}, 3), 2, 7);
  CHECK(out.indices == std::vector<int>{0});
}

TEST_CASE("adaptive sampling concentrates on the dominant residual column") {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 1.0;
  x(1, 1) = 10.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    ColumnSelection out = adaptive_sample(x, ColumnSelection({0}, 2), 1, s);
    CHECK(out.indices == std::vector<int>{0, 1});
  }
}

TEST_CASE("adaptive sampling stops early when the residual mass runs out") {
  Matrix x = Matrix::Identity(2, 2);
  ColumnSelection out = adaptive_sample(x, ColumnSelection({0}, 2), 5, 3);
  CHECK(out.indices == std::vector<int>{0, 1});
}

TEST_CASE("randomized selection on the identity with r=d takes every column") {
  for (int d : {6, 8}) {
    Matrix x = Matrix::Identity(d, d);
    for (std::uint64_t s = 0; s < 5; ++s) {
      ColumnSelection sel = select_columns_randomized(x, 1, d, s);
      REQUIRE(sel.size() == d);
      for (int j = 0; j < d; ++j) CHECK(sel.indices[j] == j);
      CHECK(span_restricted_loss(x, sel, 1) ==
            doctest::Approx(d - 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("randomized selection returns exactly r distinct in-range indices") {
  SeededRng rng(30);
  Matrix x = random_matrix(rng, 10, 8);
  for (int r = 2; r <= 8; ++r) {
    ColumnSelection sel = select_columns_randomized(x, 2, r, 77 + r);
    REQUIRE(sel.size() == r);
    for (int j = 1; j < r; ++j) CHECK(sel.indices[j] > sel.indices[j - 1]);
    CHECK(sel.indices.front() >= 0);
    CHECK(sel.indices.back() < 8);
  }
}

TEST_CASE("randomized selection captures the span of a rank-k matrix with duplicated columns") {
  // any 3 distinct columns of [3e1, 3e1, 2e2, 2e2] span both axes
  Matrix x = Matrix::Zero(4, 4);
  x(0, 0) = 3.0;
  x(0, 1) = 3.0;
  x(1, 2) = 2.0;
  x(1, 3) = 2.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    ColumnSelection sel = select_columns_randomized(x, 2, 3, s);
    CHECK(span_restricted_loss(x, sel, 2) <= 1e-8);
  }
}

TEST_CASE("randomized selection meets the expectation bound in the mean") {
  SeededRng rng(31);
  SUBCASE("r equal to d recovers the exact tail") {
    Matrix x = random_matrix(rng, 40, 20);
    double exact = testutil::exact_tail_energy(x, 2);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 25; ++s) {
      ColumnSelection sel = select_columns_randomized(x, 2, 20, s);
      sum += span_restricted_loss(x, sel, 2) / exact;
    }
    CHECK(sum / 25.0 <= 2.0);
  }
  SUBCASE("r strictly between 5k and d") {
    Matrix x = random_matrix(rng, 40, 20);
    double exact = testutil::exact_tail_energy(x, 2);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < 25; ++s) {
      ColumnSelection sel = select_columns_randomized(x, 2, 15, s);
      sum += span_restricted_loss(x, sel, 2) / exact;
    }
    CHECK(sum / 25.0 <= 1.0 + 10.0 / 5.0);  // 1 + 5k/(r-5k)
  }
}

TEST_CASE("boosting with one trial reproduces the plain randomized selection") {
  SeededRng rng(32);
  Matrix x = random_matrix(rng, 12, 9);
  for (std::uint64_t s = 0; s < 5; ++s) {
    ColumnSelection a = boost_best_of(x, 2, 5, 1, s);
    ColumnSelection b = select_columns_randomized(x, 2, 5, s);
    CHECK(a.indices == b.indices);
  }
}

TEST_CASE("boosting returns the best trial, never worse than the median") {
  SeededRng rng(33);
  for (int inst = 0; inst < 20; ++inst) {
    Matrix x = random_matrix(rng, 30, 15);
    const std::uint64_t seed = 500 + inst;
    const int trials = 10;
    std::vector<double> losses;
    for (int t = 0; t < trials; ++t) {
      ColumnSelection sel =
          select_columns_randomized(x, 2, 12, derive_seed(seed, t));
      losses.push_back(span_restricted_loss(x, sel, 2));
    }
    double boosted =
        span_restricted_loss(x, boost_best_of(x, 2, 12, trials, seed), 2);
    std::vector<double> sorted = losses;
    std::sort(sorted.begin(), sorted.end());
    CHECK(boosted == *std::min_element(losses.begin(), losses.end()));
    CHECK(boosted <= sorted[trials / 2]);
  }
}

TEST_CASE("selections are deterministic in the seed") {
  SeededRng rng(34);
  Matrix x = random_matrix(rng, 15, 10);
  ColumnSelection a = select_columns_randomized(x, 2, 6, 42);
  ColumnSelection b = select_columns_randomized(x, 2, 6, 42);
  CHECK(a.indices == b.indices);
  ColumnSelection c = boost_best_of(x, 2, 6, 5, 42);
  ColumnSelection d = boost_best_of(x, 2, 6, 5, 42);
  CHECK(c.indices == d.indices);
}

TEST_CASE("selections are invariant under scaling the input by 2") {
  SeededRng rng(35);
  Matrix x = random_matrix(rng, 12, 9);
  Matrix x2 = 2.0 * x;
  CHECK(select_columns_greedy(x, 2, 4).indices ==
        select_columns_greedy(x2, 2, 4).indices);
  CHECK(select_columns_randomized(x, 2, 5, 11).indices ==
        select_columns_randomized(x2, 2, 5, 11).indices);
}

}  // TEST_SUITE
