#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "specdim/errors.hpp"
#include "specdim/kernel.hpp"

using namespace specdim;

TEST_CASE("small kernels") {
  Eigen::Matrix2d k;
  k << 2, 1, 1, 1;
  const auto n = one_inf_norm(k, true);
  CHECK(n.value == 2.0);
  CHECK(n.positivity_checked);

  Eigen::Matrix2d off;
  off << 0, 5, 5, 0;
  CHECK(one_inf_norm(off).value == 5.0);
  CHECK(one_inf_norm(off).max_diagonal == 0.0);
  CHECK_FALSE(is_positive_semidefinite(off));
}

TEST_CASE("Gram kernels: sup entry equals sup diagonal") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 64);
  std::normal_distribution<double> g(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = size(rng);
    const int r = size(rng);
    Eigen::MatrixXd a(n, r);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < r; ++j) a(i, j) = g(rng);
    }
    const Eigen::MatrixXd k = gram_kernel(a);
    const double entry = k.cwiseAbs().maxCoeff();
    const double diag = k.diagonal().cwiseAbs().maxCoeff();
    if (std::abs(entry - diag) > 1e-12 * diag) ++mismatches;
    const auto norm = one_inf_norm(k, true);
    CHECK(norm.value == doctest::Approx(diag).epsilon(1e-12));
    CHECK(indicator_positive(k));
  }
  CHECK(mismatches == 0);
}

TEST_CASE("planted non-positive kernels are rejected") {
  Eigen::Matrix3d bad_diag = Eigen::Matrix3d::Identity();
  bad_diag(1, 1) = -0.5;
  CHECK_THROWS_AS(one_inf_norm(bad_diag, true), InvariantViolation);

  // Positive diagonal, off-diagonal entry larger than both diagonal entries.
  Eigen::Matrix2d big_off;
  big_off << 1, 5, 5, 1;
  CHECK_THROWS_AS(one_inf_norm(big_off, true), InvariantViolation);
  CHECK_FALSE(indicator_positive(big_off));
  CHECK_FALSE(is_positive_semidefinite(big_off));
  CHECK(one_inf_norm(big_off).value == 5.0);
}

TEST_CASE("block kernels") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  const int sites = 6;
  const int block = 3;
  Eigen::MatrixXd a(sites * block, 4);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) a(i, j) = g(rng);
  }
  const Eigen::MatrixXd k = gram_kernel(a);
  const auto n = one_inf_norm(k, true, block);
  double diag = 0.0;
  double all = 0.0;
  for (int i = 0; i < sites; ++i) {
    for (int j = 0; j < sites; ++j) {
      const Eigen::MatrixXd b = k.block(i * block, j * block, block, block);
      const double s = b.jacobiSvd().singularValues()(0);
      all = std::max(all, s);
      if (i == j) diag = std::max(diag, s);
    }
  }
  CHECK(all <= diag * (1.0 + 1e-12));
  CHECK(n.value == doctest::Approx(diag).epsilon(1e-12));
  CHECK_THROWS_AS(one_inf_norm(k, false, 4), InputError);
}

TEST_CASE("float kernels") {
  Eigen::Matrix2f k;
  k << 3.0f, 1.0f, 1.0f, 2.0f;
  CHECK(one_inf_norm(k, true, 1, 1e-6f).value == 3.0f);
}
