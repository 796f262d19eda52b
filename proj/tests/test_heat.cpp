#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "specdim/errors.hpp"
#include "specdim/heat.hpp"
#include "specdim/orders.hpp"

using namespace specdim;

namespace {

// Exhaustive enumeration over the 3^t step sequences of the 1-D lazy walk.
double enumerate_return(int t, double laziness) {
  double total = 0.0;
  std::vector<int> steps(static_cast<std::size_t>(t), -1);
  while (true) {
    int pos = 0;
    double p = 1.0;
    for (int s : steps) {
      pos += s;
      p *= s == 0 ? laziness : 0.5 * (1.0 - laziness);
    }
    if (pos == 0) total += p;
    std::size_t i = 0;
    while (i < steps.size() && steps[i] == 1) steps[i++] = -1;
    if (i == steps.size()) break;
    ++steps[i];
  }
  return total;
}

HeatTrace synthetic(double (*f)(double), double t_max = 1 << 20) {
  HeatTrace h;
  for (int j = 0;; ++j) {
    const double t = std::exp2(j / 8.0);
    if (t > t_max) break;
    h.times.push_back(t);
    h.values.push_back(f(t));
  }
  return h;
}

// N(s) = b + s^p sampled on 2^{-k/16}, s down to 2^-octaves. With b > 0 the
// samples only resolve s^p while it stays well above b * eps.
SpectralCounting synthetic_counting(double b, double exponent, int octaves = 60) {
  std::vector<double> s{0.0};
  std::vector<double> n{b};
  for (int k = octaves * 16; k >= 0; --k) {
    const double x = std::exp2(-k / 16.0);
    s.push_back(x);
    n.push_back(b + std::pow(x, exponent));
  }
  return SpectralCounting::from_samples(s, n);
}

}  // namespace

TEST_CASE("walk return probabilities match path enumeration") {
  CHECK(walk_return_1d(2, 0.5)[2] == 0.375);
  for (double laziness : {0.5, 0.3, 0.8}) {
    const auto diag = walk_return_1d(10, laziness);
    for (int t = 0; t <= 10; ++t) {
      CAPTURE(t);
      CHECK(diag[static_cast<std::size_t>(t)] == doctest::Approx(enumerate_return(t, laziness)).epsilon(1e-12));
    }
  }
}

TEST_CASE("product identity and positivity chain") {
  const auto one = walk_return_1d(4096);
  for (int d = 1; d <= 4; ++d) {
    const auto h = lattice_return_probability(d, 4096);
    CHECK_NOTHROW(h.validate());
    CHECK(h.non_increasing());
    for (std::size_t i = 0; i < h.times.size(); ++i) {
      CHECK(h.values[i] == std::pow(one[static_cast<std::size_t>(h.times[i])], d));
    }
  }
}

TEST_CASE("local CLT flatness in two dimensions") {
  const auto one = walk_return_1d(8192);
  const double a = 4096.0 * std::pow(one[4096], 2);
  const double b = 8192.0 * std::pow(one[8192], 2);
  CHECK(std::abs(a / b - 1.0) < 0.2);
  // Variance 1/2 per coordinate and step: p_t ~ (pi t)^{-1/2}.
  CHECK(std::sqrt(8192.0) * one[8192] == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-3));
}

TEST_CASE("walk limits") {
  CHECK_THROWS_AS(walk_return_1d(kMaxWalkSteps + 1), ResourceError);
  CHECK_THROWS_AS(lattice_return_probability(5, 16), InputError);
  CHECK_THROWS_AS(walk_return_1d(16, 1.0), InputError);
}

TEST_CASE("asdim on synthetic traces") {
  const auto inv = synthetic([](double t) { return 1.0 / t; });
  const auto a = asdim(inv);
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(asdim_sup_form(inv).value - a.value) <= 1e-6);

  const auto flat = synthetic([](double) { return 0.7; });
  CHECK(asdim(flat).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(asdim_sup_form(flat).value <= 1e-9);

  const auto wobble = synthetic([](double t) { return std::pow(t, -1.5) * (1.0 + 0.3 * std::sin(std::log(t))); });
  // The raw log ratio moves by at most log(1.3) / log t. An anchored ratio
  // divides the same wobble by log(t / t_a), which is small next to the anchor.
  AsdimOptions raw;
  raw.reference = RatioReference::Origin;
  CHECK(asdim(wobble, raw).value == doctest::Approx(3.0).epsilon(0.1 / 3.0));

  HeatTrace bad = inv;
  bad.values[3] = 0.0;
  CHECK_THROWS_AS(asdim(bad), InputError);
  CHECK_THROWS_AS(asdim(inv.restricted(std::exp2(15.0))), IndeterminateError);
}

TEST_CASE("lattice walk dimensions") {
  for (int d = 1; d <= 3; ++d) {
    CAPTURE(d);
    const auto h = lattice_return_probability(d, 1 << 14);
    const double a = asdim(h).value;
    CHECK(std::abs(a - d) <= 0.1);
    CHECK(std::abs(asdim_sup_form(h).value - a) <= 0.05);
    const auto ns = ns_numbers(h);
    REQUIRE(ns.alpha_lower.has_value());
    CHECK(std::abs(*ns.alpha_lower - d) <= 0.15);
    CHECK(std::abs(*ns.alpha_lower - a) <= 0.1);
    CHECK_FALSE(ns.alpha.has_value());
  }
}

TEST_CASE("threshold invariance of asdim") {
  const auto h = lattice_return_probability(2, 1 << 14);
  AsdimOptions raw;
  raw.reference = RatioReference::Origin;
  const auto full = asdim(h, raw);
  const auto anchored = asdim(h);
  for (double t0 : {1.0, 4.0, 64.0, 2048.0}) {
    CAPTURE(t0);
    AsdimOptions opts = raw;
    opts.min_windows = 3;
    // The restricted tail is a sub-range of the full tail, so the raw liminf
    // can only move within the full tail spread.
    const auto part = asdim(h.restricted(t0), opts);
    CHECK(part.value >= full.value - 1e-12);
    CHECK(part.value - full.value <= 2.0 * full.order.tail_spread + 1e-12);
    // The anchored estimate also moves its anchor with t0.
    opts.reference = RatioReference::TailAnchor;
    const auto part_anchored = asdim(h.restricted(t0), opts);
    CHECK(std::abs(part_anchored.value - anchored.value) <= 0.02);
  }
}

TEST_CASE("counting duality examples") {
  const std::vector<double> eigs{0.0, 0.5, 2.0};
  const auto c = counting_duality(eigs, 1.0);
  CHECK(c.lhs == 1.0);
  CHECK(c.rhs == 1.0);
  CHECK_FALSE(c.boundary);
  const auto edge = counting_duality(eigs, 2.0);
  CHECK(edge.boundary);
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  for (double t : {0.1, 1.0, 10.0}) {
    const auto z = counting_duality(zeros, t);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
  }
  CHECK_THROWS_AS(counting_duality(std::vector<double>{-1.0, 1.0}, 1.0), InputError);
}

TEST_CASE("counting duality on random spectra") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> eigs;
    for (int i = 0; i < 50; ++i) eigs.push_back(u(rng) < 0.1 ? 0.0 : std::exp(8.0 * u(rng) - 4.0));
    auto times = generic_times(eigs);
    while (times.size() < 100) times.push_back(std::exp(10.0 * u(rng) - 5.0));
    for (double t : times) {
      // Brute-force oracle.
      double lhs = 0.0;
      double rhs = 0.0;
      for (double x : eigs) {
        if (x > 0.0 && 1.0 / x > t) lhs += 1.0;
        if (x > 0.0 && x <= 1.0 / t) rhs += 1.0;
      }
      const auto c = counting_duality(eigs, t);
      if (c.boundary) continue;
      if (c.lhs != lhs || c.rhs != rhs || c.lhs != c.rhs) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("inverse distribution is the duality count") {
  const std::vector<double> eigs{0.0, 0.25, 0.25, 1.0, 3.0};
  const auto n = SpectralCounting::from_eigenvalues(eigs);
  const auto lambda = n.inverse_distribution();
  for (double t : generic_times(eigs)) CHECK(lambda(t) == counting_duality(eigs, t).lhs);
  CHECK(lambda(4.0) == 0.0);
  CHECK(lambda(3.999) == 2.0);
}

TEST_CASE("Laplace-Stieltjes transform") {
  const auto two = SpectralCounting::from_eigenvalues({0.0, 1.0});
  for (double t : {0.1, 1.0, 5.0}) {
    CHECK(laplace_stieltjes(two, t) == doctest::Approx(1.0 + std::exp(-t)).epsilon(1e-15));
    CHECK(heat_trace(two, std::vector<double>{t}).values[0] == doctest::Approx(std::exp(-t)).epsilon(1e-15));
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::vector<double> eigs;
  for (int i = 0; i < 20; ++i) eigs.push_back(u(rng));
  const auto n = SpectralCounting::from_eigenvalues(eigs);
  for (double t : {0.01, 0.3, 2.0, 9.0}) {
    double direct = 0.0;
    for (double x : eigs) direct += std::exp(-t * x);
    CHECK(laplace_stieltjes(n, t) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(laplace_stieltjes(n, 1e-14) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("Novikov-Shubin numbers of N = b + t^{3/2}") {
  AsdimOptions raw;
  raw.reference = RatioReference::Origin;
  const auto exact = synthetic_counting(0.0, 1.5);
  CHECK(*ns_numbers(exact).alpha == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(*ns_numbers(exact, raw).alpha == doctest::Approx(3.0).epsilon(1e-12));

  const auto n = synthetic_counting(2.0, 1.5, 16);
  CHECK(n.betti() == 2.0);
  const auto ns = ns_numbers(n);
  REQUIRE(ns.alpha.has_value());
  REQUIRE(ns.alpha_lower.has_value());
  // Rounding in b + s^{3/2} is at most 2 eps / 2^-24 relative.
  CHECK(*ns.alpha == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(*ns_numbers(n, raw).alpha == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(*ns.alpha_lower == doctest::Approx(3.0).epsilon(0.05 / 3.0));
  CHECK(*ns.alpha_prime >= *ns.alpha_lower);
}

TEST_CASE("alpha through the distribution of the inverse") {
  // lambda_{D^-1}(t) = N(1/t) - b; 2 / ord_0 recovers alpha.
  for (double alpha : {1.0, 3.0, 4.0}) {
    CAPTURE(alpha);
    const auto n = synthetic_counting(1.0, alpha / 2.0, 16);
    const auto lambda = n.inverse_distribution();
    // lambda vanishes past 1 / (first jump) = 2^16.
    const auto grid = grid_between(1.0, std::exp2(15.0), End::Infinity);
    const auto ord = order_via_distribution(lambda, End::Zero, grid);
    CHECK(2.0 / ord.value == doctest::Approx(alpha).epsilon(0.05 / alpha));
    CHECK(*ns_numbers(n).alpha == doctest::Approx(2.0 / ord.value).epsilon(0.05));
  }
}

TEST_CASE("finite spectra have a gap") {
  const auto n = SpectralCounting::from_eigenvalues({0.0, 0.5, 2.0});
  const auto ns = ns_numbers(n);
  CHECK(std::isinf(*ns.alpha));
  CHECK(std::isinf(*ns.alpha_lower));
  CHECK_FALSE(ns.notes.empty());
}

TEST_CASE("counting input validation") {
  const std::vector<double> s{0.0, 1.0, 2.0};
  const std::vector<double> down{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(SpectralCounting::from_samples(s, down), InputError);
  const std::vector<double> unsorted{1.0, 0.5, 2.0};
  const std::vector<double> up{0.0, 1.0, 2.0};
  CHECK_THROWS_AS(SpectralCounting::from_samples(unsorted, up), InputError);
  const auto n = SpectralCounting::from_samples(s, up);
  CHECK(n(0.5) == 0.0);
  CHECK(n(1.0) == 1.0);
  CHECK(n(10.0) == 2.0);
}
