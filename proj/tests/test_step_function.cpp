#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "specdim/errors.hpp"
#include "specdim/step_function.hpp"

using namespace specdim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force rearrangement: accumulate mass per distinct value in a map
// keyed by descending value, then lay plateaus end to end.
std::vector<std::pair<double, double>> sort_oracle(const MassSample& s) {
  std::map<double, double, std::greater<>> mass;
  for (const auto& p : s) mass[p.value] += p.mass;
  std::vector<std::pair<double, double>> out;  // (right end, value)
  double at = 0.0;
  for (const auto& [value, m] : mass) {
    at += m;
    out.emplace_back(at, value);
  }
  return out;
}

// Level-set measure |{t : f(t) > s}| computed by scanning every plateau.
double level_measure(const StepFunction& f, double s) {
  const auto& t = f.breakpoints();
  const auto& v = f.values();
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > s)) continue;
    if (i == t.size()) return kInf;
    total += t[i] - (i == 0 ? 0.0 : t[i - 1]);
  }
  return total;
}

StepFunction random_step(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> steps(0, 64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = steps(rng);
  std::vector<double> t;
  std::vector<double> v;
  double at = 0.0;
  for (int i = 0; i < m; ++i) {
    at += 0.01 + 3.0 * unit(rng);
    t.push_back(at);
  }
  double level = unit(rng) < 0.2 ? kInf : 100.0 * unit(rng) + 1.0;
  v.push_back(level);
  double finite = std::isinf(level) ? 100.0 : level;
  for (int i = 0; i < m; ++i) {
    finite *= unit(rng);
    v.push_back(unit(rng) < 0.1 ? (v.back() == kInf ? finite : v.back()) : finite);
  }
  if (m > 0 && unit(rng) < 0.5) v.back() = 0.0;
  if (m == 0 && std::isinf(v[0])) v[0] = 1.0;
  return {t, v};
}

}  // namespace

TEST_CASE("construction validates its input") {
  CHECK_THROWS_AS(StepFunction({1.0}, {1.0}), InputError);
  CHECK_THROWS_AS(StepFunction({2.0, 1.0}, {3.0, 2.0, 1.0}), InputError);
  CHECK_THROWS_AS(StepFunction({1.0}, {1.0, 2.0}), InputError);
  CHECK_THROWS_AS(StepFunction({1.0}, {1.0, -1.0}), InputError);
  CHECK_THROWS_AS(StepFunction({}, {kInf}), InputError);
  CHECK_THROWS_AS(StepFunction({1.0}, {2.0, 1.0}, 0.5), InputError);
  const StepFunction merged({1.0, 2.0}, {3.0, 3.0, 1.0});
  CHECK(merged.breakpoints() == std::vector<double>{2.0});
  CHECK(merged.values() == std::vector<double>{3.0, 1.0});
}

TEST_CASE("evaluation is right-continuous") {
  const StepFunction f({1.0, 2.0, 4.0}, {5.0, 3.0, 1.0, 0.0});
  CHECK(f(0.5) == 5.0);
  CHECK(f(1.0) == 3.0);
  CHECK(f.left_limit(1.0) == 5.0);
  CHECK(f(3.9) == 1.0);
  CHECK(f(4.0) == 0.0);
  CHECK(f.support_end() == 4.0);
  CHECK_THROWS_AS(static_cast<void>(f(0.0)), InputError);
}

TEST_CASE("rearrange sorts by value with plateau lengths equal to masses") {
  const MassSample s{{3, 1}, {1, 2}, {5, 1}};
  const StepFunction mu = rearrange(s);
  CHECK(mu.breakpoints() == std::vector<double>{1, 2, 4});
  CHECK(mu.values() == std::vector<double>{5, 3, 1, 0});

  const MassSample sorted{{2, 1}, {1, 1}};
  const StepFunction id = rearrange(sorted);
  CHECK(id == StepFunction({1, 2}, {2, 1, 0}));

  CHECK_THROWS_AS(rearrange(MassSample{}), InputError);
  CHECK_THROWS_AS(rearrange(MassSample{{1, -1}}), InputError);
  CHECK_THROWS_AS(rearrange(MassSample{{-1, 1}}), InputError);
}

TEST_CASE("rearrange matches the sort-and-accumulate oracle on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> levels(0, 40);
  std::uniform_real_distribution<double> mass(0.01, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    MassSample s(1 + trial % 50);
    for (auto& p : s) p = {static_cast<double>(levels(rng)) / 4.0, mass(rng)};
    const auto oracle = sort_oracle(s);
    const StepFunction mu = rearrange(s);
    // Oracle plateaus of value 0 collapse into the zero tail.
    std::size_t expected = oracle.size() - (oracle.back().second == 0.0 ? 1 : 0);
    REQUIRE(mu.size() == expected);
    for (std::size_t i = 0; i < expected; ++i) {
      CHECK(mu.breakpoints()[i] == oracle[i].first);
      CHECK(mu.values()[i] == oracle[i].second);
    }
    double total = 0.0;
    for (const auto& p : s) total += p.value * p.mass;
    CHECK(integrate(mu, 0.0, kInf) == doctest::Approx(total).epsilon(1e-13));
  }
}

TEST_CASE("distribution of the three-step example") {
  const StepFunction mu({1, 2, 4}, {5, 3, 1, 0});
  const StepFunction lambda = distribution(mu);
  CHECK(lambda.breakpoints() == std::vector<double>{1, 3, 5});
  CHECK(lambda.values() == std::vector<double>{4, 2, 1, 0});
  CHECK(round_trip(mu) == mu);
}

TEST_CASE("distribution of a constant with finite support") {
  const StepFunction c({}, {2.5}, 3.0);
  const StepFunction lambda = distribution(c);
  CHECK(lambda(1.0) == 3.0);
  CHECK(lambda(2.5) == 0.0);
  CHECK(round_trip(StepFunction{}) == StepFunction{});
}

TEST_CASE("distribution of a sampled inverse square root follows s^-2") {
  // Right-endpoint samples of t^{-1/2} on (0, 1]; the level set {mu > s} of the
  // step function is (0, t_k) with t_k the first grid point where t_k^{-1/2} <= s.
  const int n = 10000;
  std::vector<double> t;
  std::vector<double> v{kInf};
  for (int i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    t.push_back(x);
    v.push_back(1.0 / std::sqrt(x));
  }
  v.back() = 1.0;
  const StepFunction mu(t, v, 1.0 + 1.0 / n);
  const StepFunction lambda = distribution(mu);
  double worst = 0.0;
  for (double s = 1.01; s < 90.0; s *= 1.013) worst = std::max(worst, std::abs(lambda(s) - 1.0 / (s * s)));
  CHECK(worst <= 1.0 / n);
}

TEST_CASE("infinite level-set measure is represented by an infinite head") {
  const StepFunction lambda = distribution(StepFunction::constant(1.0));
  CHECK(std::isinf(lambda(0.5)));
  CHECK(lambda(1.0) == 0.0);
  CHECK(rearrange(lambda) == StepFunction::constant(1.0));
  CHECK_NOTHROW(distribution(StepFunction({1.0}, {kInf, 1.0})));
}

TEST_CASE("round trip is exact on random step functions") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const StepFunction f = random_step(rng);
    if (f.tail() > 0.0 && std::isinf(f.head()) && f.size() == 0) continue;
    const StepFunction g = round_trip(f);
    REQUIRE(g == f);
    // Pointwise at breakpoints and plateau midpoints, plus the level-set oracle.
    const auto& t = f.breakpoints();
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(g(t[i]) == f(t[i]));
      const double mid = 0.5 * ((i == 0 ? 0.0 : t[i - 1]) + t[i]);
      CHECK(g(mid) == f(mid));
    }
    if (f.tail() == 0.0) {
      const StepFunction lambda = distribution(f);
      for (double s : f.values()) {
        if (std::isfinite(s) && s > 0.0) CHECK(lambda(s) == level_measure(f, s));
      }
    }
  }
}

TEST_CASE("rearrangement is idempotent") {
  const MassSample s{{0.5, 2}, {4, 0.25}, {4, 1}, {2, 3}};
  const StepFunction mu = rearrange(s);
  CHECK(rearrange(distribution(mu)) == mu);
}

TEST_CASE("integrate sums value times overlap") {
  const StepFunction mu({1, 2, 4}, {5, 3, 1, 0});
  CHECK(integrate(mu, 0, 4) == 10.0);
  CHECK(integrate(mu, 2.25, 2.5) == 0.25);
  CHECK(integrate(mu, 0, 1.5) + integrate(mu, 1.5, 3) == integrate(mu, 0, 3));
  CHECK_THROWS_AS(integrate(mu, 2, 2), InputError);
  CHECK_THROWS_AS(integrate(mu, 3, 2), InputError);
  CHECK(integrate(StepFunction({1.0}, {kInf, 1.0}, 2.0), 0.0, 2.0) == kInf);
  CHECK(integrate(StepFunction::constant(1.0), 5.0, kInf) == kInf);
}

TEST_CASE("integral of a dyadic sampling of 1/t is bracketed by k log 2") {
  for (int k = 1; k <= 30; ++k) {
    std::vector<double> t;
    std::vector<double> v{1.0};
    for (int j = 1; j <= k; ++j) {
      t.push_back(std::ldexp(1.0, j));
      v.push_back(std::ldexp(1.0, -j));
    }
    v.back() = 0.0;
    const double integral = integrate(StepFunction(t, v), 1.0, std::ldexp(1.0, k));
    const double exact = k * std::log(2.0);
    // Left-endpoint values on each dyadic cell give exactly k, which lies in [exact, 2 exact].
    CHECK(integral >= exact);
    CHECK(integral <= 2.0 * exact);
  }
}

TEST_CASE("integration is monotone in the integrand") {
  const StepFunction f({1, 3}, {4, 2, 0.5});
  const StepFunction g({1, 2, 3}, {4, 1, 1, 0.5});
  CHECK(integrate(g, 0.0, 10.0) <= integrate(f, 0.0, 10.0));
}

TEST_CASE("scale multiplies values") {
  const StepFunction f({1.0}, {kInf, 2.0});
  CHECK(scale(f, 3.0).values() == std::vector<double>{kInf, 6.0});
  CHECK(scale(f, 0.0) == StepFunction{});
  CHECK_THROWS_AS(scale(f, -1.0), InputError);
}
