#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "specdim/errors.hpp"
#include "specdim/orders.hpp"

using namespace specdim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// t^-p on geometric cells [2^{j/k}, 2^{(j+1)/k}) for lo <= j/k < hi. Each cell
// carries the curve value at the cell end further from `end`, so every ratio
// log v / log(1/t) is at least p and equals p at a breakpoint. Zero beyond 2^hi.
StepFunction power_cells(double p, int lo, int hi, int per_octave, End end = End::Infinity) {
  std::vector<double> t;
  std::vector<double> v;
  for (int j = lo * per_octave; j <= hi * per_octave; ++j) t.push_back(std::exp2(static_cast<double>(j) / per_octave));
  v.push_back(kInf);
  for (std::size_t i = 1; i < t.size(); ++i) v.push_back(std::pow(end == End::Infinity ? t[i] : t[i - 1], -p));
  v.push_back(0.0);
  if (lo == 0) v[0] = v[1];
  return {t, v};
}

}  // namespace

TEST_CASE("grid points and tail") {
  const GridSpec g{1.0, 48, 0.5};
  CHECK(g.point(End::Infinity, 3) == 8.0);
  CHECK(g.point(End::Zero, 3) == 0.125);
  CHECK(g.tail_begin() == 24);
  const GridSpec fitted = grid_between(1.0, 1000.0, End::Infinity);
  CHECK(fitted.count == 9);
  CHECK(fitted.point(End::Infinity, fitted.count) == 1000.0);
  const GridSpec down = grid_between(1.0, 1e-3, End::Zero);
  CHECK(down.point(End::Zero, down.count) == 1e-3);
  CHECK_THROWS_AS(grid_between(1.0, 1.5, End::Infinity), InputError);
}

TEST_CASE("pure power law at infinity") {
  const StepFunction mu = power_cells(0.7, 0, 40, 16);
  const OrderEstimate est = order_at_infinity(mu, grid_between(1.0, std::exp2(40.0), End::Infinity));
  CHECK(std::abs(est.value - 0.7) <= 1e-3);
  CHECK(est.converged);
  CHECK(est.windows.size() == 40);
  // The reported value is the running minimum of the tail window minima.
  double running = kInf;
  for (std::size_t j = est.tail_begin; j < est.windows.size(); ++j) running = std::min(running, est.windows[j].lower);
  CHECK(est.value == running);
}

TEST_CASE("super-polynomial decay and eventually zero functions have infinite order") {
  std::vector<double> t;
  std::vector<double> v{1.0};
  for (int j = 1; j <= 3000; ++j) {
    t.push_back(j * 0.25);
    v.push_back(std::exp(-j * 0.25));
  }
  v.back() = 0.0;
  const OrderEstimate est = order_at_infinity(StepFunction(t, v));
  CHECK(std::isinf(est.value));
  CHECK(est.converged);
}

TEST_CASE("bounded below at infinity gives order 0") {
  const OrderEstimate est = order_at_infinity(StepFunction({2.0, 4.0}, {3.0, 2.0, 0.5}));
  CHECK(est.value == 0.0);
  CHECK(est.converged);
}

TEST_CASE("pure power law at zero") {
  const StepFunction mu = power_cells(2.0, -40, 0, 16, End::Zero);
  const OrderEstimate est = order_at_zero(mu, grid_between(1.0, std::exp2(-40.0), End::Zero));
  CHECK(std::abs(est.value - 2.0) <= 1e-3);
}

TEST_CASE("logarithmic growth at zero has order 0") {
  // log(1/t) on cells 2^{-j/4}; the ratio log log(1/t) / log(1/t) is at most
  // log(693) / 693 < 0.01 at t = 2^-1000.
  std::vector<double> t;
  std::vector<double> v{kInf};
  for (int j = 4000; j >= 0; --j) {
    const double x = std::exp2(-j / 4.0);
    t.push_back(x);
    v.push_back(std::max(std::log(1.0 / x), 1e-3));
  }
  GridSpec grid;
  grid.count = 1000;
  const OrderEstimate est = order_at_zero(StepFunction(t, v), grid);
  CHECK(est.value >= 0.0);
  CHECK(est.value < 0.02);
}

TEST_CASE("order at zero rejects grids inside an infinite plateau and reports bounded heads") {
  const StepFunction mu({0.5, 1.0}, {kInf, 2.0, 1.0});
  CHECK_THROWS_AS(order_at_zero(mu), InputError);
  const StepFunction bounded({0.5, 1.0}, {4.0, 2.0, 1.0});
  CHECK(order_at_zero(bounded).value == 0.0);
}

TEST_CASE("distribution-side order of an exact power law") {
  // lambda(s) = s^-2 near 0 gives ord_inf = 1/2; sample on cells valued at the
  // right end so every breakpoint lies on the curve.
  const StepFunction lambda = power_cells(2.0, -40, 0, 16);
  const OrderEstimate est = order_via_distribution(lambda, End::Infinity, grid_between(1.0, std::exp2(-40.0), End::Zero));
  CHECK(est.reciprocal);
  CHECK(std::abs(est.value - 0.5) <= 1e-3);
}

TEST_CASE("distribution-side and direct orders agree on power laws") {
  for (double p : {0.3, 0.7, 1.0, 2.0}) {
    const int top = 40;
    const StepFunction mu = power_cells(p, 0, top, 32);
    const double direct = order_at_infinity(mu, grid_between(1.0, std::exp2(top), End::Infinity)).value;
    const StepFunction lambda = distribution(mu);
    // lambda lives on s in [mu(2^top), 1]; fit the grid to that range.
    const double s_min = mu.values()[mu.values().size() - 2];
    const double dual = order_via_distribution(lambda, End::Infinity, grid_between(1.0, s_min, End::Zero)).value;
    CHECK(std::abs(direct - dual) <= 0.02);
    CHECK(std::abs(direct - p) <= 0.02);
  }
}

TEST_CASE("zero distribution near zero means infinite order") {
  const OrderEstimate est = order_via_distribution(StepFunction{}, End::Infinity);
  CHECK(std::isinf(est.value));
}

TEST_CASE("power_scale scales every window ratio exactly") {
  const StepFunction mu = power_cells(1.0, 0, 40, 16);
  const GridSpec grid = grid_between(1.0, std::exp2(40.0), End::Infinity);
  const OrderEstimate base = order_at_infinity(mu, grid);
  for (double a : {0.5, 2.0, 3.0}) {
    const OrderEstimate scaled = order_at_infinity(power_scale(mu, a), grid);
    CHECK(std::abs(scaled.value - a * base.value) <= 1e-9);
    for (std::size_t j = 0; j < base.windows.size(); ++j) {
      CHECK(std::abs(scaled.windows[j].lower - a * base.windows[j].lower) <= 1e-12 * a * std::abs(base.windows[j].lower) + 1e-15);
    }
  }
  CHECK(power_scale(mu, 1.0) == mu);
  CHECK_THROWS_AS(power_scale(mu, 0.0), InputError);
  CHECK_THROWS_AS(power_scale(mu, -1.0), InputError);
}

TEST_CASE("monotone domination at the estimator level") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  const StepFunction mu2 = power_cells(0.8, 0, 30, 8);
  const GridSpec grid = grid_between(1.0, std::exp2(30.0), End::Infinity);
  for (int trial = 0; trial < 50; ++trial) {
    // mu1 = mu2 times a random non-increasing factor in (0, 1], refined breakpoints.
    std::vector<double> t = mu2.breakpoints();
    std::vector<double> v = mu2.values();
    double factor = 1.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      factor *= unit(rng) > 0.9 ? unit(rng) : 1.0;
      v[i] *= factor;
    }
    const StepFunction mu1(t, v);
    CHECK(order_at_infinity(mu1, grid).value >= order_at_infinity(mu2, grid).value);
  }
}

TEST_CASE("tail anchored ratios remove a constant prefactor") {
  // 5 t^-1: origin-referenced ratios are biased by log 5 / log t, anchored ones are exact.
  std::vector<GraphPoint> pts;
  for (int j = 0; j <= 8 * 20; ++j) {
    const double t = std::exp2(j / 8.0);
    pts.push_back({t, 5.0 / t});
  }
  GridSpec grid = grid_between(1.0, std::exp2(20.0), End::Infinity);
  const double origin = estimate_order(pts, End::Infinity, grid, Extremum::Lower).value;
  grid.reference = RatioReference::TailAnchor;
  const OrderEstimate anchored = estimate_order(pts, End::Infinity, grid, Extremum::Lower);
  CHECK(origin < 0.9);
  CHECK(anchored.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(anchored.anchor);
  CHECK(anchored.anchor->t == 512.0);
}

TEST_CASE("grid shift moves the estimate by at most the tail spread") {
  // Oscillating exponent: t^-(1 + 0.1 sin(log t)).
  std::vector<GraphPoint> pts;
  for (int j = 0; j <= 16 * 44; ++j) {
    const double t = std::exp2(j / 16.0);
    pts.push_back({t, std::pow(t, -(1.0 + 0.1 * std::sin(std::log(t))))});
  }
  const GridSpec base = grid_between(2.0, std::exp2(42.0), End::Infinity);
  const OrderEstimate ref = estimate_order(pts, End::Infinity, base, Extremum::Lower);
  for (double shift : {0.5, 0.75, 1.5, 2.0}) {
    GridSpec g = base;
    g.t0 *= shift;
    const OrderEstimate moved = estimate_order(pts, End::Infinity, g, Extremum::Lower);
    CHECK(std::abs(moved.value - ref.value) <= std::max(ref.tail_spread, moved.tail_spread));
  }
}

TEST_CASE("samples must be sorted and nonnegative") {
  const std::vector<GraphPoint> bad{{2.0, 1.0}, {1.0, 0.5}};
  CHECK_THROWS_AS(estimate_order(bad, End::Infinity, GridSpec{}, Extremum::Lower), InputError);
  const std::vector<GraphPoint> empty_tail{{1.5, 1.0}};
  CHECK_THROWS_AS(estimate_order(empty_tail, End::Infinity, GridSpec{}, Extremum::Lower), InputError);
}
