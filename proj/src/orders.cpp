#include "specdim/orders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const GridSpec& grid) {
  if (!std::isfinite(grid.t0) || grid.t0 <= 0.0) throw InputError("grid t0 must be finite and positive");
  if (grid.count < 1) throw InputError("grid needs at least one window");
  if (!(grid.tail_fraction > 0.0 && grid.tail_fraction <= 1.0)) {
    throw InputError("tail_fraction must lie in (0, 1]");
  }
}

std::size_t quarter_begin(int count) {
  const int q = std::max(1, (count + 3) / 4);
  return static_cast<std::size_t>(count - q);
}

using Collector = std::function<void(double lo, double hi, std::vector<GraphPoint>& out)>;
using AnchorLookup = std::function<std::optional<double>(double t)>;

OrderEstimate windowed(End end, const GridSpec& grid, Extremum extremum, const Collector& collect,
                       const AnchorLookup& anchor_value) {
  validate(grid);
  OrderEstimate est;
  est.end = end;
  est.extremum = extremum;
  est.tail_fraction = grid.tail_fraction;
  est.tail_begin = grid.tail_begin();
  est.reference = grid.reference;

  double ref_t = 1.0;
  double ref_log_v = 0.0;
  if (grid.reference == RatioReference::TailAnchor) {
    const int a = est.tail_begin == 0 ? 0 : static_cast<int>(est.tail_begin) - 1;
    const double t_a = grid.point(end, a);
    const auto v_a = anchor_value(t_a);
    if (v_a && std::isfinite(*v_a) && *v_a > 0.0) {
      ref_t = t_a;
      ref_log_v = std::log(*v_a);
      est.anchor = GraphPoint{t_a, *v_a};
    } else {
      est.reference = RatioReference::Origin;
      est.note = "no finite positive anchor value; fell back to origin-referenced ratios";
    }
  }
  const double log_ref_t = std::log(ref_t);

  std::vector<GraphPoint> points;
  est.windows.reserve(static_cast<std::size_t>(grid.count));
  for (int j = 0; j < grid.count; ++j) {
    WindowRatio w;
    w.t_begin = grid.point(end, j);
    w.t_end = grid.point(end, j + 1);
    w.lower = kInf;
    w.upper = -kInf;
    points.clear();
    collect(std::min(w.t_begin, w.t_end), std::max(w.t_begin, w.t_end), points);
    for (const auto& p : points) {
      const double denom = log_ref_t - std::log(p.t);
      if (denom == 0.0) continue;
      const double r = (std::log(p.v) - ref_log_v) / denom;
      if (std::isnan(r)) continue;
      w.lower = std::min(w.lower, r);
      w.upper = std::max(w.upper, r);
      ++w.samples;
    }
    est.windows.push_back(w);
  }

  const bool lower = extremum == Extremum::Lower;
  double value = lower ? kInf : -kInf;
  bool any = false;
  auto spread_over = [&](std::size_t from) {
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t j = from; j < est.windows.size(); ++j) {
      if (est.windows[j].samples == 0) continue;
      const double r = est.window_value(j);
      if (!std::isfinite(r)) continue;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return hi >= lo ? hi - lo : 0.0;
  };
  for (std::size_t j = est.tail_begin; j < est.windows.size(); ++j) {
    if (est.windows[j].samples == 0) continue;
    any = true;
    const double r = est.window_value(j);
    value = lower ? std::min(value, r) : std::max(value, r);
  }
  if (!any) throw InputError("no samples fall inside the tail of the grid");
  est.value = value;
  est.tail_spread = spread_over(est.tail_begin);
  est.last_quarter_spread = spread_over(quarter_begin(grid.count));
  est.converged = std::isinf(value) || est.last_quarter_spread < kConvergenceSpread;
  return est;
}

void closure_points(const StepFunction& f, double lo, double hi, std::vector<GraphPoint>& out) {
  const auto& t = f.breakpoints();
  const auto& v = f.values();
  // The jump at lo belongs to the previous window; including its left limit
  // would let values from beyond the grid's limit end leak in.
  out.push_back({lo, f(lo)});
  auto it = std::upper_bound(t.begin(), t.end(), lo);
  for (; it != t.end() && *it < hi; ++it) {
    const auto i = static_cast<std::size_t>(it - t.begin());
    out.push_back({*it, v[i]});
    out.push_back({*it, v[i + 1]});
  }
  out.push_back({hi, f.left_limit(hi)});
  out.push_back({hi, f(hi)});
}

double reciprocal_order(double limsup) {
  if (std::isinf(limsup) && limsup > 0.0) return 0.0;
  if (!(limsup > 0.0)) return kInf;
  return 1.0 / limsup;
}

}  // namespace

double GridSpec::point(End end, int j) const { return std::ldexp(t0, end == End::Infinity ? j : -j); }

std::size_t GridSpec::tail_begin() const {
  const int tail = std::clamp(static_cast<int>(std::ceil(tail_fraction * count - 1e-12)), 1, count);
  return static_cast<std::size_t>(count - tail);
}

GridSpec grid_between(double start, double limit_side, End end, double tail_fraction,
                      RatioReference reference) {
  if (!(start > 0.0) || !(limit_side > 0.0) || !std::isfinite(start) || !std::isfinite(limit_side)) {
    throw InputError("grid endpoints must be finite and positive");
  }
  const double span = end == End::Infinity ? limit_side / start : start / limit_side;
  const int count = static_cast<int>(std::floor(std::log2(span) + 1e-9));
  if (count < 1) throw InputError("grid range is shorter than one dyadic window");
  GridSpec grid;
  grid.count = count;
  grid.t0 = std::ldexp(limit_side, end == End::Infinity ? -count : count);
  grid.tail_fraction = tail_fraction;
  grid.reference = reference;
  return grid;
}

double OrderEstimate::window_value(std::size_t j) const {
  return extremum == Extremum::Lower ? windows.at(j).lower : windows.at(j).upper;
}

OrderEstimate estimate_order(std::span<const GraphPoint> samples, End end, const GridSpec& grid,
                             Extremum extremum) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].t > 0.0) || !std::isfinite(samples[i].t)) throw InputError("sample abscissae must be positive");
    if (std::isnan(samples[i].v) || samples[i].v < 0.0) throw InputError("sample values must be nonnegative");
    if (i > 0 && samples[i].t <= samples[i - 1].t) throw InputError("samples must be sorted by strictly increasing t");
  }
  auto by_t = [](const GraphPoint& p, double t) { return p.t < t; };
  const Collector collect = [&](double lo, double hi, std::vector<GraphPoint>& out) {
    auto it = std::lower_bound(samples.begin(), samples.end(), lo, by_t);
    for (; it != samples.end() && it->t <= hi; ++it) out.push_back(*it);
  };
  const AnchorLookup anchor = [&](double t) -> std::optional<double> {
    if (samples.empty()) return std::nullopt;
    auto it = std::lower_bound(samples.begin(), samples.end(), t, by_t);
    if (it == samples.end()) return samples.back().v;
    if (it != samples.begin() && std::log(t / std::prev(it)->t) < std::log(it->t / t)) --it;
    return it->v;
  };
  return windowed(end, grid, extremum, collect, anchor);
}

OrderEstimate estimate_order(const StepFunction& f, End end, const GridSpec& grid, Extremum extremum) {
  const Collector collect = [&](double lo, double hi, std::vector<GraphPoint>& out) {
    closure_points(f, lo, hi, out);
  };
  const AnchorLookup anchor = [&](double t) -> std::optional<double> { return f(t); };
  return windowed(end, grid, extremum, collect, anchor);
}

OrderEstimate order_at_infinity(const StepFunction& mu, const GridSpec& grid) {
  OrderEstimate est = estimate_order(mu, End::Infinity, grid, Extremum::Lower);
  const bool reaches_tail = mu.size() == 0 || grid.point(End::Infinity, grid.count) > mu.breakpoints().back();
  if (mu.tail() > 0.0 && reaches_tail) {
    est.value = 0.0;
    est.converged = true;
    est.note = "bounded below by a positive constant at infinity";
  } else if (std::isinf(est.value)) {
    est.note = "eventually zero";
  }
  return est;
}

OrderEstimate order_at_zero(const StepFunction& mu, const GridSpec& grid) {
  validate(grid);
  const bool reaches_head = mu.size() == 0 || grid.point(End::Zero, grid.count) < mu.breakpoints().front();
  if (std::isinf(mu.head()) && reaches_head) {
    throw InputError("grid reaches the interval where mu is identically +inf");
  }
  OrderEstimate est = estimate_order(mu, End::Zero, grid, Extremum::Lower);
  if (reaches_head) {
    est.value = 0.0;
    est.converged = true;
    est.note = "bounded near 0";
  }
  return est;
}

OrderEstimate order_via_distribution(const StepFunction& lambda, End end, const GridSpec& grid) {
  // ord_inf looks at lambda near s = 0, ord_0 at s -> inf.
  const End lambda_end = end == End::Infinity ? End::Zero : End::Infinity;
  OrderEstimate est = estimate_order(lambda, lambda_end, grid, Extremum::Upper);
  const double limsup = est.value;
  est.end = end;
  est.reciprocal = true;
  // limsup = -inf (lambda vanishing toward s -> 0) maps to order +inf,
  // limsup = +inf (lambda vanishing toward s -> inf) to order 0.
  est.value = reciprocal_order(limsup);
  if (std::isinf(est.value)) est.note = "lambda vanishes near the end: faster than any power";

  auto spread_over = [&](std::size_t from) {
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t j = from; j < est.windows.size(); ++j) {
      if (est.windows[j].samples == 0) continue;
      const double r = reciprocal_order(est.window_value(j));
      if (!std::isfinite(r)) continue;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return hi >= lo ? hi - lo : 0.0;
  };
  est.tail_spread = spread_over(est.tail_begin);
  est.last_quarter_spread = spread_over(quarter_begin(grid.count));
  est.converged = std::isinf(est.value) || est.value == 0.0 || est.last_quarter_spread < kConvergenceSpread;
  return est;
}

StepFunction power_scale(const StepFunction& mu, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("power_scale needs a finite alpha > 0");
  std::vector<double> v = mu.values();
  for (auto& x : v) x = std::pow(x, alpha);
  return {mu.breakpoints(), std::move(v)};
}

}  // namespace specdim
