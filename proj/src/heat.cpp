#include "specdim/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Compensated (Neumaier) sum.
class Accumulator {
 public:
  void add(double x) {
    const double next = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - next) + x : (x - next) + sum_;
    sum_ = next;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::vector<GraphPoint> samples_of(const HeatTrace& trace) {
  std::vector<GraphPoint> out(trace.times.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {trace.times[i], trace.values[i]};
  return out;
}

GridSpec trace_grid(const HeatTrace& trace, const AsdimOptions& opts) {
  trace.validate();
  const double decades = std::log2(trace.times.back() / trace.times.front());
  if (!(decades >= opts.min_windows)) {
    throw IndeterminateError("heat trace spans " + std::to_string(decades) + " dyadic windows; need " +
                             std::to_string(opts.min_windows));
  }
  return grid_between(trace.times.front(), trace.times.back(), End::Infinity, opts.tail_fraction, opts.reference);
}

std::vector<double> checkpoint_times(double t_max) {
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double t = std::round(std::exp2(j / 8.0));
    if (t > t_max) break;
    if (out.empty() || t > out.back()) out.push_back(t);
  }
  if (out.back() < t_max) out.push_back(t_max);
  return out;
}

}  // namespace

void HeatTrace::validate() const {
  if (times.size() != values.size()) throw InputError("heat trace times and values differ in length");
  if (times.size() < 2) throw InputError("heat trace needs at least two samples");
  if (!(betti >= 0.0) || !std::isfinite(betti)) throw InputError("betti number must be finite and nonnegative");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 1.0) || !std::isfinite(times[i])) throw InputError("heat trace times must be finite and >= 1");
    if (i > 0 && !(times[i] > times[i - 1])) throw InputError("heat trace times must increase");
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw InputError("heat trace value at t = " + std::to_string(times[i]) + " is not positive and finite");
    }
  }
}

bool HeatTrace::non_increasing() const {
  return std::is_sorted(values.rbegin(), values.rend());
}

HeatTrace HeatTrace::restricted(double t0) const {
  HeatTrace out;
  out.betti = betti;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t0) {
      out.times.push_back(times[i]);
      out.values.push_back(values[i]);
    }
  }
  return out;
}

std::vector<double> walk_return_1d(int t_max, double laziness) {
  if (t_max < 1) throw InputError("walk length must be at least 1");
  if (t_max > kMaxWalkSteps) {
    throw ResourceError("walk length " + std::to_string(t_max) + " exceeds the convolution buffer limit " +
                        std::to_string(kMaxWalkSteps));
  }
  if (!(laziness > 0.0 && laziness < 1.0)) throw InputError("laziness must lie in (0, 1)");
  const double move = 0.5 * (1.0 - laziness);
  const auto width = static_cast<std::size_t>(2 * t_max + 3);
  const auto center = static_cast<std::size_t>(t_max + 1);
  std::vector<double> p(width, 0.0);
  std::vector<double> next(width, 0.0);
  p[center] = 1.0;

  std::vector<double> diag(static_cast<std::size_t>(t_max) + 1);
  diag[0] = 1.0;
  for (int s = 1; s <= t_max; ++s) {
    const std::size_t lo = center - static_cast<std::size_t>(s);
    const std::size_t hi = center + static_cast<std::size_t>(s);
    Accumulator mass;
    for (std::size_t x = lo; x <= hi; ++x) {
      next[x] = laziness * p[x] + move * (p[x - 1] + p[x + 1]);
      mass.add(next[x]);
    }
    if (std::abs(mass.value() - 1.0) > 1e-10) {
      throw InvariantViolation("walk mass drifted to " + std::to_string(mass.value()) + " at step " +
                               std::to_string(s));
    }
    std::swap(p, next);
    diag[static_cast<std::size_t>(s)] = p[center];
  }
  return diag;
}

HeatTrace lattice_return_probability(int dimension, int t_max, double laziness) {
  if (dimension < 1 || dimension > 4) throw InputError("lattice dimension must be 1..4");
  const auto diag = walk_return_1d(t_max, laziness);
  HeatTrace out;
  for (double t : checkpoint_times(t_max)) {
    out.times.push_back(t);
    out.values.push_back(std::pow(diag[static_cast<std::size_t>(t)], dimension));
  }
  return out;
}

AsdimEstimate asdim(const HeatTrace& trace, const AsdimOptions& opts) {
  const GridSpec grid = trace_grid(trace, opts);
  const auto samples = samples_of(trace);
  AsdimEstimate out;
  out.order = estimate_order(samples, End::Infinity, grid, Extremum::Lower);
  out.value = 2.0 * out.order.value;
  return out;
}

SupFormEstimate asdim_sup_form(const HeatTrace& trace, const AsdimOptions& opts) {
  const GridSpec grid = trace_grid(trace, opts);
  const std::size_t tb = grid.tail_begin();
  const double t_anchor_grid = grid.point(End::Infinity, static_cast<int>(tb) - 1);
  const double t_tail = grid.point(End::Infinity, static_cast<int>(tb));

  // Anchor: the sample nearest the grid point before the tail, in log t.
  std::size_t a = 0;
  for (std::size_t i = 1; i < trace.times.size(); ++i) {
    if (std::abs(std::log(trace.times[i] / t_anchor_grid)) < std::abs(std::log(trace.times[a] / t_anchor_grid))) a = i;
  }
  const double ta = trace.times[a];
  const double va = trace.values[a];

  const auto feasible = [&](double n) {
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
      const double t = trace.times[i];
      if (t < t_tail || t <= ta) continue;
      // theta(t) <= theta(t_a) (t / t_a)^{-n/2}, compared in logs.
      if (std::log(trace.values[i] / va) > -0.5 * n * std::log(t / ta) + 1e-12) return false;
    }
    return true;
  };

  SupFormEstimate out;
  out.anchor_t = ta;
  double lo = 0.0;
  double hi = 64.0;
  if (feasible(hi)) {
    lo = hi;
  } else if (feasible(0.0)) {
    for (; out.iterations < 80 && hi - lo > 1e-13; ++out.iterations) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  out.value = lo;
  out.constant = va * std::pow(ta, 0.5 * lo);
  return out;
}

SpectralCounting::SpectralCounting(std::vector<double> points, std::vector<double> sizes, double betti, bool sampled)
    : points_(std::move(points)), sizes_(std::move(sizes)), betti_(betti), sampled_(sampled) {}

SpectralCounting SpectralCounting::from_eigenvalues(std::vector<double> eigenvalues, double zero_tol) {
  double scale = 0.0;
  for (double x : eigenvalues) {
    if (!std::isfinite(x)) throw InputError("eigenvalues must be finite");
    scale = std::max(scale, std::abs(x));
  }
  const double tol = zero_tol < 0.0 ? 1e-10 * scale : zero_tol;
  double betti = 0.0;
  std::vector<double> positive;
  for (double x : eigenvalues) {
    if (std::abs(x) <= tol) {
      betti += 1.0;
    } else if (x < 0.0) {
      throw InputError("eigenvalue " + std::to_string(x) + " is negative; the operator must be positive");
    } else {
      positive.push_back(x);
    }
  }
  std::sort(positive.begin(), positive.end());
  std::vector<double> points;
  std::vector<double> sizes;
  for (double x : positive) {
    if (!points.empty() && points.back() == x) {
      sizes.back() += 1.0;
    } else {
      points.push_back(x);
      sizes.push_back(1.0);
    }
  }
  return {std::move(points), std::move(sizes), betti, false};
}

SpectralCounting SpectralCounting::from_samples(std::span<const double> s, std::span<const double> n) {
  if (s.size() != n.size() || s.empty()) throw InputError("counting samples need matching non-empty columns");
  double betti = 0.0;
  double previous = 0.0;
  std::vector<double> points;
  std::vector<double> sizes;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0) || !std::isfinite(s[i]) || !std::isfinite(n[i]) || n[i] < 0.0) {
      throw InputError("counting sample " + std::to_string(i + 1) + " is not finite and nonnegative");
    }
    if (i > 0 && !(s[i] > s[i - 1])) throw InputError("counting sample points must increase");
    if (n[i] < previous) throw InputError("counting function decreases at sample " + std::to_string(i + 1));
    if (s[i] == 0.0) {
      betti = n[i];
    } else if (n[i] > previous) {
      points.push_back(s[i]);
      sizes.push_back(n[i] - previous);
    }
    previous = n[i];
  }
  return {std::move(points), std::move(sizes), betti, true};
}

double SpectralCounting::operator()(double s) const {
  if (s < 0.0) return 0.0;
  const auto k = static_cast<std::size_t>(std::upper_bound(points_.begin(), points_.end(), s) - points_.begin());
  Accumulator acc;
  acc.add(betti_);
  for (std::size_t i = 0; i < k; ++i) acc.add(sizes_[i]);
  return acc.value();
}

double SpectralCounting::total() const {
  return std::accumulate(sizes_.begin(), sizes_.end(), betti_);
}

StepFunction SpectralCounting::inverse_excess() const {
  if (points_.empty()) throw InputError("counting function has no positive spectrum");
  std::vector<double> values{kInf};
  Accumulator cum;
  for (double size : sizes_) {
    cum.add(size);
    values.push_back(1.0 / cum.value());
  }
  return {points_, values};
}

StepFunction SpectralCounting::inverse_distribution() const {
  const std::size_t m = points_.size();
  if (m == 0) return StepFunction::constant(0.0);
  // cum[k] = sizes_0 + ... + sizes_k.
  std::vector<double> cum(m);
  Accumulator acc;
  for (std::size_t i = 0; i < m; ++i) {
    acc.add(sizes_[i]);
    cum[i] = acc.value();
  }
  std::vector<double> t(m);
  std::vector<double> v(m + 1);
  v[0] = cum[m - 1];
  for (std::size_t j = 0; j < m; ++j) {
    t[j] = 1.0 / points_[m - 1 - j];
    v[j + 1] = j + 1 < m ? cum[m - 2 - j] : 0.0;
  }
  return {t, v};
}

DualityCheck counting_duality(std::span<const double> eigenvalues, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("duality needs a finite t > 0");
  const auto n = SpectralCounting::from_eigenvalues({eigenvalues.begin(), eigenvalues.end()});
  DualityCheck out;
  for (double x : n.jump_points()) {
    if (std::abs(x * t - 1.0) <= 1e-12) out.boundary = true;
  }
  for (std::size_t i = 0; i < n.jump_points().size(); ++i) {
    if (1.0 / n.jump_points()[i] > t) out.lhs += n.jump_sizes()[i];
  }
  out.rhs = n(1.0 / t) - n.betti();
  if (!out.boundary && out.lhs != out.rhs) {
    throw InvariantViolation("counting duality fails at t = " + std::to_string(t) + ": " + std::to_string(out.lhs) +
                             " vs " + std::to_string(out.rhs));
  }
  return out;
}

std::vector<double> generic_times(std::span<const double> eigenvalues) {
  const auto n = SpectralCounting::from_eigenvalues({eigenvalues.begin(), eigenvalues.end()});
  std::vector<double> r;
  for (double x : n.jump_points()) r.push_back(1.0 / x);
  if (r.empty()) return {1.0};
  std::sort(r.begin(), r.end());
  std::vector<double> out{0.5 * r.front()};
  for (std::size_t i = 1; i < r.size(); ++i) out.push_back(0.5 * (r[i - 1] + r[i]));
  out.push_back(2.0 * r.back());
  return out;
}

double laplace_stieltjes(const SpectralCounting& n, double t) {
  if (!(t > 0.0)) throw InputError("Laplace transform needs t > 0");
  Accumulator acc;
  acc.add(n.betti());
  for (std::size_t i = 0; i < n.jump_points().size(); ++i) acc.add(n.jump_sizes()[i] * std::exp(-n.jump_points()[i] * t));
  return acc.value();
}

HeatTrace heat_trace(const SpectralCounting& n, std::span<const double> times) {
  HeatTrace out;
  out.betti = n.betti();
  for (double t : times) {
    Accumulator acc;
    for (std::size_t i = 0; i < n.jump_points().size(); ++i) {
      acc.add(n.jump_sizes()[i] * std::exp(-n.jump_points()[i] * t));
    }
    if (!(t > 0.0) || !(acc.value() > 0.0)) {
      throw InputError("theta - b is not positive at t = " + std::to_string(t));
    }
    out.times.push_back(t);
    out.values.push_back(acc.value());
  }
  return out;
}

NovikovShubin ns_numbers(const HeatTrace& trace, const AsdimOptions& opts) {
  NovikovShubin out;
  const GridSpec grid = trace_grid(trace, opts);
  const auto samples = samples_of(trace);
  out.alpha_lower = 2.0 * estimate_order(samples, End::Infinity, grid, Extremum::Lower).value;
  out.alpha_prime = 2.0 * estimate_order(samples, End::Infinity, grid, Extremum::Upper).value;
  out.notes.emplace_back("alpha needs the counting function near 0; not available from a heat trace");
  return out;
}

NovikovShubin ns_numbers(const SpectralCounting& n, const AsdimOptions& opts) {
  NovikovShubin out;
  if (n.jump_points().empty()) throw InputError("counting function has no positive spectrum");
  if (!n.sampled()) {
    out.alpha = kInf;
    out.alpha_lower = kInf;
    out.alpha_prime = kInf;
    out.notes.emplace_back("finite spectrum: N = b below the smallest positive eigenvalue (spectral gap)");
    return out;
  }

  const double first = n.jump_points().front();
  const double top = std::min(1.0, n.jump_points().back());
  if (!(std::log2(top / first) >= opts.min_windows)) {
    throw IndeterminateError("counting samples span fewer than " + std::to_string(opts.min_windows) +
                             " dyadic windows below min(1, largest sample)");
  }
  const GridSpec zero_grid = grid_between(top, first, End::Zero, opts.tail_fraction, opts.reference);
  // Sampled N is known at its sample points only; a step closure would add
  // the cell width to every ratio.
  std::vector<GraphPoint> samples;
  Accumulator cum;
  for (std::size_t i = 0; i < n.jump_points().size(); ++i) {
    cum.add(n.jump_sizes()[i]);
    samples.push_back({n.jump_points()[i], 1.0 / cum.value()});
  }
  out.alpha = 2.0 * estimate_order(samples, End::Zero, zero_grid, Extremum::Upper).value;

  std::vector<double> times;
  const double t_max = 1.0 / (16.0 * first);
  for (int j = 0;; ++j) {
    const double t = std::exp2(j / 8.0);
    if (t > t_max) break;
    times.push_back(t);
  }
  if (times.size() < 2 || !(std::log2(times.back()) >= opts.min_windows)) {
    out.notes.emplace_back("samples reach too little of t -> 0 for the heat-trace exponents");
    return out;
  }
  const auto trace = heat_trace(n, times);
  const auto at_inf = ns_numbers(trace, opts);
  out.alpha_lower = at_inf.alpha_lower;
  out.alpha_prime = at_inf.alpha_prime;
  return out;
}

}  // namespace specdim
