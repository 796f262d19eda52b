#include "specdim/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// Terms of a sequence model with their logs, computed once per analysis.
struct Prepared {
  RunSequence runs;
  std::vector<double> log_values;
  double horizon = 0.0;
};

Prepared prepare(const EigenvalueModel& model, double n_max) {
  Prepared p;
  p.runs = model.runs(n_max);
  p.log_values.reserve(p.runs.size());
  for (const Run& r : p.runs) p.log_values.push_back(std::log(r.value));
  p.horizon = total_count(p.runs);
  return p;
}

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

std::vector<SigmaCheckpoint> element_checkpoints(const Prepared& p, double d) {
  std::vector<SigmaCheckpoint> out;
  Accumulator sigma;
  double n = 0.0;
  double next = 4.0;
  for (std::size_t i = 0; i < p.runs.size(); ++i) {
    const double term = std::exp(d * p.log_values[i]);
    double left = p.runs[i].count;
    while (n + left >= next) {
      const double take = next - n;
      sigma.add(term * take);
      left -= take;
      n = next;
      out.push_back({std::log(n), std::log(sigma.value())});
      next *= 2.0;
    }
    if (left > 0.0) {
      sigma.add(term * left);
      n += left;
    }
  }
  if (n >= 3.0 && (out.empty() || std::log(n) > out.back().log_n)) out.push_back({std::log(n), std::log(sigma.value())});
  return out;
}

// log of the last index covered by a ladder step.
double ladder_log_end(const LadderStep& s) {
  if (s.log_start + s.log_count < 36.0) return std::log(std::exp(s.log_start) + std::exp(s.log_count) - 1.0);
  return log_add(s.log_start, s.log_count);
}

std::vector<SigmaCheckpoint> ladder_checkpoints(double lambda, int depth, double d) {
  std::vector<SigmaCheckpoint> out;
  double log_sigma = -kInf;
  for (const LadderStep& s : besicovitch_ladder(lambda, depth)) {
    log_sigma = log_add(log_sigma, s.log_count - d * s.a);
    const double log_n = ladder_log_end(s);
    if (log_n >= std::log(3.0)) out.push_back({log_n, log_sigma});
  }
  return out;
}

GrowthVerdict classify(const std::vector<SigmaCheckpoint>& cps, double d, const DimensionOptions& opts) {
  if (cps.size() < 4) throw IndeterminateError("too few checkpoints to classify sigma_n growth");
  const std::size_t q = std::max<std::size_t>(1, (cps.size() + 3) / 4);
  const SigmaCheckpoint& a = cps[cps.size() - 1 - q];
  const SigmaCheckpoint& b = cps.back();
  GrowthVerdict v;
  v.d = d;
  v.kappa = (b.log_sigma - a.log_sigma) / (std::log(b.log_n) - std::log(a.log_n)) - 1.0;
  v.final_ratio = std::exp(b.log_sigma - std::log(b.log_n));
  if (v.kappa < opts.kappa_zero) {
    v.verdict = GrowthClass::Zero;
  } else if (v.kappa > opts.kappa_infinite) {
    v.verdict = GrowthClass::Infinite;
  } else {
    v.verdict = GrowthClass::Finite;
  }
  return v;
}

struct Source {
  const EigenvalueModel& model;
  const DimensionOptions& opts;
  std::optional<Prepared> prepared;

  std::vector<SigmaCheckpoint> checkpoints(double d) {
    if (model.kind() == EigenvalueModel::Kind::Besicovitch) {
      return ladder_checkpoints(model.parameters()[0], opts.ladder_depth, d);
    }
    if (!prepared) prepared = prepare(model, opts.n_max);
    return element_checkpoints(*prepared, d);
  }
};

// mu_n lookup over a run sequence by binary search on cumulative ends.
class TermIndex {
 public:
  explicit TermIndex(const RunSequence& runs) : runs_(runs) {
    double at = 0.0;
    ends_.reserve(runs.size());
    starts_.reserve(runs.size());
    for (const Run& r : runs) {
      starts_.push_back(at + 1.0);
      at += r.count;
      ends_.push_back(at);
    }
  }
  [[nodiscard]] double operator()(double n) const {
    const auto it = std::lower_bound(ends_.begin(), ends_.end(), n);
    if (it == ends_.end()) throw InputError("term index beyond the horizon");
    return runs_[static_cast<std::size_t>(it - ends_.begin())].value;
  }
  [[nodiscard]] const std::vector<double>& starts() const { return starts_; }
  [[nodiscard]] double horizon() const { return ends_.empty() ? 0.0 : ends_.back(); }

 private:
  const RunSequence& runs_;
  std::vector<double> ends_;
  std::vector<double> starts_;
};

struct Window {
  double lower = kInf;
  double upper = -kInf;
};

LimitVerdict verdict_from_windows(const std::vector<Window>& windows, double tol) {
  LimitVerdict v;
  if (windows.empty()) return v;
  const std::size_t q = std::max<std::size_t>(2, (windows.size() + 3) / 4);
  const std::size_t from = windows.size() > q ? windows.size() - q : 0;
  double lo = kInf;
  double hi = -kInf;
  bool up = true;
  bool down = true;
  double prev = 0.0;
  for (std::size_t j = from; j < windows.size(); ++j) {
    const Window& w = windows[j];
    lo = std::min(lo, w.lower);
    hi = std::max(hi, w.upper);
    v.window_oscillation = std::max(v.window_oscillation, w.upper - w.lower);
    const double mid = 0.5 * (w.lower + w.upper);
    if (j > from) {
      up = up && mid >= prev;
      down = down && mid <= prev;
    }
    prev = mid;
  }
  v.spread = hi - lo;
  v.monotone = up || down;
  v.exists = std::isfinite(v.spread) &&
             (v.spread < tol || (v.monotone && v.window_oscillation < tol));
  return v;
}

GridSpec sequence_grid(double horizon, double tail_fraction) {
  if (horizon < 3.0) throw InputError("need at least three terms");
  return grid_between(1.0, horizon - 1.0, End::Infinity, tail_fraction);
}

}  // namespace

std::vector<SigmaCheckpoint> sigma_checkpoints(const EigenvalueModel& model, double d, const DimensionOptions& opts) {
  if (!(d > 0.0)) throw InputError("d must be positive");
  Source src{model, opts, std::nullopt};
  return src.checkpoints(d);
}

GrowthVerdict classify_growth(const EigenvalueModel& model, double d, const DimensionOptions& opts) {
  return classify(sigma_checkpoints(model, d, opts), d, opts);
}

HausdorffBracket hausdorff_dimension(const EigenvalueModel& model, const DimensionOptions& opts) {
  if (!(opts.search_lo > 0.0) || !(opts.search_hi > opts.search_lo)) throw InputError("invalid search interval");
  Source src{model, opts, std::nullopt};
  HausdorffBracket out;
  auto probe = [&](double d) {
    const GrowthVerdict v = classify(src.checkpoints(d), d, opts);
    out.probes.push_back(v);
    return v.verdict;
  };

  // sup{d : infinite}
  double a = opts.search_lo;
  double b = opts.search_hi;
  const GrowthClass at_lo = probe(a);
  const GrowthClass at_hi = probe(b);
  bool any_infinite = at_lo == GrowthClass::Infinite;
  bool any_zero = at_hi == GrowthClass::Zero;
  if (at_hi == GrowthClass::Infinite) {
    out.d_lo = b;
    out.warnings.push_back("classified infinite at the top of the search interval");
  } else if (at_lo != GrowthClass::Infinite) {
    out.d_lo = a;
  } else {
    for (int i = 0; i < opts.bisection_steps; ++i) {
      const double mid = 0.5 * (a + b);
      (probe(mid) == GrowthClass::Infinite ? a : b) = mid;
    }
    out.d_lo = a;
  }

  // inf{d : zero}
  a = opts.search_lo;
  b = opts.search_hi;
  if (at_lo == GrowthClass::Zero) {
    out.d_hi = a;
    out.warnings.push_back("classified zero at the bottom of the search interval");
  } else if (at_hi != GrowthClass::Zero) {
    out.d_hi = b;
  } else {
    for (int i = 0; i < opts.bisection_steps; ++i) {
      const double mid = 0.5 * (a + b);
      (probe(mid) == GrowthClass::Zero ? b : a) = mid;
    }
    out.d_hi = b;
  }

  if (!any_infinite && !any_zero) {
    for (const auto& p : out.probes) {
      any_infinite = any_infinite || p.verdict == GrowthClass::Infinite;
      any_zero = any_zero || p.verdict == GrowthClass::Zero;
    }
  }
  if (!any_infinite && !any_zero) {
    out.degenerate = true;
    out.d_lo = opts.search_lo;
    out.d_hi = opts.search_hi;
    out.warnings.push_back("classifier indeterminate at every probed d; bracket is the whole search interval");
  }
  if (out.d_lo > out.d_hi) {
    throw InvariantViolation("Hausdorff bracket is inverted: sup of non-membership exceeds inf of membership");
  }
  std::sort(out.probes.begin(), out.probes.end(), [](const auto& x, const auto& y) { return x.d < y.d; });
  for (std::size_t i = 1; i < out.probes.size(); ++i) {
    if (static_cast<int>(out.probes[i].verdict) > static_cast<int>(out.probes[i - 1].verdict) &&
        out.probes[i].d > out.probes[i - 1].d) {
      throw InvariantViolation("growth classifier is not monotone in d");
    }
  }
  return out;
}

BoxDimension box_dimension(const EigenvalueModel& model, const DimensionOptions& opts) {
  const RunSequence runs = model.runs(opts.n_max);
  const double horizon = total_count(runs);
  BoxDimension out;
  out.order = order_at_infinity(to_step_function(runs), sequence_grid(horizon, opts.tail_fraction));
  out.value = out.order.value > 0.0 ? 1.0 / out.order.value : kInf;
  return out;
}

DixmierTrajectory dixmier_trajectory(const EigenvalueModel& model, double d, const DimensionOptions& opts) {
  if (!(d > 0.0)) throw InputError("d must be positive");
  DixmierTrajectory out;
  out.d = d;
  std::vector<SigmaCheckpoint> cps;
  if (model.kind() == EigenvalueModel::Kind::Besicovitch) {
    // Evaluate at n_k = round(e^{a_k}), the first index (or the one before) of plateau k.
    double log_sigma_before = -kInf;
    for (const LadderStep& s : besicovitch_ladder(model.parameters()[0], opts.ladder_depth)) {
      double log_n = s.a;
      double log_sigma = log_sigma_before;
      if (s.a < 36.0) {
        const double n = std::round(std::exp(s.a));
        const double start = std::exp(s.log_start);
        log_n = std::log(n);
        if (n >= start) log_sigma = log_add(log_sigma, std::log(n - start + 1.0) - d * s.a);
      } else {
        log_sigma = log_add(log_sigma, -d * s.a);
      }
      if (log_n >= std::log(2.0)) cps.push_back({log_n, log_sigma});
      log_sigma_before = log_add(log_sigma_before, s.log_count - d * s.a);
    }
  } else {
    cps = element_checkpoints(prepare(model, opts.n_max), d);
  }
  for (const auto& c : cps) {
    const double log_ratio = c.log_sigma - std::log(c.log_n);
    if (log_ratio > 700.0) {
      out.truncated = true;
      break;
    }
    out.points.push_back({c.log_n, c.log_sigma, std::exp(log_ratio)});
  }
  return out;
}

DixmierTrajectory dixmier_trajectory(const EigenvalueModel& model, double d, const std::vector<double>& indices) {
  if (!(d > 0.0)) throw InputError("d must be positive");
  if (indices.empty()) return {d, {}, false};
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (!(indices[i] >= 2.0) || indices[i] != std::floor(indices[i])) throw InputError("indices must be integers >= 2");
    if (i > 0 && indices[i] <= indices[i - 1]) throw InputError("indices must be strictly increasing");
  }
  const RunSequence runs = model.runs(indices.back());
  DixmierTrajectory out;
  out.d = d;
  Accumulator sigma;
  double n = 0.0;
  std::size_t next = 0;
  for (const Run& r : runs) {
    const double term = std::pow(r.value, d);
    double left = r.count;
    while (next < indices.size() && n + left >= indices[next]) {
      const double take = indices[next] - n;
      sigma.add(term * take);
      left -= take;
      n = indices[next];
      const double log_sigma = std::log(sigma.value());
      out.points.push_back({std::log(n), log_sigma, sigma.value() / std::log(n)});
      ++next;
    }
    sigma.add(term * left);
    n += left;
  }
  out.truncated = next < indices.size();
  return out;
}

RegularityReport regularity_tests(const EigenvalueModel& model, const DimensionOptions& opts) {
  const RunSequence runs = model.runs(opts.n_max);
  const TermIndex mu(runs);
  const double horizon = mu.horizon();
  RegularityReport out;

  const OrderEstimate est = estimate_order(to_step_function(runs), End::Infinity,
                                           sequence_grid(horizon, opts.tail_fraction), Extremum::Lower);
  std::vector<Window> a_windows;
  for (const auto& w : est.windows) a_windows.push_back({w.lower, w.upper});
  out.regularity_a = verdict_from_windows(a_windows, opts.regularity_spread);

  // q_n = mu_{2n} / mu_n is constant between consecutive points where n or 2n
  // enters a new run, so window extremes are exact over those candidates.
  const double last_n = std::floor(horizon / 2.0);
  const int windows = static_cast<int>(std::floor(std::log2(last_n) + 1e-12));
  if (windows < 1) throw InputError("need at least four terms");
  std::vector<double> candidates;
  for (const double s : mu.starts()) {
    if (s <= last_n) candidates.push_back(s);
    const double half = std::ceil(s / 2.0);
    if (half <= last_n) candidates.push_back(half);
  }
  for (int j = 0; j <= windows; ++j) candidates.push_back(std::ldexp(1.0, j));
  candidates.push_back(last_n);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<Window> b_windows(static_cast<std::size_t>(windows));
  for (const double n : candidates) {
    if (n < 1.0 || n > last_n) continue;
    const double q = mu(2.0 * n) / mu(n);
    const int j = std::min(windows - 1, static_cast<int>(std::floor(std::log2(n) + 1e-12)));
    Window& w = b_windows[static_cast<std::size_t>(j)];
    w.lower = std::min(w.lower, q);
    w.upper = std::max(w.upper, q);
    // A window's right end is shared with the next one.
    if (j > 0 && n == std::ldexp(1.0, j)) {
      Window& prev = b_windows[static_cast<std::size_t>(j - 1)];
      prev.lower = std::min(prev.lower, q);
      prev.upper = std::max(prev.upper, q);
    }
  }
  out.regularity_b = verdict_from_windows(b_windows, opts.regularity_spread);
  out.ratio_2n_at = last_n;
  out.ratio_2n = mu(2.0 * last_n) / mu(last_n);
  return out;
}

DoublingEstimate partial_sum_doubling(const EigenvalueModel& model, double d, const DimensionOptions& opts) {
  if (!(d > 0.0)) throw InputError("d must be positive");
  const Prepared p = prepare(model, opts.n_max);
  const int top = static_cast<int>(std::floor(std::log2(p.horizon) + 1e-12));
  if (top < 4) throw InputError("need at least 16 terms for the doubling estimate");

  // blocks[0] = mu_1^d, blocks[j] = sum over 2^{j-1} < k <= 2^j.
  std::vector<Accumulator> blocks(static_cast<std::size_t>(top) + 1);
  Accumulator beyond;
  double n = 0.0;
  for (std::size_t i = 0; i < p.runs.size(); ++i) {
    const double term = std::exp(d * p.log_values[i]);
    double left = p.runs[i].count;
    while (left > 0.0) {
      const int j = n < 1.0 ? 0 : static_cast<int>(std::floor(std::log2(n) + 1e-12)) + 1;
      if (j > top) {
        beyond.add(term * left);
        break;
      }
      const double end = std::ldexp(1.0, j);
      const double take = std::min(left, end - n);
      blocks[static_cast<std::size_t>(j)].add(term * take);
      left -= take;
      n += take;
    }
  }
  std::vector<double> block(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) block[j] = blocks[j].value();
  std::vector<double> sigma(block.size());
  double run = 0.0;
  for (std::size_t j = 0; j < block.size(); ++j) sigma[j] = run += block[j];
  const double total = sigma.back() + beyond.value();

  DoublingEstimate out;
  out.d = d;
  const auto J = static_cast<std::size_t>(top);
  out.summable = (total - sigma[J - 2]) / total < 1e-3;
  out.at_n = std::ldexp(1.0, top - 1);
  out.estimate = block[J] / block[J - 1];
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t j = J - 3; j <= J; ++j) {
    const double r = block[j] / block[j - 1];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.spread = hi - lo;
  if (out.summable) {
    // Tails sum_{k > n} truncated at the horizon; biased low near it.
    const double tail_n = total - sigma[J - 2];
    const double tail_2n = total - sigma[J - 1];
    out.raw_ratio = tail_2n / tail_n;
    out.raw_truncated = true;
  } else {
    out.raw_ratio = sigma[J] / sigma[J - 1];
  }
  const RegularityReport reg = regularity_tests(model, opts);
  if (!reg.regularity_b.exists) out.warnings.push_back("mu_{2n}/mu_n has no detectable limit; the doubling limit need not exist");
  return out;
}

DimensionReport analyze_dimensions(const EigenvalueModel& model, const DimensionOptions& opts) {
  DimensionReport r;
  r.model = model.label();
  r.parameters = model.parameters();
  r.options = opts;
  r.horizon = total_count(model.runs(opts.n_max));
  r.box = box_dimension(model, opts);
  r.hausdorff = hausdorff_dimension(model, opts);
  r.regularity = regularity_tests(model, opts);
  r.closed_forms = model.closed_forms();
  // Deep checkpoints have log n ~ 1e6, so a bracket error of 1e-6 in d moves
  // sigma_n / log n by tens of percent. A known d_H is used when there is one.
  r.dixmier = dixmier_trajectory(model, r.closed_forms.hausdorff_dimension.value_or(r.hausdorff.midpoint()), opts);
  for (const auto& w : r.hausdorff.warnings) r.warnings.push_back(w);
  if (!r.box.order.converged) r.warnings.push_back("box dimension window ratios have not settled (last-quarter spread above tolerance)");

  const double d_b = r.box.value;
  if (r.regularity.regularity_a.exists && std::isfinite(d_b)) {
    const double tol = 0.5 * (r.hausdorff.d_hi - r.hausdorff.d_lo) + d_b * d_b * r.box.order.last_quarter_spread + 0.05;
    r.box_hausdorff_consistent = std::abs(d_b - r.hausdorff.midpoint()) <= tol;
  }
  if (r.regularity.regularity_b.exists && std::isfinite(d_b)) {
    const double expected = std::exp2(-1.0 / d_b);
    const double tol = 1e-3 + r.regularity.regularity_b.spread + std::log(2.0) * r.box.order.last_quarter_spread;
    r.ratio_consistent = std::abs(r.regularity.ratio_2n - expected) <= tol;
  }
  return r;
}

}  // namespace specdim
