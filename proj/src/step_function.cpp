#include "specdim/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Graph reflection (x, y) -> (y, x). On a canonical non-increasing
// right-continuous step function this is the generalized inverse, so it maps
// mu_a to lambda_a and back.
StepFunction reflect(const StepFunction& f) {
  const auto& t = f.breakpoints();
  const auto& v = f.values();
  const std::size_t m = t.size();
  auto knot = [&](std::size_t i) { return i == 0 ? 0.0 : t[i - 1]; };

  std::vector<double> out_t;
  std::vector<double> out_v;
  out_t.reserve(m + 1);
  out_v.reserve(m + 2);

  if (v[m] > 0.0) {
    // f >= v_m > 0 on a set of infinite measure.
    out_v.push_back(kInf);
    out_t.push_back(v[m]);
  }
  out_v.push_back(knot(m));
  for (std::size_t k = m; k-- > 0;) {
    if (std::isinf(v[k])) break;
    out_t.push_back(v[k]);
    out_v.push_back(knot(k));
  }
  if (std::isinf(out_v.back())) {
    throw OverflowError("level sets have infinite measure at every level");
  }
  return {std::move(out_t), std::move(out_v)};
}

}  // namespace

StepFunction::StepFunction() : values_{0.0} {}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values,
                           std::optional<double> support_end)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw InputError("step function needs exactly one more value than breakpoints (got " +
                     std::to_string(values_.size()) + " values, " +
                     std::to_string(breakpoints_.size()) + " breakpoints)");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    if (!std::isfinite(b) || b <= 0.0) throw InputError("breakpoints must be finite and positive");
    if (i > 0 && b <= breakpoints_[i - 1]) throw InputError("breakpoints must be strictly increasing");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = values_[i];
    if (std::isnan(x) || x < 0.0) throw InputError("values must be nonnegative");
    if (i > 0 && x > values_[i - 1]) throw InputError("values must be non-increasing");
  }
  if (support_end) {
    const double end = *support_end;
    if (!std::isfinite(end) || end <= 0.0 || (!breakpoints_.empty() && end <= breakpoints_.back())) {
      throw InputError("support_end must be finite and beyond the last breakpoint");
    }
    breakpoints_.push_back(end);
    values_.push_back(0.0);
  }
  canonicalize();
  if (std::isinf(values_.back())) throw InputError("the tail value must be finite");
}

StepFunction StepFunction::constant(double c) { return {{}, {c}}; }

void StepFunction::canonicalize() {
  std::vector<double> t;
  std::vector<double> v{values_.front()};
  t.reserve(breakpoints_.size());
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (values_[i + 1] == v.back()) continue;
    t.push_back(breakpoints_[i]);
    v.push_back(values_[i + 1]);
  }
  breakpoints_ = std::move(t);
  values_ = std::move(v);
}

std::optional<double> StepFunction::support_end() const {
  if (breakpoints_.empty() || values_.back() != 0.0) return std::nullopt;
  return breakpoints_.back();
}

std::size_t StepFunction::plateau_index(double t) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                                  breakpoints_.begin());
}

double StepFunction::operator()(double t) const {
  if (!(t > 0.0)) throw InputError("step functions are evaluated on (0, inf)");
  return values_[plateau_index(t)];
}

double StepFunction::left_limit(double t) const {
  if (!(t > 0.0)) throw InputError("step functions are evaluated on (0, inf)");
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

StepFunction rearrange(std::span<const MassPoint> sample) {
  if (sample.empty()) throw InputError("cannot rearrange an empty sample");
  std::vector<MassPoint> sorted(sample.begin(), sample.end());
  for (const auto& p : sorted) {
    if (!std::isfinite(p.value) || p.value < 0.0) throw InputError("sample values must be finite and nonnegative");
    if (!std::isfinite(p.mass) || p.mass <= 0.0) throw InputError("sample masses must be finite and positive");
  }
  std::stable_sort(sorted.begin(), sorted.end(),
            [](const MassPoint& a, const MassPoint& b) { return a.value > b.value; });

  std::vector<double> t;
  std::vector<double> v;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double value = sorted[i].value;
    double mass = 0.0;
    for (; i < sorted.size() && sorted[i].value == value; ++i) mass += sorted[i].mass;
    cumulative += mass;
    v.push_back(value);
    t.push_back(cumulative);
  }
  v.push_back(0.0);
  if (!std::isfinite(cumulative)) throw OverflowError("total mass is not finite");
  return {std::move(t), std::move(v)};
}

StepFunction distribution(const StepFunction& f) { return reflect(f); }

StepFunction rearrange(const StepFunction& lambda) { return reflect(lambda); }

StepFunction round_trip(const StepFunction& f) { return rearrange(distribution(f)); }

double integrate(const StepFunction& f, double a, double b) {
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || !(a < b)) {
    throw InputError("integration needs 0 <= a < b <= inf");
  }
  const auto& t = f.breakpoints();
  const auto& v = f.values();
  const std::size_t m = t.size();

  double sum = 0.0;
  double compensation = 0.0;
  std::size_t i = a > 0.0 ? f.plateau_index(a) : 0;
  for (; i <= m; ++i) {
    const double left = i == 0 ? 0.0 : t[i - 1];
    const double right = i == m ? kInf : t[i];
    if (left >= b) break;
    const double length = std::min(b, right) - std::max(a, left);
    if (!(length > 0.0) || v[i] == 0.0) continue;
    if (std::isinf(v[i]) || std::isinf(length)) return kInf;
    // Neumaier summation keeps long plateau lists exact to a few ulps.
    const double term = v[i] * length;
    const double next = sum + term;
    compensation += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return sum + compensation;
}

StepFunction scale(const StepFunction& f, double c) {
  if (std::isnan(c) || c < 0.0 || std::isinf(c)) throw InputError("scale factor must be finite and nonnegative");
  std::vector<double> v = f.values();
  for (auto& x : v) x = (std::isinf(x) && c > 0.0) ? x : x * c;
  if (c == 0.0) return {};
  return {f.breakpoints(), std::move(v)};
}

}  // namespace specdim
