#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace specdim {

/// Non-increasing, right-continuous step function on (0, inf).
///
/// With breakpoints t_1 < ... < t_m and values v_0 >= v_1 >= ... >= v_m >= 0 the
/// function is v_0 on (0, t_1), v_i on [t_i, t_{i+1}) and v_m on [t_m, inf).
/// v_0 may be +inf (unbounded near 0); v_m is always finite. Consecutive equal
/// values are merged on construction, so two equal functions compare equal
/// element-wise.
class StepFunction {
 public:
  /// The zero function.
  StepFunction();

  /// Throws InputError unless the data describe a valid non-increasing step
  /// function. A support_end T appends a drop to 0 at T (T must exceed t_m).
  StepFunction(std::vector<double> breakpoints, std::vector<double> values,
               std::optional<double> support_end = std::nullopt);

  static StepFunction constant(double c);

  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return breakpoints_.size(); }

  /// v_0, the value on (0, t_1).
  [[nodiscard]] double head() const noexcept { return values_.front(); }
  /// v_m, the value on [t_m, inf).
  [[nodiscard]] double tail() const noexcept { return values_.back(); }

  /// T such that f = 0 on [T, inf) and f > 0 just before T, if the tail is 0.
  [[nodiscard]] std::optional<double> support_end() const;

  /// f(t) for t > 0 (right-continuous).
  [[nodiscard]] double operator()(double t) const;
  /// lim_{s -> t^-} f(s) for t > 0.
  [[nodiscard]] double left_limit(double t) const;

  /// Index i of the plateau containing t, i.e. the i with value v_i at t.
  [[nodiscard]] std::size_t plateau_index(double t) const;

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  void canonicalize();

  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// One atom of a finite measure sample: `mass` units of measure carrying `value`.
struct MassPoint {
  double value = 0.0;
  double mass = 0.0;
};

using MassSample = std::vector<MassPoint>;

/// Non-increasing rearrangement of a finite mass sample: values sorted
/// descending, plateau lengths equal to the masses, 0 after the total mass.
/// Tied values are merged into one plateau.
StepFunction rearrange(std::span<const MassPoint> sample);

/// lambda(s) = |{t : f(t) > s}|. Throws OverflowError when f is +inf everywhere.
StepFunction distribution(const StepFunction& f);

/// Generalized inverse mu(t) = inf{s >= 0 : lambda(s) <= t} of a distribution function.
StepFunction rearrange(const StepFunction& lambda);

/// rearrange(distribution(f)); equals f exactly.
StepFunction round_trip(const StepFunction& f);

/// Integral of f over [a, b], 0 <= a < b <= inf. Returns +inf when divergent.
double integrate(const StepFunction& f, double a, double b);

/// c * f for c >= 0.
StepFunction scale(const StepFunction& f, double c);

}  // namespace specdim
