#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "specdim/orders.hpp"
#include "specdim/step_function.hpp"

namespace specdim {

enum class Integrability { Summable, NonSummable };

struct EccentricityOptions {
  double tol = 0.05;
  /// Right end c of the reference interval (0, c); the definitions use c = 1.
  double reference = 1.0;
  /// Skips the heuristic in classify_integrability when set.
  std::optional<Integrability> integrability;
  /// Points of the default grid.
  int points = 40;
  /// Relative increment of the partial integral over the last two dyadic
  /// windows below which the integral counts as convergent.
  double cauchy_increment = 1e-3;
  /// Dyadic windows of data required by the heuristic.
  int min_windows = 8;
};

/// Whether mu is integrable near `end`. A positive tail at infinity is never
/// integrable and a finite head at 0 always is; otherwise the partial integral
/// toward the data horizon must stabilize.
/// Throws IndeterminateError when fewer than `min_windows` dyadic windows of
/// data separate the reference point from the horizon and no override is set.
Integrability classify_integrability(const StepFunction& mu, End end, const EccentricityOptions& opts = {});

/// int_0^t mu (summable) or int_t^c mu (non-summable), for 0 < t <= c.
/// A divergent integral in the summable branch is a ContradictionError.
double s_zero(const StepFunction& mu, double t, Integrability branch, double reference = 1.0);

/// int_c^t mu (non-summable) or int_t^inf mu (summable), for t >= c.
double s_infinity(const StepFunction& mu, double t, Integrability branch, double reference = 1.0);

struct DoublingPoint {
  int j = 0;  ///< grid index, increasing toward the end
  double t = 0.0;
  double s = 0.0;
  double s_double = 0.0;  ///< S(2t)
  double ratio = 0.0;
  bool witness = false;
};

struct DoublingProfile {
  End end = End::Infinity;
  bool integrable = false;
  double reference = 1.0;
  double tol = 0.05;
  GridSpec grid;
  std::vector<DoublingPoint> points;
  /// Grid points dropped because S(t) = 0.
  std::vector<double> skipped;
  /// Grid indices j >= this form the final quarter.
  int final_quarter_begin = 0;
  std::size_t witnesses = 0;
  std::size_t final_quarter_witnesses = 0;
  bool cluster_at_one = false;

  /// True when S decreases in t, so that every ratio lies in (0, 1].
  [[nodiscard]] bool decreasing_branch() const noexcept {
    return (end == End::Infinity) == integrable;
  }
};

/// `points` dyadic points ending at the data horizon: the last point t has
/// 2t at the last breakpoint (infinity) or equals the first breakpoint (0).
/// Points never cross the reference point c.
GridSpec default_doubling_grid(const StepFunction& mu, End end, const EccentricityOptions& opts = {});

/// Ratios S(2t_j) / S(t_j) on grid points t_0 .. t_count. Witnesses satisfy
/// |ratio - 1| <= tol; cluster_at_one is set iff a witness lies in the final
/// quarter of the grid. Verifies branch monotonicity (InvariantViolation) and
/// aborts with ContradictionError when the summable branch grows past 10^6
/// times its first value.
DoublingProfile doubling_profile(const StepFunction& mu, End end, const GridSpec& grid,
                                 const EccentricityOptions& opts = {});

struct EccentricVerdict {
  bool eccentric = false;
  DoublingProfile profile;
};

/// doubling_profile on the default grid.
EccentricVerdict eccentric_verdict(const StepFunction& mu, End end, const EccentricityOptions& opts = {});

}  // namespace specdim
