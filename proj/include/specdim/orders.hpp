#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specdim/step_function.hpp"

namespace specdim {

/// Which end of (0, inf) a limit is taken at.
enum class End { Zero, Infinity };

/// liminf (running minimum) or limsup (running maximum).
enum class Extremum { Lower, Upper };

/// How the log ratio at a sample (t, v) is normalized.
///
/// Origin:     log v / log(1/t), the raw ratio of the definition.
/// TailAnchor: log(v / v_a) / log(t_a / t) with (t_a, v_a) the graph point at
///             the grid point just before the tail. Same limit, but a constant
///             prefactor C in v ~ C t^-p no longer contributes log C / log t.
enum class RatioReference { Origin, TailAnchor };

/// Dyadic grid t_j = t0 * 2^j (Infinity) or t0 * 2^-j (Zero), j = 0..count.
/// Window j is the closed interval between t_j and t_{j+1}; the tail is the
/// last ceil(tail_fraction * count) windows.
struct GridSpec {
  double t0 = 1.0;
  int count = 48;
  double tail_fraction = 0.5;
  RatioReference reference = RatioReference::Origin;

  [[nodiscard]] double point(End end, int j) const;
  [[nodiscard]] std::size_t tail_begin() const;
};

/// Grid whose last point is exactly `limit_side` and whose first point is
/// no further from the limit than `start`.
GridSpec grid_between(double start, double limit_side, End end, double tail_fraction = 0.5,
                      RatioReference reference = RatioReference::Origin);

struct GraphPoint {
  double t = 0.0;
  double v = 0.0;
};

/// Extremes of the log ratio over the closed window [t_begin, t_end] (ordered
/// by distance from the limit end, so t_begin is the grid point further from it).
struct WindowRatio {
  double t_begin = 0.0;
  double t_end = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t samples = 0;
};

struct OrderEstimate {
  double value = 0.0;
  End end = End::Infinity;
  Extremum extremum = Extremum::Lower;
  std::vector<WindowRatio> windows;
  std::size_t tail_begin = 0;
  double tail_fraction = 0.5;
  /// Spread of the per-window extremum over the tail / the last quarter.
  double tail_spread = 0.0;
  double last_quarter_spread = 0.0;
  bool converged = false;
  RatioReference reference = RatioReference::Origin;
  std::optional<GraphPoint> anchor;
  /// True when `value` is the reciprocal of the windowed extremum.
  bool reciprocal = false;
  std::string note;

  /// The per-window extremum used for the running extremum (lower or upper).
  [[nodiscard]] double window_value(std::size_t j) const;
};

/// Largest spread of the last-quarter window extremum still reported as converged.
inline constexpr double kConvergenceSpread = 0.02;

/// Windowed running extremum of the log ratio over graph samples sorted by t.
/// Samples are taken as exact values of the curve; nothing is interpolated.
OrderEstimate estimate_order(std::span<const GraphPoint> samples, End end, const GridSpec& grid,
                             Extremum extremum);

/// Same, over the closure of the graph of a step function: for every window
/// the extremes are exact because the ratio is monotone along each plateau.
OrderEstimate estimate_order(const StepFunction& f, End end, const GridSpec& grid, Extremum extremum);

/// liminf_{t -> inf} log mu(t) / log(1/t).
OrderEstimate order_at_infinity(const StepFunction& mu, const GridSpec& grid = {});

/// liminf_{t -> 0} log mu(t) / log(1/t).
OrderEstimate order_at_zero(const StepFunction& mu, const GridSpec& grid = {});

/// Order of the operator whose distribution function is `lambda`, computed as
/// the reciprocal of a windowed limsup of log lambda(s) / log(1/s):
/// ord_inf from s -> 0, ord_0 from s -> inf.
OrderEstimate order_via_distribution(const StepFunction& lambda, End end, const GridSpec& grid = {});

/// Pointwise mu^alpha on the same breakpoints.
StepFunction power_scale(const StepFunction& mu, double alpha);

}  // namespace specdim
