#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specdim/orders.hpp"
#include "specdim/step_function.hpp"

namespace specdim {

/// theta(t) - b sampled at increasing times t >= 1.
struct HeatTrace {
  std::vector<double> times;
  std::vector<double> values;
  double betti = 0.0;

  /// Checks sizes, increasing times >= 1 and positive finite values.
  void validate() const;
  [[nodiscard]] bool non_increasing() const;
  /// Samples with t >= t0.
  [[nodiscard]] HeatTrace restricted(double t0) const;
};

/// Largest supported walk length: the convolution buffer spans [-t, t].
inline constexpr int kMaxWalkSteps = 1 << 15;

/// p_t(0, 0) of the lazy product walk on Z^d (each coordinate independently
/// holds with probability `laziness`, else moves by +-1) at t = round(2^{j/8})
/// up to t_max. Exact convolution of the 1-D walk; the d-D value is its d-th power.
/// Throws ResourceError beyond kMaxWalkSteps and InvariantViolation if the
/// 1-D mass drifts from 1 by more than 1e-10.
HeatTrace lattice_return_probability(int dimension, int t_max, double laziness = 0.5);

/// One-dimensional p_t(0, 0) for every t = 0..t_max.
std::vector<double> walk_return_1d(int t_max, double laziness = 0.5);

struct AsdimOptions {
  double tail_fraction = 0.5;
  RatioReference reference = RatioReference::TailAnchor;
  int min_windows = 8;
};

/// liminf_{t -> inf} 2 log theta(t) / log(1/t) through the orders windowing.
/// `order.value` is half of `value`.
struct AsdimEstimate {
  double value = 0.0;
  OrderEstimate order;
};

AsdimEstimate asdim(const HeatTrace& trace, const AsdimOptions& opts = {});

struct SupFormEstimate {
  double value = 0.0;
  /// C in theta(t) <= C t^{-n/2} at the returned n.
  double constant = 0.0;
  double anchor_t = 0.0;
  int iterations = 0;
};

/// sup n such that theta(t) <= C t^{-n/2} for every sample at or after the
/// anchor, with C = theta(t_a) t_a^{n/2} fixed at the anchor t_a (the grid
/// point before the tail). Bisection on n in [0, 64].
SupFormEstimate asdim_sup_form(const HeatTrace& trace, const AsdimOptions& opts = {});

/// Right-continuous N(s) = #{eigenvalues <= s} given by its jumps; b = N(0).
class SpectralCounting {
 public:
  /// Eigenvalues with |x| <= zero_tol count toward b; zero_tol < 0 selects
  /// 1e-10 * max |x|.
  static SpectralCounting from_eigenvalues(std::vector<double> eigenvalues, double zero_tol = -1.0);
  /// N sampled at increasing s (s = 0 gives b; otherwise b = 0), non-decreasing.
  /// The result is marked as a window onto a continuous N.
  static SpectralCounting from_samples(std::span<const double> s, std::span<const double> n);

  [[nodiscard]] double operator()(double s) const;
  [[nodiscard]] double betti() const noexcept { return betti_; }
  [[nodiscard]] const std::vector<double>& jump_points() const noexcept { return points_; }
  [[nodiscard]] const std::vector<double>& jump_sizes() const noexcept { return sizes_; }
  [[nodiscard]] double total() const;
  [[nodiscard]] bool sampled() const noexcept { return sampled_; }

  /// 1 / (N(s) - b) as a non-increasing step function (+inf below the first jump).
  [[nodiscard]] StepFunction inverse_excess() const;
  /// lambda(t) = #{eigenvalues x > 0 : 1/x > t} = N(1/t^-) - b, the
  /// distribution function of the inverse operator on the complement of the kernel.
  [[nodiscard]] StepFunction inverse_distribution() const;

 private:
  SpectralCounting(std::vector<double> points, std::vector<double> sizes, double betti, bool sampled);

  std::vector<double> points_;
  std::vector<double> sizes_;
  double betti_ = 0.0;
  bool sampled_ = false;
};

struct DualityCheck {
  double lhs = 0.0;  ///< #{x > 0 : 1/x > t}
  double rhs = 0.0;  ///< N(1/t) - b
  /// t sits on a jump (1/t within 1e-12 relative of an eigenvalue): no equality asserted.
  bool boundary = false;
};

/// Both counts of the duality at t; throws InvariantViolation if they differ at generic t.
DualityCheck counting_duality(std::span<const double> eigenvalues, double t);

/// Midpoints between consecutive distinct reciprocals of the positive
/// eigenvalues, plus one point on either side.
std::vector<double> generic_times(std::span<const double> eigenvalues);

/// theta(t) = sum of jumps e^{-s t}, including b.
double laplace_stieltjes(const SpectralCounting& n, double t);

/// theta - b at the given times.
HeatTrace heat_trace(const SpectralCounting& n, std::span<const double> times);

struct NovikovShubin {
  /// 2 liminf_{t -> inf} -log(theta - b) / log t.
  std::optional<double> alpha_lower;
  /// 2 limsup_{t -> 0} log(N(t) - b) / log t.
  std::optional<double> alpha;
  /// 2 limsup_{t -> inf} -log(theta - b) / log t.
  std::optional<double> alpha_prime;
  std::vector<std::string> notes;
};

NovikovShubin ns_numbers(const HeatTrace& trace, const AsdimOptions& opts = {});

/// alpha from N near 0; alpha_lower and alpha_prime from the Laplace transform
/// at t = 2^{j/8} for 1 <= t <= 1 / (16 * smallest positive jump), where the
/// missing spectrum below the data is still negligible. A finite eigenvalue
/// list has a spectral gap: alpha, alpha_lower and alpha_prime are +inf.
NovikovShubin ns_numbers(const SpectralCounting& n, const AsdimOptions& opts = {});

}  // namespace specdim
