#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdim/models.hpp"
#include "specdim/orders.hpp"

namespace specdim {

struct DimensionOptions {
  /// Term horizon for element-wise functionals (box dimension, regularity,
  /// partial sums).
  double n_max = 1e6;
  /// Plateaus of the Besicovitch ladder used by the partial-sum functionals.
  int ladder_depth = 24;
  double search_lo = 0.05;
  double search_hi = 20.0;
  int bisection_steps = 24;
  /// Growth classifier thresholds on kappa (see classify_growth).
  double kappa_zero = -0.25;
  double kappa_infinite = 0.25;
  double regularity_spread = 0.02;
  double tail_fraction = 0.5;
};

enum class GrowthClass { Zero, Finite, Infinite };

/// sigma_n(d) = sum_{k <= n} mu_k^d at one checkpoint, in logs so that
/// plateaus of length e^{10^6} stay representable.
struct SigmaCheckpoint {
  double log_n = 0.0;
  double log_sigma = 0.0;
};

/// Checkpoints n = 2^j (and the horizon) for sequence models; plateau ends of
/// the ladder for Besicovitch models. Only n >= 3 is kept so log log n > 0.
std::vector<SigmaCheckpoint> sigma_checkpoints(const EigenvalueModel& model, double d,
                                               const DimensionOptions& opts = {});

struct GrowthVerdict {
  double d = 0.0;
  GrowthClass verdict = GrowthClass::Finite;
  /// Growth exponent of sigma_n(d) / log n against log n over the last quarter
  /// of checkpoints: kappa = dlog sigma / dlog log n - 1. It is -1 for
  /// convergent sums, 0 for sigma ~ log n, and large for power growth.
  double kappa = 0.0;
  /// sigma_n(d) / log n at the last checkpoint.
  double final_ratio = 0.0;
};

/// Three-way limsup classifier of sigma_n(d) / log n. Non-increasing in d.
GrowthVerdict classify_growth(const EigenvalueModel& model, double d, const DimensionOptions& opts = {});

struct HausdorffBracket {
  /// Largest probed d classified Infinite (|D|^-d not in L^{1,inf}).
  double d_lo = 0.0;
  /// Smallest probed d classified Zero (|D|^-d in L^{1,inf}_0).
  double d_hi = 0.0;
  bool degenerate = false;
  std::vector<GrowthVerdict> probes;
  std::vector<std::string> warnings;

  [[nodiscard]] double midpoint() const { return 0.5 * (d_lo + d_hi); }
};

HausdorffBracket hausdorff_dimension(const EigenvalueModel& model, const DimensionOptions& opts = {});

struct BoxDimension {
  double value = 0.0;
  OrderEstimate order;
};

/// 1 / ord_inf of the term sequence viewed as mu(t) = mu_n on [n - 1, n).
BoxDimension box_dimension(const EigenvalueModel& model, const DimensionOptions& opts = {});

struct TrajectoryPoint {
  double log_n = 0.0;
  double log_sigma = 0.0;
  double ratio = 0.0;  ///< sigma_n(d) / log n
};

struct DixmierTrajectory {
  double d = 0.0;
  std::vector<TrajectoryPoint> points;
  /// Set when sigma_n / log n stops being representable.
  bool truncated = false;
};

/// sigma_n(d) / log n along n_k = round(e^{a_k}) for Besicovitch models, along
/// n = 2^j up to the horizon otherwise.
DixmierTrajectory dixmier_trajectory(const EigenvalueModel& model, double d, const DimensionOptions& opts = {});

/// Same, along an explicit list of increasing indices n >= 2.
DixmierTrajectory dixmier_trajectory(const EigenvalueModel& model, double d, const std::vector<double>& indices);

/// Existence verdict for the limit of a windowed quantity.
struct LimitVerdict {
  bool exists = false;
  /// max - min over the last quarter of dyadic windows.
  double spread = 0.0;
  /// Largest oscillation inside one window of the last quarter.
  double window_oscillation = 0.0;
  /// Window extremes move in one direction only over the last quarter.
  bool monotone = false;
};

struct RegularityReport {
  /// lim log mu_n / log(1/n).
  LimitVerdict regularity_a;
  /// lim mu_{2n} / mu_n.
  LimitVerdict regularity_b;
  double ratio_2n = 0.0;
  double ratio_2n_at = 0.0;
};

RegularityReport regularity_tests(const EigenvalueModel& model, const DimensionOptions& opts = {});

struct DoublingEstimate {
  double d = 0.0;
  bool summable = false;
  /// B(n) / B(n/2) with B(n) = sum_{n < k <= 2n} mu_k^d at the largest n with
  /// 2n inside the horizon. Equals the limit of s_{2n} / s_n in both branches.
  double estimate = 0.0;
  /// Spread of the block ratio over the last four dyadic n.
  double spread = 0.0;
  /// s_{2n} / s_n with s_n the partial sum (or the horizon-truncated tail sum
  /// in the summable branch) at the same n.
  double raw_ratio = 0.0;
  bool raw_truncated = false;
  double at_n = 0.0;
  std::vector<std::string> warnings;
};

DoublingEstimate partial_sum_doubling(const EigenvalueModel& model, double d, const DimensionOptions& opts = {});

struct DimensionReport {
  std::string model;
  std::vector<double> parameters;
  DimensionOptions options;
  double horizon = 0.0;  ///< number of terms actually used
  BoxDimension box;
  HausdorffBracket hausdorff;
  RegularityReport regularity;
  DixmierTrajectory dixmier;
  ClosedForms closed_forms;
  /// |d_B - d_H midpoint| within the combined tolerance (checked when regularity_a holds).
  std::optional<bool> box_hausdorff_consistent;
  /// |ratio_2n - 2^{-1/d_B}| <= 10^-2 (checked when regularity_b holds).
  std::optional<bool> ratio_consistent;
  std::vector<std::string> warnings;
};

DimensionReport analyze_dimensions(const EigenvalueModel& model, const DimensionOptions& opts = {});

}  // namespace specdim
