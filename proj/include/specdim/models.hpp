#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specdim/step_function.hpp"

namespace specdim {

/// `count` consecutive terms of an eigenvalue sequence sharing `value`.
/// Counts are doubles so plateaus far beyond 2^64 terms stay representable;
/// they are exact integers below 2^53.
struct Run {
  double value = 0.0;
  double count = 0.0;
};

using RunSequence = std::vector<Run>;

/// One plateau of the Besicovitch sequence in log coordinates: mu_n = e^{-a}
/// for n in [e^{log_start}, e^{log_start} + e^{log_count}).
struct LadderStep {
  int k = 0;
  double a = 0.0;
  double log_start = 0.0;
  double log_count = 0.0;
};

/// a_1 = 0 and a_k = lambda^k - k log(lambda) / (lambda - 1) for k >= 2, made
/// non-decreasing by a running maximum (only matters for lambda close to 1).
double besicovitch_exponent(double lambda, int k);

/// Plateaus k = 1..depth; empty plateaus are dropped.
std::vector<LadderStep> besicovitch_ladder(double lambda, int depth);

/// Known limits of the dimension functionals for a model.
struct ClosedForms {
  std::optional<double> box_dimension;
  std::optional<double> hausdorff_dimension;
  /// Limit of sigma_n(d_H) / log n along the model's evaluating subsequence.
  std::optional<double> dixmier;
};

class EigenvalueModel {
 public:
  enum class Kind { PowerLaw, PowerLog, Besicovitch, TorusLaplacian, External };

  /// mu_n = n^-alpha.
  static EigenvalueModel power_law(double alpha);
  /// mu_n = n^-alpha (log(n + 1))^-beta.
  static EigenvalueModel power_log(double alpha, double beta);
  static EigenvalueModel besicovitch(double lambda);
  /// Inverse nonzero Laplacian eigenvalues (4 pi^2 |k|^2)^-1 on the flat torus
  /// R^d / Z^d for lattice points 0 < |k| <= cutoff.
  static EigenvalueModel torus(int dimension, int cutoff);
  static EigenvalueModel external(RunSequence runs, std::string label);

  /// "powerlaw:A", "powerlog:A,B", "besicovitch:L", "torus:D,R".
  static EigenvalueModel parse(std::string_view spec);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] const std::vector<double>& parameters() const noexcept { return params_; }

  /// Total number of terms for finite models.
  [[nodiscard]] std::optional<double> length() const;

  /// mu_n for the analytic families (PowerLaw, PowerLog, Besicovitch).
  [[nodiscard]] double mu(double n) const;

  /// Run-length encoding of mu_1..mu_N, N = min(n_max, length). Analytic
  /// families are exact term by term up to kExactTerms; beyond that they are
  /// grouped on geometric cells whose value is the last term of the cell.
  /// Generation stops once terms underflow.
  [[nodiscard]] RunSequence runs(double n_max) const;

  /// Streams the same runs without materializing them.
  void stream(double n_max, const std::function<void(const Run&)>& sink) const;

  [[nodiscard]] ClosedForms closed_forms() const;

  static constexpr double kExactTerms = 2097152.0;  // 2^21
  static constexpr int kCellsPerOctave = 64;

 private:
  EigenvalueModel(Kind kind, std::vector<double> params, std::string label);

  Kind kind_;
  std::vector<double> params_;
  std::string label_;
  RunSequence stored_;
};

/// Lattice points of Z^d \ {0} with |k|^2 <= cutoff^2, grouped by |k|^2
/// ascending: (squared norm, multiplicity).
std::vector<std::pair<std::uint64_t, std::uint64_t>> lattice_shells(int dimension, int cutoff);

/// mu(t) = mu_n on [n - 1, n), zero after the last term.
StepFunction to_step_function(const RunSequence& runs);

/// Sum of counts.
double total_count(const RunSequence& runs);

}  // namespace specdim
