#pragma once

// Order-one test families shared by the unit tests and the acceptance suite.

#include <cmath>
#include <numbers>

#include "specdim/profiles.hpp"
#include "specdim/step_function.hpp"

namespace specdim::families {

inline const double kE = std::numbers::e;

// The four order-one families, as exact cell averages.
inline StepFunction inverse_at_zero() {
  const auto p = Profile::from_antiderivative("1/t", [](double t) { return 1.0 / t; },
                                              [](double t) { return std::log(t); });
  return cell_averages(p, std::exp2(-100.0), 2.0);
}

inline StepFunction log_summable_at_zero() {
  const auto F = [](double t) { return 1.0 / std::log(kE / t); };
  const auto p = Profile::from_antiderivative(
      "1/(t log^2(e/t))", [](double t) { return 1.0 / (t * std::pow(std::log(kE / t), 2)); }, F, F);
  // The curve decreases only below 1/e.
  return cell_averages(p, std::exp2(-100.0), 0.25);
}

inline StepFunction inverse_at_infinity() {
  const auto p = Profile::from_antiderivative("1/t", [](double t) { return 1.0 / t; },
                                              [](double t) { return std::log(t); });
  return cell_averages(p, 0.5, std::exp2(60.0));
}

// 1/(t log^2 t) above 2, capped at its value at 2 below.
inline StepFunction log_summable_at_infinity(double horizon_log2 = 400.0) {
  const double cap = 1.0 / (2.0 * std::pow(std::numbers::ln2, 2));
  const auto f = [cap](double t) { return t < 2.0 ? cap : 1.0 / (t * std::pow(std::log(t), 2)); };
  const auto F = [cap](double t) {
    return t < 2.0 ? cap * t : 2.0 * cap + 1.0 / std::numbers::ln2 - 1.0 / std::log(t);
  };
  const auto p = Profile::from_antiderivative("1/(t log^2 t)", f, F, [cap](double t) { return cap * t; });
  return cell_averages(p, 2.0, std::exp2(horizon_log2));
}

}  // namespace specdim::families
