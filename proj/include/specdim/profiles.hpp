#pragma once

#include <functional>
#include <string>

#include "specdim/step_function.hpp"

namespace specdim {

/// A non-increasing function on (0, inf) that can be integrated over cells,
/// either through an antiderivative or by quadrature.
class Profile {
 public:
  using Fn = std::function<double(double)>;

  /// t^-alpha.
  static Profile power(double alpha);
  /// t^-alpha (log(e + t + 1/t))^-beta: a power at both ends with a log correction.
  static Profile power_log(double alpha, double beta);
  /// f with antiderivative F on (lo, inf); `integral_to` gives int_0^t f when
  /// that is finite (empty function when it diverges).
  static Profile from_antiderivative(std::string name, Fn f, Fn antiderivative, Fn integral_to = {});

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] double operator()(double t) const { return f_(t); }
  /// int_a^b f for 0 < a < b < inf.
  [[nodiscard]] double integral(double a, double b) const;
  /// int_0^t f, or +inf when f is not integrable at 0.
  [[nodiscard]] double integral_to(double t) const;

 private:
  Profile(std::string name, Fn f, Fn antiderivative, Fn integral_to);

  std::string name_;
  Fn f_;
  Fn antiderivative_;
  Fn integral_to_;
};

/// Exact cell averages of f on geometric cells between lo and hi with
/// `per_octave` cells per factor 2. On (0, lo) the value is the average over
/// (0, lo) (or +inf if f is not integrable at 0); beyond hi it is 0.
/// Throws InputError if the averages are not non-increasing.
StepFunction cell_averages(const Profile& f, double lo, double hi, int per_octave = 16);

}  // namespace specdim
