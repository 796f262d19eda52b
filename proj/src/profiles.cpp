#include "specdim/profiles.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kNodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                       0.9061798459386640};
constexpr std::array<double, 5> kWeights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                         0.2369268850561891, 0.2369268850561891};

// int_a^b f(t) dt = int_{log a}^{log b} f(e^u) e^u du, split into slices so
// that each one spans at most a factor 2^{1/16}.
double log_quadrature(const Profile::Fn& f, double a, double b) {
  const double ua = std::log(a);
  const double ub = std::log(b);
  const int slices = std::max(1, static_cast<int>(std::ceil((ub - ua) / (std::numbers::ln2 / 16.0))));
  const double h = (ub - ua) / slices;
  double sum = 0.0;
  for (int s = 0; s < slices; ++s) {
    const double mid = ua + (s + 0.5) * h;
    double part = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      const double u = mid + 0.5 * h * kNodes[i];
      const double t = std::exp(u);
      part += kWeights[i] * f(t) * t;
    }
    sum += 0.5 * h * part;
  }
  return sum;
}

}  // namespace

Profile::Profile(std::string name, Fn f, Fn antiderivative, Fn integral_to)
    : name_(std::move(name)), f_(std::move(f)), antiderivative_(std::move(antiderivative)),
      integral_to_(std::move(integral_to)) {}

Profile Profile::power(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("power profile needs alpha > 0");
  Fn f = [alpha](double t) { return std::pow(t, -alpha); };
  Fn F = alpha == 1.0 ? Fn([](double t) { return std::log(t); })
                      : Fn([alpha](double t) { return std::pow(t, 1.0 - alpha) / (1.0 - alpha); });
  Fn to = alpha < 1.0 ? Fn([alpha](double t) { return std::pow(t, 1.0 - alpha) / (1.0 - alpha); }) : Fn{};
  return {"power", std::move(f), std::move(F), std::move(to)};
}

Profile Profile::power_log(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta >= 0.0) || !std::isfinite(beta)) {
    throw InputError("power-log profile needs alpha > 0 and beta >= 0");
  }
  Fn f = [alpha, beta](double t) {
    return std::pow(t, -alpha) * std::pow(std::log(std::numbers::e + t + 1.0 / t), -beta);
  };
  Fn to;
  if (alpha < 1.0) {
    // Dyadic cells toward 0 shrink geometrically like 2^{-(1 - alpha) j}.
    to = [f, alpha](double t) {
      double sum = 0.0;
      double hi = t;
      for (int j = 0; j < 4000; ++j) {
        const double part = log_quadrature(f, 0.5 * hi, hi);
        sum += part;
        hi *= 0.5;
        if (part < 1e-17 * sum || hi < 1e-300) break;
      }
      (void)alpha;
      return sum;
    };
  } else if (alpha == 1.0 && beta > 1.0) {
    // log(e + t + 1/t) = log(1/t) + O(t log-free) near 0.
    to = [beta](double t) { return std::pow(std::log(1.0 / t), 1.0 - beta) / (beta - 1.0); };
  }
  return {"powerlog", std::move(f), Fn{}, std::move(to)};
}

Profile Profile::from_antiderivative(std::string name, Fn f, Fn antiderivative, Fn integral_to) {
  if (!f || !antiderivative) throw InputError("profile needs f and its antiderivative");
  return {std::move(name), std::move(f), std::move(antiderivative), std::move(integral_to)};
}

double Profile::integral(double a, double b) const {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) throw InputError("profile integral needs 0 < a < b < inf");
  if (antiderivative_) return antiderivative_(b) - antiderivative_(a);
  return log_quadrature(f_, a, b);
}

double Profile::integral_to(double t) const {
  if (!(t > 0.0)) throw InputError("integral_to needs t > 0");
  return integral_to_ ? integral_to_(t) : kInf;
}

StepFunction cell_averages(const Profile& f, double lo, double hi, int per_octave) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) throw InputError("cell range needs 0 < lo < hi < inf");
  if (per_octave < 1) throw InputError("need at least one cell per octave");
  const int cells = static_cast<int>(std::ceil(std::log2(hi / lo) * per_octave - 1e-9));
  std::vector<double> t;
  std::vector<double> v;
  t.reserve(static_cast<std::size_t>(cells) + 1);
  v.reserve(static_cast<std::size_t>(cells) + 2);
  const double head = f.integral_to(lo);
  v.push_back(std::isfinite(head) ? head / lo : kInf);
  double a = lo;
  t.push_back(a);
  for (int j = 1; j <= cells; ++j) {
    const double b = j == cells ? hi : lo * std::exp2(static_cast<double>(j) / per_octave);
    const double avg = f.integral(a, b) / (b - a);
    if (!(avg >= 0.0) || !std::isfinite(avg)) throw InputError("profile " + f.name() + " has a non-finite cell average");
    if (avg > v.back()) {
      // Rounding in a difference of antiderivatives can exceed the true drop.
      if (avg > v.back() * (1.0 + 1e-9)) throw InputError("profile " + f.name() + " is not non-increasing");
      v.push_back(v.back());
    } else {
      v.push_back(avg);
    }
    t.push_back(b);
    a = b;
  }
  v.push_back(0.0);
  return {std::move(t), std::move(v)};
}

}  // namespace specdim
