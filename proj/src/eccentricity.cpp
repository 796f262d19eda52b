#include "specdim/eccentricity.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kGuard = 1e6;
constexpr double kSlack = 1e-12;

void check_reference(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("reference point must be positive and finite");
}

}  // namespace

Integrability classify_integrability(const StepFunction& mu, End end, const EccentricityOptions& opts) {
  if (opts.integrability) return *opts.integrability;
  const double c = opts.reference;
  check_reference(c);
  const auto& t = mu.breakpoints();

  if (end == End::Infinity) {
    if (mu.tail() > 0.0) return Integrability::NonSummable;
    if (t.empty()) return Integrability::Summable;
    const double horizon = t.back();
    if (!(std::log2(horizon / c) >= opts.min_windows)) {
      throw IndeterminateError("integrability at infinity: only " + std::to_string(std::log2(horizon / c)) +
                               " dyadic windows of data; pass an explicit override");
    }
    const double total = integrate(mu, c, horizon);
    if (total == 0.0) return Integrability::Summable;
    const double last = integrate(mu, horizon / 4.0, horizon);
    return last / total < opts.cauchy_increment ? Integrability::Summable : Integrability::NonSummable;
  }

  if (std::isfinite(mu.head())) return Integrability::Summable;
  const double start = t.front();  // an infinite head implies breakpoints
  if (!(std::log2(c / start) >= opts.min_windows)) {
    throw IndeterminateError("integrability at 0: only " + std::to_string(std::log2(c / start)) +
                             " dyadic windows of data; pass an explicit override");
  }
  const double total = integrate(mu, start, c);
  if (total == 0.0) return Integrability::Summable;
  const double last = integrate(mu, start, 4.0 * start);
  return last / total < opts.cauchy_increment ? Integrability::Summable : Integrability::NonSummable;
}

double s_zero(const StepFunction& mu, double t, Integrability branch, double reference) {
  check_reference(reference);
  if (!(t > 0.0) || t > reference) throw InputError("S0 needs 0 < t <= c");
  if (branch == Integrability::Summable) {
    const double s = integrate(mu, 0.0, t);
    if (std::isinf(s)) throw ContradictionError("S0 diverges in the summable branch at t = " + std::to_string(t));
    return s;
  }
  if (t == reference) return 0.0;
  const double s = integrate(mu, t, reference);
  if (std::isinf(s)) throw InputError("S0 at t = " + std::to_string(t) + " lies below the data support");
  return s;
}

double s_infinity(const StepFunction& mu, double t, Integrability branch, double reference) {
  check_reference(reference);
  if (!(t >= reference) || std::isinf(t)) throw InputError("S_inf needs c <= t < inf");
  if (branch == Integrability::Summable) {
    const double s = integrate(mu, t, std::numeric_limits<double>::infinity());
    if (std::isinf(s)) throw ContradictionError("S_inf diverges in the summable branch at t = " + std::to_string(t));
    return s;
  }
  if (t == reference) return 0.0;
  const double s = integrate(mu, reference, t);
  if (std::isinf(s)) throw InputError("S_inf is infinite on [c, t]; the head reaches past c");
  return s;
}

GridSpec default_doubling_grid(const StepFunction& mu, End end, const EccentricityOptions& opts) {
  const double c = opts.reference;
  check_reference(c);
  if (opts.points < 4) throw InputError("a doubling grid needs at least 4 points");
  const auto& bp = mu.breakpoints();
  GridSpec grid;
  int span = 0;
  double last = 0.0;
  if (end == End::Infinity) {
    // A function with no breakpoints has no horizon; place one 2^points past c.
    const double horizon = bp.empty() ? std::ldexp(c, opts.points + 1) : bp.back();
    last = horizon / 2.0;
    span = static_cast<int>(std::floor(std::log2(last / c)));
  } else {
    last = bp.empty() ? std::ldexp(c, -opts.points - 1) : bp.front();
    span = static_cast<int>(std::floor(std::log2(c / (2.0 * last))));
  }
  grid.count = std::min(opts.points - 1, span);
  if (grid.count < 3) throw InputError("data horizon leaves fewer than 4 doubling grid points");
  grid.t0 = end == End::Infinity ? std::ldexp(last, -grid.count) : std::ldexp(last, grid.count);
  return grid;
}

DoublingProfile doubling_profile(const StepFunction& mu, End end, const GridSpec& grid,
                                 const EccentricityOptions& opts) {
  if (!(opts.tol >= 0.0)) throw InputError("tolerance must be nonnegative");
  if (grid.count < 1 || !(grid.t0 > 0.0)) throw InputError("doubling grid needs t0 > 0 and count >= 1");
  const double c = opts.reference;
  const Integrability branch = classify_integrability(mu, end, opts);

  DoublingProfile out;
  out.end = end;
  out.integrable = branch == Integrability::Summable;
  out.reference = c;
  out.tol = opts.tol;
  out.grid = grid;
  const int n = grid.count + 1;
  out.final_quarter_begin = n - (n + 3) / 4;

  const auto S = [&](double t) {
    return end == End::Infinity ? s_infinity(mu, t, branch, c) : s_zero(mu, t, branch, c);
  };
  const bool decreasing = out.decreasing_branch();

  double first = -1.0;
  double previous = -1.0;
  for (int j = 0; j < n; ++j) {
    const double t = grid.point(end, j);
    if (end == End::Infinity ? t < c : 2.0 * t > c) {
      throw InputError("doubling grid point " + std::to_string(t) + " crosses the reference point");
    }
    const double s = S(t);
    const double s2 = S(2.0 * t);

    if (previous >= 0.0) {
      // Moving toward the end: the decreasing branch shrinks at infinity and
      // grows toward 0, and the other way round.
      const bool toward_smaller = (end == End::Infinity) == decreasing;
      const bool bad = toward_smaller ? s > previous * (1.0 + kSlack) : s < previous * (1.0 - kSlack);
      if (bad) throw InvariantViolation("S is not monotone along the doubling grid at t = " + std::to_string(t));
    }
    previous = s;

    if (out.integrable) {
      if (first < 0.0 && s > 0.0) first = s;
      if (first > 0.0 && s > kGuard * first) {
        throw ContradictionError("summable branch grew past 1e6 times its first value at t = " + std::to_string(t) +
                                 "; integrability is misclassified");
      }
    }
    if (s == 0.0) {
      out.skipped.push_back(t);
      continue;
    }

    DoublingPoint p;
    p.j = j;
    p.t = t;
    p.s = s;
    p.s_double = s2;
    p.ratio = s2 / s;
    const bool coherent = decreasing ? p.ratio <= 1.0 + kSlack : p.ratio >= 1.0 - kSlack;
    if (!coherent) throw InvariantViolation("doubling ratio " + std::to_string(p.ratio) + " violates branch coherence");
    p.witness = std::abs(p.ratio - 1.0) <= opts.tol;
    if (p.witness) {
      ++out.witnesses;
      if (j >= out.final_quarter_begin) ++out.final_quarter_witnesses;
    }
    out.points.push_back(p);
  }
  out.cluster_at_one = out.final_quarter_witnesses > 0;
  return out;
}

EccentricVerdict eccentric_verdict(const StepFunction& mu, End end, const EccentricityOptions& opts) {
  EccentricVerdict v;
  v.profile = doubling_profile(mu, end, default_doubling_grid(mu, end, opts), opts);
  v.eccentric = v.profile.cluster_at_one;
  return v;
}

}  // namespace specdim
