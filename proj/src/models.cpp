#include "specdim/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "specdim/errors.hpp"

namespace specdim {

namespace {

constexpr double kLogMax = 700.0;  // keeps e^a and e^-a normal doubles

double ceil_exp(double a) { return a < 36.0 ? std::ceil(std::exp(a)) : std::exp(a); }

std::vector<double> parse_numbers(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::string buf(text);
  const char* p = buf.c_str();
  while (true) {
    char* end = nullptr;
    const double x = std::strtod(p, &end);
    if (end == p || !std::isfinite(x)) throw InputError("malformed parameters for " + std::string(what) + ": '" + buf + "'");
    out.push_back(x);
    p = end;
    if (*p == '\0') break;
    if (*p != ',') throw InputError("malformed parameters for " + std::string(what) + ": '" + buf + "'");
    ++p;
  }
  return out;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

void collect_norms(int dims_left, std::int64_t budget, std::uint64_t partial, std::vector<std::uint64_t>& out) {
  const auto reach = static_cast<std::int64_t>(std::sqrt(static_cast<double>(budget)) + 1.0);
  for (std::int64_t x = -reach; x <= reach; ++x) {
    const std::int64_t sq = x * x;
    if (sq > budget) continue;
    if (dims_left == 1) {
      out.push_back(partial + static_cast<std::uint64_t>(sq));
    } else {
      collect_norms(dims_left - 1, budget - sq, partial + static_cast<std::uint64_t>(sq), out);
    }
  }
}

}  // namespace

double besicovitch_exponent(double lambda, int k) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw InputError("the Besicovitch sequence needs lambda > 1");
  if (k < 1) throw InputError("plateau index starts at 1");
  const double c = std::log(lambda) / (lambda - 1.0);
  double a = 0.0;
  for (int j = 2; j <= k; ++j) a = std::max(a, std::pow(lambda, j) - c * j);
  return a;
}

std::vector<LadderStep> besicovitch_ladder(double lambda, int depth) {
  if (depth < 1) throw InputError("ladder depth must be positive");
  std::vector<LadderStep> out;
  double a = besicovitch_exponent(lambda, 1);
  for (int k = 1; k <= depth; ++k) {
    const double next = besicovitch_exponent(lambda, k + 1);
    LadderStep s;
    s.k = k;
    s.a = a;
    if (next < 36.0) {
      const double start = ceil_exp(a);
      const double count = ceil_exp(next) - start;
      s.log_start = std::log(start);
      s.log_count = count > 0.0 ? std::log(count) : -std::numeric_limits<double>::infinity();
    } else {
      s.log_start = a < 36.0 ? std::log(ceil_exp(a)) : a;
      s.log_count = next + std::log1p(-std::exp(std::min(a, next) - next));
    }
    if (std::isfinite(s.log_count) && std::isfinite(s.log_start)) out.push_back(s);
    a = next;
  }
  return out;
}

EigenvalueModel::EigenvalueModel(Kind kind, std::vector<double> params, std::string label)
    : kind_(kind), params_(std::move(params)), label_(std::move(label)) {}

EigenvalueModel EigenvalueModel::power_law(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("power law exponent must be positive");
  return {Kind::PowerLaw, {alpha}, "powerlaw"};
}

EigenvalueModel EigenvalueModel::power_log(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw InputError("power-log needs alpha > 0 and a finite beta");
  }
  if (beta < 0.0) throw InputError("power-log needs beta >= 0 to stay non-increasing");
  return {Kind::PowerLog, {alpha, beta}, "powerlog"};
}

EigenvalueModel EigenvalueModel::besicovitch(double lambda) {
  besicovitch_exponent(lambda, 1);
  return {Kind::Besicovitch, {lambda}, "besicovitch"};
}

EigenvalueModel EigenvalueModel::torus(int dimension, int cutoff) {
  if (dimension < 1 || dimension > 6) throw InputError("torus dimension must be between 1 and 6");
  if (cutoff < 1) throw InputError("torus cutoff must be positive");
  EigenvalueModel m(Kind::TorusLaplacian, {static_cast<double>(dimension), static_cast<double>(cutoff)}, "torus");
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  for (const auto& [norm, mult] : lattice_shells(dimension, cutoff)) {
    m.stored_.push_back({1.0 / (four_pi2 * static_cast<double>(norm)), static_cast<double>(mult)});
  }
  return m;
}

EigenvalueModel EigenvalueModel::external(RunSequence runs, std::string label) {
  if (runs.empty()) throw InputError("external sequence is empty");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Run& r = runs[i];
    if (!(r.value > 0.0) || !std::isfinite(r.value)) throw InputError("eigenvalue terms must be finite and positive");
    if (!(r.count > 0.0) || !std::isfinite(r.count)) throw InputError("run counts must be positive");
    if (i > 0 && r.value > runs[i - 1].value) throw InputError("eigenvalue terms must be non-increasing");
  }
  EigenvalueModel m(Kind::External, {}, std::move(label));
  m.stored_ = std::move(runs);
  return m;
}

EigenvalueModel EigenvalueModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw InputError("model must look like name:params, got '" + std::string(spec) + "'");
  const std::string_view name = spec.substr(0, colon);
  const auto p = parse_numbers(spec.substr(colon + 1), name);
  auto arity = [&](std::size_t n) {
    if (p.size() != n) throw InputError("model '" + std::string(name) + "' takes " + std::to_string(n) + " parameter(s)");
  };
  if (name == "powerlaw") {
    arity(1);
    return power_law(p[0]);
  }
  if (name == "powerlog") {
    arity(2);
    return power_log(p[0], p[1]);
  }
  if (name == "besicovitch") {
    arity(1);
    return besicovitch(p[0]);
  }
  if (name == "torus") {
    arity(2);
    if (p[0] != std::floor(p[0]) || p[1] != std::floor(p[1])) throw InputError("torus parameters are integers");
    return torus(static_cast<int>(p[0]), static_cast<int>(p[1]));
  }
  throw InputError("unknown model '" + std::string(name) + "'");
}

std::optional<double> EigenvalueModel::length() const {
  if (kind_ == Kind::TorusLaplacian || kind_ == Kind::External) return total_count(stored_);
  return std::nullopt;
}

double EigenvalueModel::mu(double n) const {
  if (!(n >= 1.0)) throw InputError("terms are indexed from 1");
  switch (kind_) {
    case Kind::PowerLaw:
      return std::pow(n, -params_[0]);
    case Kind::PowerLog:
      return std::pow(n, -params_[0]) * std::pow(std::log(n + 1.0), -params_[1]);
    case Kind::Besicovitch: {
      const double lambda = params_[0];
      double a = 0.0;
      for (int k = 2;; ++k) {
        const double next = besicovitch_exponent(lambda, k);
        if (next > kLogMax || ceil_exp(next) > n) return std::exp(-a);
        a = next;
      }
    }
    default:
      throw InputError("mu(n) is only defined for the analytic models");
  }
}

void EigenvalueModel::stream(double n_max, const std::function<void(const Run&)>& sink) const {
  if (!(n_max >= 1.0)) throw InputError("n_max must be at least 1");
  switch (kind_) {
    case Kind::PowerLaw:
    case Kind::PowerLog: {
      const double exact = std::min(std::floor(n_max), kExactTerms);
      for (double n = 1.0; n <= exact; n += 1.0) sink({mu(n), 1.0});
      if (n_max <= kExactTerms) return;
      const double last = std::floor(n_max);
      double lo = kExactTerms;
      for (int j = 1; lo < last; ++j) {
        const double hi = std::min(std::floor(kExactTerms * std::exp2(static_cast<double>(j) / kCellsPerOctave)), last);
        const double v = mu(hi);
        if (!std::isnormal(v)) return;
        sink({v, hi - lo});
        lo = hi;
      }
      return;
    }
    case Kind::Besicovitch: {
      const double lambda = params_[0];
      double a = 0.0;
      double start = 1.0;
      for (int k = 1;; ++k) {
        const double next = besicovitch_exponent(lambda, k + 1);
        const double end = next > kLogMax ? std::numeric_limits<double>::infinity() : ceil_exp(next);
        const double stop = std::min(end, std::floor(n_max) + 1.0);
        if (stop > start) sink({std::exp(-a), stop - start});
        if (end > std::floor(n_max) || !std::isfinite(end)) return;
        start = std::max(start, end);
        a = next;
      }
    }
    case Kind::TorusLaplacian:
    case Kind::External: {
      double left = std::floor(n_max);
      for (const Run& r : stored_) {
        if (left <= 0.0) return;
        sink({r.value, std::min(r.count, left)});
        left -= r.count;
      }
      return;
    }
  }
}

RunSequence EigenvalueModel::runs(double n_max) const {
  RunSequence out;
  stream(n_max, [&](const Run& r) {
    if (!out.empty() && out.back().value == r.value) {
      out.back().count += r.count;
    } else {
      out.push_back(r);
    }
  });
  return out;
}

ClosedForms EigenvalueModel::closed_forms() const {
  ClosedForms cf;
  switch (kind_) {
    case Kind::PowerLaw:
      cf.box_dimension = cf.hausdorff_dimension = 1.0 / params_[0];
      cf.dixmier = 1.0;
      break;
    case Kind::PowerLog:
      cf.box_dimension = cf.hausdorff_dimension = 1.0 / params_[0];
      cf.dixmier = params_[1] > 0.0 ? 0.0 : 1.0;
      break;
    case Kind::Besicovitch: {
      const double lambda = params_[0];
      // log mu_n / log(1/n) runs from 1 at a plateau start down to
      // a_k / a_{k+1} -> 1/lambda at its end, so the liminf is 1/lambda.
      cf.box_dimension = lambda;
      cf.hausdorff_dimension = lambda;
      cf.dixmier = std::pow(lambda, 1.0 / (1.0 - lambda)) / (lambda - 1.0);
      break;
    }
    case Kind::TorusLaplacian: {
      const int d = static_cast<int>(params_[0]);
      cf.box_dimension = cf.hausdorff_dimension = d / 2.0;
      cf.dixmier = unit_ball_volume(d) / std::pow(2.0 * std::numbers::pi, d);
      break;
    }
    case Kind::External:
      break;
  }
  return cf;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> lattice_shells(int dimension, int cutoff) {
  if (dimension < 1 || cutoff < 1) throw InputError("lattice enumeration needs positive dimension and cutoff");
  const double expected = unit_ball_volume(dimension) * std::pow(cutoff + 1.0, dimension);
  if (expected > 6e7) throw ResourceError("lattice enumeration would visit about " + std::to_string(expected) + " points");
  const auto budget = static_cast<std::int64_t>(cutoff) * cutoff;
  std::vector<std::uint64_t> norms;
  norms.reserve(static_cast<std::size_t>(expected) + 16);
  collect_norms(dimension, budget, 0, norms);
  std::sort(norms.begin(), norms.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> shells;
  for (const auto m : norms) {
    if (m == 0) continue;
    if (!shells.empty() && shells.back().first == m) {
      ++shells.back().second;
    } else {
      shells.emplace_back(m, 1);
    }
  }
  return shells;
}

StepFunction to_step_function(const RunSequence& runs) {
  if (runs.empty()) return {};
  std::vector<double> t;
  std::vector<double> v{runs.front().value};
  t.reserve(runs.size());
  double at = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    at += runs[i].count;
    t.push_back(at);
    v.push_back(i + 1 < runs.size() ? runs[i + 1].value : 0.0);
  }
  return {std::move(t), std::move(v)};
}

double total_count(const RunSequence& runs) {
  double n = 0.0;
  for (const Run& r : runs) n += r.count;
  return n;
}

}  // namespace specdim
