#include "specdim/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "specdim/errors.hpp"

namespace specdim::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& x) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  x = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

CsvTable expect(std::istream& in, const std::vector<std::vector<std::string>>& headers, std::size_t width) {
  CsvTable t = read_csv(in);
  if (!t.header.empty()) {
    bool known = false;
    for (const auto& h : headers) known = known || h == t.header;
    if (!known) {
      std::string want;
      for (const auto& h : headers) {
        if (!want.empty()) want += " or ";
        for (std::size_t i = 0; i < h.size(); ++i) want += (i ? "," : "") + h[i];
      }
      throw ParseError(1, "unexpected header; expected " + want);
    }
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != width) {
      throw ParseError(t.lines[i], "expected " + std::to_string(width) + " columns, found " +
                                       std::to_string(t.rows[i].size()));
    }
  }
  if (t.rows.empty()) throw ParseError(t.lines.empty() ? 1 : t.lines.back(), "no data rows");
  return t;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int n = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++n;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = split(s);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) numeric = numeric && parse_number(cells[i], row[i]);
    if (!numeric) {
      if (!first) {
        std::size_t bad = 0;
        while (bad < cells.size() && parse_number(cells[bad], row[bad])) ++bad;
        throw ParseError(n, "column " + std::to_string(bad + 1) + ": '" + cells[bad] + "' is not a number");
      }
      t.header = cells;
    } else {
      t.rows.push_back(std::move(row));
      t.lines.push_back(n);
    }
    first = false;
  }
  if (in.bad()) throw InputError("read error");
  return t;
}

RunSequence read_sequence(std::istream& in) {
  const CsvTable t = expect(in, {{"n", "mu"}, {"value", "count"}}, 2);
  const bool runs = t.header == std::vector<std::string>{"value", "count"};
  RunSequence out;
  double prev_n = 0.0;
  double prev_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const int line = t.lines[i];
    double value = 0.0;
    double count = 0.0;
    if (runs) {
      value = t.rows[i][0];
      count = t.rows[i][1];
      if (!(count > 0.0) || !std::isfinite(count)) throw ParseError(line, "run count must be positive");
    } else {
      const double n = t.rows[i][0];
      value = t.rows[i][1];
      if (!(n > prev_n) || !std::isfinite(n)) throw ParseError(line, "n must be strictly increasing");
      count = n - prev_n;
      prev_n = n;
    }
    if (!(value >= 0.0) || !std::isfinite(value)) throw ParseError(line, "value must be finite and nonnegative");
    if (value > prev_v) throw ParseError(line, "values must be non-increasing");
    prev_v = value;
    if (!out.empty() && out.back().value == value) {
      out.back().count += count;
    } else {
      out.push_back({value, count});
    }
  }
  return out;
}

StepFunction read_step_function(std::istream& in) {
  const CsvTable t = expect(in, {{"t", "value"}}, 2);
  if (t.rows.front()[0] != 0.0) throw ParseError(t.lines.front(), "first row must be 0,<v0>");
  std::vector<double> breaks;
  std::vector<double> values{t.rows.front()[1]};
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double x = t.rows[i][0];
    const double v = t.rows[i][1];
    if (!(x > (breaks.empty() ? 0.0 : breaks.back()))) throw ParseError(t.lines[i], "t must be strictly increasing");
    if (!(v <= values.back()) || !(v >= 0.0) || !std::isfinite(v)) {
      throw ParseError(t.lines[i], "values must be finite, nonnegative and non-increasing");
    }
    breaks.push_back(x);
    values.push_back(v);
  }
  return StepFunction(std::move(breaks), std::move(values));
}

HeatTrace read_heat_trace(std::istream& in) {
  const CsvTable t = expect(in, {{"t", "theta_minus_b"}}, 2);
  HeatTrace h;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double x = t.rows[i][0];
    const double v = t.rows[i][1];
    if (!(x >= 1.0) || (!h.times.empty() && !(x > h.times.back()))) {
      throw ParseError(t.lines[i], "t must be >= 1 and strictly increasing");
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(t.lines[i], "theta_minus_b must be positive and finite");
    h.times.push_back(x);
    h.values.push_back(v);
  }
  return h;
}

SpectralCounting read_counting(std::istream& in) {
  const CsvTable t = expect(in, {{"t", "N"}}, 2);
  std::vector<double> s;
  std::vector<double> n;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (!s.empty() && !(t.rows[i][0] > s.back())) throw ParseError(t.lines[i], "t must be strictly increasing");
    if (!n.empty() && t.rows[i][1] < n.back()) throw ParseError(t.lines[i], "N must be non-decreasing");
    s.push_back(t.rows[i][0]);
    n.push_back(t.rows[i][1]);
  }
  return SpectralCounting::from_samples(s, n);
}

KernelMatrix<double> read_kernel(std::istream& in) {
  const CsvTable t = read_csv(in);
  if (!t.header.empty()) throw ParseError(1, "kernel CSV must not have a header");
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  if (n == 0) throw ParseError(1, "empty kernel");
  KernelMatrix<double> k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError(t.lines[static_cast<std::size_t>(i)], "kernel must be square (" + std::to_string(n) +
                                                                 " columns expected)");
    }
    for (Eigen::Index j = 0; j < n; ++j) k(i, j) = row[static_cast<std::size_t>(j)];
  }
  return k;
}

void write_step_function(std::ostream& out, const StepFunction& f) {
  out.precision(17);
  out << "t,value\n0," << f.head() << '\n';
  for (std::size_t i = 0; i < f.size(); ++i) out << f.breakpoints()[i] << ',' << f.values()[i + 1] << '\n';
}

void write_profile(std::ostream& out, const DoublingProfile& p) {
  out.precision(17);
  out << "t,S,ratio,witness\n";
  for (const auto& q : p.points) out << q.t << ',' << q.s << ',' << q.ratio << ',' << (q.witness ? 1 : 0) << '\n';
}

void write_windows(std::ostream& out, const OrderEstimate& e) {
  out.precision(17);
  out << "t_begin,t_end,lower,upper,samples\n";
  for (const auto& w : e.windows) {
    out << w.t_begin << ',' << w.t_end << ',' << w.lower << ',' << w.upper << ',' << w.samples << '\n';
  }
}

void write_trajectory(std::ostream& out, const DixmierTrajectory& t) {
  out.precision(17);
  out << "log_n,log_sigma,ratio\n";
  for (const auto& p : t.points) out << p.log_n << ',' << p.log_sigma << ',' << p.ratio << '\n';
}

void write_heat_trace(std::ostream& out, const HeatTrace& h) {
  out.precision(17);
  out << "t,theta_minus_b\n";
  for (std::size_t i = 0; i < h.times.size(); ++i) out << h.times[i] << ',' << h.values[i] << '\n';
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

namespace {

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

Json optional_bool(const std::optional<bool>& x) { return x ? Json(*x) : Json(nullptr); }

Json verdict(const LimitVerdict& v) {
  return {{"exists", v.exists},
          {"spread", number(v.spread)},
          {"window_oscillation", number(v.window_oscillation)},
          {"monotone", v.monotone}};
}

}  // namespace

std::string to_string(End end) { return end == End::Zero ? "zero" : "infinity"; }

std::string to_string(RatioReference ref) { return ref == RatioReference::Origin ? "origin" : "tail-anchor"; }

std::string to_string(GrowthClass g) {
  switch (g) {
    case GrowthClass::Zero:
      return "zero";
    case GrowthClass::Finite:
      return "positive-finite";
    case GrowthClass::Infinite:
      return "infinite";
  }
  return "unknown";
}

Json to_json(const StepFunction& f) {
  Json j;
  j["breakpoints"] = numbers(f.breakpoints());
  j["values"] = numbers(f.values());
  j["support_end"] = optional_number(f.support_end());
  return j;
}

Json to_json(const GridSpec& g) {
  return {{"t0", number(g.t0)},
          {"count", g.count},
          {"tail_fraction", number(g.tail_fraction)},
          {"reference", to_string(g.reference)}};
}

Json to_json(const OrderEstimate& e) {
  Json j;
  j["value"] = number(e.value);
  j["end"] = to_string(e.end);
  j["extremum"] = e.extremum == Extremum::Lower ? "liminf" : "limsup";
  j["reference"] = to_string(e.reference);
  j["tail_begin"] = e.tail_begin;
  j["tail_fraction"] = number(e.tail_fraction);
  j["tail_spread"] = number(e.tail_spread);
  j["last_quarter_spread"] = number(e.last_quarter_spread);
  j["converged"] = e.converged;
  j["reciprocal"] = e.reciprocal;
  if (e.anchor) j["anchor"] = {{"t", number(e.anchor->t)}, {"v", number(e.anchor->v)}};
  if (!e.note.empty()) j["note"] = e.note;
  Json w = Json::array();
  for (const auto& x : e.windows) {
    w.push_back({{"t_begin", number(x.t_begin)},
                 {"t_end", number(x.t_end)},
                 {"lower", number(x.lower)},
                 {"upper", number(x.upper)},
                 {"samples", x.samples}});
  }
  j["windows"] = std::move(w);
  return j;
}

Json to_json(const DoublingProfile& p) {
  Json j;
  j["end"] = to_string(p.end);
  j["integrable"] = p.integrable;
  j["reference"] = number(p.reference);
  j["tol"] = number(p.tol);
  j["grid"] = to_json(p.grid);
  j["final_quarter_begin"] = p.final_quarter_begin;
  j["witnesses"] = p.witnesses;
  j["final_quarter_witnesses"] = p.final_quarter_witnesses;
  j["cluster_at_one"] = p.cluster_at_one;
  j["skipped"] = numbers(p.skipped);
  Json pts = Json::array();
  for (const auto& q : p.points) {
    pts.push_back({{"j", q.j},
                   {"t", number(q.t)},
                   {"S", number(q.s)},
                   {"S_double", number(q.s_double)},
                   {"ratio", number(q.ratio)},
                   {"witness", q.witness}});
  }
  j["points"] = std::move(pts);
  return j;
}

Json to_json(const DimensionOptions& o) {
  return {{"n_max", number(o.n_max)},
          {"ladder_depth", o.ladder_depth},
          {"search_lo", number(o.search_lo)},
          {"search_hi", number(o.search_hi)},
          {"bisection_steps", o.bisection_steps},
          {"kappa_zero", number(o.kappa_zero)},
          {"kappa_infinite", number(o.kappa_infinite)},
          {"regularity_spread", number(o.regularity_spread)},
          {"tail_fraction", number(o.tail_fraction)}};
}

Json to_json(const DimensionReport& r) {
  Json j;
  j["model"] = r.model;
  j["parameters"] = numbers(r.parameters);
  j["horizon"] = number(r.horizon);
  j["box_dimension"] = {{"value", number(r.box.value)}, {"order_at_infinity", to_json(r.box.order)}};
  Json probes = Json::array();
  for (const auto& p : r.hausdorff.probes) {
    probes.push_back({{"d", number(p.d)},
                      {"verdict", to_string(p.verdict)},
                      {"kappa", number(p.kappa)},
                      {"final_ratio", number(p.final_ratio)}});
  }
  j["hausdorff_dimension"] = {{"d_lo", number(r.hausdorff.d_lo)},
                              {"d_hi", number(r.hausdorff.d_hi)},
                              {"degenerate", r.hausdorff.degenerate},
                              {"warnings", r.hausdorff.warnings},
                              {"probes", std::move(probes)}};
  j["regularity"] = {{"a", verdict(r.regularity.regularity_a)},
                     {"b", verdict(r.regularity.regularity_b)},
                     {"ratio_2n", number(r.regularity.ratio_2n)},
                     {"ratio_2n_at", number(r.regularity.ratio_2n_at)}};
  Json traj = Json::array();
  for (const auto& p : r.dixmier.points) {
    traj.push_back({{"log_n", number(p.log_n)}, {"log_sigma", number(p.log_sigma)}, {"ratio", number(p.ratio)}});
  }
  j["dixmier"] = {{"d", number(r.dixmier.d)}, {"truncated", r.dixmier.truncated}, {"points", std::move(traj)}};
  j["closed_forms"] = {{"box_dimension", optional_number(r.closed_forms.box_dimension)},
                       {"hausdorff_dimension", optional_number(r.closed_forms.hausdorff_dimension)},
                       {"dixmier", optional_number(r.closed_forms.dixmier)}};
  j["box_hausdorff_consistent"] = optional_bool(r.box_hausdorff_consistent);
  j["ratio_consistent"] = optional_bool(r.ratio_consistent);
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const AsdimEstimate& a) { return {{"value", number(a.value)}, {"order", to_json(a.order)}}; }

Json to_json(const SupFormEstimate& s) {
  return {{"value", number(s.value)},
          {"constant", number(s.constant)},
          {"anchor_t", number(s.anchor_t)},
          {"iterations", s.iterations}};
}

Json to_json(const NovikovShubin& ns) {
  return {{"alpha_lower", optional_number(ns.alpha_lower)},
          {"alpha", optional_number(ns.alpha)},
          {"alpha_prime", optional_number(ns.alpha_prime)},
          {"notes", ns.notes}};
}

Json to_json(const HeatTrace& h) {
  return {{"times", numbers(h.times)}, {"theta_minus_b", numbers(h.values)}, {"betti", number(h.betti)}};
}

}  // namespace specdim::io
