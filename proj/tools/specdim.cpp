// specdim: command-line front end for the spectral dimension library.
//
// Exit codes: 0 success, 1 malformed input or usage, 2 indeterminate
// classification, 3 oracle mismatch, 4 any other library failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "specdim/dimensions.hpp"
#include "specdim/eccentricity.hpp"
#include "specdim/errors.hpp"
#include "specdim/heat.hpp"
#include "specdim/io.hpp"
#include "specdim/kernel.hpp"
#include "specdim/models.hpp"
#include "specdim/oracles.hpp"
#include "specdim/orders.hpp"
#include "specdim/parallel.hpp"
#include "specdim/profiles.hpp"

using namespace specdim;
using io::Json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitOracle = 3;
constexpr int kExitFailure = 4;
constexpr const char* kVersion = "1.0.0";

// Analytic models are realized on [2^-64, 2^64] for the function-level
// subcommands.
constexpr double kModelLo = 0x1p-64;
constexpr double kModelHi = 0x1p64;

struct Output {
  std::string format = "json";
  std::string path = "-";
};

struct Source {
  std::string model;
  std::string input;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Parse errors gain the file name in front of the line number.
template <typename F>
auto parse_file(const std::string& path, F reader) {
  std::istringstream in(read_file(path));
  try {
    return reader(in);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit(const Output& out, const std::function<void(std::ostream&)>& write) {
  if (out.path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(out.path);
  if (!f) throw InputError("cannot write '" + out.path + "'");
  write(f);
}

void emit_json(const Output& out, const std::string& command, Json config, Json result) {
  Json doc;
  doc["metadata"] = {{"tool", "specdim"}, {"version", kVersion}, {"command", command}};
  doc["config"] = std::move(config);
  doc["result"] = std::move(result);
  emit(out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

// Flat `key,value` CSV of the scalar members of a JSON object.
void emit_scalars(const Output& out, const Json& result) {
  emit(out, [&](std::ostream& os) {
    os << "key,value\n";
    for (const auto& [k, v] : result.items()) {
      if (v.is_primitive()) os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  });
}

End parse_end(const std::string& s) { return s == "zero" ? End::Zero : End::Infinity; }

RatioReference parse_reference(const std::string& s) {
  return s == "origin" ? RatioReference::Origin : RatioReference::TailAnchor;
}

StepFunction realize(const EigenvalueModel& m) {
  const auto& p = m.parameters();
  switch (m.kind()) {
    case EigenvalueModel::Kind::PowerLaw:
      return cell_averages(Profile::power(p[0]), kModelLo, kModelHi);
    case EigenvalueModel::Kind::PowerLog:
      return cell_averages(Profile::power_log(p[0], p[1]), kModelLo, kModelHi);
    default:
      return to_step_function(m.runs(kModelHi));
  }
}

// A `t,value` step function, or an `n,mu` / `value,count` sequence.
StepFunction load_function(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream probe(text);
  std::string first;
  while (std::getline(probe, first)) {
    if (first.find_first_not_of(" \t\r") != std::string::npos && first[first.find_first_not_of(" \t\r")] != '#') break;
  }
  first.erase(std::remove_if(first.begin(), first.end(), [](char c) { return std::isspace(c); }), first.end());
  if (first == "t,value") return parse_file(path, io::read_step_function);
  return to_step_function(parse_file(path, io::read_sequence));
}

StepFunction load_source(const Source& src, double power, Json& config) {
  StepFunction mu = src.model.empty() ? load_function(src.input) : realize(EigenvalueModel::parse(src.model));
  if (!src.model.empty()) {
    config["model"] = src.model;
    config["realization"] = "on [2^-64, 2^64]";
  } else {
    config["input"] = src.input;
  }
  config["power"] = power;
  if (power != 1.0) mu = power_scale(mu, power);
  return mu;
}

void add_source(CLI::App* cmd, Source& src) {
  auto* m = cmd->add_option("--model", src.model, "powerlaw:a | powerlog:a,b | besicovitch:l | torus:d,r");
  auto* i = cmd->add_option("--input", src.input, "CSV input")->check(CLI::ExistingFile);
  m->excludes(i);
  i->excludes(m);
}

void require_source(const Source& src) {
  if (src.model.empty() && src.input.empty()) throw InputError("one of --model or --input is required");
}

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--output,-o", out.path, "output path, - for stdout")->capture_default_str();
}

// ---------------------------------------------------------------- dims

struct DimsArgs {
  Source src;
  Output out;
  DimensionOptions opts;
};

int run_dims(const DimsArgs& a) {
  require_source(a.src);
  const EigenvalueModel model = a.src.model.empty()
                                    ? EigenvalueModel::external(parse_file(a.src.input, io::read_sequence), a.src.input)
                                    : EigenvalueModel::parse(a.src.model);
  Json config;
  if (a.src.model.empty()) {
    config["input"] = a.src.input;
  } else {
    config["model"] = a.src.model;
  }
  config["options"] = io::to_json(a.opts);
  const DimensionReport r = analyze_dimensions(model, a.opts);
  if (a.out.format == "csv") {
    emit(a.out, [&](std::ostream& os) { io::write_trajectory(os, r.dixmier); });
  } else {
    emit_json(a.out, "dims", config, io::to_json(r));
  }
  if (r.hausdorff.degenerate) {
    std::cerr << "indeterminate: " << r.hausdorff.warnings.back() << '\n';
    return kExitIndeterminate;
  }
  return 0;
}

// ---------------------------------------------------------------- ecc

struct EccArgs {
  Source src;
  Output out;
  std::string end = "infinity";
  std::string integrability = "auto";
  double power = 1.0;
  EccentricityOptions opts;
  std::optional<double> t0;
  std::optional<int> count;
  std::string witness_csv;
};

int run_ecc(const EccArgs& a) {
  require_source(a.src);
  Json config;
  const StepFunction mu = load_source(a.src, a.power, config);
  const End end = parse_end(a.end);
  EccentricityOptions opts = a.opts;
  if (a.integrability != "auto") {
    opts.integrability = a.integrability == "summable" ? Integrability::Summable : Integrability::NonSummable;
  }
  if (a.t0.has_value() != a.count.has_value()) throw InputError("--t0 and --count go together");
  const GridSpec grid = a.t0 ? GridSpec{*a.t0, *a.count} : default_doubling_grid(mu, end, opts);
  config["end"] = a.end;
  config["integrability"] = a.integrability;
  config["tol"] = opts.tol;
  config["reference"] = opts.reference;
  config["points"] = opts.points;
  config["cauchy_increment"] = opts.cauchy_increment;
  config["min_windows"] = opts.min_windows;
  config["grid"] = io::to_json(grid);

  const DoublingProfile p = doubling_profile(mu, end, grid, opts);
  if (!a.witness_csv.empty()) emit({"csv", a.witness_csv}, [&](std::ostream& os) { io::write_profile(os, p); });
  if (a.out.format == "csv") {
    emit(a.out, [&](std::ostream& os) { io::write_profile(os, p); });
  } else {
    Json result = io::to_json(p);
    result["eccentric"] = p.cluster_at_one;
    emit_json(a.out, "ecc", config, std::move(result));
  }
  return 0;
}

// ---------------------------------------------------------------- orders

struct OrdersArgs {
  Source src;
  Output out;
  std::string end = "infinity";
  double power = 1.0;
  std::optional<double> t0;
  std::optional<int> count;
  double tail_fraction = 0.5;
  std::string reference = "origin";
  bool via_distribution = false;
};

// Grids end inside the data: at the last breakpoint toward infinity, at the
// first toward zero, capped at 48 dyadic windows.
GridSpec data_grid(const StepFunction& mu, End end, double tf, RatioReference ref) {
  if (mu.size() == 0) return GridSpec{1.0, 48, tf, ref};
  const double limit = end == End::Infinity ? std::min(mu.breakpoints().back(), 0x1p48)
                                            : std::max(mu.breakpoints().front(), 0x1p-48);
  return grid_between(1.0, limit, end, tf, ref);
}

// The distribution lives on the value axis: ord_inf reads lambda toward the
// smallest positive value, ord_0 toward half the largest finite value.
GridSpec value_grid(const StepFunction& mu, End end, double tf, RatioReference ref) {
  double lo = 0.0;
  double hi = 0.0;
  for (double v : mu.values()) {
    if (v > 0.0 && std::isfinite(v)) {
      hi = std::max(hi, v);
      lo = lo == 0.0 ? v : std::min(lo, v);
    }
  }
  if (hi == 0.0) throw InputError("the function has no positive finite values");
  return end == End::Infinity ? grid_between(1.0, std::max(lo, 0x1p-48), End::Zero, tf, ref)
                              : grid_between(1.0, std::min(hi / 2.0, 0x1p48), End::Infinity, tf, ref);
}

int run_orders(const OrdersArgs& a) {
  require_source(a.src);
  Json config;
  const StepFunction mu = load_source(a.src, a.power, config);
  const End end = parse_end(a.end);
  const RatioReference ref = parse_reference(a.reference);
  if (a.t0.has_value() != a.count.has_value()) throw InputError("--t0 and --count go together");
  GridSpec grid;
  if (a.t0) {
    grid = GridSpec{*a.t0, *a.count, a.tail_fraction, ref};
  } else {
    grid = a.via_distribution ? value_grid(mu, end, a.tail_fraction, ref) : data_grid(mu, end, a.tail_fraction, ref);
  }
  config["end"] = a.end;
  config["via_distribution"] = a.via_distribution;
  config["grid"] = io::to_json(grid);

  const OrderEstimate e = a.via_distribution ? order_via_distribution(distribution(mu), end, grid)
                          : end == End::Infinity ? order_at_infinity(mu, grid)
                                                 : order_at_zero(mu, grid);
  if (a.out.format == "csv") {
    emit(a.out, [&](std::ostream& os) { io::write_windows(os, e); });
  } else {
    emit_json(a.out, "orders", config, io::to_json(e));
  }
  return 0;
}

// ---------------------------------------------------------------- heat

struct HeatArgs {
  Output out;
  std::optional<int> lattice;
  int t_max = 1 << 14;
  double laziness = 0.5;
  std::string trace;
  std::string counting;
  std::string kernel;
  bool check_norm = false;
  int block = 1;
  AsdimOptions opts;
  std::string reference = "tail-anchor";
};

Json trace_report(const HeatTrace& h, const AsdimOptions& opts) {
  Json r;
  r["asdim"] = io::to_json(asdim(h, opts));
  r["sup_form"] = io::to_json(asdim_sup_form(h, opts));
  r["novikov_shubin"] = io::to_json(ns_numbers(h, opts));
  r["trace"] = io::to_json(h);
  return r;
}

int run_heat(HeatArgs a) {
  const int sources = (a.lattice ? 1 : 0) + !a.trace.empty() + !a.counting.empty() + !a.kernel.empty();
  if (sources != 1) throw InputError("give exactly one of --lattice, --trace, --counting, --kernel");
  a.opts.reference = parse_reference(a.reference);
  Json config;
  config["asdim"] = {{"tail_fraction", a.opts.tail_fraction},
                     {"reference", a.reference},
                     {"min_windows", a.opts.min_windows}};

  if (!a.kernel.empty()) {
    const auto k = parse_file(a.kernel, io::read_kernel);
    config["kernel"] = a.kernel;
    config["check_norm"] = a.check_norm;
    config["block"] = a.block;
    const auto n = one_inf_norm(k, a.check_norm, a.block);
    Json r{{"one_inf_norm", io::number(n.value)},
           {"max_diagonal", io::number(n.max_diagonal)},
           {"row", n.row},
           {"col", n.col},
           {"positivity_checked", n.positivity_checked},
           {"positive_semidefinite", is_positive_semidefinite(k)}};
    if (a.out.format == "csv") {
      emit_scalars(a.out, r);
    } else {
      emit_json(a.out, "heat", config, r);
    }
    return 0;
  }

  if (!a.counting.empty()) {
    const auto n = parse_file(a.counting, io::read_counting);
    config["counting"] = a.counting;
    const auto ns = ns_numbers(n, a.opts);
    Json r{{"betti", io::number(n.betti())}, {"novikov_shubin", io::to_json(ns)}};
    if (a.out.format == "csv") {
      Json flat{{"betti", r["betti"]}};
      for (const auto& [k, v] : r["novikov_shubin"].items()) flat[k] = v;
      emit_scalars(a.out, flat);
    } else {
      emit_json(a.out, "heat", config, r);
    }
    return 0;
  }

  HeatTrace h;
  if (a.lattice) {
    config["lattice"] = *a.lattice;
    config["tmax"] = a.t_max;
    config["laziness"] = a.laziness;
    h = lattice_return_probability(*a.lattice, a.t_max, a.laziness);
  } else {
    config["trace"] = a.trace;
    h = parse_file(a.trace, io::read_heat_trace);
  }
  if (a.out.format == "csv") {
    emit(a.out, [&](std::ostream& os) { io::write_heat_trace(os, h); });
  } else {
    emit_json(a.out, "heat", config, trace_report(h, a.opts));
  }
  return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  Output out;
  std::uint64_t seed = 1;
};

int run_oracle(const OracleArgs& a) {
  const auto checks = run_oracles(a.seed);
  if (a.out.format == "csv") {
    emit(a.out, [&](std::ostream& os) {
      os.precision(17);
      os << "name,value,reference,error,tolerance,pass\n";
      for (const auto& c : checks) {
        os << c.name << ',' << c.value << ',' << c.reference << ',' << c.error << ',' << c.tolerance << ','
           << (c.pass ? 1 : 0) << '\n';
      }
    });
  } else {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"value", io::number(c.value)},
                     {"reference", io::number(c.reference)},
                     {"error", io::number(c.error)},
                     {"tolerance", io::number(c.tolerance)},
                     {"pass", c.pass},
                     {"detail", c.detail}});
    }
    emit_json(a.out, "oracle", {{"seed", a.seed}}, {{"checks", arr}});
  }
  int code = 0;
  for (const auto& c : checks) {
    if (!c.pass) {
      std::cerr << "oracle mismatch: " << c.name << " error " << c.error << " > " << c.tolerance << '\n';
      code = kExitOracle;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral dimensions, orders, eccentricity and heat asymptotics"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::function<int()> action;

  DimsArgs dims;
  auto* d = app.add_subcommand("dims", "box and Hausdorff dimensions, regularity, Dixmier trajectory");
  add_source(d, dims.src);
  add_output(d, dims.out);
  d->add_option("--nmax", dims.opts.n_max, "number of terms")->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--ladder-depth", dims.opts.ladder_depth)->check(CLI::Range(2, 64))->capture_default_str();
  d->add_option("--search-lo", dims.opts.search_lo)->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--search-hi", dims.opts.search_hi)->check(CLI::PositiveNumber)->capture_default_str();
  d->add_option("--bisection-steps", dims.opts.bisection_steps)->check(CLI::Range(1, 60))->capture_default_str();
  d->add_option("--tail-fraction", dims.opts.tail_fraction)->check(CLI::Range(0.05, 1.0))->capture_default_str();
  d->callback([&] { action = [&] { return run_dims(dims); }; });

  EccArgs ecc;
  auto* e = app.add_subcommand("ecc", "doubling profile and eccentricity verdict");
  add_source(e, ecc.src);
  add_output(e, ecc.out);
  e->add_option("--end", ecc.end)->check(CLI::IsMember({"zero", "infinity"}))->capture_default_str();
  e->add_option("--power", ecc.power, "replace mu by mu^p")->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--tol", ecc.opts.tol, "witness tolerance |ratio - 1|")->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--reference", ecc.opts.reference, "reference point c")->check(CLI::PositiveNumber)->capture_default_str();
  e->add_option("--points", ecc.opts.points, "default grid size")->check(CLI::Range(4, 4096))->capture_default_str();
  e->add_option("--integrability", ecc.integrability)
      ->check(CLI::IsMember({"auto", "summable", "nonsummable"}))
      ->capture_default_str();
  e->add_option("--t0", ecc.t0, "explicit grid start")->check(CLI::PositiveNumber);
  e->add_option("--count", ecc.count, "explicit grid length")->check(CLI::Range(3, 4096));
  e->add_option("--witness-csv", ecc.witness_csv, "also write t,S,ratio,witness here");
  e->callback([&] { action = [&] { return run_ecc(ecc); }; });

  OrdersArgs ord;
  auto* o = app.add_subcommand("orders", "polynomial order at zero or infinity");
  add_source(o, ord.src);
  add_output(o, ord.out);
  o->add_option("--end", ord.end)->check(CLI::IsMember({"zero", "infinity"}))->capture_default_str();
  o->add_option("--power", ord.power, "replace mu by mu^p")->check(CLI::PositiveNumber)->capture_default_str();
  o->add_option("--t0", ord.t0)->check(CLI::PositiveNumber);
  o->add_option("--count", ord.count)->check(CLI::Range(2, 4096));
  o->add_option("--tail-fraction", ord.tail_fraction)->check(CLI::Range(0.05, 1.0))->capture_default_str();
  o->add_option("--reference", ord.reference)->check(CLI::IsMember({"origin", "tail-anchor"}))->capture_default_str();
  o->add_flag("--via-distribution", ord.via_distribution, "estimate through the distribution function");
  o->callback([&] { action = [&] { return run_orders(ord); }; });

  HeatArgs heat;
  auto* h = app.add_subcommand("heat", "heat-trace asymptotic dimension, Novikov-Shubin numbers, kernel norms");
  add_output(h, heat.out);
  h->add_option("--lattice", heat.lattice, "lazy walk on Z^d")->check(CLI::Range(1, 4));
  h->add_option("--tmax", heat.t_max)->check(CLI::Range(16, kMaxWalkSteps))->capture_default_str();
  h->add_option("--laziness", heat.laziness)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  h->add_option("--trace", heat.trace, "CSV t,theta_minus_b")->check(CLI::ExistingFile);
  h->add_option("--counting", heat.counting, "CSV t,N")->check(CLI::ExistingFile);
  h->add_option("--kernel", heat.kernel, "dense kernel CSV")->check(CLI::ExistingFile);
  h->add_flag("--check-norm", heat.check_norm, "assert positivity and the diagonal norm identity");
  h->add_option("--block", heat.block, "block size of matrix-valued kernels")->check(CLI::Range(1, 1 << 20));
  h->add_option("--tail-fraction", heat.opts.tail_fraction)->check(CLI::Range(0.05, 1.0))->capture_default_str();
  h->add_option("--reference", heat.reference)->check(CLI::IsMember({"origin", "tail-anchor"}))->capture_default_str();
  h->add_option("--min-windows", heat.opts.min_windows)->check(CLI::Range(1, 64))->capture_default_str();
  h->callback([&] { action = [&] { return run_heat(heat); }; });

  OracleArgs orc;
  auto* r = app.add_subcommand("oracle", "brute-force cross-checks");
  add_output(r, orc.out);
  r->add_option("--seed", orc.seed)->capture_default_str();
  r->callback([&] { action = [&] { return run_oracle(orc); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : kExitInput;
  }

  try {
    return action();
  } catch (const IndeterminateError& err) {
    std::cerr << "indeterminate: " << err.what() << '\n';
    return kExitIndeterminate;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "failed: " << err.what() << '\n';
    return kExitFailure;
  }
}
