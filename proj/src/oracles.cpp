#include "specdim/oracles.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "specdim/dimensions.hpp"
#include "specdim/heat.hpp"
#include "specdim/models.hpp"
#include "specdim/parallel.hpp"
#include "specdim/step_function.hpp"

namespace specdim {

namespace {

OracleCheck finish(std::string name, double value, double reference, double tolerance, std::string detail,
                   bool relative = true) {
  OracleCheck c;
  c.name = std::move(name);
  c.value = value;
  c.reference = reference;
  c.error = std::abs(value - reference) / (relative && reference != 0.0 ? std::abs(reference) : 1.0);
  c.tolerance = tolerance;
  c.pass = c.error <= tolerance;
  c.detail = std::move(detail);
  return c;
}

OracleCheck rearrangement(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> levels(0, 40);
  std::uniform_real_distribution<double> mass(0.01, 5.0);
  double mismatches = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    MassSample s(static_cast<std::size_t>(1 + trial % 50));
    for (auto& p : s) p = {levels(rng) / 4.0, mass(rng)};
    std::map<double, double, std::greater<>> by_value;
    for (const auto& p : s) by_value[p.value] += p.mass;
    const StepFunction mu = rearrange(s);
    double at = 0.0;
    for (const auto& [value, m] : by_value) {
      const double mid = at + 0.5 * m;
      at += m;
      if (mu(mid) != value) {
        mismatches += 1.0;
        break;
      }
    }
  }
  return finish("rearrangement_sort", mismatches, 0.0, 0.0, "1000 random mass samples", false);
}

OracleCheck walk_p2() {
  return finish("walk_p2_d1", walk_return_1d(2, 0.5)[2], 0.375, 0.0, "lazy walk on Z, laziness 1/2");
}

OracleCheck walk_paths() {
  double worst = 0.0;
  for (double laziness : {0.5, 0.3}) {
    const auto diag = walk_return_1d(10, laziness);
    for (int t = 1; t <= 10; ++t) {
      const double ref = enumerate_walk_return(t, laziness);
      worst = std::max(worst, std::abs(diag[static_cast<std::size_t>(t)] - ref) / ref);
    }
  }
  return finish("walk_path_enumeration", worst, 0.0, 1e-12, "t <= 10, laziness 1/2 and 3/10", false);
}

OracleCheck harmonic() {
  DimensionOptions opts;
  opts.n_max = 1048576.0;
  const auto traj = dixmier_trajectory(EigenvalueModel::power_law(1.0), 1.0, opts);
  std::vector<double> h(static_cast<std::size_t>(opts.n_max) + 1, 0.0);
  for (std::size_t k = 1; k < h.size(); ++k) h[k] = h[k - 1] + 1.0 / static_cast<double>(k);
  double worst = 0.0;
  for (const auto& p : traj.points) {
    const auto n = static_cast<std::size_t>(std::llround(std::exp(p.log_n)));
    if (n >= h.size()) continue;
    worst = std::max(worst, std::abs(std::exp(p.log_sigma) - h[n]) / h[n]);
  }
  return finish("harmonic_sums", worst, 0.0, 1e-11, "sigma_n(1) of 1/n against direct summation to 2^20", false);
}

OracleCheck lattice_counts() {
  double mismatches = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int r : {1, 3, 7}) {
      std::map<std::uint64_t, std::uint64_t> cube;
      std::vector<int> k(static_cast<std::size_t>(d), -r);
      while (true) {
        std::uint64_t n2 = 0;
        for (int x : k) n2 += static_cast<std::uint64_t>(x * x);
        if (n2 > 0 && n2 <= static_cast<std::uint64_t>(r * r)) ++cube[n2];
        std::size_t i = 0;
        while (i < k.size() && k[i] == r) k[i++] = -r;
        if (i == k.size()) break;
        ++k[i];
      }
      std::map<std::uint64_t, std::uint64_t> shells;
      for (const auto& [n2, m] : lattice_shells(d, r)) shells[n2] = m;
      if (shells != cube) mismatches += 1.0;
    }
  }
  return finish("lattice_counts", mismatches, 0.0, 0.0, "d <= 3, radius 1, 3, 7 against cube enumeration", false);
}

OracleCheck dixmier_besicovitch() {
  const auto traj = dixmier_trajectory(EigenvalueModel::besicovitch(2.0), 2.0);
  const double value = traj.points.size() >= 20 ? traj.points[19].ratio : std::nan("");
  return finish("dixmier_besicovitch_2", value, 0.5, 0.1, "sigma_n(2)/log n at n = round(e^{a_20})");
}

}  // namespace

double enumerate_walk_return(int t, double laziness) {
  double total = 0.0;
  std::vector<int> steps(static_cast<std::size_t>(t), -1);
  while (true) {
    int pos = 0;
    double p = 1.0;
    for (int s : steps) {
      pos += s;
      p *= s == 0 ? laziness : 0.5 * (1.0 - laziness);
    }
    if (pos == 0) total += p;
    std::size_t i = 0;
    while (i < steps.size() && steps[i] == 1) steps[i++] = -1;
    if (i == steps.size()) break;
    ++steps[i];
  }
  return total;
}

std::vector<OracleCheck> run_oracles(std::uint64_t seed) {
  const std::vector<std::function<OracleCheck()>> checks{
      [seed] { return rearrangement(seed); }, walk_p2, walk_paths, harmonic, lattice_counts, dixmier_besicovitch};
  return parallel_map<OracleCheck>(checks.size(), [&](std::size_t i) { return checks[i](); });
}

}  // namespace specdim
