#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specdim {

// Brute-force cross-checks of library results. Each check compares a library
// value with an independent computation and records the relative error.
struct OracleCheck {
  std::string name;
  double value = 0.0;      ///< library result (a mismatch count for exact checks)
  double reference = 0.0;  ///< oracle result
  double error = 0.0;      ///< relative error, or absolute for counts
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

std::vector<OracleCheck> run_oracles(std::uint64_t seed = 1);

/// 3^t path enumeration of the 1-D lazy walk's return probability.
double enumerate_walk_return(int t, double laziness);

}  // namespace specdim
