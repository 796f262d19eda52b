#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "specdim/dimensions.hpp"
#include "specdim/eccentricity.hpp"
#include "specdim/heat.hpp"
#include "specdim/kernel.hpp"
#include "specdim/models.hpp"
#include "specdim/orders.hpp"
#include "specdim/step_function.hpp"

namespace specdim::io {

using Json = nlohmann::ordered_json;

/// Numeric CSV with an optional header row. `lines` holds the source line of
/// each row for error messages.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> lines;
};

/// Reads comma-separated numbers. Blank lines and lines starting with '#' are
/// skipped; a first row that is not numeric is the header. Throws ParseError.
CsvTable read_csv(std::istream& in);

/// `n,mu` rows (each covering indices (previous n, n]) or `value,count` runs.
RunSequence read_sequence(std::istream& in);
/// `t,value` with a leading `0,<v0>` row.
StepFunction read_step_function(std::istream& in);
/// `t,theta_minus_b`.
HeatTrace read_heat_trace(std::istream& in);
/// `t,N`.
SpectralCounting read_counting(std::istream& in);
/// Dense square matrix, no header.
KernelMatrix<double> read_kernel(std::istream& in);

void write_step_function(std::ostream& out, const StepFunction& f);
void write_profile(std::ostream& out, const DoublingProfile& p);
void write_windows(std::ostream& out, const OrderEstimate& e);
void write_trajectory(std::ostream& out, const DixmierTrajectory& t);
void write_heat_trace(std::ostream& out, const HeatTrace& h);

/// Finite doubles as numbers; inf and nan as the strings "inf", "-inf", "nan".
Json number(double x);

Json to_json(const StepFunction& f);
Json to_json(const GridSpec& g);
Json to_json(const OrderEstimate& e);
Json to_json(const DoublingProfile& p);
Json to_json(const DimensionOptions& o);
Json to_json(const DimensionReport& r);
Json to_json(const AsdimEstimate& a);
Json to_json(const SupFormEstimate& s);
Json to_json(const NovikovShubin& ns);
Json to_json(const HeatTrace& h);

std::string to_string(End end);
std::string to_string(RatioReference ref);
std::string to_string(GrowthClass g);

}  // namespace specdim::io
