#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcp/conformal.hpp"
#include "hcp/datagen.hpp"
#include "hcp/experiment.hpp"
#include "hcp/hierarchy.hpp"

namespace hcp::io {

using json = nlohmann::json;

// Shortest round-trip representation; "inf", "-inf", "nan" for non-finite.
std::string format_double(double v);
double parse_double(const std::string& s);

// {"m":..., "n":..., "h_sub":[[...]], "levels":[[lo,hi],...]}, 1-based levels.
json hierarchy_to_json(const Hierarchy& h);
// m, n and levels are optional; when present they are checked.
Hierarchy hierarchy_from_json(const json& j);
Hierarchy load_hierarchy(const std::filesystem::path& path);

json spec_to_json(const ExperimentSpec& spec);
json regressor_to_json(const Regressor& r);
json model_to_json(const RectangleModel& model);
json model_to_json(const EllipsoidModel& model);

// Columns x1,x2,x3,y1..ym.
void write_dataset_csv(std::ostream& out, const Dataset& d);

inline const std::vector<std::string>& runs_csv_header() {
  static const std::vector<std::string> h{"run_id", "seed",           "method", "node_id", "coverage",
                                          "sq_length", "total_sq_length", "volume", "status"};
  return h;
}
inline const std::vector<std::string>& summary_csv_header() {
  static const std::vector<std::string> h{"method", "metric", "mean", "gamma", "n"};
  return h;
}

// One row per (run, method, node) for rectangles plus an ALL row; ellipsoids
// contribute only the ALL row (coverage = joint coverage).
void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs);
// One row per (method, metric) plus a "failures" row per method.
void write_summary_csv(std::ostream& out, const McSummary& summary);

struct SummaryRow {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double gamma = 0.0;
  std::size_t n = 0;
};
// Throws IoError on a malformed header or row.
std::vector<SummaryRow> read_summary_csv(std::istream& in);

json run_to_json(const RunResult& run);
json summary_to_json(const McSummary& summary);

}  // namespace hcp::io
