#include "hcp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hcp/error.hpp"
#include "hcp/regression.hpp"

namespace hcp::io {

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // JSON has no infinities; keep them readable instead of null.
    if (std::isfinite(v(i)))
      out.push_back(v(i));
    else
      out.push_back(format_double(v(i)));
  }
  return out;
}

json number_or_string(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError("not a number: '" + s + "'");
  return v;
}

json hierarchy_to_json(const Hierarchy& h) {
  json levels = json::array();
  for (const auto& lv : h.levels()) levels.push_back({lv.first, lv.last});
  return {{"m", h.m()}, {"n", h.n()}, {"h_sub", matrix_to_json(h.h_sub())}, {"levels", levels}};
}

Hierarchy hierarchy_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("h_sub")) throw ValidationError("hierarchy JSON needs an 'h_sub' array");
    for (const auto& [key, _] : j.items())
      if (key != "m" && key != "n" && key != "h_sub" && key != "levels")
        throw ValidationError("hierarchy JSON: unknown key '" + key + "'");
    const auto& rows = j.at("h_sub");
    if (!rows.is_array() || rows.empty()) throw ValidationError("hierarchy JSON: 'h_sub' must be a non-empty array");
    const std::size_t cols = rows.at(0).size();
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw ValidationError("hierarchy JSON: ragged 'h_sub' rows");
      for (std::size_t c = 0; c < cols; ++c)
        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c].get<double>();
    }
    std::optional<std::vector<LevelRange>> levels;
    if (j.contains("levels")) {
      levels.emplace();
      for (const auto& lv : j.at("levels")) levels->push_back({lv.at(0).get<std::size_t>(), lv.at(1).get<std::size_t>()});
    }
    Hierarchy h = Hierarchy::from_sub_matrix(sub, std::move(levels));
    if (j.contains("n") && j.at("n").get<std::size_t>() != h.n())
      throw ValidationError("hierarchy JSON: 'n' disagrees with h_sub width");
    if (j.contains("m") && j.at("m").get<std::size_t>() != h.m())
      throw ValidationError("hierarchy JSON: 'm' disagrees with h_sub shape");
    return h;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("hierarchy JSON: ") + e.what());
  }
}

Hierarchy load_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open hierarchy file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("hierarchy file '" + path.string() + "': " + e.what());
  }
  return hierarchy_from_json(j);
}

json spec_to_json(const ExperimentSpec& spec) {
  json effects = json::array();
  for (const auto& leaf : spec.effects) {
    json l = json::array();
    for (const Effect& e : leaf) l.push_back({{"basis", e.basis + 1}, {"sign", e.sign}});
    effects.push_back(std::move(l));
  }
  json masks = json::array();
  for (bool b : spec.masks) masks.push_back(b ? 1 : 0);
  json out{{"hierarchy", hierarchy_to_json(*spec.hierarchy)},
           {"effects", effects},
           {"correlation", matrix_to_json(spec.correlation)},
           {"masks", masks},
           {"noise_mean", spec.noise_mean},
           {"feature_mean", {spec.feature_mean(0), spec.feature_mean(1), spec.feature_mean(2)}},
           {"feature_var", {spec.feature_var(0), spec.feature_var(1), spec.feature_var(2)}}};
  if (spec.noise_family)
    out["noise"] = {{"kind", std::string(kind_name(spec.noise_family->kind))}, {"dof", spec.noise_family->dof}};
  return out;
}

json regressor_to_json(const Regressor& r) {
  if (const auto* f = dynamic_cast<const FittedRegressor*>(&r)) {
    json mask = json::array();
    for (bool b : f->mask()) mask.push_back(b ? 1 : 0);
    return {{"type", "ridge_basis"},
            {"ridge_lambda", f->ridge_lambda()},
            {"column_mean", vector_to_json(f->column_mean())},
            {"column_scale", vector_to_json(f->column_scale())},
            {"coefficients", matrix_to_json(f->coefficients().transpose())},
            {"intercepts", vector_to_json(f->intercepts())},
            {"mask", mask}};
  }
  return {{"type", "opaque"}, {"output_dim", r.output_dim()}};
}

json model_to_json(const RectangleModel& model) {
  json out{{"kind", "rectangles"},
           {"method", std::string(method_name(model.method))},
           {"lo_offsets", vector_to_json(model.lo_offsets)},
           {"hi_offsets", vector_to_json(model.hi_offsets)},
           {"projection", model.projection.size() ? matrix_to_json(model.projection) : json(nullptr)}};
  if (model.regressor) out["regressor"] = regressor_to_json(*model.regressor);
  return out;
}

json model_to_json(const EllipsoidModel& model) {
  json out{{"kind", "ellipsoid"},
           {"radius", number_or_string(model.radius)},
           {"a_matrix", matrix_to_json(model.a_matrix.data())},
           {"projection", model.projection ? matrix_to_json(*model.projection) : json(nullptr)}};
  if (model.regressor) out["regressor"] = regressor_to_json(*model.regressor);
  return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  out << "x1,x2,x3";
  for (Eigen::Index i = 0; i < d.targets.cols(); ++i) out << ",y" << (i + 1);
  out << '\n';
  for (Eigen::Index t = 0; t < d.features.rows(); ++t) {
    for (Eigen::Index c = 0; c < d.features.cols(); ++c) out << (c ? "," : "") << format_double(d.features(t, c));
    for (Eigen::Index i = 0; i < d.targets.cols(); ++i) out << ',' << format_double(d.targets(t, i));
    out << '\n';
  }
}

void write_runs_csv(std::ostream& out, const std::vector<RunResult>& runs) {
  const auto& header = runs_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  const std::string nan = format_double(std::numeric_limits<double>::quiet_NaN());
  for (const RunResult& r : runs) {
    for (const MethodResult& m : r.methods) {
      const std::string prefix = std::to_string(r.run_id) + "," + std::to_string(r.seed) + "," + m.name + ",";
      if (!m.ellipsoid && m.ok) {
        for (Eigen::Index i = 0; i < m.coverage.size(); ++i)
          out << prefix << (i + 1) << ',' << format_double(m.coverage(i)) << ',' << format_double(m.sq_length(i))
              << ',' << nan << ',' << nan << ',' << m.status << '\n';
      }
      out << prefix << "ALL," << format_double(m.joint_coverage) << ',' << nan << ','
          << format_double(m.total_sq_length) << ',' << format_double(m.volume) << ',' << m.status << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const McSummary& summary) {
  const auto& header = summary_csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const MethodSummary& m : summary.methods) {
    for (const MetricSummary& s : m.metrics)
      out << m.method << ',' << s.metric << ',' << format_double(s.mean) << ',' << format_double(s.gamma) << ','
          << s.n << '\n';
    out << m.method << ",failures," << m.failures << ",0," << m.runs << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("summary CSV is empty");
  if (split_csv_line(line) != summary_csv_header()) throw IoError("summary CSV: unexpected header '" + line + "'");
  std::vector<SummaryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) throw IoError("summary CSV line " + std::to_string(lineno) + ": expected 5 columns");
    SummaryRow r;
    r.method = cells[0];
    r.metric = cells[1];
    r.mean = parse_double(cells[2]);
    r.gamma = parse_double(cells[3]);
    try {
      r.n = static_cast<std::size_t>(std::stoull(cells[4]));
    } catch (const std::exception&) {
      throw IoError("summary CSV line " + std::to_string(lineno) + ": bad count '" + cells[4] + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

json run_to_json(const RunResult& run) {
  json methods = json::array();
  for (const MethodResult& m : run.methods) {
    json j{{"method", m.name}, {"status", m.status}, {"joint_coverage", number_or_string(m.joint_coverage)}};
    if (m.ellipsoid) {
      j["radius"] = number_or_string(m.radius);
      j["volume"] = number_or_string(m.volume);
    } else {
      j["coverage"] = vector_to_json(m.coverage);
      j["sq_length"] = vector_to_json(m.sq_length);
      j["total_sq_length"] = number_or_string(m.total_sq_length);
    }
    methods.push_back(std::move(j));
  }
  return {{"run_id", run.run_id}, {"seed", run.seed}, {"methods", methods}};
}

json summary_to_json(const McSummary& summary) {
  json methods = json::array();
  for (const MethodSummary& m : summary.methods) {
    json metrics = json::array();
    for (const MetricSummary& s : m.metrics)
      metrics.push_back({{"metric", s.metric}, {"mean", number_or_string(s.mean)}, {"gamma", number_or_string(s.gamma)}, {"n", s.n}});
    methods.push_back({{"method", m.method}, {"failures", m.failures}, {"runs", m.runs}, {"metrics", metrics}});
  }
  return {{"n_runs", summary.n_runs}, {"methods", methods}};
}

}  // namespace hcp::io
