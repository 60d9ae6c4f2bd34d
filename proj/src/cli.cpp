#include "hcp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hcp/datagen.hpp"
#include "hcp/error.hpp"
#include "hcp/io.hpp"

namespace hcp::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> string_list(const json& v, const char* key) {
  if (v.is_string()) return split_list(v.get<std::string>());
  if (!v.is_array()) throw ConfigError(std::string("config: '") + key + "' must be a list or comma-separated string");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(e.get<std::string>());
  return out;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) {
    const Method m = parse_method(n);
    if (m == Method::CustomW) throw ConfigError("method 'custom' is not available from the command line");
    out.push_back(m);
  }
  return out;
}

std::vector<AMatrixChoice> parse_a_matrices(const std::vector<std::string>& names) {
  std::vector<AMatrixChoice> out;
  for (const auto& n : names)
    if (n != "none") out.push_back(parse_a_matrix(n));
  return out;
}

ScoreMode parse_mode(const std::string& s) {
  if (s == "pipeline") return ScoreMode::Pipeline;
  if (s == "direct") return ScoreMode::DirectScores;
  throw ConfigError("unknown mode '" + s + "' (expected pipeline|direct)");
}

SphericalFamily parse_family(const json& j) {
  SphericalFamily f;
  if (j.is_string()) {
    f.kind = parse_kind(j.get<std::string>());
    return f;
  }
  for (const auto& [key, _] : j.items())
    if (key != "kind" && key != "dof") throw ConfigError("config: unknown family key '" + key + "'");
  f.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("dof")) f.dof = j.at("dof").get<double>();
  if (!(f.dof > 0)) throw ConfigError("config: dof must be positive");
  return f;
}

json family_to_json(const SphericalFamily& f) { return {{"kind", std::string(kind_name(f.kind))}, {"dof", f.dof}}; }

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string quote(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << "error: kind=" << kind << " message=\"" << quote(message) << "\"\n";
}

// Options shared by generate and run. Each override applies only when given.
struct Overrides {
  std::string config_path;
  std::string hierarchy;
  std::uint64_t seed = 0;
  std::size_t t = 0;
  std::size_t runs = 0;
  double alpha = 0.0;
  std::string methods;
  std::string a_matrix;
  std::string out_dir;
  unsigned jobs = 1;
  std::string mode;
  std::string family;
  double dof = 4.0;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App& cmd, Overrides& o) {
  o.opts["config"] = cmd.add_option("--config", o.config_path, "JSON config file");
  o.opts["hierarchy"] = cmd.add_option("--hierarchy", o.hierarchy, "a1|a2|a3|b1|b2|b3|custom:PATH");
  o.opts["seed"] = cmd.add_option("--seed", o.seed, "base seed");
  o.opts["t"] = cmd.add_option("--t", o.t, "samples per run");
  o.opts["out"] = cmd.add_option("--out", o.out_dir, "output directory");
  o.opts["family"] = cmd.add_option("--family", o.family, "gaussian|student_t|laplace|uniform_sphere");
  o.opts["dof"] = cmd.add_option("--dof", o.dof, "student_t degrees of freedom");
}

struct Resolved {
  ExperimentConfig config;
  fs::path out_dir;
  bool t_given = false;
};

Resolved resolve(const Overrides& o, bool for_run) {
  Resolved r;
  json file = json::object();
  if (!o.config_path.empty()) file = read_json_file(o.config_path);
  r.config = apply_config_json(file, r.config);
  if (file.is_object() && file.contains("out")) r.out_dir = file.at("out").get<std::string>();
  r.t_given = o.given("t") || (file.is_object() && file.contains("t"));

  json j = json::object();
  if (o.given("hierarchy")) j["hierarchy"] = o.hierarchy;
  if (o.given("seed")) j["seed"] = o.seed;
  if (o.given("t")) j["t"] = o.t;
  if (for_run) {
    if (o.given("runs")) j["runs"] = o.runs;
    if (o.given("alpha")) j["alpha"] = o.alpha;
    if (o.given("methods")) j["methods"] = o.methods;
    if (o.given("a-matrix")) j["a_matrix"] = o.a_matrix;
    if (o.given("jobs")) j["jobs"] = o.jobs;
    if (o.given("mode")) j["mode"] = o.mode;
  }
  r.config = apply_config_json(j, r.config);
  if (o.given("family")) {
    // In direct-score mode the family shapes the scores, otherwise the leaf noise.
    const json fam{{"kind", o.family}, {"dof", o.dof}};
    const char* key = for_run && r.config.mode == ScoreMode::DirectScores ? "score_family" : "noise";
    r.config = apply_config_json(json{{key, fam}}, r.config);
  }
  if (!r.config.hierarchy) r.config.hierarchy = resolve_hierarchy(r.config.hierarchy_id);
  if (o.given("out")) r.out_dir = o.out_dir;
  if (r.out_dir.empty()) throw ConfigError("no output directory (use --out)");
  return r;
}

int cmd_generate(const Overrides& o, std::ostream& out) {
  Resolved r = resolve(o, false);
  ExperimentConfig& c = r.config;
  if (!r.t_given) c.t = 1000;
  const fs::path& dir = r.out_dir;
  ensure_dir(dir);

  Rng rng(c.seed);
  ExperimentSpec spec = draw_spec(c.hierarchy, rng);
  spec.noise_family = c.noise_family;
  const Dataset data = generate(spec, static_cast<Eigen::Index>(c.t), rng);

  std::ostringstream csv;
  io::write_dataset_csv(csv, data);
  write_file(dir / "dataset.csv", csv.str());
  json sj = io::spec_to_json(spec);
  sj["seed"] = c.seed;
  sj["t"] = c.t;
  sj["hierarchy_id"] = c.hierarchy_id;
  write_file(dir / "spec.json", sj.dump(2) + "\n");
  out << "wrote " << (dir / "dataset.csv").string() << " (" << c.t << " rows, m=" << c.hierarchy->m() << ")\n";
  return kExitOk;
}

int cmd_run(const Overrides& o, std::ostream& out, std::ostream& err) {
  const Resolved r = resolve(o, true);
  const ExperimentConfig& c = r.config;
  const fs::path& dir = r.out_dir;
  if (c.runs < 2) throw ConfigError("runs must be at least 2 to report confidence margins, got " + std::to_string(c.runs));
  ensure_dir(dir);

  const MonteCarloResult mc = monte_carlo(c, c.runs, c.jobs);

  std::ostringstream runs_csv, summary_csv;
  io::write_runs_csv(runs_csv, mc.runs);
  io::write_summary_csv(summary_csv, mc.summary);
  write_file(dir / "results_runs.csv", runs_csv.str());
  write_file(dir / "results_summary.csv", summary_csv.str());
  json runs = json::array();
  for (const RunResult& r : mc.runs) runs.push_back(io::run_to_json(r));
  write_file(dir / "summary.json", json{{"summary", io::summary_to_json(mc.summary)}, {"runs", runs}}.dump(2) + "\n");
  write_file(dir / "config.json", config_to_json(c).dump(2) + "\n");
  write_file(dir / "hierarchy.json", io::hierarchy_to_json(*c.hierarchy).dump(2) + "\n");

  out << "runs: " << c.runs << "  hierarchy: " << c.hierarchy_id << " (m=" << c.hierarchy->m() << ")  alpha: " << c.alpha
      << "\n";
  std::vector<std::string> dead;
  for (const MethodSummary& ms : mc.summary.methods) {
    out << "  " << std::left << std::setw(32) << ms.method;
    if (ms.failures == ms.runs) {
      out << "failed in all runs\n";
      dead.push_back(ms.method);
      continue;
    }
    const MetricSummary* head = ms.find("root_total_sq_length");
    if (!head) head = ms.find("volume");
    if (head) out << head->metric << " = " << head->mean << " +- " << head->gamma;
    if (ms.failures) out << "  (" << ms.failures << " failed runs)";
    out << '\n';
  }
  out << "wrote " << (dir / "results_summary.csv").string() << '\n';
  if (!dead.empty()) {
    std::string names;
    for (const auto& d : dead) names += (names.empty() ? "" : ",") + d;
    report_error(err, "MethodFailed", "no successful runs for: " + names);
    return kExitMethodFailed;
  }
  return kExitOk;
}

// Table order for the reconciliation methods; anything else follows.
int method_rank(const std::string& name) {
  static const std::vector<std::string> order{"direct", "ols", "wls", "combi", "mint"};
  const auto it = std::find(order.begin(), order.end(), name);
  return it == order.end() ? static_cast<int>(order.size()) : static_cast<int>(it - order.begin());
}

struct Cell {
  double mean = 0.0;
  double gamma = 0.0;
  std::size_t n = 0;
};

struct ReportData {
  std::vector<std::string> methods;
  std::map<std::string, std::pair<std::size_t, std::size_t>> failures;  // method -> (failures, runs)
  std::vector<std::string> metrics;                                    // first-seen order
  std::map<std::string, std::map<std::string, Cell>> cells;            // method -> metric -> cell
};

ReportData load_report(const fs::path& summary_path) {
  std::ifstream in(summary_path);
  if (!in) throw IoError("cannot open '" + summary_path.string() + "'");
  ReportData d;
  for (const io::SummaryRow& r : io::read_summary_csv(in)) {
    if (std::find(d.methods.begin(), d.methods.end(), r.method) == d.methods.end()) d.methods.push_back(r.method);
    if (r.metric == "failures") {
      d.failures[r.method] = {static_cast<std::size_t>(r.mean), r.n};
      continue;
    }
    if (std::find(d.metrics.begin(), d.metrics.end(), r.metric) == d.metrics.end()) d.metrics.push_back(r.metric);
    d.cells[r.method][r.metric] = {r.mean, r.gamma, r.n};
  }
  std::stable_sort(d.methods.begin(), d.methods.end(),
                   [](const std::string& a, const std::string& b) { return method_rank(a) < method_rank(b); });
  return d;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return io::format_double(v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void print_table(std::ostream& out, const ReportData& d, const std::vector<std::string>& methods,
                 const std::vector<std::string>& metrics) {
  if (methods.empty() || metrics.empty()) return;
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"metric"});
  for (const auto& m : methods) rows[0].push_back(m);
  for (const auto& metric : metrics) {
    std::vector<std::string> row{metric};
    for (const auto& m : methods) {
      const auto mit = d.cells.find(m);
      const Cell* c = nullptr;
      if (mit != d.cells.end()) {
        const auto cit = mit->second.find(metric);
        if (cit != mit->second.end()) c = &cit->second;
      }
      if (c) {
        row.push_back(fmt(c->mean) + " ± " + fmt(c->gamma));
      } else {
        const auto f = d.failures.find(m);
        row.push_back(f != d.failures.end() && f->second.first > 0 ? "failed(" + std::to_string(f->second.first) + ")"
                                                                    : "-");
      }
    }
    rows.push_back(std::move(row));
  }
  // "±" is two bytes but one column wide.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char ch : s) w += (ch & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      const std::string& s = rows[r][i];
      const std::string pad(widths[i] - width(s), ' ');
      out << (i ? "  " : "") << (i ? pad + s : s + pad);
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : widths) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
}

int node_of(const std::string& metric, const std::string& prefix) {
  if (metric.rfind(prefix, 0) != 0) return 0;
  return std::stoi(metric.substr(prefix.size()));
}

void write_crosses(const fs::path& path, const ReportData& d, const std::optional<Hierarchy>& h) {
  std::ostringstream csv;
  csv << "method,node,level,coverage_mean,coverage_gamma,sqrt_sq_length,sqrt_sq_length_lo,sqrt_sq_length_hi,"
         "lo_clamped\n";
  for (const auto& method : d.methods) {
    const auto mit = d.cells.find(method);
    if (mit == d.cells.end()) continue;
    for (const auto& metric : d.metrics) {
      const int node = node_of(metric, "coverage:");
      if (node == 0) continue;
      const auto cov = mit->second.find(metric);
      const auto len = mit->second.find("sq_length:" + std::to_string(node));
      if (cov == mit->second.end() || len == mit->second.end()) continue;
      const Cell& l = len->second;
      const double lo_sq = l.mean - l.gamma;
      csv << method << ',' << node << ',';
      if (h && static_cast<std::size_t>(node) <= h->m()) csv << h->level_of(static_cast<std::size_t>(node - 1)) + 1;
      csv << ',' << io::format_double(cov->second.mean) << ',' << io::format_double(cov->second.gamma) << ','
          << io::format_double(std::sqrt(std::max(l.mean, 0.0))) << ','
          << io::format_double(std::sqrt(std::max(lo_sq, 0.0))) << ','
          << io::format_double(std::sqrt(std::max(l.mean + l.gamma, 0.0))) << ',' << (lo_sq < 0 ? 1 : 0) << '\n';
    }
  }
  write_file(path, csv.str());
}

int cmd_report(const std::string& dir_arg, const std::string& format, const std::string& crosses_out,
               std::ostream& out) {
  const fs::path dir(dir_arg);
  const ReportData d = load_report(dir / "results_summary.csv");
  std::optional<Hierarchy> h;
  if (fs::exists(dir / "hierarchy.json")) h = io::load_hierarchy(dir / "hierarchy.json");
  write_crosses(crosses_out.empty() ? dir / "crosses.csv" : fs::path(crosses_out), d, h);

  if (format == "json") {
    json methods = json::array();
    for (const auto& m : d.methods) {
      json metrics = json::object();
      if (auto it = d.cells.find(m); it != d.cells.end())
        for (const auto& [name, c] : it->second)
          metrics[name] = {{"mean", c.mean}, {"gamma", c.gamma}, {"n", c.n}};
      const auto f = d.failures.count(m) ? d.failures.at(m) : std::pair<std::size_t, std::size_t>{0, 0};
      methods.push_back({{"method", m}, {"failures", f.first}, {"runs", f.second}, {"metrics", metrics}});
    }
    out << json{{"methods", methods}}.dump(2) << '\n';
    return kExitOk;
  }

  std::vector<std::string> rect, ell;
  for (const auto& m : d.methods) (m.rfind("ellipsoid_", 0) == 0 ? ell : rect).push_back(m);
  auto metrics_of = [&](const std::vector<std::string>& methods) {
    std::vector<std::string> out_metrics;
    for (const auto& metric : d.metrics)
      for (const auto& m : methods)
        if (auto it = d.cells.find(m); it != d.cells.end() && it->second.count(metric)) {
          out_metrics.push_back(metric);
          break;
        }
    // Headline rows first, as in the summary tables.
    std::stable_sort(out_metrics.begin(), out_metrics.end(), [](const std::string& a, const std::string& b) {
      auto rank = [](const std::string& s) {
        if (s == "root_total_sq_length") return 0;
        if (s == "total_sq_length") return 1;
        if (s == "joint_coverage") return 2;
        return 3;
      };
      return rank(a) < rank(b);
    });
    return out_metrics;
  };
  print_table(out, d, rect, metrics_of(rect));
  if (!rect.empty() && !ell.empty()) out << '\n';
  print_table(out, d, ell, metrics_of(ell));
  return kExitOk;
}

}  // namespace

std::shared_ptr<const Hierarchy> resolve_hierarchy(const std::string& id) {
  if (id.rfind("custom:", 0) == 0) return std::make_shared<const Hierarchy>(io::load_hierarchy(id.substr(7)));
  try {
    return builtin_hierarchy(id);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig apply_config_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "hierarchy") {
        if (v.is_object()) {
          c.hierarchy = std::make_shared<const Hierarchy>(io::hierarchy_from_json(v));
          c.hierarchy_id = "custom";
        } else {
          c.hierarchy_id = v.get<std::string>();
          c.hierarchy = resolve_hierarchy(c.hierarchy_id);
        }
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "t") {
        c.t = v.get<std::size_t>();
      } else if (key == "runs") {
        c.runs = v.get<std::size_t>();
      } else if (key == "alpha") {
        c.alpha = v.get<double>();
        if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha must lie in (0,1), got " + io::format_double(c.alpha));
      } else if (key == "methods") {
        c.methods = parse_methods(string_list(v, "methods"));
      } else if (key == "a_matrix") {
        c.a_matrices = parse_a_matrices(string_list(v, "a_matrix"));
      } else if (key == "out") {
        v.get<std::string>();  // the directory is resolved by the command
      } else if (key == "jobs") {
        c.jobs = v.get<unsigned>();
        if (c.jobs == 0) throw ConfigError("jobs must be positive");
      } else if (key == "mode") {
        c.mode = parse_mode(v.get<std::string>());
      } else if (key == "score_family") {
        c.direct.family = parse_family(v);
      } else if (key == "mixing_seed") {
        c.direct.mixing_seed = v.get<std::uint64_t>();
      } else if (key == "noise") {
        if (v.is_null())
          c.noise_family.reset();
        else
          c.noise_family = parse_family(v);
      } else if (key == "ridge_lambda") {
        c.ridge_lambda = v.get<double>();
        if (!(c.ridge_lambda >= 0)) throw ConfigError("ridge_lambda must be non-negative");
      } else if (key == "mint_ridge") {
        if (v.is_null())
          c.mint_ridge.reset();
        else
          c.mint_ridge = v.get<double>();
      } else if (key == "fractions") {
        if (!v.is_array() || v.size() != 4) throw ConfigError("fractions must be [train, est, calib, test]");
        for (std::size_t i = 0; i < 4; ++i) c.fractions[i] = v[i].get<double>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(std::string(method_name(m)));
  json a = json::array();
  for (AMatrixChoice x : c.a_matrices) a.push_back(std::string(a_matrix_name(x)));
  json j{{"seed", c.seed},
         {"t", c.t},
         {"runs", c.runs},
         {"alpha", c.alpha},
         {"methods", methods},
         {"a_matrix", a},
         {"jobs", c.jobs},
         {"mode", c.mode == ScoreMode::Pipeline ? "pipeline" : "direct"},
         {"score_family", family_to_json(c.direct.family)},
         {"mixing_seed", c.direct.mixing_seed},
         {"noise", c.noise_family ? family_to_json(*c.noise_family) : json(nullptr)},
         {"ridge_lambda", c.ridge_lambda},
         {"mint_ridge", c.mint_ridge ? json(*c.mint_ridge) : json(nullptr)},
         {"fractions", c.fractions}};
  const bool builtin = c.hierarchy_id.rfind("custom", 0) != 0;
  j["hierarchy"] = builtin ? json(c.hierarchy_id) : io::hierarchy_to_json(*c.hierarchy);
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical split conformal prediction: data generation, Monte-Carlo runs and reports", "hcp"};
  app.require_subcommand(1);

  Overrides gen;
  CLI::App* generate_cmd = app.add_subcommand("generate", "draw a synthetic spec and write dataset.csv + spec.json");
  add_common(*generate_cmd, gen);

  Overrides run;
  CLI::App* run_cmd = app.add_subcommand("run", "Monte-Carlo experiment; writes results_runs.csv and results_summary.csv");
  add_common(*run_cmd, run);
  run.opts["runs"] = run_cmd->add_option("--runs", run.runs, "number of Monte-Carlo runs (>= 2)");
  run.opts["alpha"] = run_cmd->add_option("--alpha", run.alpha, "miscoverage level in (0,1)");
  run.opts["methods"] = run_cmd->add_option("--methods", run.methods, "comma list of direct,ols,wls,mint,combi");
  run.opts["a-matrix"] = run_cmd->add_option("--a-matrix", run.a_matrix, "comma list of identity,diag,full or none");
  run.opts["jobs"] = run_cmd->add_option("--jobs", run.jobs, "worker threads");
  run.opts["mode"] = run_cmd->add_option("--mode", run.mode, "pipeline|direct");

  std::string report_dir, report_format = "text", crosses_out;
  CLI::App* report_cmd = app.add_subcommand("report", "summary table and plot-ready crosses.csv from a results dir");
  report_cmd->add_option("dir", report_dir, "directory containing results_summary.csv")->required();
  report_cmd->add_option("--format", report_format, "text|json")->check(CLI::IsMember({"text", "json"}));
  report_cmd->add_option("--crosses", crosses_out, "where to write crosses.csv (default: DIR/crosses.csv)");

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitConfig;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen, out);
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    return cmd_report(report_dir, report_format, crosses_out, out);
  } catch (const ConfigError& e) {
    report_error(err, e.kind(), e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    report_error(err, e.kind(), e.what());
    return kExitConfig;
  } catch (const ValidationError& e) {
    report_error(err, e.kind(), e.what());
    return kExitConfig;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
    return kExitUnexpected;
  } catch (const std::exception& e) {
    report_error(err, "Unexpected", e.what());
    return kExitUnexpected;
  }
}

}  // namespace hcp::cli
